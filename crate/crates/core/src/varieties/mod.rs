//! Varieties generated by finite monoids: relatively free objects,
//! membership, and isoterm decision.

mod free;
mod isoterm;
mod membership;

use thiserror::Error;

use crate::eqlogic::IdentityBasis;
use crate::finmon::{direct_product, Assignment, FiniteMonoid, Satisfaction};
use crate::word::Identity;

pub use free::{free_object, FreeObject, FreeObjectError, DEFAULT_ELEMENT_BUDGET};
pub use isoterm::{isoterm, isoterm_in_join, word_class, IsotermVerdict, WordAutomaton, WordClass};
pub use membership::{membership, membership_in_join, Membership};

/// A generator for `var(a) ∨ var(b)`.
pub fn join_generator(a: &FiniteMonoid, b: &FiniteMonoid) -> FiniteMonoid {
    direct_product(a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("{variety}: generator {generator} violates {identity} at {assignment}")]
    GeneratorViolatesBasis {
        variety: String,
        generator: String,
        identity: Identity,
        assignment: String,
    },
    #[error("{0}: a variety needs a generator or a basis")]
    Empty(String),
}

/// A variety given by a generating monoid, an identity basis, or both.
#[derive(Debug, Clone)]
pub struct VarietyHandle {
    pub name: String,
    pub generator: Option<FiniteMonoid>,
    pub basis: Option<IdentityBasis>,
    /// Set when "the generator generates exactly the presented variety" is
    /// taken from the literature rather than checked here.
    pub generation_assumed: bool,
}

impl VarietyHandle {
    pub fn generated(name: impl Into<String>, generator: FiniteMonoid) -> VarietyHandle {
        VarietyHandle { name: name.into(), generator: Some(generator), basis: None, generation_assumed: false }
    }

    pub fn presented(name: impl Into<String>, basis: IdentityBasis) -> VarietyHandle {
        VarietyHandle { name: name.into(), generator: None, basis: Some(basis), generation_assumed: false }
    }

    pub fn both(name: impl Into<String>, generator: FiniteMonoid, basis: IdentityBasis) -> VarietyHandle {
        VarietyHandle { name: name.into(), generator: Some(generator), basis: Some(basis), generation_assumed: false }
    }

    pub fn assume_generation(mut self) -> VarietyHandle {
        self.generation_assumed = true;
        self
    }

    /// Checks that the generator satisfies every basis identity.
    pub fn validate(&self) -> Result<(), VarietyError> {
        match (&self.generator, &self.basis) {
            (None, None) => Err(VarietyError::Empty(self.name.clone())),
            (Some(m), Some(b)) => {
                for id in &b.identities {
                    if let Satisfaction::Fails(a) = m.satisfies(id) {
                        return Err(violation(&self.name, m, id, &a));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn violation(variety: &str, m: &FiniteMonoid, id: &Identity, a: &Assignment) -> VarietyError {
    VarietyError::GeneratorViolatesBasis {
        variety: variety.to_string(),
        generator: m.label().to_string(),
        identity: id.clone(),
        assignment: a.describe(m),
    }
}
