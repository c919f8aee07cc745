use crate::eqlogic::IdentityBasis;
use crate::finmon::{cyclic_chain, lrb_monoid, semilattice2, trivial_monoid, FiniteMonoid};
use crate::varieties::{VarietyError, VarietyHandle};

/// Chains `C2..=C{MAX_CHAIN}` are registered.
pub const MAX_CHAIN: usize = 4;

fn basis(name: &str, text: &str) -> IdentityBasis {
    IdentityBasis::parse(text).expect("registry bases parse").named(name)
}

/// The named varieties used by the scenarios.
#[derive(Debug, Clone)]
pub struct Registry {
    handles: Vec<VarietyHandle>,
}

impl Registry {
    /// Builds and validates every handle that has both a generator and a basis.
    pub fn standard() -> Result<Registry, VarietyError> {
        let mut handles = vec![
            VarietyHandle::generated("T", trivial_monoid()),
            VarietyHandle::presented("MON", IdentityBasis::default().named("MON")),
            VarietyHandle::both("SL", semilattice2(), basis("SL", "x = x^2\nxy = yx")),
        ];
        for n in 2..=MAX_CHAIN {
            handles.push(VarietyHandle::both(format!("C{n}"), cyclic_chain(n), IdentityBasis::commutative_capped(n)));
        }
        handles.push(VarietyHandle::both("LRB", lrb_monoid(), basis("LRB", "xy = xyx")).assume_generation());
        handles.push(VarietyHandle::presented("E", basis("E", "x^2 = x^3\nx^2y = xyx\nx^2y^2 = y^2x^2")));
        handles.push(VarietyHandle::presented("D", basis("D", "x^2 = x^3\nx^2y = xyx\nxyx = yx^2")));
        let registry = Registry { handles };
        for h in &registry.handles {
            h.validate()?;
        }
        Ok(registry)
    }

    pub fn handles(&self) -> &[VarietyHandle] {
        &self.handles
    }

    pub fn get(&self, name: &str) -> Option<&VarietyHandle> {
        self.handles.iter().find(|h| h.name.eq_ignore_ascii_case(name))
    }

    pub fn basis(&self, name: &str) -> Option<&IdentityBasis> {
        self.get(name).and_then(|h| h.basis.as_ref())
    }

    pub fn generator(&self, name: &str) -> Option<&FiniteMonoid> {
        self.get(name).and_then(|h| h.generator.as_ref())
    }

    /// `(name, generator)` for every generated handle, in registry order.
    pub fn generators(&self) -> Vec<(&str, &FiniteMonoid)> {
        self.handles
            .iter()
            .filter_map(|h| h.generator.as_ref().map(|g| (h.name.as_str(), g)))
            .collect()
    }
}
