use crate::finmon::{Assignment, Element, FiniteMonoid};
use crate::word::{Identity, Word};

use super::free::{first_letters, FreeObject, FreeObjectError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// `identity` holds in the variety generated by the ambient monoids and
    /// fails in the candidate under `assignment`.
    NonMember { identity: Identity, assignment: Assignment },
    Unknown(FreeObjectError),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }

    pub fn status(&self) -> &'static str {
        match self {
            Membership::Member => "member",
            Membership::NonMember { .. } => "non_member",
            Membership::Unknown(_) => "unknown",
        }
    }
}

/// Decides whether `m` lies in the variety generated by `n`.
pub fn membership(m: &FiniteMonoid, n: &FiniteMonoid, budget: usize) -> Membership {
    membership_in_join(m, std::slice::from_ref(n), budget)
}

/// Decides whether `m` lies in the join of the varieties generated by
/// `factors`.
///
/// `m` is a member iff it is a homomorphic image of the free object on a
/// generating tuple of `m`; the map sending each generator projection to
/// the matching generator of `m` is checked for well-definedness along the
/// free object's transition graph. A clash yields two words with the same
/// value in the free object but different values in `m`.
pub fn membership_in_join(m: &FiniteMonoid, factors: &[FiniteMonoid], budget: usize) -> Membership {
    let generators = m.generating_set();
    if generators.is_empty() {
        return Membership::Member;
    }
    let letters = first_letters(generators.len());
    let free = match FreeObject::build(factors, &letters, budget) {
        Ok(f) => f,
        Err(e) => return Membership::Unknown(e),
    };
    let mut image: Vec<Option<Element>> = vec![None; free.size()];
    image[0] = Some(m.identity());
    for e in 0..free.size() {
        let current = image[e].expect("breadth-first order assigns parents first");
        for (j, &g) in generators.iter().enumerate() {
            let target = free.right_multiply(e, j);
            let expected = m.mul(current, g);
            match image[target] {
                None => image[target] = Some(expected),
                Some(actual) if actual == expected => {}
                Some(_) => {
                    let mut longer: Word = free.representative(e).clone();
                    longer.push(letters[j]);
                    let identity = Identity::new(free.representative(target).clone(), longer);
                    let assignment = letters
                        .iter()
                        .zip(&generators)
                        .fold(Assignment::new(), |a, (&l, &g)| a.with(l, g));
                    return Membership::NonMember { identity, assignment };
                }
            }
        }
    }
    Membership::Member
}
