use rayon::prelude::*;

use crate::eqlogic::{decide_cn, derive_bounded, refute, replay, IdentityBasis, SearchBudget, Verdict};
use crate::finmon::{cyclic_chain, lrb_monoid, s_monoid, semilattice2, FiniteMonoid, Satisfaction, MAX_ENUMERATION_SIZE};
use crate::lattice::{
    boolean_lattice, chain, classify_element, diamond, enumerate_lattices, find_pentagon_witness, lattice_universe,
    mine_modular_lower_modular_not_standard, pentagon, Property, FiniteLattice, IMPLICATIONS,
};
use crate::varieties::{isoterm_in_join, membership, IsotermVerdict, Membership, DEFAULT_ELEMENT_BUDGET};
use crate::word::{Identity, Letter, Substitution, Word};

use super::registry::Registry;
use super::report::{Claim, ScenarioReport};
use super::LabError;

pub const BUDGET_ENV: &str = "MONOIDLAB_BUDGET";

/// Search limits shared by all scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Expansion cap for bounded derivations.
    pub derive_steps: usize,
    /// Element cap for relatively free objects.
    pub free_elements: usize,
    /// Largest countermodel size tried by refutation.
    pub model_size: usize,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets {
            derive_steps: SearchBudget::DEFAULT_STEPS,
            free_elements: DEFAULT_ELEMENT_BUDGET,
            model_size: MAX_ENUMERATION_SIZE,
        }
    }
}

impl Budgets {
    /// One number caps both derivation steps and free-object size.
    pub fn uniform(limit: usize) -> Budgets {
        Budgets { derive_steps: limit, free_elements: limit, ..Budgets::default() }
    }

    /// Defaults, overridden by `MONOIDLAB_BUDGET` when set.
    pub fn from_env() -> Result<Budgets, LabError> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Budgets::uniform)
                .map_err(|_| LabError::Parameters(format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}"))),
            Err(_) => Ok(Budgets::default()),
        }
    }

    pub fn search(&self, goal: &Identity) -> SearchBudget {
        SearchBudget { max_steps: self.derive_steps, ..SearchBudget::for_goal(goal) }
    }
}

fn x() -> Letter {
    Letter::variable(0)
}

fn y() -> Letter {
    Letter::variable(1)
}

fn xp(k: usize) -> Word {
    Word::power(x(), k)
}

fn yp(k: usize) -> Word {
    Word::power(y(), k)
}

/// Proves `goal` from `basis`, replaying any trace it finds.
pub fn derive_claim(id: &str, basis: &IdentityBasis, goal: &Identity, budgets: &Budgets) -> Claim {
    let statement = format!("{basis} implies {goal}");
    let result = derive_bounded(basis, goal, budgets.search(goal));
    match &result.verdict {
        Verdict::Proved { trace } => {
            let mut chain = vec![goal.lhs.to_string()];
            chain.extend(trace.iter().map(|s| s.result.to_string()));
            let replayed = replay(basis, goal, trace);
            let mut evidence = vec![chain.join(" -> "), format!("steps: {}", trace.len())];
            if let Err(e) = &replayed {
                evidence.push(format!("replay failed: {e}"));
            }
            Claim::checked(id, statement, replayed.is_ok(), evidence)
        }
        _ => Claim::unknown(
            id,
            statement,
            vec![format!(
                "no derivation within budget (expanded {}, visited {}, exhausted {})",
                result.stats.expanded, result.stats.visited, result.stats.exhausted
            )],
        ),
    }
}

/// `expect_holds` says which outcome confirms the claim.
fn satisfaction_claim(id: &str, m: &FiniteMonoid, identity: &Identity, expect_holds: bool) -> Claim {
    let verb = if expect_holds { "satisfies" } else { "violates" };
    let statement = format!("{} {verb} {identity}", m.label());
    match m.satisfies(identity) {
        Satisfaction::Holds => Claim::checked(id, statement, expect_holds, vec!["holds".into()]),
        Satisfaction::Fails(a) => {
            let l = m.evaluate(&a, &identity.lhs).expect("total assignment");
            let r = m.evaluate(&a, &identity.rhs).expect("total assignment");
            let evidence = vec![
                format!("fails at {}", a.describe(m)),
                format!("{} = {}, {} = {}", identity.lhs, m.element_name(l), identity.rhs, m.element_name(r)),
            ];
            Claim::checked(id, statement, !expect_holds && l != r, evidence)
        }
    }
}

fn membership_claim(id: &str, m: &FiniteMonoid, n_name: &str, n: &FiniteMonoid, budgets: &Budgets) -> Claim {
    let statement = format!("{} lies in var {}", m.label(), n_name);
    match membership(m, n, budgets.free_elements) {
        Membership::Member => Claim::checked(id, statement, true, vec!["member".into()]),
        Membership::NonMember { identity, assignment } => Claim::checked(
            id,
            statement,
            false,
            vec![format!("separated by {identity} at {}", assignment.describe(m))],
        ),
        Membership::Unknown(e) => Claim::unknown(id, statement, vec![e.to_string()]),
    }
}

/// Finitely checkable steps of the argument that a variety containing `E`
/// and avoiding `C_{n+1}` is not a modular element, for `x^n = x^(n+m)`.
///
/// Requires `n >= 2`, `m >= 1` and `n + m <= 6`.
pub fn scenario_lemma2(n: usize, m: usize) -> Result<ScenarioReport, LabError> {
    scenario_lemma2_with(n, m, &Budgets::from_env()?)
}

pub fn scenario_lemma2_with(n: usize, m: usize, budgets: &Budgets) -> Result<ScenarioReport, LabError> {
    if n < 2 || m < 1 || n + m > 6 {
        return Err(LabError::Parameters(format!("lemma2 needs n >= 2, m >= 1, n + m <= 6; got n={n}, m={m}")));
    }
    let registry = Registry::standard()?;
    let yxn = yp(1).concat(&xp(n));
    let s = s_monoid(&yxn);
    let cn1 = cyclic_chain(n + 1);
    let commute = |k: usize| Identity::new(xp(k).concat(&yp(1)), yp(1).concat(&xp(k)));
    let mut claims = Vec::new();

    claims.push(satisfaction_claim(&format!("a.k{n}"), &s, &commute(n), false));
    for k in n + 1..=n + m + 1 {
        claims.push(satisfaction_claim(&format!("a.k{k}"), &s, &commute(k), true));
    }

    // every w over {x, y, z} below the length cap with yx^n = w in C_{n+1}
    let letters: Vec<Letter> = (0..3).map(Letter::variable).collect();
    let cap = n + 3;
    let class: Vec<Word> = Word::all_up_to(&letters, cap)
        .into_iter()
        .filter(|w| decide_cn(&yxn, w, n + 1))
        .collect();
    let all_permutations = class.iter().all(|w| w.is_permutation_of(&yxn));
    let model_agrees = Word::all_up_to(&letters, cap)
        .iter()
        .all(|w| cn1.satisfies(&Identity::new(yxn.clone(), w.clone())).holds() == class.contains(w));
    let listed: Vec<String> = class.iter().map(|w| w.to_string()).collect();
    claims.push(Claim::checked(
        "b",
        format!("every w of length <= {cap} with {yxn} = w in C{} is a permutation of {yxn}", n + 1),
        all_permutations && class.len() == n + 1 && model_agrees,
        vec![format!("{} words: {}", class.len(), listed.join(", ")), format!("C{} table check agrees: {model_agrees}", n + 1)],
    ));

    let power = Identity::new(xp(n), xp(n + m));
    let shifted = commute(n + m);
    let basis = IdentityBasis::new(vec![power.clone(), shifted]);
    claims.push(derive_claim("c", &basis, &commute(n), budgets));

    claims.push(satisfaction_claim("d", &cn1, &power, false));

    let statement = format!("{yxn} is an isoterm for var S({yxn}) v C{}", n + 1);
    let factors = [s.clone(), cn1.clone()];
    let e = match isoterm_in_join(&factors, &yxn, budgets.free_elements) {
        IsotermVerdict::Isoterm => Claim::checked("e", statement, true, vec!["isoterm".into()]),
        IsotermVerdict::NotIsoterm(w) => Claim::checked("e", statement, false, vec![format!("{yxn} = {w}")]),
        IsotermVerdict::Unknown(err) => Claim::unknown("e", statement, vec![err.to_string()]),
    };
    claims.push(e.as_proxy(format!("var S({yxn}) stands in for an arbitrary variety containing E")));

    let e_basis = registry.basis("E").expect("registry has E").clone();
    claims.push(Claim::external(
        "e.E-general",
        format!("if E satisfies {yxn} = w then w = yx^t with t >= 2"),
        "cited structural result on E; finite instances are checked below",
    ));
    claims.push(derive_claim("e.E-positive", &e_basis, &Identity::new(yxn.clone(), yp(1).concat(&xp(n + 1))), budgets));
    claims.push(e_instances(&e_basis, &yxn, n + 2, budgets)?);
    claims.push(Claim::external(
        "e.S-membership",
        format!("an isoterm {yxn} for a variety puts S({yxn}) in it"),
        "cited result; for var S(w) v C the membership is immediate",
    ));

    Ok(ScenarioReport::new(format!("lemma2(n={n},m={m})"), claims))
}

/// Refutes `yx^n = w` under `E` for every `w` over `{x, y}` of length at
/// most `cap` not of the form `yx^t`.
fn e_instances(e: &IdentityBasis, yxn: &Word, cap: usize, budgets: &Budgets) -> Result<Claim, LabError> {
    let letters = [x(), y()];
    let candidates: Vec<Word> = Word::all_up_to(&letters, cap)
        .into_iter()
        .filter(|w| {
            let yxt = w.letters().first() == Some(&y()) && w.occurrences(y()) == 1 && w.occurrences(x()) >= 2;
            !yxt && w != yxn
        })
        .collect();
    let mut unrefuted = Vec::new();
    let mut models = std::collections::BTreeSet::new();
    for w in &candidates {
        let goal = Identity::new(yxn.clone(), w.clone());
        match refute(e, &goal, budgets.model_size)?.verdict {
            Verdict::Refuted { model, .. } => {
                models.insert(model.label().to_string());
            }
            _ => unrefuted.push(w.to_string()),
        }
    }
    let statement = format!("E violates {yxn} = w for every other w of length <= {cap} over x, y");
    let mut evidence = vec![format!(
        "{} of {} refuted by models of size <= {}",
        candidates.len() - unrefuted.len(),
        candidates.len(),
        budgets.model_size
    )];
    evidence.push(format!("models used: {}", models.into_iter().collect::<Vec<_>>().join(", ")));
    Ok(if unrefuted.is_empty() {
        Claim::checked("e.E-instances", statement, true, evidence)
    } else {
        evidence.push(format!("no countermodel found for: {}", unrefuted.join(", ")));
        Claim::unknown("e.E-instances", statement, evidence)
    })
}

/// Finitely checkable steps of the argument that a modular and
/// lower-modular non-completely-regular variety cannot exist, for the
/// identity `yx^r = x^s y x^t`.
///
/// Requires `r >= 2`, `s >= 1`, `s + t >= 2`.
pub fn scenario_theorem_steps(r: usize, s: usize, t: usize) -> Result<ScenarioReport, LabError> {
    scenario_theorem_steps_with(r, s, t, &Budgets::from_env()?)
}

pub fn scenario_theorem_steps_with(r: usize, s: usize, t: usize, budgets: &Budgets) -> Result<ScenarioReport, LabError> {
    if r < 2 || s < 1 || s + t < 2 {
        return Err(LabError::Parameters(format!("theorem needs r >= 2, s >= 1, s + t >= 2; got r={r}, s={s}, t={t}")));
    }
    let registry = Registry::standard()?;
    let five = Identity::new(yp(1).concat(&xp(r)), xp(s).concat(&yp(1)).concat(&xp(t)));
    let six = Identity::new(yp(2).concat(&xp(r)), xp(s).concat(&yp(2)).concat(&xp(t)));
    let mut claims = Vec::new();

    let substituted = five.substitute(&Substitution::identity().with(y(), yp(2)));
    claims.push(Claim::checked(
        "a",
        format!("substituting y -> y^2 in {five} gives {six}"),
        substituted == six,
        vec![substituted.to_string()],
    ));
    claims.push(derive_claim("a.derive", &IdentityBasis::new(vec![five.clone()]), &six, budgets));
    let e_basis = registry.basis("E").expect("registry has E").clone();
    claims.push(derive_claim("a.E", &e_basis, &six, budgets));

    let lrb_basis = registry.basis("LRB").expect("registry has LRB").clone();
    let left = Identity::new(six.lhs.clone(), yp(1).concat(&xp(1)));
    let right = Identity::new(six.rhs.clone(), xp(1).concat(&yp(1)));
    claims.push(derive_claim("b.left", &lrb_basis, &left, budgets));
    claims.push(derive_claim("b.right", &lrb_basis, &right, budgets));

    let statement = format!("{lrb_basis} does not imply {six}");
    let c = match refute(&lrb_basis, &six, budgets.model_size)?.verdict {
        Verdict::Refuted { model, assignment } => {
            let is_lrb = model.is_isomorphic(&lrb_monoid());
            Claim::checked(
                "c",
                statement,
                is_lrb && !model.satisfies(&six).holds(),
                vec![
                    format!("countermodel {} of size {}", model.label(), model.size()),
                    format!("fails at {}", assignment.describe(&model)),
                    format!("isomorphic to LRB: {is_lrb}"),
                ],
            )
        }
        _ => Claim::unknown("c", statement, vec![format!("no countermodel of size <= {}", budgets.model_size)]),
    };
    claims.push(c);
    claims.push(Claim::external(
        "c.generation",
        "the 3-element LRB monoid generates var{xy = xyx}",
        "taken from the literature; only its satisfaction of xy = xyx is checked",
    ));

    let sl = semilattice2();
    for (name, g) in registry.generators() {
        if !g.is_group() {
            claims.push(membership_claim(&format!("d.{name}"), &sl, name, g, budgets));
        }
    }
    let c2 = cyclic_chain(2);
    for (name, g) in registry.generators() {
        if !g.is_completely_regular() {
            claims.push(membership_claim(&format!("e.{name}"), &c2, name, g, budgets));
        }
    }
    claims.push(Claim::external(
        "e.E-in-join",
        "E is contained in C2 v LRB",
        "cited inclusion; not finitely checkable from generators alone",
    ));

    Ok(ScenarioReport::new(format!("theorem(r={r},s={s},t={t})"), claims))
}

fn element_label(l: &FiniteLattice, e: usize) -> String {
    l.element_name(e)
}

/// Special-element predicates over the small-lattice universe.
pub fn scenario_special_elements() -> Result<ScenarioReport, LabError> {
    const SWEEP: usize = 6;
    let mut claims = Vec::new();

    let counts: Vec<usize> = (1..=SWEEP).map(|n| enumerate_lattices(n).map(|ls| ls.len())).collect::<Result<_, _>>()?;
    claims.push(Claim::checked(
        "counts",
        format!("lattices of size 1..={SWEEP} up to isomorphism"),
        counts[..5] == [1, 1, 1, 2, 5],
        vec![counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")],
    ));

    let universe = lattice_universe(SWEEP)?;
    let mut elements = 0;
    let mut chain_failures = Vec::new();
    let mut duality_failures = Vec::new();
    let mut distributive_failures = Vec::new();
    let mut pentagon_failures = Vec::new();
    for l in &universe {
        let dual = l.dual();
        let distributive = l.is_distributive();
        for x in l.elements() {
            elements += 1;
            let at = format!("{}:{}", l.label(), x);
            match classify_element(l, x) {
                Ok(r) => {
                    if distributive && !r.neutral {
                        distributive_failures.push(at.clone());
                    }
                    if r.modular != find_pentagon_witness(l, x).is_none() {
                        pentagon_failures.push(at.clone());
                    }
                }
                Err(e) => chain_failures.push(format!("{at} {e}")),
            }
            let pairs = [
                (Property::Standard, Property::Costandard),
                (Property::LowerModular, Property::UpperModular),
            ];
            if pairs.iter().any(|&(p, q)| p.holds(l, x) != q.holds(&dual, x) || q.holds(l, x) != p.holds(&dual, x)) {
                duality_failures.push(at);
            }
        }
    }
    let implications: Vec<String> = IMPLICATIONS.iter().map(|(a, b)| format!("{a} => {b}")).collect();
    let sweep = |id: &str, statement: String, failures: Vec<String>| {
        let ok = failures.is_empty();
        let mut evidence = vec![format!("{} lattices, {elements} elements, {} exceptions", universe.len(), failures.len())];
        evidence.extend(failures);
        Claim::checked(id, statement, ok, evidence)
    };
    claims.push(sweep("implications", format!("{} on every element", implications.join(", ")), chain_failures));
    claims.push(sweep("duality", "standard/costandard and lower/upper-modular swap under duality".into(), duality_failures));
    claims.push(sweep("distributive", "every element of a distributive lattice is neutral".into(), distributive_failures));
    claims.push(sweep("pentagon", "no pentagon witness exactly when modular".into(), pentagon_failures));

    let n5 = pentagon();
    let side = n5.element_by_name("x").expect("pentagon has x");
    let statement = "the pentagon side element is not modular; its witness spans a pentagon".to_string();
    let n5_claim = match find_pentagon_witness(&n5, side) {
        Some((u, w)) => {
            let (sub, _) = n5.sublattice_generated(&[u, w, side]);
            Claim::checked(
                "n5.side",
                statement,
                sub.size() == 5 && sub.is_isomorphic(&n5) && !Property::Modular.holds(&n5, side),
                vec![
                    format!("witness (u, w) = ({}, {})", element_label(&n5, u), element_label(&n5, w)),
                    format!("generated sublattice has {} elements", sub.size()),
                ],
            )
        }
        None => Claim::checked("n5.side", statement, false, vec!["no witness".into()]),
    };
    claims.push(n5_claim);

    let m3 = diamond();
    let a = m3.element_by_name("a").expect("diamond has a");
    let r = classify_element(&m3, a)?;
    let witness = r.witnesses.iter().find(|(p, _)| *p == Property::Standard).map(|&(_, w)| w);
    claims.push(Claim::checked(
        "m3.atom",
        "a diamond atom is modular but neither neutral nor standard",
        r.modular && !r.neutral && !r.standard,
        vec![match witness {
            Some((y, z)) => format!("standard fails at (y, z) = ({}, {})", element_label(&m3, y), element_label(&m3, z)),
            None => "standard holds".into(),
        }],
    ));
    let all_modular = std::iter::once(m3.clone())
        .chain((1..=6).map(chain))
        .all(|l| l.elements().all(|e| Property::Modular.holds(&l, e)));
    claims.push(Claim::checked(
        "modular.chains",
        "every element of the diamond and of chains up to 6 is modular",
        all_modular,
        vec![],
    ));
    let b3 = boolean_lattice(3);
    claims.push(Claim::checked(
        "b3",
        "every element of the 8-element Boolean lattice is standard",
        b3.elements().all(|e| Property::Standard.holds(&b3, e)),
        vec![],
    ));

    let statement = "some finite lattice has a modular, lower-modular, non-standard element".to_string();
    let mined = match mine_modular_lower_modular_not_standard(crate::lattice::MAX_LATTICE_SIZE)? {
        Some(found) => {
            let (y, z) = found.standard_witness;
            let covers: Vec<String> = found.lattice.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
            Claim::checked(
                "mined",
                statement,
                found.verify(),
                vec![
                    format!("{} of size {}, covers {}", found.lattice.label(), found.lattice.size(), covers.join(" ")),
                    format!("element {}, standard fails at (y, z) = ({y}, {z})", found.element),
                    format!("isomorphic to the diamond: {}", found.lattice.is_isomorphic(&m3)),
                ],
            )
        }
        None => Claim::checked("mined", statement, false, vec!["no example up to size 7".into()]),
    };
    claims.push(mined.with_note("smallest by size, then canonical order, then element index"));
    claims.push(Claim::external(
        "mon.equivalence",
        "in the lattice of monoid varieties, modular and lower-modular elements are exactly the neutral ones",
        "a statement about an infinite lattice; the mined example shows it is not a general lattice law",
    ));

    Ok(ScenarioReport::new("special-elements", claims))
}

/// The default parameter grid.
pub const LEMMA2_GRID: [(usize, usize); 4] = [(2, 1), (2, 2), (3, 1), (3, 2)];
pub const THEOREM_GRID: [(usize, usize, usize); 3] = [(2, 1, 1), (2, 2, 0), (3, 2, 1)];

enum Job {
    Lemma2(usize, usize),
    Theorem(usize, usize, usize),
    Special,
}

/// Runs every scenario of the grid; output order does not depend on `parallel`.
pub fn run_grid(parallel: bool, budgets: &Budgets) -> Result<Vec<ScenarioReport>, LabError> {
    let jobs: Vec<Job> = LEMMA2_GRID
        .iter()
        .map(|&(n, m)| Job::Lemma2(n, m))
        .chain(THEOREM_GRID.iter().map(|&(r, s, t)| Job::Theorem(r, s, t)))
        .chain(std::iter::once(Job::Special))
        .collect();
    let run = |job: &Job| match *job {
        Job::Lemma2(n, m) => scenario_lemma2_with(n, m, budgets),
        Job::Theorem(r, s, t) => scenario_theorem_steps_with(r, s, t, budgets),
        Job::Special => scenario_special_elements(),
    };
    if parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    }
}

pub fn render_reports(reports: &[ScenarioReport]) -> String {
    reports.iter().map(|r| r.render()).collect::<Vec<_>>().join("\n")
}
