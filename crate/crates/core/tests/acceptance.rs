//! Acceptance gate. Every criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Derived values are checked against small
//! oracles written here independently of the library code paths.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use monoidlab::eqlogic::{decide_cn, derive_bounded, refute, replay, IdentityBasis, SearchBudget, Verdict};
use monoidlab::finmon::{cyclic_chain, lrb_monoid, s_monoid, semilattice2, Satisfaction};
use monoidlab::lab::{render_reports, run_grid, Budgets, Status, THEOREM_GRID};
use monoidlab::lattice::{
    chain, classify_element, diamond, enumerate_lattices, find_pentagon_witness, lattice_universe,
    mine_modular_lower_modular_not_standard, pentagon, FiniteLattice, Property, MAX_LATTICE_SIZE,
};
use monoidlab::varieties::{isoterm, membership, IsotermVerdict, Membership, DEFAULT_ELEMENT_BUDGET};
use monoidlab::word::{Identity, Letter, Substitution, Word};

/// Longest accepted derivation for criterion 2.
const MAX_TRACE_STEPS: usize = 4;
/// Word length for the brute-force cross-checks of criteria 3 and 6.
const BRUTE_LENGTH: usize = 5;
/// Lattice sizes swept by criterion 7.
const SWEEP_SIZE: usize = 6;
/// Lattice sizes cross-checked by the brute-force enumerator.
const BRUTE_LATTICE_SIZE: usize = 5;

type Check = Result<String, String>;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn id(s: &str) -> Identity {
    Identity::parse(s).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn letters(s: &str) -> Vec<Letter> {
    s.chars().map(|c| Letter::new(c).unwrap()).collect()
}

/// `S(w)` evaluated directly on words: an element is a factor of `w` or
/// `None` for zero.
fn rees_oracle_satisfies(word: &Word, identity: &Identity) -> Option<Vec<(Letter, Option<Word>)>> {
    let mut factors: Vec<Option<Word>> = vec![Some(Word::empty())];
    let n = word.len();
    let mut seen = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..=n {
            let f = Word::from_letters(word.letters()[i..j].to_vec());
            if seen.insert(f.clone()) {
                factors.push(Some(f));
            }
        }
    }
    factors.push(None);
    let vars: Vec<Letter> = identity.content().into_iter().collect();
    let eval = |side: &Word, a: &[Option<Word>]| -> Option<Word> {
        let mut acc = Word::empty();
        for l in side.letters() {
            let ix = vars.iter().position(|v| v == l).unwrap();
            acc = acc.concat(a[ix].as_ref()?);
            if !acc.is_factor_of(word) {
                return None;
            }
        }
        Some(acc)
    };
    let total = factors.len().pow(vars.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut a = vec![None; vars.len()];
        for slot in a.iter_mut().rev() {
            *slot = factors[c % factors.len()].clone();
            c /= factors.len();
        }
        if eval(&identity.lhs, &a) != eval(&identity.rhs, &a) {
            return Some(vars.iter().copied().zip(a).collect());
        }
    }
    None
}

fn criterion_1() -> Check {
    let yx2 = w("yx^2");
    let s = s_monoid(&yx2);
    // 1, y, x, x^2, yx, yx^2 and zero
    let subwords: BTreeSet<Word> = (0..=3)
        .flat_map(|i| (i..=3).map(move |j| (i, j)))
        .map(|(i, j)| Word::from_letters(yx2.letters()[i..j].to_vec()))
        .collect();
    let expected = subwords.len() + 1;
    ensure(s.size() == 7 && expected == 7, format!("size {} (oracle {expected})", s.size()))?;

    let holds = id("x^3y = yx^3");
    ensure(s.satisfies(&holds).holds(), "x^3y = yx^3 should hold")?;
    ensure(rees_oracle_satisfies(&yx2, &holds).is_none(), "oracle disagrees on x^3y = yx^3")?;

    let fails = id("x^2y = yx^2");
    let Satisfaction::Fails(a) = s.satisfies(&fails) else {
        return Err("x^2y = yx^2 should fail".into());
    };
    let witness = a.describe(&s);
    ensure(witness == "x->[x], y->[y]", format!("witness {witness}"))?;
    let oracle = rees_oracle_satisfies(&yx2, &fails).ok_or("oracle finds no witness")?;
    ensure(oracle.iter().all(|(_, v)| v.is_some()), "oracle witness uses zero")?;
    let l = s.evaluate(&a, &fails.lhs).unwrap();
    let r = s.evaluate(&a, &fails.rhs).unwrap();
    ensure(s.element_name(l) == "0" && s.element_name(r) == "yx^2", "witness values")?;
    Ok(format!("|S(yx^2)| = 7, x^3y = yx^3 holds, x^2y = yx^2 fails at {witness}"))
}

fn criterion_2() -> Check {
    let basis = IdentityBasis::parse("x^2 = x^3\nx^3y = yx^3").unwrap();
    let goal = id("x^2y = yx^2");
    let result = derive_bounded(&basis, &goal, SearchBudget::for_goal(&goal));
    let trace = result.trace().ok_or("not proved")?;
    replay(&basis, &goal, trace).map_err(|e| e.to_string())?;
    ensure(trace.len() <= MAX_TRACE_STEPS, format!("{} steps", trace.len()))?;
    // each step is also a valid consequence in every small model of the basis
    for m in monoidlab::finmon::monoid_universe(3).unwrap() {
        if basis.holds_in(m) {
            ensure(m.satisfies(&goal).holds(), format!("{} satisfies the basis but not the goal", m.label()))?;
        }
    }
    let words: Vec<String> = trace.iter().map(|s| s.result.to_string()).collect();
    Ok(format!("proved in {} steps: x^2y -> {}", trace.len(), words.join(" -> ")))
}

fn criterion_3() -> Check {
    let yx2 = w("yx^2");
    let c3 = cyclic_chain(3);
    let all = Word::all_up_to(&letters("xyz"), BRUTE_LENGTH);
    let class: Vec<&Word> = all.iter().filter(|v| decide_cn(&yx2, v, 3)).collect();
    // oracle: per-letter counts with the exponent cap, computed by hand
    let cap = |v: &Word, c: char| v.letters().iter().filter(|l| l.as_char() == c).count().min(3);
    let oracle: Vec<&Word> = all
        .iter()
        .filter(|v| ['x', 'y', 'z'].iter().all(|&c| cap(v, c) == cap(&yx2, c)))
        .collect();
    ensure(class == oracle, "decide_cn disagrees with the count oracle")?;
    for v in &all {
        let in_model = c3.satisfies(&Identity::new(yx2.clone(), (*v).clone())).holds();
        ensure(in_model == class.contains(&v), format!("C3 table disagrees on {v}"))?;
    }
    ensure(class.len() == 3, format!("{} words", class.len()))?;
    ensure(class.iter().all(|v| v.is_permutation_of(&yx2)), "non-permutation in class")?;
    let listed: Vec<String> = class.iter().map(|v| v.to_string()).collect();
    Ok(format!("{} words up to length {BRUTE_LENGTH}: {}", class.len(), listed.join(", ")))
}

fn criterion_4() -> Check {
    let x = Letter::new('x').unwrap();
    let y = Letter::new('y').unwrap();
    let lrb = IdentityBasis::parse("xy = xyx").unwrap();
    for &(r, s, t) in &THEOREM_GRID {
        let five = Identity::new(
            Word::letter(y).concat(&Word::power(x, r)),
            Word::power(x, s).concat(&Word::letter(y)).concat(&Word::power(x, t)),
        );
        let six = Identity::new(
            Word::power(y, 2).concat(&Word::power(x, r)),
            Word::power(x, s).concat(&Word::power(y, 2)).concat(&Word::power(x, t)),
        );
        let sub = five.substitute(&Substitution::identity().with(y, Word::power(y, 2)));
        ensure(sub == six, format!("substitution for ({r},{s},{t}) gives {sub}"))?;
        // literal string form as an extra check
        let text = format!("y^2{} = {}y^2{}", pow("x", r), pow("x", s), pow("x", t));
        ensure(sub == id(&text), format!("{sub} vs {text}"))?;
    }
    for goal in ["y^2x^2 = yx", "xy^2x = xy"] {
        let goal = id(goal);
        let result = derive_bounded(&lrb, &goal, SearchBudget::for_goal(&goal));
        let trace = result.trace().ok_or(format!("{goal} not proved"))?;
        replay(&lrb, &goal, trace).map_err(|e| e.to_string())?;
    }
    let goal = id("y^2x^2 = xy^2x");
    let result = refute(&lrb, &goal, 4).map_err(|e| e.to_string())?;
    let Verdict::Refuted { model, assignment } = result.verdict else {
        return Err("y^2x^2 = xy^2x not refuted".into());
    };
    ensure(model.size() == 3 && model.is_isomorphic(&lrb_monoid()), format!("countermodel {}", model.label()))?;
    let l = model.evaluate(&assignment, &goal.lhs).unwrap();
    let r = model.evaluate(&assignment, &goal.rhs).unwrap();
    ensure(l != r && lrb.holds_in(&model), "countermodel does not separate")?;
    Ok(format!(
        "substitution exact on {} grid points, both LRB derivations replay, countermodel {} at {}",
        THEOREM_GRID.len(),
        model.label(),
        assignment.describe(&model)
    ))
}

fn pow(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        k => format!("{base}^{k}"),
    }
}

fn criterion_5() -> Check {
    let c2 = cyclic_chain(2);
    ensure(membership(&semilattice2(), &c2, DEFAULT_ELEMENT_BUDGET) == Membership::Member, "SL2 not a member")?;
    // oracle: {1, g^2} is a copy of SL2 inside C2
    let g2 = c2.element_by_name("g^2").unwrap();
    ensure(c2.submonoid(&[g2]).is_isomorphic(&semilattice2()), "no SL2 inside C2")?;
    match membership(&lrb_monoid(), &c2, DEFAULT_ELEMENT_BUDGET) {
        Membership::NonMember { identity, assignment } => {
            ensure(identity == id("xy = yx"), format!("separating identity {identity}"))?;
            ensure(c2.satisfies(&identity).holds(), "C2 must satisfy the separating identity")?;
            ensure(!lrb_monoid().satisfies(&identity).holds(), "LRB must violate it")?;
            Ok(format!("SL2 member; LRB non-member, separated by {identity} at {}", assignment.describe(&lrb_monoid())))
        }
        other => Err(format!("LRB: {other:?}")),
    }
}

/// Words over `content(word)` plus one fresh letter equal to `word` in `m`.
fn brute_class(m: &monoidlab::finmon::FiniteMonoid, word: &Word) -> Vec<Word> {
    let content = word.content();
    let mut alphabet: Vec<Letter> = content.iter().copied().collect();
    alphabet.push(Letter::fresh(&content).unwrap());
    Word::all_up_to(&alphabet, BRUTE_LENGTH)
        .into_iter()
        .filter(|v| m.satisfies(&Identity::new(word.clone(), v.clone())).holds())
        .collect()
}

fn criterion_6() -> Check {
    let yx2 = w("yx^2");
    let s = s_monoid(&yx2);
    ensure(isoterm(&s, &yx2) == IsotermVerdict::Isoterm, "yx^2 not an isoterm for S(yx^2)")?;
    ensure(brute_class(&s, &yx2) == vec![yx2.clone()], "brute force finds a partner in S(yx^2)")?;
    let c3 = cyclic_chain(3);
    let IsotermVerdict::NotIsoterm(v) = isoterm(&c3, &yx2) else {
        return Err("yx^2 is reported an isoterm for C3".into());
    };
    let brute = brute_class(&c3, &yx2);
    ensure(brute.contains(&v) && v.is_permutation_of(&yx2) && v != yx2, format!("witness {v}"))?;
    ensure(brute.iter().all(|u| u.is_permutation_of(&yx2)), "brute class has a non-permutation")?;
    Ok(format!("isoterm for S(yx^2); not for C3 with witness {v}; brute class {}", brute.len()))
}

/// Lattice count by a separate route: all partial orders on `n` points,
/// lattice check by bounds, classes by permutation search.
fn brute_lattice_count(n: usize) -> usize {
    let perms = permutations(n);
    let mut reps: Vec<Vec<bool>> = Vec::new();
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    for mask in 0u64..1 << off.len() {
        let mut r = vec![false; n * n];
        for i in 0..n {
            r[i * n + i] = true;
        }
        for (b, &(i, j)) in off.iter().enumerate() {
            if mask >> b & 1 == 1 {
                r[i * n + j] = true;
            }
        }
        let le = |a: usize, b: usize| r[a * n + b];
        let order = (0..n).all(|a| {
            (0..n).all(|b| (a == b || !(le(a, b) && le(b, a))) && (0..n).all(|c| !(le(a, b) && le(b, c)) || le(a, c)))
        });
        if !order {
            continue;
        }
        let bounded = (0..n).all(|a| {
            (0..n).all(|b| {
                let lo: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                let hi: Vec<usize> = (0..n).filter(|&c| le(a, c) && le(b, c)).collect();
                lo.iter().any(|&g| lo.iter().all(|&c| le(c, g))) && hi.iter().any(|&g| hi.iter().all(|&c| le(g, c)))
            })
        });
        if !bounded {
            continue;
        }
        let same = |s: &Vec<bool>| perms.iter().any(|p| (0..n * n).all(|k| s[k] == r[p[k / n] * n + p[k % n]]));
        if !reps.iter().any(same) {
            reps.push(r);
        }
    }
    reps.len()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=p.len()).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    out
}

/// The six defining formulas, written out directly; `dual` flips the order.
fn formula(l: &FiniteLattice, p: Property, x: usize, y: usize, z: usize) -> bool {
    let (j, m) = (|a, b| l.join(a, b), |a, b| l.meet(a, b));
    match p {
        Property::Neutral => m(m(j(x, y), j(y, z)), j(z, x)) == j(j(m(x, y), m(y, z)), m(z, x)),
        Property::Standard => m(j(x, y), z) == j(m(x, z), m(y, z)),
        Property::Costandard => j(m(x, y), z) == m(j(x, z), j(y, z)),
        Property::Modular => !l.leq(y, z) || m(j(x, y), z) == j(m(x, z), y),
        Property::LowerModular => !l.leq(x, y) || j(x, m(y, z)) == m(y, j(x, z)),
        Property::UpperModular => !l.leq(y, x) || m(x, j(y, z)) == j(y, m(x, z)),
    }
}

fn oracle_holds(l: &FiniteLattice, p: Property, x: usize) -> bool {
    l.elements().all(|y| l.elements().all(|z| formula(l, p, x, y, z)))
}

fn criterion_7() -> Check {
    let counts: Vec<usize> = (1..=SWEEP_SIZE).map(|n| enumerate_lattices(n).unwrap().len()).collect();
    ensure(counts[..5] == [1, 1, 1, 2, 5], format!("counts {counts:?}"))?;
    for n in 1..=BRUTE_LATTICE_SIZE {
        let brute = brute_lattice_count(n);
        ensure(brute == counts[n - 1], format!("size {n}: {} vs brute force {brute}", counts[n - 1]))?;
    }
    let mut elements = 0;
    for l in lattice_universe(SWEEP_SIZE).unwrap() {
        let dual = l.dual();
        for x in l.elements() {
            elements += 1;
            let r = classify_element(l, x).map_err(|e| e.to_string())?;
            for p in Property::ALL {
                ensure(r.get(p) == oracle_holds(l, p, x), format!("{} element {x}: {p} disagrees with oracle", l.label()))?;
            }
            let at = || format!("{} element {x}", l.label());
            ensure(!r.neutral || (r.standard && r.costandard), format!("{}: neutral chain", at()))?;
            ensure(!r.standard || (r.modular && r.lower_modular), format!("{}: standard chain", at()))?;
            ensure(!r.costandard || (r.modular && r.upper_modular), format!("{}: costandard chain", at()))?;
            ensure(
                Property::Standard.holds(l, x) == Property::Costandard.holds(&dual, x)
                    && Property::LowerModular.holds(l, x) == Property::UpperModular.holds(&dual, x),
                format!("{}: duality", at()),
            )?;
        }
    }
    Ok(format!("counts {counts:?}; {elements} elements, 0 exceptions; duality holds"))
}

fn criterion_8() -> Check {
    let n5 = pentagon();
    let x = n5.element_by_name("x").unwrap();
    ensure(!oracle_holds(&n5, Property::Modular, x), "oracle says the side is modular")?;
    let (u, w) = find_pentagon_witness(&n5, x).ok_or("no pentagon witness")?;
    ensure(n5.lt(u, w) && n5.join(x, u) == n5.join(x, w) && n5.meet(x, u) == n5.meet(x, w), "bad witness")?;
    let (sub, embedding) = n5.sublattice_generated(&[u, w, x]);
    let expected: BTreeSet<usize> = [n5.meet(x, u), u, w, x, n5.join(x, u)].into_iter().collect();
    ensure(sub.size() == 5 && embedding.iter().copied().collect::<BTreeSet<_>>() == expected, "witness span")?;
    ensure(sub.is_isomorphic(&n5), "span is not a pentagon")?;
    let mut checked = vec![diamond()];
    checked.extend((1..=MAX_LATTICE_SIZE).map(chain));
    for l in &checked {
        for e in l.elements() {
            ensure(Property::Modular.holds(l, e) && find_pentagon_witness(l, e).is_none(), format!("{} element {e}", l.label()))?;
        }
    }
    Ok(format!("side witness (u, w) = ({u}, {w}) spans 5 elements; M3 and {} chains all modular", MAX_LATTICE_SIZE))
}

fn criterion_9() -> Check {
    let found = mine_modular_lower_modular_not_standard(MAX_LATTICE_SIZE)
        .map_err(|e| e.to_string())?
        .ok_or("miner found nothing")?;
    ensure(found.verify(), "certificate does not verify")?;
    let l = &found.lattice;
    let (y, z) = found.standard_witness;
    ensure(!formula(l, Property::Standard, found.element, y, z), "witness does not falsify standardness")?;
    ensure(oracle_holds(l, Property::Modular, found.element), "oracle: not modular")?;
    ensure(oracle_holds(l, Property::LowerModular, found.element), "oracle: not lower-modular")?;
    for smaller in lattice_universe(l.size() - 1).unwrap() {
        for e in smaller.elements() {
            let hit = oracle_holds(smaller, Property::Modular, e)
                && oracle_holds(smaller, Property::LowerModular, e)
                && !oracle_holds(smaller, Property::Standard, e);
            ensure(!hit, format!("smaller example {} element {e}", smaller.label()))?;
        }
    }
    Ok(format!(
        "size {} ({}), element {}, standard fails at ({y}, {z}); no smaller example",
        l.size(),
        if l.is_isomorphic(&diamond()) { "diamond" } else { "other" },
        found.element
    ))
}

fn criterion_10() -> Check {
    let budgets = Budgets::default();
    let first = render_reports(&run_grid(false, &budgets).map_err(|e| e.to_string())?);
    let second = render_reports(&run_grid(false, &budgets).map_err(|e| e.to_string())?);
    let reports = run_grid(true, &budgets).map_err(|e| e.to_string())?;
    let parallel = render_reports(&reports);
    ensure(first == second, "two sequential runs differ")?;
    ensure(first == parallel, "parallel run differs")?;
    let json_a: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
    let json_b: Vec<String> = run_grid(true, &budgets).unwrap().iter().map(|r| r.to_json()).collect();
    ensure(json_a == json_b, "json differs")?;
    let statuses: Vec<&str> = reports.iter().map(|r| r.status.as_str()).collect();
    ensure(reports.iter().all(|r| r.status == Status::Pass), format!("statuses {statuses:?}"))?;
    Ok(format!("{} reports, {} bytes, identical across runs; all pass", reports.len(), first.len()))
}

/// Written straight to stderr so the lines survive output capture.
fn say(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("S(yx^2) size and witnesses", criterion_1),
        ("bounded derivation with replay", criterion_2),
        ("C3 class of yx^2", criterion_3),
        ("theorem substitution, LRB derivations and countermodel", criterion_4),
        ("membership in var C2", criterion_5),
        ("isoterm decisions", criterion_6),
        ("lattice predicate suite", criterion_7),
        ("pentagon machinery", criterion_8),
        ("counterexample mining", criterion_9),
        ("determinism of the scenario grid", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(detail) => say(format!("PASS criterion {:>2} ({name}): {detail} [{:.2?}]", i + 1, t.elapsed())),
            Err(why) => {
                say(format!("FAIL criterion {:>2} ({name}): {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    say(format!("acceptance: {} of 10 passed in {:.2?}", 10 - failed.len(), start.elapsed()));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
