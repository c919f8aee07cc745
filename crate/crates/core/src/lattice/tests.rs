use proptest::prelude::*;

use super::*;

fn by_name(l: &FiniteLattice, n: &str) -> usize {
    l.element_by_name(n).unwrap()
}

#[test]
fn validation() {
    let n5 = pentagon();
    assert_eq!(n5.size(), 5);
    assert_eq!((n5.bottom(), n5.top()), (0, 4));
    let (u, w, x) = (by_name(&n5, "u"), by_name(&n5, "w"), by_name(&n5, "x"));
    assert!(n5.lt(u, w) && !n5.leq(x, w) && !n5.leq(u, x));
    assert_eq!(n5.join(u, x), 4);
    assert_eq!(n5.meet(w, x), 0);

    assert_eq!(FiniteLattice::from_leq_pairs(2, &[(0, 1), (1, 0)]), Err(LatticeError::Cycle(0, 1)));
    // two maximal elements
    assert!(matches!(FiniteLattice::from_leq_pairs(3, &[(0, 1), (0, 2)]), Err(LatticeError::NoJoin(1, 2))));
    // 0,1 < 2,3 with no join of 0 and 1
    let bowtie = FiniteLattice::from_leq_pairs(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
    assert!(matches!(bowtie, Err(LatticeError::NoMeet(..))));
    assert_eq!(FiniteLattice::from_leq_pairs(0, &[]), Err(LatticeError::Empty));
    assert_eq!(FiniteLattice::from_leq_pairs(2, &[(0, 2)]), Err(LatticeError::OutOfRange(0, 2)));
}

#[test]
fn diamond_examples() {
    let m3 = diamond();
    let (a, b, c) = (by_name(&m3, "a"), by_name(&m3, "b"), by_name(&m3, "c"));
    assert_eq!(is_standard_element(&m3, a), Some((b, c)));
    assert_eq!(m3.meet(m3.join(a, b), c), c);
    assert_eq!(m3.join(m3.meet(a, c), m3.meet(b, c)), 0);
    assert_eq!(is_neutral_element(&m3, a), Some((b, c)));
    for e in m3.elements() {
        assert_eq!(is_modular_element(&m3, e), None);
    }
    let r = classify_element(&m3, a).unwrap();
    assert!(r.modular && r.lower_modular && r.upper_modular);
    assert!(!r.neutral && !r.standard && !r.costandard);
}

#[test]
fn pentagon_examples() {
    let n5 = pentagon();
    let (u, w, x) = (by_name(&n5, "u"), by_name(&n5, "w"), by_name(&n5, "x"));
    assert_eq!(find_pentagon_witness(&n5, x), Some((u, w)));
    assert!(is_modular_element(&n5, x).is_some());
    for e in [n5.bottom(), n5.top()] {
        let r = classify_element(&n5, e).unwrap();
        assert!(r.neutral && r.standard && r.costandard);
    }
    let (sub, embedding) = n5.sublattice_generated(&[u, w, x]);
    assert_eq!(sub.size(), 5);
    assert_eq!(embedding, vec![0, 1, 2, 3, 4]);
    assert!(sub.is_isomorphic(&n5));
    let (one, _) = n5.sublattice_generated(&[n5.bottom()]);
    assert_eq!(one.size(), 1);
}

/// Direct quantifier sweep, written out separately from `Property`.
fn lower_modular_sweep(l: &FiniteLattice, x: usize) -> bool {
    let n = l.size();
    let mut ok = true;
    for y in 0..n {
        for z in 0..n {
            if l.leq(x, y) && l.join(x, l.meet(y, z)) != l.meet(y, l.join(x, z)) {
                ok = false;
            }
        }
    }
    ok
}

#[test]
fn pentagon_side_lower_modularity() {
    let n5 = pentagon();
    let x = by_name(&n5, "x");
    // x is only below itself and the top, where the formula is trivial
    assert!(lower_modular_sweep(&n5, x));
    assert_eq!(is_lower_modular_element(&n5, x).is_none(), lower_modular_sweep(&n5, x));
    for e in n5.elements() {
        assert_eq!(is_lower_modular_element(&n5, e).is_none(), lower_modular_sweep(&n5, e));
    }
}

#[test]
fn boolean_lattices_are_distributive() {
    let b3 = boolean_lattice(3);
    assert_eq!(b3.size(), 8);
    assert!(b3.is_distributive());
    for e in b3.elements() {
        let r = classify_element(&b3, e).unwrap();
        assert!(r.standard && r.neutral, "{e}");
        assert!(r.witnesses.is_empty());
    }
    assert!(!pentagon().is_distributive() && !diamond().is_distributive());
    assert!(!pentagon().is_modular() && diamond().is_modular());
    assert!(chain(4).is_distributive());
}

/// Independent count: every relation on `n` points that is a partial
/// order with all meets and joins, grouped by explicit isomorphism search.
fn brute_force_lattice_count(n: usize) -> usize {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut reps: Vec<Vec<Vec<bool>>> = Vec::new();
    for mask in 0u32..1 << off.len() {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in off.iter().enumerate() {
            r[i][j] = mask >> b & 1 == 1;
        }
        let partial_order = (0..n).all(|i| {
            (0..n).all(|j| (i == j || !(r[i][j] && r[j][i])) && (0..n).all(|k| !(r[i][j] && r[j][k]) || r[i][k]))
        });
        if !partial_order {
            continue;
        }
        let is_lattice = (0..n).all(|a| {
            (0..n).all(|b| {
                let lower: Vec<usize> = (0..n).filter(|&c| r[c][a] && r[c][b]).collect();
                let upper: Vec<usize> = (0..n).filter(|&c| r[a][c] && r[b][c]).collect();
                lower.iter().any(|&g| lower.iter().all(|&c| r[c][g]))
                    && upper.iter().any(|&g| upper.iter().all(|&c| r[g][c]))
            })
        });
        if !is_lattice {
            continue;
        }
        let degrees = |m: &Vec<Vec<bool>>| {
            let mut d: Vec<usize> = (0..n).map(|i| m[i].iter().filter(|&&b| b).count()).collect();
            d.sort();
            d
        };
        let iso = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| {
            degrees(a) == degrees(b) && permutations(n).iter().any(|p| (0..n).all(|i| (0..n).all(|j| a[i][j] == b[p[i]][p[j]])))
        };
        if !reps.iter().any(|rep| iso(rep, &r)) {
            reps.push(r);
        }
    }
    reps.len()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn enumeration_counts() {
    let counts: Vec<usize> = (1..=MAX_LATTICE_SIZE).map(|n| enumerate_lattices(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53]);
    for n in 1..=5 {
        assert_eq!(brute_force_lattice_count(n), counts[n - 1], "n = {n}");
    }
    let five = enumerate_lattices(5).unwrap();
    assert!(five.iter().any(|l| l.is_isomorphic(&pentagon())));
    assert!(five.iter().any(|l| l.is_isomorphic(&diamond())));
    for l in lattice_universe(MAX_LATTICE_SIZE).unwrap() {
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), l.size() - 1);
        let pairs: Vec<(usize, usize)> = l.covers();
        assert_eq!(&FiniteLattice::from_leq_pairs(l.size(), &pairs).unwrap().named(l.label()), l);
    }
    for n in 1..=6 {
        let ls = enumerate_lattices(n).unwrap();
        for (i, a) in ls.iter().enumerate() {
            for b in &ls[i + 1..] {
                assert!(!a.is_isomorphic(b));
            }
        }
    }
    assert!(enumerate_lattices(8).is_err());
}

#[test]
fn implication_chain_and_duality() {
    for l in lattice_universe(MAX_LATTICE_SIZE).unwrap() {
        let distributive = l.is_distributive();
        let dual = l.dual();
        for x in l.elements() {
            let r = classify_element(l, x).unwrap();
            if distributive {
                assert!(r.neutral);
            }
            assert_eq!(r.modular, find_pentagon_witness(l, x).is_none());
            if l.size() <= 6 {
                assert_eq!(Property::Standard.holds(l, x), Property::Costandard.holds(&dual, x));
                assert_eq!(Property::LowerModular.holds(l, x), Property::UpperModular.holds(&dual, x));
                assert_eq!(Property::Modular.holds(l, x), Property::Modular.holds(&dual, x));
                assert_eq!(Property::Neutral.holds(l, x), Property::Neutral.holds(&dual, x));
            }
        }
    }
}

#[test]
fn dual_is_an_involution() {
    for l in lattice_universe(6).unwrap() {
        let dd = l.dual().dual();
        for a in l.elements() {
            for b in l.elements() {
                assert_eq!(dd.leq(a, b), l.leq(a, b));
                assert_eq!(l.dual().meet(a, b), l.join(a, b));
            }
        }
    }
}

#[test]
fn mining_finds_a_certificate() {
    let mined = mine_modular_lower_modular_not_standard(MAX_LATTICE_SIZE).unwrap().expect("an example exists");
    assert!(mined.verify());
    // no smaller lattice has such an element
    for l in lattice_universe(mined.lattice.size() - 1).unwrap() {
        for x in l.elements() {
            let r = classify_element(l, x).unwrap();
            assert!(!(r.modular && r.lower_modular && !r.standard));
        }
    }
    assert_eq!(mined.lattice.size(), 5);
    assert!(mined.lattice.is_modular());
    assert!(mined.lattice.is_isomorphic(&diamond()));
}

#[test]
fn file_round_trip() {
    let text = "# pentagon\nlattice N5\nsize 5\nleq\n0 1\n1 2\n2 4\n0 3\n3 4\n\nlattice C3\nsize 3\nleq\n0 1\n1 2\n";
    let ls = parse_lattice_file(text).unwrap();
    assert_eq!(ls.len(), 2);
    assert!(ls[0].is_isomorphic(&pentagon()));
    assert_eq!(ls[0].label(), "N5");
    assert!(ls[1].is_isomorphic(&chain(3)));
    let again = parse_lattice_file(&render_lattice(&ls[0])).unwrap();
    assert_eq!(again[0], ls[0]);
    assert!(matches!(parse_lattice_file("lattice B\nsize 3\nleq\n0 1\n0 2\n"), Err(LatticeFormatError::Invalid { .. })));
    assert!(matches!(parse_lattice_file("0 1\n"), Err(LatticeFormatError::Syntax { line: 1, .. })));
    assert_eq!(parse_lattice_file("# nothing\n"), Err(LatticeFormatError::Empty));
}

proptest! {
    #[test]
    fn sublattices_are_closed(index in 0usize..78, picks in proptest::collection::vec(0usize..7, 1..4)) {
        let universe = lattice_universe(MAX_LATTICE_SIZE).unwrap();
        let l = universe[index % universe.len()];
        let subset: Vec<usize> = picks.iter().map(|p| p % l.size()).collect();
        let (sub, embedding) = l.sublattice_generated(&subset);
        prop_assert_eq!(sub.size(), embedding.len());
        for a in sub.elements() {
            for b in sub.elements() {
                prop_assert_eq!(embedding[sub.meet(a, b)], l.meet(embedding[a], embedding[b]));
                prop_assert_eq!(embedding[sub.join(a, b)], l.join(embedding[a], embedding[b]));
            }
        }
        for s in &subset {
            prop_assert!(embedding.contains(s));
        }
    }

    #[test]
    fn lattice_laws(index in 0usize..78, x in 0usize..7, y in 0usize..7, z in 0usize..7) {
        let universe = lattice_universe(MAX_LATTICE_SIZE).unwrap();
        let l = universe[index % universe.len()];
        let (x, y, z) = (x % l.size(), y % l.size(), z % l.size());
        prop_assert_eq!(l.meet(x, l.join(x, y)), x);
        prop_assert_eq!(l.join(x, l.meet(x, y)), x);
        prop_assert_eq!(l.meet(l.meet(x, y), z), l.meet(x, l.meet(y, z)));
        prop_assert_eq!(l.leq(x, y), l.meet(x, y) == x);
    }
}
