mod common;

use std::collections::BTreeSet;

use common::{is_zero_matrix, oracle_is_identity, oracle_matrix, oracle_perm};
use justinf_core::algebra::{
    is_zero_in_b, pi_level, psi_expand, psi_iterate, reduce_to_nucleus, AlgebraElement, LevelMatrix,
};
use justinf_core::bratteli::{
    build_strictly_rfd, build_y_infty, ideal_from_open_set, is_essential, is_ideal, quotient,
    enumerate_ideals, limit_dimension, primitive_quotient_sizes, DiagramIdeal, LimitDimension,
};
use justinf_core::grig::{
    is_trivial, level_permutation, lysenok_relators, order, wreath, Generator, GroupElement, Order,
};
use justinf_core::k0::K0Element;
use justinf_core::primspace::{build_yn, is_spectral, FiniteT0Space};
use justinf_core::Limits;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn word_strategy(max_len: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0usize..4, 0..=max_len)
        .prop_map(|v| GroupElement::normalize(v.into_iter().map(|i| Generator::ALL[i])))
}

fn raw_word_strategy(max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(0usize..4, 0..=max_len).prop_map(|v| v.into_iter().map(|i| Generator::ALL[i]).collect())
}

fn element_strategy(max_terms: usize, max_len: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((word_strategy(max_len), -3i64..=3, 1i64..=2), 1..=max_terms).prop_map(|ts| {
        AlgebraElement::from_terms(
            ts.into_iter()
                .map(|(g, p, q)| (g, BigRational::new(BigInt::from(p), BigInt::from(q)))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn word_problem_matches_tree_action(raw in raw_word_strategy(12)) {
        let g = GroupElement::normalize(raw.iter().copied());
        let trivial = is_trivial(&g);
        let acts_trivially = (1..=10).all(|n| oracle_is_identity(&g, n));
        // A non-trivial element of length ≤ 12 already moves a vertex at level ≤ 10.
        prop_assert_eq!(trivial, acts_trivially);
    }

    #[test]
    fn level_permutation_matches_oracle(g in word_strategy(16), n in 0usize..=8) {
        let p = level_permutation(&g, n);
        let oracle: Vec<u32> = oracle_perm(&g, n).into_iter().map(|v| v as u32).collect();
        prop_assert_eq!(p.map(), &oracle[..]);
    }

    #[test]
    fn wreath_is_a_homomorphism(g in word_strategy(20), h in word_strategy(20)) {
        prop_assert_eq!(wreath(&g.mul(&h)), wreath(&g).mul(&wreath(&h)));
    }

    #[test]
    fn sections_contract(g in word_strategy(30)) {
        prop_assume!(g.len() >= 2);
        let w = wreath(&g);
        prop_assert!(w.first.len() <= (g.len() + 1) / 2);
        prop_assert!(w.second.len() <= (g.len() + 1) / 2);
    }

    #[test]
    fn orders_are_bounded(g in word_strategy(8)) {
        let o = order(&g, 12);
        let overflow = matches!(o, Order::Overflow { .. });
        prop_assert!(!overflow);
        let n = o.value().unwrap() as usize;
        prop_assert!(is_trivial(&g.pow(n)));
    }

    #[test]
    fn pi_is_a_star_representation(x in element_strategy(6, 8), y in element_strategy(6, 8), n in 0usize..=5) {
        let limits = Limits::default();
        let (px, py) = (pi_level(&x, n, &limits).unwrap(), pi_level(&y, n, &limits).unwrap());
        prop_assert_eq!(pi_level(&(&x * &y), n, &limits).unwrap(), px.mul(&py).unwrap());
        prop_assert_eq!(pi_level(&x.star(), n, &limits).unwrap(), px.transpose());
        prop_assert_eq!(pi_level(&AlgebraElement::one(), n, &limits).unwrap(), LevelMatrix::identity(n));
    }

    #[test]
    fn recursion_agrees_with_levels(x in element_strategy(6, 8), n in 0usize..=6) {
        let limits = Limits::default();
        prop_assert_eq!(
            pi_level(&x, n + 1, &limits).unwrap(),
            psi_expand(&x).evaluate_at_level(n, &limits).unwrap()
        );
    }

    #[test]
    fn iterates_compose(x in element_strategy(4, 8), n in 0usize..=3, m in 0usize..=2) {
        let limits = Limits::default();
        let mut stepped = psi_iterate(&x, n, &limits).unwrap();
        for _ in 0..m {
            stepped = stepped.expand();
        }
        prop_assert_eq!(stepped, psi_iterate(&x, n + m, &limits).unwrap());
    }

    #[test]
    fn kernel_decision_matches_levels(x in element_strategy(4, 6)) {
        let limits = Limits::default();
        let cert = is_zero_in_b(&x, &limits).unwrap();
        if cert.in_kernel {
            prop_assert!((0..=7).all(|n| is_zero_matrix(&oracle_matrix(&x, n))));
        } else {
            // Some finite level detects a non-zero element: depth of the scalar plus one suffices.
            let w = justinf_core::algebra::find_scalar_entry(&x, &limits).unwrap();
            prop_assert!(!is_zero_matrix(&oracle_matrix(&x, w.depth)));
        }
    }

    #[test]
    fn kernel_is_an_ideal(g in word_strategy(8), h in word_strategy(8)) {
        let limits = Limits::default();
        let z: AlgebraElement = "(1-d)a(1-d)".parse().unwrap();
        let moved = z.left_mul(&g).right_mul(&h);
        prop_assert!(is_zero_in_b(&moved, &limits).unwrap().in_kernel);
    }

    #[test]
    fn single_words_survive_psi(g in word_strategy(12)) {
        prop_assert!(!psi_expand(&AlgebraElement::from_group(g)).is_zero());
    }

    #[test]
    fn nucleus_reduction_reaches_the_span(x in element_strategy(4, 12)) {
        let r = reduce_to_nucleus(&x, &Limits::default()).unwrap();
        prop_assert!(r.matrix.in_nucleus_span());
        prop_assert!(r.depth <= 5);
    }

    #[test]
    fn k0_group_laws(
        a in prop::collection::vec(-5i64..=5, 1..=8),
        b in prop::collection::vec(-5i64..=5, 1..=8),
        c in prop::collection::vec(-5i64..=5, 1..=8),
    ) {
        let (a, b, c) = (K0Element::new(a).unwrap(), K0Element::new(b).unwrap(), K0Element::new(c).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(a.add(&a.neg().unwrap()).unwrap().is_zero());
        let both = a.is_positive() && a.neg().unwrap().is_positive();
        prop_assert_eq!(both, a.is_zero());
    }

    #[test]
    fn k0_push_is_functorial(v in prop::collection::vec(-5i64..=5, 1..=6), m in 0usize..4, p in 0usize..4) {
        let x = K0Element::new(v).unwrap();
        let mid = x.push(x.level() + m).unwrap();
        let via = K0Element::new(mid).unwrap().push(x.level() + m + p).unwrap();
        prop_assert_eq!(via, x.push(x.level() + m + p).unwrap());
        prop_assert_eq!(K0Element::new(x.push(x.level() + m).unwrap()).unwrap(), x);
    }

    #[test]
    fn finite_t0_spaces_are_spectral(bits in prop::collection::vec(any::<bool>(), 9)) {
        // Alexandrov topology of a random preorder on 3 points, made T0 by keeping only valid ones.
        let n = 3;
        let mut le = [[false; 3]; 3];
        for i in 0..n { for j in 0..n { le[i][j] = i == j || bits[i * n + j]; } }
        for k in 0..n { for i in 0..n { for j in 0..n { if le[i][k] && le[k][j] { le[i][j] = true; } } } }
        let closed: Vec<u32> = (0u32..8)
            .filter(|&m| (0..n).all(|i| m >> i & 1 == 0 || (0..n).all(|j| !le[j][i] || m >> j & 1 == 1)))
            .collect();
        let names = vec!["p".to_string(), "q".to_string(), "r".to_string()];
        if let Ok(space) = FiniteT0Space::new(names, closed) {
            prop_assert!(is_spectral(&space));
        }
    }
}

#[test]
fn relators_trivial_and_nucleus_closed() {
    for (name, r) in lysenok_relators(4) {
        assert!(is_trivial(&r), "{name}");
    }
    for w in ["", "a", "b", "c", "d"] {
        let g: GroupElement = w.parse().unwrap();
        let im = wreath(&g);
        assert!(im.first.is_nucleus() && im.second.is_nucleus());
    }
}

#[test]
fn psi_iterate_examples() {
    let limits = Limits::default();
    let d = psi_iterate(&"d".parse().unwrap(), 2, &limits).unwrap();
    let expected = ["1", "1", "a", "c"];
    assert_eq!(d.nonzero_count(), 4);
    for (i, e) in expected.iter().enumerate() {
        assert_eq!(d.get(i, i), Some(&e.parse().unwrap()));
    }
    let a = psi_iterate(&"a".parse().unwrap(), 2, &limits).unwrap();
    let one = AlgebraElement::one();
    let positions: Vec<(usize, usize)> = a.entries().map(|(p, _)| p).collect();
    assert_eq!(positions, vec![(0, 2), (1, 3), (2, 0), (3, 1)]);
    assert!(a.entries().all(|(_, e)| *e == one));
    let r = reduce_to_nucleus(&"bacad".parse().unwrap(), &limits).unwrap();
    assert!(r.depth <= 3);
    assert!(r.matrix.entries().all(|(_, e)| e.len() == 1 && e.terms().all(|(w, _)| w.len() <= 1)));
}

#[test]
fn pi_level_examples() {
    let limits = Limits::default();
    let a = pi_level(&"a".parse().unwrap(), 1, &limits).unwrap();
    assert_eq!(a.nonzero_entries().map(|(p, _)| p).collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    assert!(pi_level(&"d".parse().unwrap(), 2, &limits).unwrap().is_identity_like());
    let r: AlgebraElement = "adadadad".parse().unwrap();
    for n in 0..=8 {
        assert_eq!(pi_level(&r, n, &limits).unwrap(), LevelMatrix::identity(n));
    }
}

trait IdentityLike {
    fn is_identity_like(&self) -> bool;
}

impl IdentityLike for LevelMatrix {
    fn is_identity_like(&self) -> bool {
        *self == LevelMatrix::identity(self.level())
    }
}

#[test]
fn bratteli_invariants() {
    let limits = Limits::default();
    for d in [build_y_infty(10, &limits).unwrap(), build_strictly_rfd(8, &limits).unwrap()] {
        for (n, edges) in d.edges().iter().enumerate() {
            for (w, &k) in d.levels()[n + 1].iter().enumerate() {
                let sum: u64 = edges.iter().filter(|e| e.to == w).map(|e| e.mult * d.levels()[n][e.from]).sum();
                assert_eq!(sum, k);
            }
        }
    }
    let y = build_y_infty(10, &limits).unwrap();
    let dims: Vec<u128> = (0..10).map(|n| y.level_dimension(n)).collect();
    assert!(dims.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(limit_dimension(&y, 10).unwrap(), LimitDimension::Infinite);

    let u = ideal_from_open_set(&y, &BTreeSet::from([2, 5])).unwrap();
    let q = quotient(&y, &u).unwrap();
    assert_eq!(q.vertex_count(), y.vertex_count() - u.len());

    let ks = primitive_quotient_sizes(&y, 9).unwrap();
    assert!(ks.windows(2).all(|w| w[1] >= w[0]));
    assert!(ks[8] > ks[2]);

    // Dimension vectors of the diagram are the pushforwards of the unit.
    for n in 1..=10 {
        let v = K0Element::unit().push(n).unwrap();
        let dims: Vec<i64> = y.levels()[n - 1].iter().map(|&k| k as i64).collect();
        assert_eq!(v, dims);
    }
}

#[test]
fn formula_ideals_are_found_and_ordered() {
    let limits = Limits::default();
    for depth in 1..=3 {
        let d = build_y_infty(depth, &limits).unwrap();
        let all = enumerate_ideals(&d).unwrap();
        let subsets: Vec<BTreeSet<usize>> = (0u32..1 << depth)
            .map(|m| (1..=depth).filter(|j| m >> (j - 1) & 1 == 1).collect())
            .collect();
        for f in &subsets {
            let u = ideal_from_open_set(&d, f).unwrap();
            assert!(is_ideal(&d, &u).unwrap());
            assert!(all.iter().any(|e| e.same_members(&u)));
            // Larger open sets (smaller F) give larger ideals.
            for g in &subsets {
                if f.is_subset(g) {
                    let v = ideal_from_open_set(&d, g).unwrap();
                    assert!(v.vertices().all(|x| u.contains(x)));
                }
            }
        }
    }
}

#[test]
fn nonempty_ideals_are_essential_in_built_diagrams() {
    let limits = Limits::default();
    let y = build_y_infty(4, &limits).unwrap();
    let s = build_strictly_rfd(3, &limits).unwrap();
    for d in [y, s] {
        let ideals = enumerate_ideals(&d).unwrap();
        for u in ideals.iter().filter(|u| !u.is_empty()) {
            assert!(is_essential(&d, u, &limits).unwrap(), "{u}");
        }
        assert!(is_essential(&d, &DiagramIdeal::full(&d), &limits).unwrap());
    }
}

#[test]
fn yn_open_sets_match_diagram_ideals() {
    // Open sets of the truncation: complements of subsets of {1..d}, i.e. the formula ideals.
    let limits = Limits::default();
    for depth in 1..=4 {
        let y = build_yn(depth).unwrap();
        let d = build_y_infty(depth, &limits).unwrap();
        let opens: Vec<u32> = y.open_sets().filter(|&o| o & 1 == 1).collect();
        let mut seen = Vec::new();
        for o in &opens {
            let omitted: BTreeSet<usize> = (1..=depth).filter(|j| o >> j & 1 == 0).collect();
            let u = ideal_from_open_set(&d, &omitted).unwrap();
            assert!(!seen.iter().any(|v: &DiagramIdeal| v.same_members(&u)));
            seen.push(u);
        }
        assert_eq!(seen.len(), 1 << depth);
    }
}

#[test]
fn order_examples() {
    let cases = [("a", 2), ("ad", 4), ("ab", 16), ("", 1)];
    for (w, n) in cases {
        let g: GroupElement = w.parse().unwrap();
        assert_eq!(order(&g, 12).value(), Some(n), "{w}");
    }
    // The order is realised on some finite level.
    let ab: GroupElement = "ab".parse().unwrap();
    let longest = (1..=8)
        .flat_map(|n| level_permutation(&ab, n).cycles())
        .map(|c| c.len())
        .max();
    assert_eq!(longest, Some(16));
}

#[test]
fn replication_witness_has_the_right_sections() {
    use justinf_core::grig::find_replication_witness;
    let target: GroupElement = "abab".parse().unwrap();
    let w = find_replication_witness(&target, 3, 2).expect("witness within the search bound");
    let image = wreath(&w.witness);
    assert!(!image.active);
    assert!(justinf_core::grig::equal(&image.first, &target));
    assert!(is_trivial(&image.second));
    // The witness is a product of the recorded conjugates of (ab)^{±2}.
    let k = w.conjugators.len();
    let found = (0u32..1 << k).any(|signs| {
        let product = w.conjugators.iter().enumerate().fold(GroupElement::identity(), |acc, (i, t)| {
            let f = if signs >> i & 1 == 1 { target.inverse() } else { target.clone() };
            acc.mul(&t.inverse().mul(&f).mul(t))
        });
        justinf_core::grig::equal(&product, &w.witness)
    });
    assert!(found);
}
