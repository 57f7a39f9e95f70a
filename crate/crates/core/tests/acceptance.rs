//! Acceptance battery AC1–AC12. Runs as a plain binary so the table is always
//! printed; the process fails if any criterion fails unexpectedly.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{
    integer_rank, is_zero_matrix, oracle_is_identity, oracle_matrix, oracle_orbitals, oracle_perm,
};
use justinf_core::algebra::{
    commutant_dimension, find_scalar_entry, is_zero_in_b, nucleus_rank_at_level,
    nucleus_relations_at_level, pi_level, psi_expand, psi_iterate, rigid_kernel_element,
    scan_scalar_entry, AlgebraElement, NucleusVector,
};
use justinf_core::bratteli::{
    build_strictly_rfd, build_y_infty, compare_with_open_set_formula, enumerate_ideals,
    ideal_from_open_set, is_ideal, limit_dimension, primitive_quotient_sizes, quotient,
    strictly_rfd_u, LimitDimension,
};
use justinf_core::grig::{equal, is_trivial, lysenok_relators, normal_closure_index, GroupElement};
use justinf_core::k0::K0Element;
use justinf_core::primspace::{build_yn, classify_yn, is_spectral, FiniteT0Space};
use justinf_core::sample::{random_element, random_vector, random_word};
use justinf_core::Limits;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0xACCE_55;

struct Outcome {
    passed: bool,
    detail: String,
    /// Set when the only failing clause is one recorded as unattainable.
    known_gap: Option<&'static str>,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Outcome {
            passed,
            detail,
            known_gap: None,
        }
    }
}

fn x(s: &str) -> AlgebraElement {
    s.parse().unwrap()
}

fn g(s: &str) -> GroupElement {
    s.parse().unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn lim() -> Limits {
    Limits::default()
}

fn ac1() -> Outcome {
    let z = x("(1-d)a(1-d)");
    let cert = is_zero_in_b(&z, &lim()).unwrap();
    let words = ["a", "da", "ad", "dad"].map(g);
    let distinct = (0..4).all(|i| (i + 1..4).all(|j| !equal(&words[i], &words[j])));
    // Oracle: the words act differently on some level ≤ 4, and π_n(z) = 0 for n ≤ 6.
    let perms_distinct = (0..4).all(|i| {
        (i + 1..4).all(|j| (1..=4).any(|n| oracle_perm(&words[i], n) != oracle_perm(&words[j], n)))
    });
    let zero_levels = (0..=6).all(|n| is_zero_matrix(&oracle_matrix(&z, n)));
    Outcome::new(
        cert.in_kernel && cert.depth == 1 && distinct && perms_distinct && zero_levels && z.len() == 4,
        format!(
            "in_kernel={} depth={} distinct(equal)={distinct} distinct(levels 1..4)={perms_distinct} zero on levels 0..6={zero_levels}",
            cert.in_kernel, cert.depth
        ),
    )
}

fn ac2() -> Outcome {
    let relators = lysenok_relators(4);
    let all_trivial = relators.iter().all(|(_, r)| is_trivial(r) && oracle_is_identity(r, 10));
    let nontrivial = ["a", "b", "c", "d", "ab", "ad"]
        .iter()
        .all(|w| !is_trivial(&g(w)) && (1..=4).any(|n| !oracle_is_identity(&g(w), n)));
    let d_bc = equal(&g("d"), &g("b").mul(&g("c"))) && oracle_perm(&g("d"), 8) == oracle_perm(&g("bc"), 8);
    Outcome::new(
        relators.len() == 10 && all_trivial && nontrivial && d_bc,
        format!("{} relators trivial={all_trivial}; a,b,c,d,ab,ad nontrivial={nontrivial}; d=bc {d_bc}", relators.len()),
    )
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let limits = lim();
    let mut mismatches = 0;
    for _ in 0..200 {
        let a = random_element(&mut rng, 5, 8);
        let b = random_element(&mut rng, 5, 8);
        let ab = &a * &b;
        let blocks = psi_expand(&a);
        for n in 0..=5 {
            let (pa, pb, pab) = (
                pi_level(&a, n, &limits).unwrap(),
                pi_level(&b, n, &limits).unwrap(),
                pi_level(&ab, n, &limits).unwrap(),
            );
            if pab != pa.mul(&pb).unwrap() {
                mismatches += 1;
            }
            let oracle = oracle_matrix(&ab, n);
            if (0..1 << n).any(|r| (0..1 << n).any(|c| pab.get(r, c) != &oracle[r][c])) {
                mismatches += 1;
            }
            if pi_level(&a, n + 1, &limits).unwrap() != blocks.evaluate_at_level(n, &limits).unwrap() {
                mismatches += 1;
            }
        }
    }
    Outcome::new(mismatches == 0, format!("200 pairs x levels 0..=5: {mismatches} mismatches"))
}

fn ac4() -> Outcome {
    let limits = lim();
    let computed: Vec<usize> = (1..=6).map(|n| commutant_dimension(n, &limits).unwrap()).collect();
    let oracle: Vec<usize> = (1..=6).map(oracle_orbitals).collect();
    let expected: Vec<usize> = (1..=6).map(|n| n + 1).collect();
    Outcome::new(
        computed == expected && oracle == expected,
        format!("orbitals n=1..6: {computed:?} (union-find oracle {oracle:?})"),
    )
}

fn ac5() -> Outcome {
    let limits = lim();
    let nucleus = ["1", "a", "b", "c", "d"].map(x);
    let oracle_rank = |n: usize| {
        let rows: Vec<Vec<i128>> = nucleus
            .iter()
            .map(|e| {
                oracle_matrix(e, n)
                    .into_iter()
                    .flatten()
                    .map(|v| v.to_integer().try_into().unwrap())
                    .collect()
            })
            .collect();
        integer_rank(rows)
    };
    let (r3, r4) = (nucleus_rank_at_level(3, &limits).unwrap(), nucleus_rank_at_level(4, &limits).unwrap());
    let (o3, o4) = (oracle_rank(3), oracle_rank(4));
    let rel = nucleus_relations_at_level(3, &limits).unwrap();
    let kernel_ok = rel.len() == 1
        && rel[0].scaled(&rel[0].0[0].recip()) == NucleusVector::from_ints([1, 0, 1, -1, -1]);
    let y = x("1 + b - c - d");
    let oracle_kernel = is_zero_matrix(&oracle_matrix(&y, 3)) && !is_zero_matrix(&oracle_matrix(&y, 4));
    let cert = is_zero_in_b(&y, &limits).unwrap();
    let chain = psi_iterate(&y, 3, &limits).unwrap().entries().any(|(_, e)| *e == x("2 - 2a"));
    let w = find_scalar_entry(&y, &limits).unwrap();
    Outcome::new(
        r3 == 4 && r4 == 5 && o3 == 4 && o4 == 5 && kernel_ok && oracle_kernel && !cert.in_kernel && chain && w.lambda == q(2),
        format!(
            "rank3={r3} rank4={r4} (oracle {o3},{o4}); kernel 1+b-c-d={kernel_ok}; in_kernel={}; 2-2a at depth 3={chain}; scalar {} at depth {}",
            cert.in_kernel, w.lambda, w.depth
        ),
    )
}

fn ac6() -> Outcome {
    let limits = lim();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let (mut tested, mut bad, mut deepest) = (0, 0, 0);
    while tested < 50 {
        let e = random_element(&mut rng, 5, 8);
        if is_zero_in_b(&e, &limits).unwrap().in_kernel {
            continue;
        }
        tested += 1;
        let proof = find_scalar_entry(&e, &limits).unwrap();
        let scan = scan_scalar_entry(&e, &limits).unwrap();
        let direct = psi_iterate(&e, proof.depth, &limits).unwrap();
        let by_expansion = direct.get(proof.row, proof.col).and_then(AlgebraElement::as_scalar) == Some(&proof.lambda);
        // Oracle: the (row, col) block of π_{m+2}(x) is λ·I₄.
        let m = oracle_matrix(&e, proof.depth + 2);
        let block_ok = (0..4).all(|i| {
            (0..4).all(|j| {
                let want = if i == j { proof.lambda.clone() } else { q(0) };
                m[proof.row * 4 + i][proof.col * 4 + j] == want
            })
        });
        let agree = (proof.depth, proof.row, proof.col, &proof.lambda) == (scan.depth, scan.row, scan.col, &scan.lambda);
        if !(by_expansion && block_ok && agree) {
            bad += 1;
        }
        deepest = deepest.max(proof.depth);
    }
    Outcome::new(bad == 0, format!("{tested} elements, {bad} failures, deepest witness depth {deepest}"))
}

fn ac7() -> Outcome {
    let limits = lim();
    let y = build_y_infty(10, &limits).unwrap();
    let limit_after = |omit: &[usize]| {
        let u = ideal_from_open_set(&y, &omit.iter().copied().collect::<BTreeSet<_>>()).unwrap();
        let qd = quotient(&y, &u).unwrap();
        limit_dimension(&qd, qd.depth()).unwrap()
    };
    let finite = |l: &LimitDimension, dims: &[u64]| matches!(l, LimitDimension::Finite { dims: d, .. } if d == dims);
    let q2 = finite(&limit_after(&[2]), &[1]);
    let q13 = finite(&limit_after(&[1, 3]), &[1, 2]);
    let s = build_strictly_rfd(6, &limits).unwrap();
    let qs = quotient(&s, &strictly_rfd_u(&s, 3).unwrap()).unwrap();
    let m4 = finite(&limit_dimension(&qs, qs.depth()).unwrap(), &[4]);
    let ks = primitive_quotient_sizes(&y, 8).unwrap();
    // Oracle: size of vertex (j,j) from the recursion k(j,j) = Σ_k k(j-1,k).
    let mut level = vec![1u64];
    let mut recursion = vec![1u64];
    for _ in 2..=8 {
        let total: u64 = level.iter().sum();
        level.push(total);
        recursion.push(total);
    }
    let stated: Vec<u64> = (1..=8u32).map(|j| if j <= 2 { 1 } else { 1 << (j - 1) }).collect();
    let attainable = q2 && q13 && m4 && ks == recursion;
    let literal = ks == stated;
    Outcome {
        passed: attainable && literal,
        detail: format!(
            "C: {q2}, C+M2: {q13}, M4: {m4}; k(1..8) = {ks:?} (recursion oracle {recursion:?}); stated 2^(j-1) = {stated:?}"
        ),
        known_gap: attainable.then_some("stated k(j) = 2^(j-1) contradicts the diagram, which gives 2^(j-2)"),
    }
}

fn ac8() -> Outcome {
    let limits = lim();
    let d = build_y_infty(3, &limits).unwrap();
    let cmp = compare_with_open_set_formula(&d).unwrap();
    // Oracle: subsets of the six vertices checked against the edge rule directly.
    let vs: Vec<(usize, usize)> = (1..=3).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    let succ = |(n, k): (usize, usize)| if n == 3 { vec![] } else { vec![(n + 1, k), (n + 1, n + 1)] };
    let mut oracle = Vec::new();
    for mask in 0u32..64 {
        let member = |v: (usize, usize)| vs.iter().position(|&w| w == v).is_some_and(|i| mask >> i & 1 == 1);
        let hereditary = vs.iter().all(|&v| !member(v) || succ(v).iter().all(|&w| member(w)));
        let saturated = vs.iter().all(|&v| v.0 == 3 || member(v) || !succ(v).iter().all(|&w| member(w)));
        if hereditary && saturated {
            oracle.push(mask);
        }
    }
    let formula: BTreeSet<u32> = (0u32..8)
        .map(|f| {
            let omitted: Vec<usize> = (1..=3).filter(|j| f >> (j - 1) & 1 == 1).collect();
            let start = omitted.iter().copied().max().unwrap_or(1);
            vs.iter()
                .enumerate()
                .filter(|(_, &(n, k))| n >= start && !omitted.contains(&k))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .chain([0])
        .collect();
    let all_found = formula.iter().all(|m| oracle.contains(m));
    let enumerated = enumerate_ideals(&d).unwrap();
    let each_ideal = enumerated.iter().all(|u| is_ideal(&d, u).unwrap());
    Outcome::new(
        cmp.discrepancies() == 0 && all_found && enumerated.len() == oracle.len() && each_ideal,
        format!(
            "brute force {} ideals (oracle {}), formula {} ({} distinct in oracle form), matched {}, artifacts {}, discrepancies {}",
            cmp.enumerated,
            oracle.len(),
            cmp.formula,
            formula.len(),
            cmp.matched,
            cmp.truncation_artifacts.len(),
            cmp.discrepancies()
        ),
    )
}

fn ac9() -> Outcome {
    let unit = K0Element::unit().rho_model().take(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut bad = 0;
    let mut positive = 0;
    for _ in 0..200 {
        let v = random_vector(&mut rng, 8, -2, 5);
        let e = K0Element::new(v.clone()).unwrap();
        // Oracle: push the raw vector by hand and look for a non-negative level ≤ 12.
        let mut w = v;
        let mut found = w.iter().all(|&c| c >= 0);
        while w.len() < 12 && !found {
            w.push(w.iter().sum());
            found = w.iter().all(|&c| c >= 0);
        }
        positive += usize::from(found);
        if found != e.is_positive() {
            bad += 1;
        }
    }
    Outcome::new(
        unit == [1, 1, 2, 4, 8] && bad == 0,
        format!("model of u = {unit:?}...; 200 elements ({positive} positive), {bad} disagreements"),
    )
}

fn ac10() -> Outcome {
    let limits = lim();
    let k = g("abab");
    let i4 = normal_closure_index(&k, 4, &limits).unwrap();
    let i5 = normal_closure_index(&k, 5, &limits).unwrap();
    Outcome::new(i4 == 16 && i5 == 16, format!("index at level 4 = {i4}, level 5 = {i5}"))
}

fn ac11() -> Outcome {
    let limits = lim();
    let e = rigid_kernel_element(&g("ada"), &g("d")).unwrap();
    let expected = x("1 - ada - d + adad");
    let nonzero = e.is_nonzero_in_group_algebra();
    let kernel = is_zero_in_b(&e, &limits).unwrap().in_kernel;
    let oracle = (0..=6).all(|n| is_zero_matrix(&oracle_matrix(&e, n)));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut stays = 0;
    for _ in 0..20 {
        let (l, r) = (random_word(&mut rng, 8), random_word(&mut rng, 8));
        let moved = e.left_mul(&l).right_mul(&r);
        if is_zero_in_b(&moved, &limits).unwrap().in_kernel && is_zero_matrix(&oracle_matrix(&moved, 5)) {
            stays += 1;
        }
    }
    Outcome::new(
        e == expected && nonzero && kernel && oracle && stays == 20,
        format!("x = {e}; nonzero in Q[G]={nonzero}; kernel={kernel} (levels 0..6 oracle {oracle}); g x h in kernel {stays}/20"),
    )
}

fn ac12() -> Outcome {
    let mut ok = 0;
    for n in 0..=8 {
        let y = build_yn(n).unwrap();
        let closed: Vec<u32> = y.closed_sets().collect();
        let lattice = closed.iter().all(|a| closed.iter().all(|b| y.is_closed(a | b) && y.is_closed(a & b)));
        let t0 = (0..y.len()).map(|p| y.closure_of_point(p)).collect::<BTreeSet<_>>().len() == y.len();
        if lattice && t0 && closed.len() == (1 << n) + 1 && is_spectral(&y) && classify_yn(&y) == Some(n) {
            ok += 1;
        }
    }
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let discrete = FiniteT0Space::new(names(&["p", "q", "r"]), (0..8).collect()).unwrap();
    let chain = FiniteT0Space::new(names(&["p", "q", "r"]), vec![0, 1, 3, 7]).unwrap();
    let not_t0 = FiniteT0Space::new(names(&["p", "q", "r"]), vec![0, 1, 7]).is_err();
    let rejected = classify_yn(&discrete).is_none() && classify_yn(&chain).is_none() && not_t0;
    Outcome::new(ok == 9 && rejected, format!("Y_0..Y_8 passing: {ok}/9; counterexamples rejected: {rejected}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
        ("AC11", ac11),
        ("AC12", ac12),
    ];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let status = match (outcome.passed, outcome.known_gap) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known gap)",
            (false, None) => "FAIL",
        };
        println!("{id:<5} {status}  [{secs:.2}s] {}", outcome.detail);
        if let (false, Some(gap)) = (outcome.passed, outcome.known_gap) {
            println!("      known gap: {gap}");
        }
        if outcome.passed {
            passed += 1;
        } else if outcome.known_gap.is_none() {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed}/12 criteria pass");
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
