//! The acceptance battery behind `justinf verify-paper`: one report per criterion.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    commutant_dimension, find_scalar_entry, is_zero_in_b, nucleus_rank_at_level,
    nucleus_relations_at_level, pi_level, psi_expand, psi_iterate, rigid_kernel_element,
    scan_scalar_entry, AlgebraElement, NucleusVector,
};
use crate::bratteli::{
    build_strictly_rfd, build_y_infty, compare_with_open_set_formula, ideal_from_open_set,
    limit_dimension, primitive_quotient_sizes, quotient, strictly_rfd_u, LimitDimension,
};
use crate::error::Result;
use crate::grig::{equal, is_trivial, lysenok_relators, normal_closure_index, GroupElement};
use crate::k0::K0Element;
use crate::limits::Limits;
use crate::primspace::{build_yn, classify_yn, is_spectral, FiniteT0Space};
use crate::sample::{random_element, random_vector, random_word};

pub const DEFAULT_SEED: u64 = 20_140_601;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(u64, &Limits) -> Result<(bool, String)>;

const CRITERIA: [(&str, &str, Check); 12] = [
    ("AC1", "kernel element (1-d)a(1-d)", ac1),
    ("AC2", "relators and nontrivial generators", ac2),
    ("AC3", "representation laws and recursion agreement", ac3),
    ("AC4", "commutant dimension n+1", ac4),
    ("AC5", "nucleus independence", ac5),
    ("AC6", "scalar-entry search agrees with scan", ac6),
    ("AC7", "Bratteli quotients and k(j)", ac7),
    ("AC8", "ideal lattice oracle at depth 3", ac8),
    ("AC9", "dimension group positivity", ac9),
    ("AC10", "index 16 of the normal closure of (ab)^2", ac10),
    ("AC11", "rigid-stabilizer kernel element", ac11),
    ("AC12", "Y_n spaces", ac12),
];

pub fn criterion_ids() -> impl Iterator<Item = &'static str> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion; errors count as failures.
pub fn run_criterion(id: &str, seed: u64, limits: &Limits) -> Option<CriterionReport> {
    let (id, title, check) = CRITERIA.iter().find(|c| c.0.eq_ignore_ascii_case(id))?;
    let (passed, detail) = match check(seed, limits) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionReport {
        id,
        title,
        passed,
        detail,
    })
}

pub fn run_all(seed: u64, limits: &Limits) -> Vec<CriterionReport> {
    criterion_ids()
        .filter_map(|id| run_criterion(id, seed, limits))
        .collect()
}

fn parse(s: &str) -> AlgebraElement {
    s.parse().expect("literal parses")
}

fn word(s: &str) -> GroupElement {
    s.parse().expect("literal parses")
}

fn ac1(_: u64, limits: &Limits) -> Result<(bool, String)> {
    let cert = is_zero_in_b(&parse("(1-d)a(1-d)"), limits)?;
    let words = ["a", "da", "ad", "dad"].map(word);
    let distinct = (0..4).all(|i| (i + 1..4).all(|j| !equal(&words[i], &words[j])));
    Ok((
        cert.in_kernel && cert.depth == 1 && distinct,
        format!("in_kernel={} depth={} words distinct={distinct}", cert.in_kernel, cert.depth),
    ))
}

fn ac2(_: u64, _: &Limits) -> Result<(bool, String)> {
    let relators = lysenok_relators(4);
    let bad: Vec<&str> = relators
        .iter()
        .filter(|(_, r)| !is_trivial(r))
        .map(|(n, _)| n.as_str())
        .collect();
    let nontrivial = ["a", "b", "c", "d", "ab", "ad"].iter().all(|w| !is_trivial(&word(w)));
    let d_is_bc = equal(&word("d"), &word("b").mul(&word("c")));
    Ok((
        bad.is_empty() && nontrivial && d_is_bc,
        format!(
            "{} relators, nontrivial relators {bad:?}, generators nontrivial={nontrivial}, d=bc {d_is_bc}",
            relators.len()
        ),
    ))
}

fn ac3(seed: u64, limits: &Limits) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..200 {
        let x = random_element(&mut rng, 5, 8);
        let y = random_element(&mut rng, 5, 8);
        let xy = &x * &y;
        let px = psi_expand(&x);
        for n in 0..=5 {
            let (a, b) = (pi_level(&x, n, limits)?, pi_level(&y, n, limits)?);
            if pi_level(&xy, n, limits)? != a.mul(&b)? {
                failures += 1;
            }
            if pi_level(&x, n + 1, limits)? != px.evaluate_at_level(n, limits)? {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("200 pairs, levels 0..=5, {failures} mismatches")))
}

fn ac4(_: u64, limits: &Limits) -> Result<(bool, String)> {
    let dims = (1..=6)
        .map(|n| commutant_dimension(n, limits))
        .collect::<Result<Vec<_>>>()?;
    let ok = dims.iter().enumerate().all(|(i, &d)| d == i + 2);
    Ok((ok, format!("commutant dimensions n=1..6: {dims:?}")))
}

fn ac5(_: u64, limits: &Limits) -> Result<(bool, String)> {
    let r3 = nucleus_rank_at_level(3, limits)?;
    let r4 = nucleus_rank_at_level(4, limits)?;
    let rel = nucleus_relations_at_level(3, limits)?;
    let expected = NucleusVector::from_ints([1, 0, 1, -1, -1]);
    let spanned = rel.len() == 1 && rel[0].scaled(&rel[0].0[0].recip()) == expected;
    let x = parse("1 + b - c - d");
    let cert = is_zero_in_b(&x, limits)?;
    let chain = psi_iterate(&x, 3, limits)?
        .entries()
        .any(|(_, e)| *e == parse("2 - 2a"));
    let w = find_scalar_entry(&x, limits)?;
    let ok = r3 == 4
        && r4 == 5
        && spanned
        && !cert.in_kernel
        && chain
        && w.lambda == crate::algebra::rational(2);
    Ok((
        ok,
        format!(
            "rank3={r3} rank4={r4} kernel=1+b-c-d:{spanned} in_kernel={} 2-2a at depth 3:{chain} scalar {} at depth {} ({}, {})",
            cert.in_kernel, w.lambda, w.depth, w.row, w.col
        ),
    ))
}

fn ac6(seed: u64, limits: &Limits) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6);
    let (mut tested, mut failures, mut max_depth) = (0, 0, 0);
    while tested < 50 {
        let x = random_element(&mut rng, 5, 8);
        if is_zero_in_b(&x, limits)?.in_kernel {
            continue;
        }
        tested += 1;
        let proof = find_scalar_entry(&x, limits)?;
        let scan = scan_scalar_entry(&x, limits)?;
        let expanded = psi_iterate(&x, proof.depth, limits)?;
        let verified = expanded
            .get(proof.row, proof.col)
            .and_then(AlgebraElement::as_scalar)
            == Some(&proof.lambda);
        let agree = (proof.depth, proof.row, proof.col, &proof.lambda)
            == (scan.depth, scan.row, scan.col, &scan.lambda);
        if !(verified && agree) {
            failures += 1;
        }
        max_depth = max_depth.max(proof.depth);
    }
    Ok((
        failures == 0,
        format!("{tested} elements, {failures} disagreements, deepest witness {max_depth}"),
    ))
}

fn ac7(_: u64, limits: &Limits) -> Result<(bool, String)> {
    let y = build_y_infty(9.max(limits.depth_cap.min(12)), limits)?;
    let limit_of = |omit: &[usize]| -> Result<LimitDimension> {
        let u = ideal_from_open_set(&y, &omit.iter().copied().collect::<BTreeSet<_>>())?;
        let q = quotient(&y, &u)?;
        limit_dimension(&q, q.depth())
    };
    let finite = |l: &LimitDimension, dims: &[u64]| {
        matches!(l, LimitDimension::Finite { dims: d, .. } if d == dims)
    };
    let q2 = limit_of(&[2])?;
    let q13 = limit_of(&[1, 3])?;
    let s = build_strictly_rfd(6, limits)?;
    let q = quotient(&s, &strictly_rfd_u(&s, 3)?)?;
    let qs = limit_dimension(&q, q.depth())?;
    let ks = primitive_quotient_sizes(&y, 8)?;
    let stated: Vec<u64> = (1..=8u32).map(|j| if j <= 2 { 1 } else { 1 << (j - 1) }).collect();
    let quotients_ok = finite(&q2, &[1]) && finite(&q13, &[1, 2]) && finite(&qs, &[4]);
    Ok((
        quotients_ok && ks == stated,
        format!(
            "quotients (1),(1,2),(4): {quotients_ok}; k(1..8) from the diagram {ks:?}, stated 2^(j-1) gives {stated:?}"
        ),
    ))
}

fn ac8(_: u64, limits: &Limits) -> Result<(bool, String)> {
    let cmp = compare_with_open_set_formula(&build_y_infty(3, limits)?)?;
    Ok((
        cmp.discrepancies() == 0,
        format!(
            "{} enumerated, {} formula ideals, {} matched, {} artifacts, {} discrepancies",
            cmp.enumerated,
            cmp.formula,
            cmp.matched,
            cmp.truncation_artifacts.len(),
            cmp.discrepancies()
        ),
    ))
}

fn ac9(seed: u64, _: &Limits) -> Result<(bool, String)> {
    let unit = K0Element::unit().rho_model().take(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9);
    let mut failures = 0;
    let mut positives = 0;
    for _ in 0..200 {
        let x = K0Element::new(random_vector(&mut rng, 8, -1, 4))?;
        let oracle = (x.level()..=12).any(|m| x.push(m).is_ok_and(|v| v.iter().all(|&c| c >= 0)));
        if oracle != x.is_positive() {
            failures += 1;
        }
        positives += usize::from(oracle);
    }
    Ok((
        unit == [1, 1, 2, 4, 8] && failures == 0,
        format!("unit model {unit:?}; 200 elements ({positives} positive), {failures} disagreements"),
    ))
}

fn ac10(_: u64, limits: &Limits) -> Result<(bool, String)> {
    let k = word("abab");
    let i4 = normal_closure_index(&k, 4, limits)?;
    let i5 = normal_closure_index(&k, 5, limits)?;
    Ok((i4 == 16 && i5 == 16, format!("index at level 4: {i4}, level 5: {i5}")))
}

fn ac11(seed: u64, limits: &Limits) -> Result<(bool, String)> {
    let x = rigid_kernel_element(&word("ada"), &word("d"))?;
    let nonzero = x.is_nonzero_in_group_algebra();
    let in_kernel = is_zero_in_b(&x, limits)?.in_kernel;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    let mut stays = 0;
    for _ in 0..20 {
        let g = random_word(&mut rng, 8);
        let h = random_word(&mut rng, 8);
        if is_zero_in_b(&x.left_mul(&g).right_mul(&h), limits)?.in_kernel {
            stays += 1;
        }
    }
    Ok((
        nonzero && in_kernel && stays == 20,
        format!("x = {x}; nonzero in Q[G]: {nonzero}; in kernel: {in_kernel}; g x h in kernel {stays}/20"),
    ))
}

fn ac12(_: u64, _: &Limits) -> Result<(bool, String)> {
    let mut good = 0;
    for n in 0..=8 {
        let y = build_yn(n)?;
        if is_spectral(&y) && classify_yn(&y) == Some(n) {
            good += 1;
        }
    }
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let discrete = FiniteT0Space::new(names(&["p", "q", "r"]), (0..8).collect())?;
    let chain = FiniteT0Space::new(names(&["p", "q", "r"]), vec![0, 0b001, 0b011, 0b111])?;
    let rejected = classify_yn(&discrete).is_none() && classify_yn(&chain).is_none();
    Ok((
        good == 9 && rejected,
        format!("Y_0..Y_8 spectral and classified: {good}/9; non-Y_n spaces rejected: {rejected}"),
    ))
}
