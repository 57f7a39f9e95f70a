use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::block::{reduce_to_nucleus, BlockMatrix};
use super::{AlgebraElement, NucleusVector};
use crate::error::{Error, Result};
use crate::grig::{is_trivial, wreath, GroupElement};
use crate::limits::Limits;

fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonzeroEntry {
    pub row: usize,
    pub col: usize,
    /// Coefficients over (1, a, b, c, d).
    pub coefficients: NucleusVector,
}

/// Outcome of the kernel test, with the nucleus-reduction depth as evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCertificate {
    pub in_kernel: bool,
    pub depth: usize,
    /// First non-zero entry of ψ^depth(x) in row-major order, when not in the kernel.
    pub witness: Option<NonzeroEntry>,
}

/// Decides π(x) = 0. ψ is injective on B and {1, a, b, c, d} are linearly
/// independent in B, so x vanishes iff ψ^n(x) vanishes formally at the
/// nucleus depth n.
pub fn is_zero_in_b(x: &AlgebraElement, limits: &Limits) -> Result<KernelCertificate> {
    let reduction = reduce_to_nucleus(x, limits)?;
    let witness = reduction.matrix.entries().next().map(|((row, col), e)| NonzeroEntry {
        row,
        col,
        coefficients: e.nucleus_coordinates().expect("entries lie in the nucleus span"),
    });
    Ok(KernelCertificate {
        in_kernel: witness.is_none(),
        depth: reduction.depth,
        witness,
    })
}

/// Which branch of the nucleus case analysis produced the scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofCase {
    /// A scalar entry appeared before every entry reached the nucleus span.
    BeforeNucleus,
    /// The nucleus entry is already a scalar.
    Scalar,
    /// ξ ≠ 0: the off-diagonal child is ξ.
    OffDiagonal,
    /// ξ = 0, β+γ = 0, δ+ρ ≠ 0: the top-left child is the scalar δ+ρ.
    ConstantCorner,
    /// ξ = 0, β+γ ≠ 0: the top-left child is linear in a, one more step gives β+γ.
    LinearCorner,
    /// ξ = β+γ = δ+ρ = 0: two expansions through the bottom-right corner.
    Residual,
}

impl ProofCase {
    fn classify(v: &NucleusVector) -> ProofCase {
        let [rho, xi, beta, gamma, delta] = &v.0;
        if v.as_scalar().is_some() {
            ProofCase::Scalar
        } else if !xi.is_zero() {
            ProofCase::OffDiagonal
        } else if !(beta + gamma).is_zero() {
            ProofCase::LinearCorner
        } else if !(delta + rho).is_zero() {
            ProofCase::ConstantCorner
        } else {
            ProofCase::Residual
        }
    }

    /// Largest local depth the case analysis can need.
    fn depth_bound(self) -> usize {
        match self {
            ProofCase::BeforeNucleus | ProofCase::Scalar => 0,
            ProofCase::OffDiagonal | ProofCase::ConstantCorner => 1,
            ProofCase::LinearCorner => 2,
            ProofCase::Residual => 4,
        }
    }
}

/// An entry λ·1 (λ ≠ 0) of ψ^depth(x).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarWitness {
    pub depth: usize,
    pub row: usize,
    pub col: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub lambda: BigRational,
    /// Depth at which every entry entered the nucleus span (proof route only).
    pub nucleus_depth: Option<usize>,
    pub case: Option<ProofCase>,
}

/// ψ of a nucleus combination ρ + ξa + βb + γc + δd, in coordinates:
/// `[[(δ+ρ) + (β+γ)a, ξ], [ξ, ρ + δb + βc + γd]]`.
pub fn nucleus_children(v: &NucleusVector) -> [[NucleusVector; 2]; 2] {
    let [rho, xi, beta, gamma, delta] = v.0.clone();
    let z = BigRational::zero;
    let corner = NucleusVector([&delta + &rho, &beta + &gamma, z(), z(), z()]);
    let off = NucleusVector([xi, z(), z(), z(), z()]);
    let bottom = NucleusVector([rho, z(), delta, beta, gamma]);
    [[corner, off.clone()], [off, bottom]]
}

/// Minimal local depth, then row-major first position, of a scalar descendant.
fn local_scalar(v: &NucleusVector, max_depth: usize) -> Option<(usize, usize, usize, BigRational)> {
    let mut layer = vec![((0usize, 0usize), v.clone())];
    for depth in 0..=max_depth {
        let mut best: Option<((usize, usize), BigRational)> = None;
        for (pos, w) in &layer {
            if let Some(q) = w.as_scalar() {
                if best.as_ref().is_none_or(|(p, _)| pos < p) {
                    best = Some((*pos, q.clone()));
                }
            }
        }
        if let Some(((r, c), q)) = best {
            return Some((depth, r, c, q));
        }
        let mut next = Vec::new();
        for ((r, c), w) in &layer {
            for (i, row) in nucleus_children(w).into_iter().enumerate() {
                for (j, child) in row.into_iter().enumerate() {
                    if !child.is_zero() {
                        next.push(((2 * r + i, 2 * c + j), child));
                    }
                }
            }
        }
        layer = next;
    }
    None
}

fn kernel_precondition() -> Error {
    Error::Precondition("element is zero in B, so no scalar entry exists".into())
}

/// Follows the constructive argument: expand to the nucleus span, then run the
/// case analysis on each entry. Returns the shallowest scalar, ties broken
/// row-major, so the result coincides with [`scan_scalar_entry`].
pub fn find_scalar_entry(x: &AlgebraElement, limits: &Limits) -> Result<ScalarWitness> {
    let mut m = BlockMatrix::scalar(x.clone());
    let mut depth = 0;
    loop {
        if m.is_zero() {
            return Err(kernel_precondition());
        }
        if m.in_nucleus_span() {
            break;
        }
        if let Some(((row, col), e)) = m.first_scalar_entry() {
            return Ok(ScalarWitness {
                depth,
                row,
                col,
                lambda: e.as_scalar().cloned().unwrap(),
                nucleus_depth: None,
                case: Some(ProofCase::BeforeNucleus),
            });
        }
        depth += 1;
        limits.check_depth(depth)?;
        m = m.expand();
    }

    let mut best: Option<ScalarWitness> = None;
    for ((r, c), v) in m.nucleus_entries().expect("checked nucleus span") {
        let case = ProofCase::classify(&v);
        let (local, lr, lc, lambda) = local_scalar(&v, 4)
            .expect("every non-zero nucleus combination has a scalar descendant within 4 steps");
        debug_assert!(local <= case.depth_bound(), "{case:?} needed depth {local}");
        let candidate = ScalarWitness {
            depth: depth + local,
            row: (r << local) + lr,
            col: (c << local) + lc,
            lambda,
            nucleus_depth: Some(depth),
            case: Some(case),
        };
        let better = best.as_ref().is_none_or(|b| {
            (candidate.depth, candidate.row, candidate.col) < (b.depth, b.row, b.col)
        });
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("non-zero matrix has an entry"))
}

/// Reference search: expand one depth at a time and return the first scalar
/// entry in row-major order.
pub fn scan_scalar_entry(x: &AlgebraElement, limits: &Limits) -> Result<ScalarWitness> {
    let mut m = BlockMatrix::scalar(x.clone());
    let mut depth = 0;
    loop {
        if m.is_zero() {
            return Err(kernel_precondition());
        }
        if let Some(((row, col), e)) = m.first_scalar_entry() {
            return Ok(ScalarWitness {
                depth,
                row,
                col,
                lambda: e.as_scalar().cloned().unwrap(),
                nucleus_depth: None,
                case: None,
            });
        }
        depth += 1;
        limits.check_depth(depth)?;
        m = m.expand();
    }
}

/// (1 − g₁)(1 − g₂) for g₁, g₂ in the rigid stabilizers of the two first-level
/// vertices. Such products are non-zero in ℚ[𝒢] but vanish in B.
pub fn rigid_kernel_element(g1: &GroupElement, g2: &GroupElement) -> Result<AlgebraElement> {
    if is_trivial(g1) {
        return Err(Error::Precondition("g1 is trivial".into()));
    }
    if is_trivial(g2) {
        return Err(Error::Precondition("g2 is trivial".into()));
    }
    let w1 = wreath(g1);
    if w1.active {
        return Err(Error::Precondition(
            "g1 is active at the root, so it does not fix vertex 0".into(),
        ));
    }
    if !is_trivial(&w1.second) {
        return Err(Error::Precondition(format!(
            "g1 acts non-trivially below vertex 1 (section {})",
            w1.second
        )));
    }
    let w2 = wreath(g2);
    if w2.active {
        return Err(Error::Precondition(
            "g2 is active at the root, so it does not fix vertex 1".into(),
        ));
    }
    if !is_trivial(&w2.first) {
        return Err(Error::Precondition(format!(
            "g2 acts non-trivially below vertex 0 (section {})",
            w2.first
        )));
    }
    let one = AlgebraElement::one();
    let x = &(&one - &AlgebraElement::from_group(g1.clone()))
        * &(&one - &AlgebraElement::from_group(g2.clone()));
    debug_assert!(x.is_nonzero_in_group_algebra());
    Ok(x)
}

/// k − 1, a generator of the augmentation-type ideal Δ when k ∈ K.
pub fn delta_generator(k: &GroupElement) -> AlgebraElement {
    &AlgebraElement::from_group(k.clone()) - &AlgebraElement::one()
}

/// Both sides of `[k₁,k₂] − 1 = k₁⁻¹k₂⁻¹((k₁−1)(k₂−1) − (k₂−1)(k₁−1))`,
/// computed independently.
pub fn commutator_identity(k1: &GroupElement, k2: &GroupElement) -> (AlgebraElement, AlgebraElement) {
    let lhs = delta_generator(&k1.commutator(k2));
    let (d1, d2) = (delta_generator(k1), delta_generator(k2));
    let inner = &(&d1 * &d2) - &(&d2 * &d1);
    let rhs = inner.left_mul(&k1.inverse().mul(&k2.inverse()));
    (lhs, rhs)
}

impl NonzeroEntry {
    pub fn element(&self) -> AlgebraElement {
        self.coefficients.to_element()
    }
}

impl ScalarWitness {
    pub fn is_unit_scalar(&self) -> bool {
        self.lambda.is_one()
    }
}
