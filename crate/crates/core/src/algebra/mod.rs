//! The group algebra ℚ[𝒢], its image B under the Koopman representation, and
//! the matrix recursion ψ_π : B → M₂(B).

mod block;
mod kernel;
mod level;
mod parse;

pub use block::{psi_expand, psi_iterate, reduce_to_nucleus, BlockMatrix, NucleusReduction};
pub use kernel::{
    commutator_identity, delta_generator, find_scalar_entry, is_zero_in_b, nucleus_children,
    rigid_kernel_element, scan_scalar_entry, KernelCertificate, NonzeroEntry, ProofCase,
    ScalarWitness,
};
pub use level::{
    commutant_dimension, nucleus_rank_at_level, nucleus_relations_at_level, pi_level, LevelMatrix,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grig::{self, Generator, GroupElement};

/// A finite rational linear combination of reduced words.
///
/// Terms are keyed by reduced word, so two words that are equal in 𝒢 but
/// spelled differently occupy separate terms; [`AlgebraElement::merge_equal_terms`]
/// collapses them. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<GroupElement, BigRational>,
}

/// Coefficients over the ordered nucleus basis (1, a, b, c, d).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NucleusVector(pub [BigRational; 5]);

impl NucleusVector {
    pub const BASIS: [&'static str; 5] = ["1", "a", "b", "c", "d"];

    pub fn from_ints(v: [i64; 5]) -> Self {
        NucleusVector(v.map(|x| BigRational::from_integer(BigInt::from(x))))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, q: &BigRational) -> Self {
        NucleusVector(self.0.clone().map(|x| x * q))
    }

    pub fn constant(&self) -> &BigRational {
        &self.0[0]
    }

    /// The scalar value, when only the identity coefficient is non-zero.
    pub fn as_scalar(&self) -> Option<&BigRational> {
        if self.0[1..].iter().all(Zero::is_zero) && !self.0[0].is_zero() {
            Some(&self.0[0])
        } else {
            None
        }
    }

    pub fn to_element(&self) -> AlgebraElement {
        let mut x = AlgebraElement::zero();
        let words = [
            GroupElement::identity(),
            Generator::A.into(),
            Generator::B.into(),
            Generator::C.into(),
            Generator::D.into(),
        ];
        for (g, q) in words.into_iter().zip(self.0.iter()) {
            x.add_term(g, q.clone());
        }
        x
    }
}

impl Serialize for NucleusVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(5))?;
        for q in &self.0 {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }
}

pub(crate) fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        AlgebraElement::from_group(GroupElement::identity())
    }

    pub fn from_group(g: GroupElement) -> Self {
        let mut x = AlgebraElement::zero();
        x.add_term(g, BigRational::one());
        x
    }

    pub fn scalar(q: BigRational) -> Self {
        let mut x = AlgebraElement::zero();
        x.add_term(GroupElement::identity(), q);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupElement, BigRational)>>(terms: I) -> Self {
        let mut x = AlgebraElement::zero();
        for (g, q) in terms {
            x.add_term(g, q);
        }
        x
    }

    /// Adds `q·g`, pruning the term if the coefficient cancels.
    pub fn add_term(&mut self, g: GroupElement, q: BigRational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, q: &BigRational) -> AlgebraElement {
        if q.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * q)).collect(),
        }
    }

    /// The involution: reverses each word (g* = g⁻¹) and fixes rational coefficients.
    pub fn star(&self) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(g, q)| (g.inverse(), q.clone())))
    }

    /// Multiplies group elements on the left: `g·x`.
    pub fn left_mul(&self, g: &GroupElement) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(h, q)| (g.mul(h), q.clone())))
    }

    pub fn right_mul(&self, g: &GroupElement) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(h, q)| (h.mul(g), q.clone())))
    }

    /// The coefficient, when the element is a scalar multiple of the identity
    /// word (and non-zero).
    pub fn as_scalar(&self) -> Option<&BigRational> {
        match self.terms.iter().next() {
            Some((g, q)) if self.terms.len() == 1 && g.is_empty() => Some(q),
            _ => None,
        }
    }

    /// True when every term is a nucleus element (1, a, b, c or d).
    pub fn in_nucleus_span(&self) -> bool {
        self.terms.keys().all(GroupElement::is_nucleus)
    }

    /// Coordinates over (1, a, b, c, d), when the element lies in the nucleus span.
    pub fn nucleus_coordinates(&self) -> Option<NucleusVector> {
        let mut v = NucleusVector::default();
        for (g, q) in &self.terms {
            let slot = match g.letters() {
                [] => 0,
                [Generator::A] => 1,
                [Generator::B] => 2,
                [Generator::C] => 3,
                [Generator::D] => 4,
                _ => return None,
            };
            v.0[slot] = q.clone();
        }
        Some(v)
    }

    /// Merges terms whose words are equal in 𝒢 (decided by the word problem).
    /// The result is zero iff the element is zero in ℚ[𝒢].
    pub fn merge_equal_terms(&self) -> AlgebraElement {
        let mut classes: Vec<(GroupElement, BigRational)> = Vec::new();
        for (g, q) in &self.terms {
            match classes.iter_mut().find(|(rep, _)| grig::equal(rep, g)) {
                Some((_, acc)) => *acc += q,
                None => classes.push((g.clone(), q.clone())),
            }
        }
        AlgebraElement::from_terms(classes)
    }

    /// Whether the element is non-zero in ℚ[𝒢] (not merely as a formal sum of words).
    pub fn is_nonzero_in_group_algebra(&self) -> bool {
        !self.merge_equal_terms().is_zero()
    }
}

impl From<GroupElement> for AlgebraElement {
    fn from(g: GroupElement) -> Self {
        AlgebraElement::from_group(g)
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (g, q) in &rhs.terms {
            out.add_term(g.clone(), q.clone());
        }
        out
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (g, q) in &rhs.terms {
            out.add_term(g.clone(), -q.clone());
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(g, q)| (g.clone(), -q.clone())).collect(),
        }
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, p) in &self.terms {
            for (h, q) in &rhs.terms {
                out.add_term(g.mul(h), p * q);
            }
        }
        out
    }
}

macro_rules! forward_owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

/// Terms in shortlex order: `a - da - ad + dad`, `2 - 2a`, `(1/2)b`.
impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, q)) in self.terms.iter().enumerate() {
            let negative = q.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = q.abs();
            if g.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{g}")?;
            } else if magnitude.is_integer() {
                write!(f, "{magnitude}{g}")?;
            } else {
                write!(f, "({magnitude}){g}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for AlgebraElement {
    type Err = Error;

    /// Parses expressions such as `1 + b - c - d`, `(1-d)a(1-d)` or `2/3 ab - ad`.
    /// Juxtaposition (or `*`) is multiplication.
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_expression(s)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    word: String,
    coeff: String,
}

/// Serialized as a list of `{word, coeff}` records with coefficients as `"p/q"` strings.
impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (g, q) in &self.terms {
            seq.serialize_element(&TermRecord {
                word: g.to_word(),
                coeff: q.to_string(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let mut x = AlgebraElement::zero();
        for r in records {
            let g: GroupElement = r.word.parse().map_err(serde::de::Error::custom)?;
            let q = parse_rational(&r.coeff).map_err(serde::de::Error::custom)?;
            x.add_term(g, q);
        }
        Ok(x)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let q = BigRational::from_str(s).map_err(|_| Error::Malformed(format!("bad rational {s:?}")))?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> AlgebraElement {
        s.parse().unwrap()
    }

    fn g(s: &str) -> AlgebraElement {
        AlgebraElement::from_group(s.parse().unwrap())
    }

    #[test]
    fn lemma_element_expands() {
        let one = AlgebraElement::one();
        let d = g("d");
        let lhs = &(&(&one - &d) * &g("a")) * &(&one - &d);
        let expected = &(&(&g("a") - &g("da")) - &g("ad")) + &g("dad");
        assert_eq!(lhs, expected);
        assert_eq!(lhs.to_string(), "a - ad - da + dad");
    }

    #[test]
    fn zero_absorbs() {
        let y = x("1 + b - 3/4 abc");
        assert!((&y * &AlgebraElement::zero()).is_zero());
        assert!((&AlgebraElement::zero() * &y).is_zero());
    }

    #[test]
    fn star_reverses_words() {
        assert_eq!(x("a - da").star(), x("a - ad"));
        let y = x("2abc - 1/3 dab + 5");
        assert_eq!(y.star().star(), y);
    }

    #[test]
    fn cancellation_prunes_terms() {
        let y = &x("a + b") - &x("b");
        assert_eq!(y, g("a"));
        assert_eq!(y.len(), 1);
        assert!((&x("bc") - &x("d")).is_zero());
    }

    #[test]
    fn parser_round_trips_display() {
        for s in ["(1-d)a(1-d)", "1 + b - c - d", "2 - 2a", "1/2 ab - 7/3", "0", "-a"] {
            let y = x(s);
            assert_eq!(x(&y.to_string()), y, "{s}");
        }
        assert!("a + (b".parse::<AlgebraElement>().is_err());
        assert!("a + x".parse::<AlgebraElement>().is_err());
    }

    #[test]
    fn json_shape() {
        let y = x("a - 1/2 da");
        let json = serde_json::to_value(&y).unwrap();
        assert_eq!(
            json,
            serde_json::json!([{"word": "a", "coeff": "1"}, {"word": "da", "coeff": "-1/2"}])
        );
        let back: AlgebraElement = serde_json::from_value(json).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn group_equal_terms_merge() {
        // (ad)^4 = 1 in the group but is a different reduced word.
        let y = &x("adadadad") - &AlgebraElement::one();
        assert!(!y.is_zero());
        assert!(!y.is_nonzero_in_group_algebra());
        assert!(x("a - da - ad + dad").is_nonzero_in_group_algebra());
    }
}
