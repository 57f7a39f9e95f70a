//! The ordered group K₀ of the y_infty AF-algebra, as the inductive limit of
//! ℤ → ℤ² → ℤ³ → … under α_n(x) = (x, x₁+⋯+x_n), and its model as eventually
//! recurrent integer sequences.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::cap("k0 coordinate bits", 64, 63)
}

fn checked_sum(xs: &[i64]) -> Result<i64> {
    xs.iter().try_fold(0i64, |acc, &x| acc.checked_add(x)).ok_or_else(overflow)
}

/// A vector at level n (length n), always stored in canonical form: the least
/// level from which the rest of the vector is determined by the recurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct K0Element {
    level: usize,
    vector: Vec<i64>,
}

#[derive(Deserialize)]
struct RawElement {
    level: usize,
    vector: Vec<i64>,
}

impl TryFrom<RawElement> for K0Element {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        if raw.level != raw.vector.len() {
            return Err(Error::Malformed(format!(
                "level {} does not match vector length {}",
                raw.level,
                raw.vector.len()
            )));
        }
        K0Element::new(raw.vector)
    }
}

impl K0Element {
    /// The class of `vector` at level `vector.len()`.
    pub fn new(vector: Vec<i64>) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::Malformed("K0 vectors start at level 1".into()));
        }
        let mut x = K0Element {
            level: vector.len(),
            vector,
        };
        x.canonicalize()?;
        Ok(x)
    }

    /// The class of the unit, (1) at level 1.
    pub fn unit() -> Self {
        K0Element {
            level: 1,
            vector: vec![1],
        }
    }

    pub fn zero() -> Self {
        K0Element {
            level: 1,
            vector: vec![0],
        }
    }

    fn canonicalize(&mut self) -> Result<()> {
        while self.vector.len() > 1 {
            let (last, init) = self.vector.split_last().unwrap();
            if *last != checked_sum(init)? {
                break;
            }
            self.vector.pop();
        }
        self.level = self.vector.len();
        Ok(())
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    /// The representative at level m ≥ level.
    pub fn push(&self, m: usize) -> Result<Vec<i64>> {
        if m < self.level {
            return Err(Error::Precondition(format!(
                "cannot push a level-{} element down to level {m}",
                self.level
            )));
        }
        let mut v = self.vector.clone();
        let mut sum = checked_sum(&v)?;
        while v.len() < m {
            v.push(sum);
            sum = sum.checked_mul(2).ok_or_else(overflow)?;
        }
        Ok(v)
    }

    pub fn rho_model(&self) -> ModelSequence {
        ModelSequence {
            prefix: self.vector.clone(),
            recurrent_from: self.level,
        }
    }

    /// Positive in the limit order iff every model coordinate is ≥ 0; later
    /// coordinates are S, 2S, 4S, … for the prefix sum S, so the prefix decides.
    pub fn is_positive(&self) -> bool {
        self.vector.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &K0Element) -> Result<K0Element> {
        let m = self.level.max(other.level);
        let (x, y) = (self.push(m)?, other.push(m)?);
        let v = x
            .iter()
            .zip(&y)
            .map(|(a, b)| a.checked_add(*b).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        K0Element::new(v)
    }

    pub fn neg(&self) -> Result<K0Element> {
        let v = self
            .vector
            .iter()
            .map(|x| x.checked_neg().ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        K0Element::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.vector == [0]
    }
}

/// Equality in the limit: canonical forms coincide.
pub fn equal(x: &K0Element, y: &K0Element) -> bool {
    x == y
}

/// An element of G ⊂ ∏ℤ: `prefix` followed by x_{j+1} = x₁+⋯+x_j for j ≥ recurrent_from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ModelSequence {
    pub prefix: Vec<i64>,
    pub recurrent_from: usize,
}

impl ModelSequence {
    /// The first `count` coordinates.
    pub fn take(&self, count: usize) -> Result<Vec<i64>> {
        let mut v: Vec<i64> = self.prefix.iter().copied().take(count).collect();
        if v.len() < count {
            let mut sum = checked_sum(&self.prefix)?;
            while v.len() < count {
                v.push(sum);
                sum = sum.checked_mul(2).ok_or_else(overflow)?;
            }
        }
        Ok(v)
    }
}

/// A preimage under the projection onto the coordinates in F (1-based): the
/// requested values at level max F, zeros elsewhere.
pub fn subdirect_preimage(targets: &BTreeMap<usize, i64>) -> Result<K0Element> {
    if targets.contains_key(&0) {
        return Err(Error::Malformed("coordinates are numbered from 1".into()));
    }
    let level = targets.keys().next_back().copied().unwrap_or(1);
    let mut v = vec![0; level];
    for (&j, &x) in targets {
        v[j - 1] = x;
    }
    K0Element::new(v)
}
