//! Finite T₀ spaces given by their lattice of closed sets, and the spaces Y_n.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point sets are bitmasks, so spaces have at most this many points.
pub const MAX_POINTS: usize = 24;

/// Y_n has 2ⁿ + 1 closed sets and validation is quadratic in that count.
pub const MAX_YN: usize = 12;

/// A finite T₀ space. Closed sets are bitmasks over `points`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct FiniteT0Space {
    points: Vec<String>,
    closed: BTreeSet<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    points: Vec<String>,
    closed: Vec<Vec<String>>,
}

impl TryFrom<RawSpace> for FiniteT0Space {
    type Error = Error;
    fn try_from(raw: RawSpace) -> Result<Self> {
        let index = |name: &String| {
            raw.points
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::Malformed(format!("closed set mentions unknown point {name:?}")))
        };
        let mut closed = Vec::new();
        for set in &raw.closed {
            let mut mask = 0u32;
            for name in set {
                mask |= 1 << index(name)?;
            }
            closed.push(mask);
        }
        FiniteT0Space::new(raw.points.clone(), closed)
    }
}

impl From<FiniteT0Space> for RawSpace {
    fn from(s: FiniteT0Space) -> Self {
        let closed = s.closed.iter().map(|&m| s.names(m)).collect();
        RawSpace {
            points: s.points,
            closed,
        }
    }
}

impl FiniteT0Space {
    /// Validates the lattice and T₀ conditions; non-lattices are rejected, not completed.
    pub fn new(points: Vec<String>, closed: Vec<u32>) -> Result<Self> {
        if points.len() > MAX_POINTS {
            return Err(Error::cap("space points", points.len(), MAX_POINTS));
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::Malformed("duplicate point names".into()));
        }
        let full = full_mask(points.len());
        let closed: BTreeSet<u32> = closed.into_iter().collect();
        if closed.iter().any(|&m| m & !full != 0) {
            return Err(Error::Malformed("closed set outside the point set".into()));
        }
        if !closed.contains(&0) {
            return Err(Error::Malformed("the empty set must be closed".into()));
        }
        if !closed.contains(&full) {
            return Err(Error::Malformed("the whole space must be closed".into()));
        }
        for &a in &closed {
            for &b in &closed {
                if !closed.contains(&(a | b)) || !closed.contains(&(a & b)) {
                    return Err(Error::Malformed(format!(
                        "closed sets are not a lattice: {:?} and {:?}",
                        names_of(&points, a),
                        names_of(&points, b)
                    )));
                }
            }
        }
        let space = FiniteT0Space { points, closed };
        let mut seen = std::collections::BTreeMap::new();
        for x in 0..space.points.len() {
            if let Some(y) = seen.insert(space.closure_of_point(x), x) {
                return Err(Error::Malformed(format!(
                    "not T0: points {:?} and {:?} have the same closure",
                    space.points[y], space.points[x]
                )));
            }
        }
        Ok(space)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn full(&self) -> u32 {
        full_mask(self.points.len())
    }

    pub fn closed_sets(&self) -> impl Iterator<Item = u32> + '_ {
        self.closed.iter().copied()
    }

    pub fn open_sets(&self) -> impl Iterator<Item = u32> + '_ {
        let full = self.full();
        self.closed.iter().map(move |&c| full & !c)
    }

    pub fn is_closed(&self, set: u32) -> bool {
        self.closed.contains(&set)
    }

    pub fn names(&self, set: u32) -> Vec<String> {
        names_of(&self.points, set)
    }

    /// Bitmask of named points.
    pub fn mask_of(&self, names: &[&str]) -> Result<u32> {
        names.iter().try_fold(0u32, |m, n| {
            let i = self
                .points
                .iter()
                .position(|p| p == n)
                .ok_or_else(|| Error::Malformed(format!("unknown point {n:?}")))?;
            Ok(m | 1 << i)
        })
    }

    /// The smallest closed set containing `set`.
    pub fn closure(&self, set: u32) -> u32 {
        self.closed
            .iter()
            .filter(|&&c| c & set == set)
            .fold(self.full(), |acc, &c| acc & c)
    }

    pub fn closure_of_point(&self, x: usize) -> u32 {
        self.closure(1 << x)
    }

    /// The same space with points renamed by `perm` (old index i ↦ new index perm[i]).
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteT0Space> {
        let n = self.points.len();
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::Malformed("relabeling is not a permutation".into()));
        }
        let mut points = vec![String::new(); n];
        for (i, &j) in perm.iter().enumerate() {
            points[j] = self.points[i].clone();
        }
        let map = |m: u32| (0..n).filter(|&i| m >> i & 1 == 1).fold(0u32, |acc, i| acc | 1 << perm[i]);
        FiniteT0Space::new(points, self.closed.iter().map(|&m| map(m)).collect())
    }

    /// Chooses, for each point of `subset`, one member of `cover` containing it.
    /// Returns `None` when `cover` does not cover `subset`.
    pub fn finite_subcover(&self, cover: &[u32], subset: u32) -> Option<Vec<usize>> {
        let mut chosen = BTreeSet::new();
        for x in (0..self.points.len()).filter(|&x| subset >> x & 1 == 1) {
            chosen.insert(cover.iter().position(|&u| u >> x & 1 == 1)?);
        }
        Some(chosen.into_iter().collect())
    }
}

fn full_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

fn names_of(points: &[String], set: u32) -> Vec<String> {
    (0..points.len())
        .filter(|&i| set >> i & 1 == 1)
        .map(|i| points[i].clone())
        .collect()
}

/// Y_n: points 0..=n; the closed sets are ∅, the whole space, and every subset of {1,…,n}.
pub fn build_yn(n: usize) -> Result<FiniteT0Space> {
    if n > MAX_YN {
        return Err(Error::cap("Y_n size", n, MAX_YN));
    }
    let points = (0..=n).map(|i| i.to_string()).collect();
    let mut closed: Vec<u32> = (0u32..1 << n).map(|m| m << 1).collect();
    closed.push(full_mask(n + 1));
    FiniteT0Space::new(points, closed)
}

/// Irreducibility of a non-empty closed set, by enumeration over pairs of closed sets.
pub fn is_prime_closed(s: &FiniteT0Space, set: u32) -> Result<bool> {
    if !s.is_closed(set) {
        return Err(Error::Precondition(format!("{:?} is not closed", s.names(set))));
    }
    if set == 0 {
        return Ok(false);
    }
    let closed: Vec<u32> = s.closed_sets().collect();
    for &a in &closed {
        for &b in &closed {
            let covered = set & !(a | b) == 0;
            if covered && set & !a != 0 && set & !b != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every prime closed set is the closure of a point.
pub fn is_spectral(s: &FiniteT0Space) -> bool {
    let point_closures: BTreeSet<u32> = (0..s.len()).map(|x| s.closure_of_point(x)).collect();
    s.closed_sets()
        .filter(|&c| is_prime_closed(s, c).unwrap_or(false))
        .all(|c| point_closures.contains(&c))
}

/// Recognizes Y_n up to homeomorphism: returns n = |X| − 1 when some point x₀ is
/// dense, every other point is closed, and the closed sets are exactly ∅, X and
/// the subsets of X ∖ {x₀}.
pub fn classify_yn(s: &FiniteT0Space) -> Option<usize> {
    let n = s.len();
    if n == 0 {
        return None;
    }
    let full = s.full();
    let x0 = (0..n).find(|&x| s.closure_of_point(x) == full)?;
    let rest = full & !(1 << x0);
    if (0..n).any(|x| x != x0 && s.closure_of_point(x) != 1 << x) {
        return None;
    }
    let expected: BTreeSet<u32> = (0..=rest)
        .filter(|m| m & !rest == 0)
        .chain(std::iter::once(full))
        .collect();
    let actual: BTreeSet<u32> = s.closed_sets().collect();
    (expected == actual).then_some(n - 1)
}
