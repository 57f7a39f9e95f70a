use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::level::LevelMatrix;
use super::{AlgebraElement, NucleusVector};
use crate::error::{Error, Result};
use crate::grig::wreath;
use crate::limits::Limits;

/// A sparse 2^depth × 2^depth matrix over ℚ[𝒢], the image of ψ^depth.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockMatrix {
    depth: usize,
    entries: BTreeMap<(usize, usize), AlgebraElement>,
}

impl BlockMatrix {
    pub fn zero(depth: usize) -> Self {
        BlockMatrix {
            depth,
            entries: BTreeMap::new(),
        }
    }

    /// The 1×1 matrix `[x]`.
    pub fn scalar(x: AlgebraElement) -> Self {
        let mut m = BlockMatrix::zero(0);
        m.insert(0, 0, x);
        m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn size(&self) -> usize {
        1 << self.depth
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&AlgebraElement> {
        self.entries.get(&(row, col))
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &AlgebraElement)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn add_at(&mut self, row: usize, col: usize, x: AlgebraElement) {
        let slot = self.entries.entry((row, col)).or_default();
        *slot = &*slot + &x;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    fn insert(&mut self, row: usize, col: usize, x: AlgebraElement) {
        if !x.is_zero() {
            self.entries.insert((row, col), x);
        }
    }

    /// Applies ψ to every entry, doubling the side length.
    pub fn expand(&self) -> BlockMatrix {
        let mut out = BlockMatrix::zero(self.depth + 1);
        for (&(r, c), x) in &self.entries {
            for ((i, j), y) in psi_expand(x).entries {
                out.add_at(2 * r + i, 2 * c + j, y);
            }
        }
        out
    }

    pub fn mul(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        if self.depth != other.depth {
            return Err(Error::Precondition(format!(
                "cannot multiply block matrices of depth {} and {}",
                self.depth, other.depth
            )));
        }
        let mut out = BlockMatrix::zero(self.depth);
        for (&(r, k), x) in &self.entries {
            for (&(_, c), y) in other.entries.range((k, 0)..(k + 1, 0)) {
                out.add_at(r, c, x * y);
            }
        }
        Ok(out)
    }

    /// Entry-wise involution combined with transposition.
    pub fn star(&self) -> BlockMatrix {
        let mut out = BlockMatrix::zero(self.depth);
        for (&(r, c), x) in &self.entries {
            out.insert(c, r, x.star());
        }
        out
    }

    /// True when every entry lies in the span of {1, a, b, c, d}.
    pub fn in_nucleus_span(&self) -> bool {
        self.entries.values().all(AlgebraElement::in_nucleus_span)
    }

    /// The first scalar entry in row-major order.
    pub fn first_scalar_entry(&self) -> Option<((usize, usize), &AlgebraElement)> {
        self.entries().find(|(_, x)| x.as_scalar().is_some())
    }

    pub fn nucleus_entries(&self) -> Option<Vec<((usize, usize), NucleusVector)>> {
        self.entries()
            .map(|(k, x)| x.nucleus_coordinates().map(|v| (k, v)))
            .collect()
    }

    /// Evaluates each entry at tree level `n`, assembling a matrix at level depth + n.
    pub fn evaluate_at_level(&self, n: usize, limits: &Limits) -> Result<LevelMatrix> {
        limits.check_matrix_level(self.depth + n)?;
        let block = 1usize << n;
        let mut out = LevelMatrix::zeros(self.depth + n);
        for (&(r, c), x) in &self.entries {
            let m = super::level::pi_level(x, n, limits)?;
            for ((i, j), q) in m.nonzero_entries() {
                out.add_at(r * block + i, c * block + j, q);
            }
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct EntryRecord<'a> {
    row: usize,
    col: usize,
    value: &'a AlgebraElement,
}

/// `{depth, size, entries: [{row, col, value}]}` in row-major order.
impl Serialize for BlockMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<EntryRecord<'_>> = self
            .entries
            .iter()
            .map(|(&(row, col), value)| EntryRecord { row, col, value })
            .collect();
        let mut s = serializer.serialize_struct("BlockMatrix", 3)?;
        s.serialize_field("depth", &self.depth)?;
        s.serialize_field("size", &self.size())?;
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// ψ_π(x) ∈ M₂(ℚ[𝒢]): the term q·g contributes q·g|ᵢ at position (i, iᵍ).
pub fn psi_expand(x: &AlgebraElement) -> BlockMatrix {
    let mut out = BlockMatrix::zero(1);
    for (g, q) in x.terms() {
        let w = wreath(g);
        for i in 0..2 {
            let col = i ^ usize::from(w.active);
            let mut term = AlgebraElement::zero();
            term.add_term(w.section(i).clone(), q.clone());
            out.add_at(i, col, term);
        }
    }
    out
}

/// ψ^depth(x), a 2^depth × 2^depth matrix.
pub fn psi_iterate(x: &AlgebraElement, depth: usize, limits: &Limits) -> Result<BlockMatrix> {
    limits.check_depth(depth)?;
    let mut m = BlockMatrix::scalar(x.clone());
    for _ in 0..depth {
        m = m.expand();
    }
    Ok(m)
}

/// The first depth at which every entry of ψ^depth(x) lies in the nucleus span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NucleusReduction {
    pub depth: usize,
    pub matrix: BlockMatrix,
}

/// Iterates ψ until the entries are supported on {1, a, b, c, d}. Terminates by
/// contraction after roughly log₂ of the longest word length.
pub fn reduce_to_nucleus(x: &AlgebraElement, limits: &Limits) -> Result<NucleusReduction> {
    let mut m = BlockMatrix::scalar(x.clone());
    let mut depth = 0;
    while !m.in_nucleus_span() {
        depth += 1;
        limits.check_depth(depth)?;
        m = m.expand();
    }
    Ok(NucleusReduction { depth, matrix: m })
}
