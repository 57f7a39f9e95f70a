use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{AlgebraElement, NucleusVector};
use crate::error::{Error, Result};
use crate::grig::{level_permutation, orbital_count, Generator, GroupElement};
use crate::limits::Limits;

/// A dense 2ⁿ × 2ⁿ rational matrix indexed by level-n vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMatrix {
    level: usize,
    data: Vec<BigRational>,
}

impl LevelMatrix {
    pub fn zeros(level: usize) -> Self {
        let n = 1usize << level;
        LevelMatrix {
            level,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(level: usize) -> Self {
        let mut m = LevelMatrix::zeros(level);
        let n = m.size();
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        1 << self.level
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.data[row * self.size() + col]
    }

    pub(crate) fn add_at(&mut self, row: usize, col: usize, q: &BigRational) {
        let n = self.size();
        self.data[row * n + col] += q;
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = ((usize, usize), &BigRational)> {
        let n = self.size();
        self.data
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(move |(k, q)| ((k / n, k % n), q))
    }

    pub fn transpose(&self) -> LevelMatrix {
        let n = self.size();
        let mut out = LevelMatrix::zeros(self.level);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &LevelMatrix) -> Result<LevelMatrix> {
        if self.level != other.level {
            return Err(Error::Precondition(format!(
                "cannot multiply level matrices of levels {} and {}",
                self.level, other.level
            )));
        }
        let n = self.size();
        let mut out = LevelMatrix::zeros(self.level);
        for r in 0..n {
            for k in 0..n {
                let x = &self.data[r * n + k];
                if x.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let y = &other.data[k * n + c];
                    if !y.is_zero() {
                        out.data[r * n + c] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        let n = self.size();
        let rows = self.data.chunks(n).map(<[BigRational]>::to_vec).collect();
        row_reduce(rows).1.len()
    }
}

#[derive(Serialize)]
struct Triple {
    row: usize,
    col: usize,
    value: String,
}

/// Sparse `{level, size, entries: [{row, col, value}]}`, row-major.
impl Serialize for LevelMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Triple> = self
            .nonzero_entries()
            .map(|((row, col), q)| Triple {
                row,
                col,
                value: q.to_string(),
            })
            .collect();
        let mut s = serializer.serialize_struct("LevelMatrix", 3)?;
        s.serialize_field("level", &self.level)?;
        s.serialize_field("size", &self.size())?;
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// π_n(x): the action of x on functions on level n, with P(g)[u][uᵍ] = 1.
pub fn pi_level(x: &AlgebraElement, n: usize, limits: &Limits) -> Result<LevelMatrix> {
    limits.check_matrix_level(n)?;
    let mut m = LevelMatrix::zeros(n);
    for (g, q) in x.terms() {
        let p = level_permutation(g, n);
        for (u, &image) in p.map().iter().enumerate() {
            m.add_at(u, image as usize, q);
        }
    }
    Ok(m)
}

/// dim End_{𝒢}(ℂ^{2ⁿ}), which equals the number of orbitals of 𝒢 on level n.
pub fn commutant_dimension(n: usize, limits: &Limits) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    orbital_count(n, limits)
}

fn nucleus_images(n: usize, limits: &Limits) -> Result<Vec<Vec<BigRational>>> {
    limits.check_matrix_level(n)?;
    let words = [
        GroupElement::identity(),
        Generator::A.into(),
        Generator::B.into(),
        Generator::C.into(),
        Generator::D.into(),
    ];
    words
        .into_iter()
        .map(|g| {
            let m = pi_level(&AlgebraElement::from_group(g), n, limits)?;
            Ok(m.data)
        })
        .collect()
}

/// dim span{π_n(1), π_n(a), π_n(b), π_n(c), π_n(d)}.
pub fn nucleus_rank_at_level(n: usize, limits: &Limits) -> Result<usize> {
    Ok(5 - nucleus_relations_at_level(n, limits)?.len())
}

/// A basis of the linear relations Σ tᵢ·π_n(gᵢ) = 0 among the nucleus images,
/// with coefficients over (1, a, b, c, d).
pub fn nucleus_relations_at_level(n: usize, limits: &Limits) -> Result<Vec<NucleusVector>> {
    let images = nucleus_images(n, limits)?;
    let len = images[0].len();
    // Columns are the flattened images; solve M t = 0.
    let rows: Vec<Vec<BigRational>> = (0..len)
        .filter(|&k| images.iter().any(|im| !im[k].is_zero()))
        .map(|k| images.iter().map(|im| im[k].clone()).collect())
        .collect();
    let (reduced, pivots) = row_reduce(rows);
    let mut basis = Vec::new();
    for free in (0..5).filter(|c| !pivots.contains(c)) {
        let mut v = NucleusVector::default();
        v.0[free] = BigRational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v.0[p] = -reduced[row][free].clone();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Reduced row echelon form; returns the non-zero rows and their pivot columns.
fn row_reduce(mut rows: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for q in rows[r].iter_mut() {
            *q *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (q, p) in row.iter_mut().zip(&pivot_row) {
                    *q -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}
