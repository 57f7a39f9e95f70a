use std::num::NonZeroUsize;
use std::sync::OnceLock;

use lru::LruCache;
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use super::{Generator, GroupElement, WordBuilder};
use crate::error::{Error, Result};

/// ψ(g) ∈ (𝒢 × 𝒢) ⋊ ℤ/2: the sections at vertices 0 and 1 and the root activity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathImage {
    pub first: GroupElement,
    pub second: GroupElement,
    /// `true` when g swaps the two first-level vertices.
    pub active: bool,
}

impl WreathImage {
    pub fn identity() -> Self {
        WreathImage {
            first: GroupElement::identity(),
            second: GroupElement::identity(),
            active: false,
        }
    }

    pub fn section(&self, letter: usize) -> &GroupElement {
        match letter {
            0 => &self.first,
            1 => &self.second,
            _ => panic!("binary tree letters are 0 or 1, got {letter}"),
        }
    }

    /// `(g₀,g₁,s)·(h₀,h₁,t) = (g₀·h_{σ_s(0)}, g₁·h_{σ_s(1)}, s ⊕ t)`
    pub fn mul(&self, other: &WreathImage) -> WreathImage {
        let (h0, h1) = if self.active {
            (&other.second, &other.first)
        } else {
            (&other.first, &other.second)
        };
        WreathImage {
            first: self.first.mul(h0),
            second: self.second.mul(h1),
            active: self.active ^ other.active,
        }
    }
}

fn generator_sections(g: Generator) -> (Option<Generator>, Option<Generator>) {
    use Generator::*;
    match g {
        A => (None, None),
        B => (Some(A), Some(C)),
        C => (Some(A), Some(D)),
        D => (None, Some(B)),
    }
}

/// The wreath recursion ψ, evaluated letter by letter.
pub fn wreath(g: &GroupElement) -> WreathImage {
    let mut sections = [WordBuilder::default(), WordBuilder::default()];
    let mut active = false;
    for &x in g.letters() {
        if x == Generator::A {
            active = !active;
            continue;
        }
        let (h0, h1) = generator_sections(x);
        let (to0, to1) = if active { (h1, h0) } else { (h0, h1) };
        if let Some(l) = to0 {
            sections[0].push(l);
        }
        if let Some(l) = to1 {
            sections[1].push(l);
        }
    }
    let [s0, s1] = sections;
    WreathImage {
        first: s0.finish(),
        second: s1.finish(),
        active,
    }
}

/// The section g|_v for a vertex given as a string over "01".
pub fn section(g: &GroupElement, vertex: &str) -> Result<GroupElement> {
    let mut current = g.clone();
    for c in vertex.chars() {
        let letter = match c {
            '0' => 0,
            '1' => 1,
            _ => return Err(Error::Malformed(format!("vertex {vertex:?} is not a binary string"))),
        };
        current = wreath(&current).section(letter).clone();
    }
    Ok(current)
}

const TRIVIALITY_CACHE_CAP: usize = 1 << 20;

fn triviality_cache() -> &'static Mutex<LruCache<GroupElement, bool>> {
    static CACHE: OnceLock<Mutex<LruCache<GroupElement, bool>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(LruCache::new(
            NonZeroUsize::new(TRIVIALITY_CACHE_CAP).unwrap(),
        ))
    })
}

/// Drops all memoized word-problem answers.
pub fn clear_triviality_cache() {
    triviality_cache().lock().clear();
}

/// Decides `g = 1` by the contraction argument: sections of a word of length
/// L ≥ 2 have length at most (L+1)/2, so the recursion bottoms out in the nucleus.
pub fn is_trivial(g: &GroupElement) -> bool {
    if g.is_nucleus() {
        return g.is_empty();
    }
    if let Some(&known) = triviality_cache().lock().get(g) {
        return known;
    }
    let image = wreath(g);
    debug_assert!(image.first.len() <= (g.len() + 1) / 2);
    debug_assert!(image.second.len() <= (g.len() + 1) / 2);
    let trivial = !image.active && is_trivial(&image.first) && is_trivial(&image.second);
    triviality_cache().lock().put(g.clone(), trivial);
    trivial
}

/// `g = h` in the group.
pub fn equal(g: &GroupElement, h: &GroupElement) -> bool {
    is_trivial(&g.mul(&h.inverse()))
}

/// Result of [`order`]: every element has 2-power order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Order {
    /// The order is exactly `2^log2`.
    Exact { log2: u32 },
    /// `g^(2^max_exponent) ≠ 1`.
    Overflow { max_exponent: u32 },
}

impl Order {
    pub fn value(self) -> Option<u128> {
        match self {
            Order::Exact { log2 } => Some(1u128 << log2),
            Order::Overflow { .. } => None,
        }
    }
}

/// The least 2^k with g^(2^k) = 1, found by repeated squaring, for k ≤ max_exponent.
pub fn order(g: &GroupElement, max_exponent: u32) -> Order {
    let mut power = g.clone();
    for k in 0..=max_exponent {
        if is_trivial(&power) {
            return Order::Exact { log2: k };
        }
        power = power.mul(&power);
    }
    Order::Overflow { max_exponent }
}

fn lift_letter(g: Generator) -> &'static [Generator] {
    use Generator::*;
    match g {
        A => &[B],
        B => &[A, D, A],
        C => &[A, B, A],
        D => &[A, C, A],
    }
}

/// An element g of the first-level stabilizer with ψ(g) = (f, h) for some h.
///
/// Each letter is replaced by a stabilizer element whose first section is that
/// letter: ψ(b) = (a,c), ψ(ada) = (b,1), ψ(aba) = (c,a), ψ(aca) = (d,a).
pub fn lift_first(f: &GroupElement) -> GroupElement {
    let g = GroupElement::normalize(f.letters().iter().flat_map(|&x| lift_letter(x).iter().copied()));
    debug_assert!({
        let image = wreath(&g);
        !image.active && equal(&image.first, f)
    });
    g
}

/// An element g of the first-level stabilizer with ψ(g) = (h, f): the
/// conjugate of [`lift_first`] by a.
pub fn lift_second(f: &GroupElement) -> GroupElement {
    let a = GroupElement::generator(Generator::A);
    a.mul(&lift_first(f)).mul(&a)
}
