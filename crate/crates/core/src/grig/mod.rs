//! The Grigorchuk group: reduced words, the wreath recursion, the
//! contraction-based word problem and finite-level actions on the binary tree.

mod levels;
mod wreath;

pub use levels::{
    find_replication_witness, level_permutation, level_quotient_order, normal_closure_index,
    orbital_count, LevelPermutation, Portrait, ReplicationWitness,
};
pub use wreath::{
    clear_triviality_cache, equal, is_trivial, lift_first, lift_second, order, section, wreath,
    Order, WreathImage,
};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
    C,
    D,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::A, Generator::B, Generator::C, Generator::D];

    pub fn from_char(c: char) -> Option<Generator> {
        match c {
            'a' => Some(Generator::A),
            'b' => Some(Generator::B),
            'c' => Some(Generator::C),
            'd' => Some(Generator::D),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
            Generator::C => 'c',
            Generator::D => 'd',
        }
    }

    /// True for b, c, d: the non-trivial elements of the Klein four-group.
    pub fn is_klein(self) -> bool {
        self != Generator::A
    }

    // b, c, d as the non-zero vectors of (Z/2)^2, so the Klein product is xor.
    fn klein_bits(self) -> u8 {
        match self {
            Generator::A => 0,
            Generator::B => 1,
            Generator::C => 2,
            Generator::D => 3,
        }
    }

    fn from_klein_bits(bits: u8) -> Option<Generator> {
        match bits {
            1 => Some(Generator::B),
            2 => Some(Generator::C),
            3 => Some(Generator::D),
            _ => None,
        }
    }

    /// Product of two Klein letters; `None` when the product is the identity.
    pub fn klein_product(self, other: Generator) -> Option<Generator> {
        debug_assert!(self.is_klein() && other.is_klein());
        Generator::from_klein_bits(self.klein_bits() ^ other.klein_bits())
    }

    /// The letter substitution σ: a → aca, b → d, c → b, d → c.
    pub fn sigma(self) -> &'static [Generator] {
        use Generator::*;
        match self {
            A => &[A, C, A],
            B => &[D],
            C => &[B],
            D => &[C],
        }
    }
}

/// Incremental reducer: appending a letter keeps the stack in normal form.
#[derive(Debug, Default, Clone)]
pub(crate) struct WordBuilder {
    stack: Vec<Generator>,
}

impl WordBuilder {
    pub(crate) fn with_prefix(word: &[Generator]) -> Self {
        WordBuilder {
            stack: word.to_vec(),
        }
    }

    pub(crate) fn push(&mut self, x: Generator) {
        match self.stack.last().copied() {
            Some(top) if top == x => {
                self.stack.pop();
            }
            Some(top) if top.is_klein() && x.is_klein() => {
                let product = top
                    .klein_product(x)
                    .expect("distinct Klein letters multiply to a Klein letter");
                *self.stack.last_mut().unwrap() = product;
            }
            _ => self.stack.push(x),
        }
    }

    pub(crate) fn extend(&mut self, letters: &[Generator]) {
        for &x in letters {
            self.push(x);
        }
    }

    pub(crate) fn finish(self) -> GroupElement {
        GroupElement { word: self.stack }
    }
}

/// An element of the group, stored as its reduced word: letters alternate
/// between `a` and a single letter from {b, c, d}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupElement {
    word: Vec<Generator>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }

    pub fn generator(g: Generator) -> Self {
        GroupElement { word: vec![g] }
    }

    /// Reduces an arbitrary letter sequence with x² = 1 and the Klein products.
    pub fn normalize<I: IntoIterator<Item = Generator>>(letters: I) -> Self {
        let mut builder = WordBuilder::default();
        for x in letters {
            builder.push(x);
        }
        builder.finish()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// True for the syntactically empty word. Use [`is_trivial`] to decide `g = 1`.
    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Elements of length ≤ 1 form the nucleus {1, a, b, c, d}.
    pub fn is_nucleus(&self) -> bool {
        self.word.len() <= 1
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let mut builder = WordBuilder::with_prefix(&self.word);
        builder.extend(&other.word);
        builder.finish()
    }

    /// Every generator is an involution, so the inverse is the reversed word.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn pow(&self, exponent: usize) -> GroupElement {
        let mut builder = WordBuilder::default();
        for _ in 0..exponent {
            builder.extend(&self.word);
        }
        builder.finish()
    }

    /// `x⁻¹ g x`
    pub fn conjugate_by(&self, x: &GroupElement) -> GroupElement {
        x.inverse().mul(self).mul(x)
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`
    pub fn commutator(&self, other: &GroupElement) -> GroupElement {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// Applies the substitution σ letter by letter and reduces.
    pub fn sigma(&self) -> GroupElement {
        GroupElement::normalize(self.word.iter().flat_map(|g| g.sigma().iter().copied()))
    }

    /// The word as a string over "abcd"; the identity is the empty string.
    pub fn to_word(&self) -> String {
        self.word.iter().map(|g| g.as_char()).collect()
    }

    pub fn parse_word(s: &str) -> Result<GroupElement, Error> {
        s.parse()
    }
}

impl From<Generator> for GroupElement {
    fn from(g: Generator) -> Self {
        GroupElement::generator(g)
    }
}

/// Shortlex: shorter words first, then lexicographic with a < b < c < d.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&self.to_word())
        }
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    /// Accepts words over "abcd"; "", "1" and "e" denote the identity.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "1" || s == "e" {
            return Ok(GroupElement::identity());
        }
        let letters = s
            .chars()
            .map(|c| {
                Generator::from_char(c)
                    .ok_or_else(|| Error::Malformed(format!("unexpected letter {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupElement::normalize(letters))
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_word())
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The Lysenok relators σᵏ((ad)⁴) and σᵏ((adacac)⁴) for k = 0..=k_max, with labels.
pub fn lysenok_relators(k_max: usize) -> Vec<(String, GroupElement)> {
    let ad4: GroupElement = "adadadad".parse().unwrap();
    let adacac4: GroupElement = "adacac".parse::<GroupElement>().unwrap().pow(4);
    let mut out = Vec::with_capacity(2 * (k_max + 1));
    let (mut r1, mut r2) = (ad4, adacac4);
    for k in 0..=k_max {
        out.push((format!("sigma^{k}((ad)^4)"), r1.clone()));
        out.push((format!("sigma^{k}((adacac)^4)"), r2.clone()));
        r1 = r1.sigma();
        r2 = r2.sigma();
    }
    out
}
