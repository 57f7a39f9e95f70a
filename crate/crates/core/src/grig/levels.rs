use std::collections::{HashMap, VecDeque};
use std::rc::Rc;
use std::sync::OnceLock;

use parking_lot::Mutex;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{equal, is_trivial, wreath, Generator, GroupElement};
use crate::error::{Error, Result};
use crate::limits::{Limits, MAX_GROUP_LEVEL};

/// A permutation of the 2ⁿ vertices of level n, vertices indexed in
/// lexicographic order (first letter most significant).
///
/// Serialized as the array of 0-based target indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelPermutation {
    level: usize,
    map: Vec<u32>,
}

impl LevelPermutation {
    pub fn identity(level: usize) -> Self {
        LevelPermutation {
            level,
            map: (0..1u32 << level).collect(),
        }
    }

    /// Validates that `map` is a bijection of {0, …, 2ⁿ − 1}.
    pub fn from_map(map: Vec<u32>) -> Result<Self> {
        let len = map.len();
        if !len.is_power_of_two() {
            return Err(Error::Malformed(format!(
                "a level permutation has 2^n entries, got {len}"
            )));
        }
        let mut seen = vec![false; len];
        for &t in &map {
            let t = t as usize;
            if t >= len || std::mem::replace(&mut seen[t], true) {
                return Err(Error::Malformed("map is not a bijection".into()));
            }
        }
        Ok(LevelPermutation {
            level: len.trailing_zeros() as usize,
            map,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, vertex: usize) -> usize {
        self.map[vertex] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &t)| i == t as usize)
    }

    /// Apply `self` first, then `other`; for words this is `g·h`.
    pub fn then(&self, other: &LevelPermutation) -> LevelPermutation {
        assert_eq!(self.level, other.level, "permutations of different levels");
        LevelPermutation {
            level: self.level,
            map: self.map.iter().map(|&i| other.map[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> LevelPermutation {
        let mut map = vec![0; self.map.len()];
        for (i, &t) in self.map.iter().enumerate() {
            map[t as usize] = i as u32;
        }
        LevelPermutation {
            level: self.level,
            map,
        }
    }

    /// Non-trivial cycles, each starting at its least vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut v = self.apply(start);
            while v != start {
                seen[v] = true;
                cycle.push(v);
                v = self.apply(v);
            }
            out.push(cycle);
        }
        out
    }
}

impl Serialize for LevelPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LevelPermutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = Vec::<u32>::deserialize(deserializer)?;
        LevelPermutation::from_map(map).map_err(serde::de::Error::custom)
    }
}

/// The permutation of level n induced by g: `(x·u)^g = x^g · u^(g|_x)`.
///
/// Panics for n > 24.
pub fn level_permutation(g: &GroupElement, n: usize) -> LevelPermutation {
    assert!(n <= 24, "level {n} is too large to materialize");
    let mut memo = HashMap::new();
    let map = permutation_rec(g, n, &mut memo);
    LevelPermutation {
        level: n,
        map: Rc::try_unwrap(map).unwrap_or_else(|rc| (*rc).clone()),
    }
}

type PermMemo = HashMap<(GroupElement, usize), Rc<Vec<u32>>>;

fn permutation_rec(g: &GroupElement, n: usize, memo: &mut PermMemo) -> Rc<Vec<u32>> {
    if n == 0 {
        return Rc::new(vec![0]);
    }
    if let Some(p) = memo.get(&(g.clone(), n)) {
        return p.clone();
    }
    let image = wreath(g);
    let half = 1u32 << (n - 1);
    let lower = [
        permutation_rec(&image.first, n - 1, memo),
        permutation_rec(&image.second, n - 1, memo),
    ];
    let mut map = Vec::with_capacity(2 * half as usize);
    for (x, sub) in lower.iter().enumerate() {
        let top = x as u32 ^ image.active as u32;
        map.extend(sub.iter().map(|&u| top * half + u));
    }
    let map = Rc::new(map);
    memo.insert((g.clone(), n), map.clone());
    map
}

/// The action of a group element on the first n levels, packed as one
/// activity bit per vertex of levels 0..n: vertex i of level k is bit 2ᵏ − 1 + i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Portrait {
    level: u8,
    bits: u64,
}

impl Portrait {
    pub fn identity(level: usize) -> Self {
        assert!(level <= MAX_GROUP_LEVEL);
        Portrait {
            level: level as u8,
            bits: 0,
        }
    }

    pub fn of(g: &GroupElement, level: usize) -> Self {
        assert!(level <= MAX_GROUP_LEVEL);
        let mut bits = 0u64;
        let mut activity: HashMap<GroupElement, (bool, GroupElement, GroupElement)> = HashMap::new();
        let mut current = vec![g.clone()];
        for k in 0..level {
            let mut next = Vec::with_capacity(current.len() * 2);
            for (i, s) in current.iter().enumerate() {
                let (active, s0, s1) = activity
                    .entry(s.clone())
                    .or_insert_with(|| {
                        let w = wreath(s);
                        (w.active, w.first, w.second)
                    })
                    .clone();
                if active {
                    bits |= 1 << ((1usize << k) - 1 + i);
                }
                next.push(s0);
                next.push(s1);
            }
            current = next;
        }
        Portrait {
            level: level as u8,
            bits,
        }
    }

    pub fn level(&self) -> usize {
        self.level as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn active(&self, k: usize, i: usize) -> bool {
        self.bits >> ((1usize << k) - 1 + i) & 1 == 1
    }

    /// Apply `self` first, then `other`: the activity of the product at v is
    /// `act_self(v) xor act_other(v^self)`.
    pub fn then(&self, other: &Portrait) -> Portrait {
        debug_assert_eq!(self.level, other.level);
        let mut images = [0usize; 1 << MAX_GROUP_LEVEL];
        let mut next = [0usize; 1 << MAX_GROUP_LEVEL];
        let mut bits = 0u64;
        for k in 0..self.level as usize {
            let width = 1usize << k;
            for i in 0..width {
                let mine = self.active(k, i);
                if mine ^ other.active(k, images[i]) {
                    bits |= 1 << (width - 1 + i);
                }
                next[2 * i] = 2 * images[i] + mine as usize;
                next[2 * i + 1] = 2 * images[i] + !mine as usize;
            }
            images[..2 * width].copy_from_slice(&next[..2 * width]);
        }
        Portrait {
            level: self.level,
            bits,
        }
    }

    pub fn to_permutation(&self) -> LevelPermutation {
        let mut images = vec![0u32];
        for k in 0..self.level as usize {
            let mut next = Vec::with_capacity(images.len() * 2);
            for (i, &img) in images.iter().enumerate() {
                let flip = self.active(k, i) as u32;
                next.push(2 * img + flip);
                next.push(2 * img + (1 - flip));
            }
            images = next;
        }
        LevelPermutation {
            level: self.level as usize,
            map: images,
        }
    }
}

// d = bc, so a, b, c generate every level quotient.
fn generator_portraits(level: usize) -> [Portrait; 3] {
    [Generator::A, Generator::B, Generator::C].map(|g| Portrait::of(&GroupElement::generator(g), level))
}

fn check_level(level: usize, limits: &Limits) -> Result<()> {
    if level == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    limits.check_group_level(level)
}

/// |𝒢 : St(n)|, the order of the group generated by the level-n actions of the
/// generators, by breadth-first closure.
pub fn level_quotient_order(level: usize, limits: &Limits) -> Result<u64> {
    check_level(level, limits)?;
    static ORDERS: OnceLock<Mutex<HashMap<usize, u64>>> = OnceLock::new();
    let orders = ORDERS.get_or_init(Default::default);
    if let Some(&known) = orders.lock().get(&level) {
        return Ok(known);
    }
    let gens = generator_portraits(level);
    let size = closure_size(Portrait::identity(level), |x, out| {
        out.extend(gens.iter().map(|s| x.then(s)));
    });
    orders.lock().insert(level, size);
    Ok(size)
}

/// Index of the normal closure of g's image in the level-n quotient.
///
/// The closure is enumerated as the smallest set containing 1 that is closed
/// under `x ↦ x·g` and under conjugation by the generators; such a set is
/// closed under right multiplication by every conjugate of g, hence equals ⟨g⟩^𝒢.
pub fn normal_closure_index(g: &GroupElement, level: usize, limits: &Limits) -> Result<u64> {
    let total = level_quotient_order(level, limits)?;
    let gens = generator_portraits(level);
    let target = Portrait::of(g, level);
    let size = closure_size(Portrait::identity(level), |x, out| {
        out.push(x.then(&target));
        // generators are involutions: s⁻¹xs = s x s
        out.extend(gens.iter().map(|s| s.then(x).then(s)));
    });
    debug_assert_eq!(total % size, 0);
    Ok(total / size)
}

fn closure_size(start: Portrait, mut step: impl FnMut(&Portrait, &mut Vec<Portrait>)) -> u64 {
    let level = start.level;
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    let mut frontier = vec![start.bits];
    seen.insert(start.bits);
    let mut buf = Vec::with_capacity(4);
    let mut cursor = 0;
    while cursor < frontier.len() {
        let x = Portrait {
            level,
            bits: frontier[cursor],
        };
        cursor += 1;
        buf.clear();
        step(&x, &mut buf);
        for y in &buf {
            if seen.insert(y.bits) {
                frontier.push(y.bits);
            }
        }
    }
    seen.len() as u64
}

/// Number of orbits of the level-n action on ordered pairs of level-n vertices.
pub fn orbital_count(level: usize, limits: &Limits) -> Result<usize> {
    limits.check_matrix_level(level)?;
    let gens: Vec<LevelPermutation> = Generator::ALL
        .iter()
        .map(|&g| level_permutation(&GroupElement::generator(g), level))
        .collect();
    let width = 1usize << level;
    let mut seen = vec![false; width * width];
    let mut orbits = 0;
    let mut queue = VecDeque::new();
    for start in 0..width * width {
        if seen[start] {
            continue;
        }
        orbits += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            let (u, v) = (p / width, p % width);
            for s in &gens {
                let q = s.apply(u) * width + s.apply(v);
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
    }
    Ok(orbits)
}

/// An element k' of K = ⟨(ab)²⟩^𝒢 with ψ(k') = (k, 1), written as a product
/// of conjugates of (ab)².
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplicationWitness {
    pub witness: GroupElement,
    /// The conjugators t with factor t⁻¹(ab)²t, in product order.
    pub conjugators: Vec<GroupElement>,
}

/// Bounded search for a replication witness of `target`: products of at most
/// `max_factors` conjugates t⁻¹(ab)^{±2}t with |t| ≤ `max_conjugator_len`.
///
/// Membership of the witness in K holds by construction; the search is not
/// guaranteed to succeed.
pub fn find_replication_witness(
    target: &GroupElement,
    max_conjugator_len: usize,
    max_factors: usize,
) -> Option<ReplicationWitness> {
    let ab2: GroupElement = "abab".parse().unwrap();
    let mut conjugators = vec![GroupElement::identity()];
    let mut layer = vec![GroupElement::identity()];
    for _ in 0..max_conjugator_len {
        let mut next = Vec::new();
        for t in &layer {
            for g in Generator::ALL {
                let u = t.mul(&GroupElement::generator(g));
                if u.len() == t.len() + 1 {
                    next.push(u);
                }
            }
        }
        conjugators.extend(next.iter().cloned());
        layer = next;
    }
    let mut factors: Vec<(GroupElement, GroupElement)> = Vec::new();
    let mut seen_factor = FxHashSet::default();
    for t in &conjugators {
        for base in [ab2.clone(), ab2.inverse()] {
            let f = base.conjugate_by(t);
            if seen_factor.insert(f.clone()) {
                factors.push((t.clone(), f));
            }
        }
    }

    let accepts = |k: &GroupElement| {
        let image = wreath(k);
        !image.active && is_trivial(&image.second) && equal(&image.first, target)
    };
    let mut products: Vec<(GroupElement, Vec<GroupElement>)> = vec![(GroupElement::identity(), Vec::new())];
    let mut seen = FxHashSet::default();
    seen.insert(GroupElement::identity());
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for (p, ts) in &products {
            for (t, f) in &factors {
                let q = p.mul(f);
                if !seen.insert(q.clone()) {
                    continue;
                }
                let mut qts = ts.clone();
                qts.push(t.clone());
                if accepts(&q) {
                    return Some(ReplicationWitness {
                        witness: q,
                        conjugators: qts,
                    });
                }
                next.push((q, qts));
            }
        }
        products = next;
    }
    None
}
