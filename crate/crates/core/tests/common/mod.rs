//! Independent oracles: the tree action computed letter by letter on explicit
//! binary strings, with no use of the library's recursion or caches.
#![allow(dead_code)]

use justinf_core::algebra::AlgebraElement;
use justinf_core::grig::{Generator, GroupElement};
use num_rational::BigRational;
use num_traits::Zero;

fn act_letter(g: Generator, x: &mut [u8]) {
    let Some((head, rest)) = x.split_first_mut() else {
        return;
    };
    match g {
        Generator::A => *head ^= 1,
        Generator::B => act_letter(if *head == 0 { Generator::A } else { Generator::C }, rest),
        Generator::C => act_letter(if *head == 0 { Generator::A } else { Generator::D }, rest),
        Generator::D => {
            if *head == 1 {
                act_letter(Generator::B, rest)
            }
        }
    }
}

fn to_bits(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| (index >> (n - 1 - i) & 1) as u8).collect()
}

fn from_bits(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

/// Image of every level-n vertex under g, letters acting left to right.
pub fn oracle_perm(g: &GroupElement, n: usize) -> Vec<usize> {
    (0..1usize << n)
        .map(|u| {
            let mut x = to_bits(u, n);
            for &l in g.letters() {
                act_letter(l, &mut x);
            }
            from_bits(&x)
        })
        .collect()
}

pub fn oracle_is_identity(g: &GroupElement, n: usize) -> bool {
    oracle_perm(g, n).iter().enumerate().all(|(i, &j)| i == j)
}

/// Dense π_n(x) with P(g)[u][uᵍ] = 1.
pub fn oracle_matrix(x: &AlgebraElement, n: usize) -> Vec<Vec<BigRational>> {
    let size = 1usize << n;
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for (g, q) in x.terms() {
        for (u, v) in oracle_perm(g, n).into_iter().enumerate() {
            m[u][v] += q;
        }
    }
    m
}

pub fn is_zero_matrix(m: &[Vec<BigRational>]) -> bool {
    m.iter().flatten().all(Zero::is_zero)
}

/// Rank over ℚ of integer row vectors, by fraction-free elimination.
pub fn integer_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f != 0 {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = *x * pivot[c] - f * p;
                }
                let g = row.iter().fold(0i128, |acc, &x| gcd(acc, x));
                if g > 1 {
                    row.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of orbits of the level-n action on ordered pairs, by union-find.
pub fn oracle_orbitals(n: usize) -> usize {
    let size = 1usize << n;
    let gens: Vec<Vec<usize>> = Generator::ALL
        .iter()
        .map(|&g| oracle_perm(&GroupElement::from(g), n))
        .collect();
    let mut parent: Vec<usize> = (0..size * size).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for u in 0..size {
        for v in 0..size {
            for g in &gens {
                let (a, b) = (find(&mut parent, u * size + v), find(&mut parent, g[u] * size + g[v]));
                parent[a] = b;
            }
        }
    }
    (0..size * size).filter(|&x| find(&mut parent, x) == x).count()
}
