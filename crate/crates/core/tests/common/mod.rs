#![allow(dead_code)]

use frobkit::{Ideal, Monomial, Polynomial, Ring};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Exponent vectors in `n` variables of total degree at most `d`.
pub fn exponents_up_to(n: usize, d: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in 0..=d {
        for mut tail in exponents_up_to(n - 1, d - head) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn in_monomial_ideal(gens: &[Vec<u64>], v: &[u64]) -> bool {
    gens.iter().any(|g| divides(g, v))
}

/// The box `[0, b]^n`.
pub fn grid(n: usize, b: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// Smallest monomial `J` with `a ⊆ J^[q]`, by enumerating every choice of one
/// `β` with `qβ ≤ α` per generator `α` and intersecting the resulting ideals.
/// Returned as the membership table over `grid(n, b)`.
pub fn choice_root(gens: &[Vec<u64>], q: u64, n: usize, b: u64) -> Vec<bool> {
    let options: Vec<Vec<Vec<u64>>> = gens
        .iter()
        .map(|a| {
            grid(n, *a.iter().max().unwrap_or(&0))
                .into_iter()
                .filter(|beta| beta.iter().zip(a).all(|(x, y)| q * x <= *y))
                .collect()
        })
        .collect();
    let cells = grid(n, b);
    let mut inter = vec![true; cells.len()];
    let mut idx = vec![0usize; options.len()];
    loop {
        let chosen: Vec<Vec<u64>> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
        for (k, v) in cells.iter().enumerate() {
            inter[k] &= in_monomial_ideal(&chosen, v);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return inter;
            }
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Every `n`-fold product of the generators.
pub fn naive_power(gens: &[Vec<u64>], k: u64) -> Vec<Vec<u64>> {
    let n = gens.first().map_or(0, Vec::len);
    let mut acc = vec![vec![0; n]];
    for _ in 0..k {
        let mut next: Vec<Vec<u64>> = Vec::new();
        for a in &acc {
            for g in gens {
                let m: Vec<u64> = a.iter().zip(g).map(|(x, y)| x + y).collect();
                if !next.iter().any(|o| divides(o, &m)) {
                    next.retain(|o| !divides(&m, o));
                    next.push(m);
                }
            }
        }
        acc = next;
    }
    acc
}

/// `w ∈ Int(t · Newt(a))` for monomial `a` in at most two variables; `t = num/den`.
///
/// Every nonnegative direction gives a valid inequality for the Newton
/// polyhedron, and its facets are among the axis directions and the
/// normals of generator pairs.
pub fn in_newton_interior(gens: &[Vec<u64>], num: u64, den: u64, w: &[u64]) -> bool {
    let n = w.len();
    let mut normals: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n == 2 {
        for g in gens {
            for h in gens {
                let c = vec![h[1] as i64 - g[1] as i64, g[0] as i64 - h[0] as i64];
                if c[0] > 0 && c[1] > 0 {
                    normals.push(c);
                }
            }
        }
    }
    normals.iter().all(|c| {
        let dot = |v: &[u64]| -> i64 { c.iter().zip(v).map(|(a, b)| a * *b as i64).sum() };
        let lo = gens.iter().map(|g| dot(g)).min().expect("generators");
        // dot(w) > t·lo
        dot(w) as i128 * den as i128 > num as i128 * lo as i128
    })
}

pub fn monomial_ideal(ring: &Ring, gens: &[Vec<u64>]) -> Ideal {
    let polys = gens.iter().map(|g| Polynomial::monomial(ring, Monomial::new(g.iter().copied()))).collect();
    Ideal::new(ring, polys).unwrap()
}

pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Ring, max_deg: u64, terms: usize) -> Polynomial {
    let n = ring.nvars();
    let p = ring.characteristic();
    let mut out = Vec::new();
    for _ in 0..terms {
        let mut e = vec![0u64; n];
        let d = rng.gen_range(0..=max_deg);
        for _ in 0..d {
            e[rng.gen_range(0..n)] += 1;
        }
        out.push((Monomial::new(e), rng.gen_range(1..p)));
    }
    Polynomial::from_terms(ring, out)
}

pub fn random_nonzero_poly(rng: &mut ChaCha8Rng, ring: &Ring, max_deg: u64, terms: usize) -> Polynomial {
    loop {
        let f = random_poly(rng, ring, max_deg, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_ideal(rng: &mut ChaCha8Rng, ring: &Ring, gens: usize, max_deg: u64) -> Ideal {
    let polys = (0..gens)
        .map(|_| {
            let t = rng.gen_range(1..=3);
            random_nonzero_poly(rng, ring, max_deg, t)
        })
        .collect();
    Ideal::new(ring, polys).unwrap()
}

/// Membership in `S = ⟨gens⟩` by dynamic programming up to `limit`.
pub fn semigroup_table(gens: &[u64], limit: usize) -> Vec<bool> {
    let mut t = vec![false; limit];
    t[0] = true;
    for n in 1..limit {
        t[n] = gens.iter().any(|&g| g as usize <= n && t[n - g as usize]);
    }
    t
}
