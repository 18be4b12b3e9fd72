//! Frobenius roots `I_e(a, R)` over polynomial rings and the descending
//! chains `I_e(x^(p^e - 1), R)`.
//!
//! Over `F_p[x_1..x_n]` the Frobenius pushforward is free on the monomials
//! with exponents below `q = p^e`, so `I_e(a, R)` is generated by the digit
//! coefficients of the generators of `a`.

use crate::error::{Error, Result};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::ideal::Ideal;
use crate::poly::Polynomial;

/// `I_e(a, R)`: the smallest ideal `J` with `a ⊆ J^[p^e]`.
///
/// The result is the raw generator set (all digit coefficients); canonicalize
/// with [`crate::groebner::buchberger`] before comparing.
pub fn frobenius_root(a: &Ideal, e: u32) -> Result<Ideal> {
    if e == 0 {
        return Ok(a.clone());
    }
    let mut gens = Vec::new();
    for g in a.generators() {
        for (_, c) in g.digit_decompose(e)? {
            gens.push(c);
        }
    }
    Ideal::new(a.ring(), gens)
}

/// `I_e(J · f^k, R)` without expanding `f^k`.
///
/// Peels one base-p digit of `k` per level: with `k = d + p k'`,
/// `I_1(J f^d (f^k')^p) = f^k' · I_1(J f^d)`, and `I_e = I_(e-1) ∘ I_1`.
/// Intermediate ideals are replaced by their reduced bases.
pub fn root_of_power_times(j: &Ideal, f: &Polynomial, k: u64, e: u32) -> Result<Ideal> {
    let p = f.ring().characteristic();
    let mut acc = j.clone();
    let mut k = k;
    for _ in 0..e {
        let digit = k % p;
        k /= p;
        let shifted = acc.product(&Ideal::principal(&f.pow(digit)?))?;
        acc = buchberger(&frobenius_root(&shifted, 1)?)?.to_ideal();
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    acc.product(&Ideal::principal(&f.pow(k)?))
}

/// Whether `I_(e1+e2)(a) = I_e2(I_e1(a))`.
pub fn root_compose_check(a: &Ideal, e1: u32, e2: u32) -> Result<bool> {
    let direct = buchberger(&frobenius_root(a, e1 + e2)?)?;
    let nested = buchberger(&frobenius_root(&frobenius_root(a, e1)?, e2)?)?;
    Ok(direct == nested)
}

/// The chain `I_1(x^(p-1)) ⊇ I_2(x^(p^2-1)) ⊇ ... ⊇ I_emax(x^(p^emax - 1))`.
#[derive(Debug, Clone)]
pub struct FrobeniusChainReport {
    pub x: Polynomial,
    pub e_max: u32,
    /// `levels[e - 1]` is the reduced basis of `I_e(x^(p^e - 1))`.
    pub levels: Vec<GroebnerBasis>,
    /// Least `e < e_max` with `I_e = I_(e+1) = ... = I_emax`.
    pub stabilization_index: Option<u32>,
    /// Every step `I_(e+1) ⊆ I_e` was confirmed.
    pub descending: bool,
}

impl FrobeniusChainReport {
    pub fn level(&self, e: u32) -> Option<&GroebnerBasis> {
        self.levels.get((e as usize).checked_sub(1)?)
    }
}

/// Least `e` in `1..len` such that all consecutive entries from `e` on are equal.
pub(crate) fn stabilization_index<T: PartialEq>(levels: &[T]) -> Option<u32> {
    if levels.len() < 2 {
        return None;
    }
    let mut start = levels.len() - 1;
    while start > 0 && levels[start - 1] == levels[start] {
        start -= 1;
    }
    (start < levels.len() - 1).then_some(start as u32 + 1)
}

/// Level `e` of the chain from level `e - 1`: `I_e(x^(p^e-1)) = I_1(x^(p-1) · I_(e-1)(x^(p^(e-1)-1)))`.
fn next_level(x_pm1: &Ideal, prev: &Ideal) -> Result<GroebnerBasis> {
    buchberger(&frobenius_root(&prev.product(x_pm1)?, 1)?)
}

/// Computes the chain for `1 ≤ e ≤ e_max` and detects stabilization.
pub fn descending_chain(x: &Polynomial, e_max: u32) -> Result<FrobeniusChainReport> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    if e_max == 0 {
        return Err(Error::InvalidArgument("e_max must be at least 1".into()));
    }
    let ring = x.ring();
    // q = p^e_max must stay representable
    ring.q(e_max)?;
    let p = ring.characteristic();
    let x_pm1 = Ideal::principal(&x.pow(p - 1)?);
    let mut levels: Vec<GroebnerBasis> = Vec::with_capacity(e_max as usize);
    let mut prev = Ideal::unit(ring);
    for _ in 1..=e_max {
        let gb = next_level(&x_pm1, &prev)?;
        prev = gb.to_ideal();
        levels.push(gb);
    }
    let mut descending = true;
    for w in levels.windows(2) {
        if !w[0].contains_ideal(&w[1].to_ideal())? {
            descending = false;
        }
    }
    Ok(FrobeniusChainReport {
        x: x.clone(),
        e_max,
        stabilization_index: stabilization_index(&levels),
        levels,
        descending,
    })
}

/// `I_e(x^(p^e - 1))` as a reduced basis, computed level by level.
pub fn chain_level(x: &Polynomial, e: u32) -> Result<GroebnerBasis> {
    let ring = x.ring();
    if e == 0 {
        return buchberger(&Ideal::unit(ring));
    }
    let p = ring.characteristic();
    let x_pm1 = Ideal::principal(&x.pow(p - 1)?);
    let mut prev = Ideal::unit(ring);
    let mut gb = buchberger(&prev)?;
    for _ in 1..=e {
        gb = next_level(&x_pm1, &prev)?;
        prev = gb.to_ideal();
    }
    Ok(gb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{ideal_equal, ideal_subset};
    use crate::parse::{parse_polynomial, parse_polynomial_list};
    use crate::ring::Ring;

    fn ideal(r: &Ring, s: &str) -> Ideal {
        Ideal::new(r, parse_polynomial_list(r, s).unwrap()).unwrap()
    }

    fn basis(a: &Ideal) -> Vec<String> {
        buchberger(a).unwrap().to_ideal().generator_strings()
    }

    #[test]
    fn root_examples() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        assert_eq!(basis(&frobenius_root(&ideal(&r, "x^2*y^2"), 1).unwrap()), vec!["x*y"]);
        assert_eq!(basis(&frobenius_root(&ideal(&r, "x^3 + x*y^2"), 1).unwrap()), vec!["x + y"]);
        assert_eq!(basis(&frobenius_root(&ideal(&r, "x, y"), 1).unwrap()), vec!["1"]);
        // (x+y)^2 contains x^3 + x y^2
        let a = ideal(&r, "x^3 + x*y^2");
        let root = frobenius_root(&a, 1).unwrap();
        assert!(ideal_subset(&a, &root.bracket_power(1).unwrap()).unwrap());
    }

    #[test]
    fn level_zero_and_zero_ideal() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let a = ideal(&r, "x^2 + y");
        assert_eq!(frobenius_root(&a, 0).unwrap().generator_strings(), a.generator_strings());
        assert!(frobenius_root(&Ideal::zero(&r), 2).unwrap().is_zero());
    }

    #[test]
    fn composition_examples() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        assert!(root_compose_check(&ideal(&r, "x^2*y^2"), 1, 1).unwrap());
        assert!(root_compose_check(&Ideal::unit(&r), 2, 1).unwrap());
        assert!(root_compose_check(&ideal(&r, "x^5*y + y^7, x^3 + x*y"), 1, 2).unwrap());
    }

    #[test]
    fn power_recursion_matches_direct_root() {
        let r = Ring::new(3, &["x", "y"]).unwrap();
        let f = parse_polynomial(&r, "x^2 + y^3 + x*y").unwrap();
        let j = ideal(&r, "x, y^2");
        for (k, e) in [(5u64, 1u32), (13, 2), (26, 2), (40, 3), (7, 3)] {
            let direct = frobenius_root(&j.product(&Ideal::principal(&f.pow(k).unwrap())).unwrap(), e).unwrap();
            let fast = root_of_power_times(&j, &f, k, e).unwrap();
            assert!(ideal_equal(&direct, &fast).unwrap(), "k={k} e={e}");
        }
    }

    #[test]
    fn chain_of_a_variable_is_constant() {
        for p in [2, 3, 5] {
            let r = Ring::new(p, &["x"]).unwrap();
            let rep = descending_chain(&Polynomial::var(&r, 0), 3).unwrap();
            assert!(rep.levels.iter().all(|g| g.is_unit_ideal()));
            assert_eq!(rep.stabilization_index, Some(1));
        }
    }

    #[test]
    fn chain_of_x2y_over_f2() {
        // x^(2(q-1)) y^(q-1) = x^q * x^(q-2) y^(q-1): every level is (x)
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let x = parse_polynomial(&r, "x^2*y").unwrap();
        let rep = descending_chain(&x, 4).unwrap();
        for e in 1..=4 {
            assert_eq!(rep.level(e).unwrap().to_ideal().generator_strings(), vec!["x"]);
        }
        assert_eq!(rep.stabilization_index, Some(1));
        assert!(descending_chain(&x, 1).unwrap().stabilization_index.is_none());
    }

    #[test]
    fn chain_levels_match_direct_roots() {
        let r = Ring::new(2, &["x", "y"]).unwrap();
        for s in ["x*y*(x+y)", "x^3", "x^2 + y^3", "x^2*y + x*y^3 + y^5"] {
            let x = parse_polynomial(&r, s).unwrap();
            let rep = descending_chain(&x, 4).unwrap();
            assert!(rep.descending);
            for e in 1..=4u32 {
                let q = r.q(e).unwrap();
                let direct = frobenius_root(&Ideal::principal(&x.pow(q - 1).unwrap()), e).unwrap();
                assert_eq!(&buchberger(&direct).unwrap(), rep.level(e).unwrap(), "{s} e={e}");
            }
        }
    }

    #[test]
    fn stabilization_index_helper() {
        assert_eq!(stabilization_index(&[1, 2, 2, 2]), Some(2));
        assert_eq!(stabilization_index(&[1, 1, 1]), Some(1));
        assert_eq!(stabilization_index(&[1, 2, 3]), None);
        assert_eq!(stabilization_index(&[1]), None);
    }
}
