use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::monomial::{Monomial, OrderKey};
use crate::ring::Ring;

/// A sparse polynomial over `F_p`.
///
/// Terms are kept strictly descending under the ring's monomial order and
/// never carry a zero coefficient.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

/// Accumulates terms in any order and emits them sorted.
pub(crate) struct TermAccumulator {
    ring: Ring,
    map: BTreeMap<OrderKey, (Monomial, u64)>,
}

impl TermAccumulator {
    pub(crate) fn new(ring: &Ring) -> Self {
        TermAccumulator { ring: ring.clone(), map: BTreeMap::new() }
    }

    pub(crate) fn add(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let key = self.ring.order().key(&m);
        let field = *self.ring.field();
        match self.map.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert((m, c));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(o.get().1, c);
                if s == 0 {
                    o.remove();
                } else {
                    o.get_mut().1 = s;
                }
            }
        }
    }

    pub(crate) fn finish(self) -> Polynomial {
        Polynomial { ring: self.ring, terms: self.map.into_values().rev().collect() }
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        let c = ring.field().from_i64(c);
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn term(ring: &Ring, m: Monomial, c: u64) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let c = ring.field().reduce(c);
        Polynomial { ring: ring.clone(), terms: if c == 0 { vec![] } else { vec![(m, c)] } }
    }

    pub fn monomial(ring: &Ring, m: Monomial) -> Self {
        Self::term(ring, m, 1)
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i))
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let mut acc = TermAccumulator::new(ring);
        for (m, c) in terms {
            acc.add(m, ring.field().reduce(c));
        }
        acc.finish()
    }

    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, u64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Polynomial { ring: ring.clone(), terms }
    }

    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u64)> {
        self.terms.first().map(|(m, c)| (m, *c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.terms.first().map_or(0, |t| t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Coefficient of `m` (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.binary_search_by(|(t, _)| self.ring.order().cmp(m, t)).map_or(0, |i| self.terms[i].1)
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field();
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect() }
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let f = self.ring.field();
        let c = f.reduce(c);
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    /// Scales so the leading coefficient is 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.ring.field().inv(self.leading_coeff()) {
            Some(inv) if inv != 1 => self.scale(inv),
            _ => self.clone(),
        }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let f = *self.ring.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let adj = |c: u64| if negate { f.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), adj(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a[i].1, adj(b[j].1));
                    if s != 0 {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), adj(*c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check(&other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check(&other.ring)?;
        Ok(self.merge(other, true))
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> Result<Polynomial> {
        let f = self.ring.field();
        let c = f.reduce(c);
        if c == 0 {
            return Ok(Polynomial::zero(&self.ring));
        }
        let bound = self.ring.exponent_bound();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, a) in &self.terms {
            terms.push((t.mul(m, bound)?, f.mul(*a, c)));
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check(&other.ring)?;
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        match small.terms.len() {
            0 => return Ok(Polynomial::zero(&self.ring)),
            1 => return big.mul_term(&small.terms[0].0, small.terms[0].1),
            _ => {}
        }
        let f = self.ring.field();
        let bound = self.ring.exponent_bound();
        let mut acc = TermAccumulator::new(&self.ring);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                acc.add(ma.mul(mb, bound)?, f.mul(*ca, *cb));
            }
        }
        Ok(acc.finish())
    }

    fn pow_small(&self, mut k: u64) -> Result<Polynomial> {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f^k`, assembled from the base-p digits of `k` as a product of Frobenius powers.
    pub fn pow(&self, k: u64) -> Result<Polynomial> {
        let p = self.ring.characteristic();
        let mut acc = Polynomial::one(&self.ring);
        let mut rest = k;
        let mut level = 0u32;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let factor = self.pow_small(digit)?.frobenius_power(level)?;
                acc = acc.try_mul(&factor)?;
            }
            rest /= p;
            level += 1;
        }
        Ok(acc)
    }

    /// `f^(p^e)`: exponents scaled by `p^e`; prime-field coefficients are fixed by Frobenius.
    pub fn frobenius_power(&self, e: u32) -> Result<Polynomial> {
        if e == 0 {
            return Ok(self.clone());
        }
        let q = self.ring.q(e)?;
        let bound = self.ring.exponent_bound();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.scale(q, bound)?, *c));
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    /// Writes `f = sum_mu c_mu^(p^e) * mu` with every basis monomial `mu` having
    /// exponents below `p^e`. Only nonzero coefficients are returned, sorted
    /// descending by basis monomial.
    pub fn digit_decompose(&self, e: u32) -> Result<Vec<(Monomial, Polynomial)>> {
        let q = self.ring.q(e)?;
        let order = self.ring.order();
        let mut groups: BTreeMap<OrderKey, (Monomial, Vec<(Monomial, u64)>)> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (quo, rem) = m.split_digits(q);
            groups.entry(order.key(&rem)).or_insert_with(|| (rem, Vec::new())).1.push((quo, *c));
        }
        Ok(groups.into_values().rev().map(|(mu, terms)| (mu, Polynomial::from_terms(&self.ring, terms))).collect())
    }

    /// Rewrites the polynomial into another ring with the same variables (e.g. a different order).
    pub fn to_ring(&self, ring: &Ring) -> Result<Polynomial> {
        if ring.vars() != self.ring.vars() || ring.field() != self.ring.field() {
            return Err(crate::Error::AmbientMismatch);
        }
        Ok(Polynomial::from_terms(ring, self.terms.iter().cloned()))
    }
}

pub(crate) fn fmt_monomial(ring: &Ring, m: &Monomial, f: &mut impl fmt::Write) -> fmt::Result {
    let mut first = true;
    for (i, &a) in m.exponents().iter().enumerate() {
        if a == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(&ring.vars()[i])?;
        if a > 1 {
            write!(f, "^{a}")?;
        }
    }
    if first {
        f.write_char('1')?;
    }
    Ok(())
}

/// Text form of a monomial in the polynomial syntax, e.g. `x^2*y`.
pub fn monomial_to_string(ring: &Ring, m: &Monomial) -> String {
    let mut s = String::new();
    fmt_monomial(ring, m, &mut s).expect("writing to a String");
    s
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if *c != 1 {
                    write!(f, "{c}*")?;
                }
                fmt_monomial(&self.ring, m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use proptest::prelude::*;

    fn ring(p: u64) -> Ring {
        Ring::new(p, &["x", "y"]).unwrap()
    }

    fn poly(r: &Ring, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn doubling_in_char_two_vanishes() {
        let r = ring(2);
        let f = poly(&r, "x+y");
        assert!(f.try_add(&f).unwrap().is_zero());
    }

    #[test]
    fn multiplicative_identity() {
        let r = ring(5);
        let f = poly(&r, "3*x^2*y + y^3 - 1");
        assert_eq!(f.try_mul(&Polynomial::one(&r)).unwrap(), f);
    }

    #[test]
    fn freshmans_dream() {
        let r = ring(2);
        let f = poly(&r, "x+y");
        assert_eq!(f.try_mul(&f).unwrap(), poly(&r, "x^2+y^2"));
        assert_eq!(f.frobenius_power(1).unwrap(), poly(&r, "x^2+y^2"));
    }

    #[test]
    fn frobenius_power_examples() {
        let r = ring(3);
        assert_eq!(poly(&r, "x^2*y").frobenius_power(1).unwrap(), poly(&r, "x^6*y^3"));
        let one = Polynomial::one(&r);
        for e in 0..4 {
            assert_eq!(one.frobenius_power(e).unwrap(), one);
        }
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = poly(&ring(2), "x");
        let b = poly(&ring(3), "x");
        assert_eq!(a.try_add(&b), Err(crate::Error::AmbientMismatch));
        assert_eq!(a.try_mul(&b), Err(crate::Error::AmbientMismatch));
    }

    #[test]
    fn digit_decomposition_examples() {
        let r = ring(2);
        let m = |s: &str| poly(&r, s).leading_monomial().unwrap().clone();
        assert_eq!(poly(&r, "x^2*y").digit_decompose(1).unwrap(), vec![(m("y"), poly(&r, "x"))]);
        assert_eq!(poly(&r, "x").digit_decompose(1).unwrap(), vec![(m("x"), Polynomial::one(&r))]);
        // x^3 + x*y^2 = (x+y)^2 * x in characteristic 2
        let expanded = poly(&r, "x+y").pow(2).unwrap().try_mul(&poly(&r, "x")).unwrap();
        assert_eq!(expanded, poly(&r, "x^3+x*y^2"));
        assert_eq!(poly(&r, "x^3+x*y^2").digit_decompose(1).unwrap(), vec![(m("x"), poly(&r, "x+y"))]);
    }

    #[test]
    fn exponent_bound_is_enforced() {
        let r = Ring::with_options(
            2,
            &["x"],
            crate::OrderKind::GrevLex,
            crate::Limits { exponent_bound: 100, ..Default::default() },
        )
        .unwrap();
        let x = Polynomial::var(&r, 0);
        assert!(x.frobenius_power(6).is_ok());
        assert_eq!(x.frobenius_power(7), Err(crate::Error::ExponentOverflow { bound: 100 }));
        assert!(x.pow(101).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let r = ring(7);
        assert_eq!(poly(&r, "x^2*y + 3*y^3 - 1").to_string(), "x^2*y + 3*y^3 + 6");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }

    fn arb_poly(p: u64) -> impl Strategy<Value = Polynomial> {
        let r = ring(p);
        proptest::collection::vec(((0u64..5, 0u64..5), 0u64..p), 0..6).prop_map(move |ts| {
            Polynomial::from_terms(&r, ts.into_iter().map(|((a, b), c)| (Monomial::new([a, b]), c)))
        })
    }

    fn reconstruct(f: &Polynomial, e: u32) -> Polynomial {
        let r = f.ring();
        let mut acc = Polynomial::zero(r);
        for (mu, c) in f.digit_decompose(e).unwrap() {
            let piece = c.frobenius_power(e).unwrap().mul_term(&mu, 1).unwrap();
            acc = acc.try_add(&piece).unwrap();
        }
        acc
    }

    proptest! {
        #[test]
        fn digit_reconstruction(f in arb_poly(3), e in 0u32..3) {
            prop_assert_eq!(reconstruct(&f, e), f);
        }

        #[test]
        fn digit_linearity_over_frobenius_image(f in arb_poly(2), g in arb_poly(2), e in 0u32..3) {
            let ge = g.frobenius_power(e).unwrap();
            let lhs = f.try_mul(&ge).unwrap().digit_decompose(e).unwrap();
            let rhs: Vec<_> = f
                .digit_decompose(e)
                .unwrap()
                .into_iter()
                .map(|(mu, c)| (mu, c.try_mul(&g).unwrap()))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn frobenius_composes(f in arb_poly(3), e1 in 0u32..3, e2 in 0u32..3) {
            let lhs = f.frobenius_power(e1 + e2).unwrap();
            let rhs = f.frobenius_power(e1).unwrap().frobenius_power(e2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pow_matches_repeated_multiplication(f in arb_poly(3), k in 0u64..12) {
            let mut acc = Polynomial::one(f.ring());
            for _ in 0..k {
                acc = acc.try_mul(&f).unwrap();
            }
            prop_assert_eq!(f.pow(k).unwrap(), acc);
        }

        #[test]
        fn ring_axioms(f in arb_poly(5), g in arb_poly(5), h in arb_poly(5)) {
            let fg = f.try_mul(&g).unwrap();
            prop_assert_eq!(&fg, &g.try_mul(&f).unwrap());
            let lhs = f.try_mul(&g.try_add(&h).unwrap()).unwrap();
            let rhs = fg.try_add(&f.try_mul(&h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(f.try_sub(&f).unwrap().is_zero());
        }
    }
}
