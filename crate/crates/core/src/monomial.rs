use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector of a monomial. Its length is the variable count of the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u64; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn new(exponents: impl IntoIterator<Item = u64>) -> Self {
        Monomial(exponents.into_iter().collect())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    #[inline]
    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| b - a).collect()))
    }

    pub fn mul(&self, other: &Monomial, bound: u64) -> Result<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            let s = a.checked_add(*b).filter(|&s| s <= bound).ok_or(Error::ExponentOverflow { bound })?;
            out.push(s);
        }
        Ok(Monomial(out))
    }

    /// Every exponent multiplied by `k`.
    pub fn scale(&self, k: u64, bound: u64) -> Result<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for a in self.0.iter() {
            let s = a.checked_mul(k).filter(|&s| s <= bound).ok_or(Error::ExponentOverflow { bound })?;
            out.push(s);
        }
        Ok(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Split into `(quotient, remainder)` under exponentwise division by `q`,
    /// so that `self = quotient^q * remainder` with every remainder exponent `< q`.
    pub fn split_digits(&self, q: u64) -> (Monomial, Monomial) {
        let quo = self.0.iter().map(|a| a / q).collect();
        let rem = self.0.iter().map(|a| a % q).collect();
        (Monomial(quo), Monomial(rem))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    GrevLex,
    Lex,
}

/// A monomial order together with a variable priority permutation.
/// `priority[0]` is the most significant variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder { kind, priority: (0..nvars).collect() }
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::GrevLex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; priority.len()];
        for &i in &priority {
            if i >= seen.len() || seen[i] {
                return Err(Error::InvalidArgument(format!("{priority:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &i in &self.priority {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GrevLex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &i in self.priority.iter().rev() {
                    match a.0[i].cmp(&b.0[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// A key whose lexicographic order agrees with this monomial order.
    pub fn key(&self, m: &Monomial) -> OrderKey {
        match self.kind {
            OrderKind::Lex => OrderKey(self.priority.iter().map(|&i| m.0[i]).collect()),
            OrderKind::GrevLex => {
                let mut k = SmallVec::with_capacity(m.0.len() + 1);
                k.push(m.degree());
                for &i in self.priority.iter().rev() {
                    k.push(u64::MAX - m.0[i]);
                }
                OrderKey(k)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey(SmallVec<[u64; 5]>);
