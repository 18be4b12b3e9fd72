use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::Ring;

/// A finitely generated ideal, kept as an explicit generator list.
///
/// Generator lists are a presentation, not a canonical form: decide equality
/// with [`crate::groebner::ideal_equal`].
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
}

/// Generator-level ideal operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Power(u64),
}

fn dedup_monic(gens: impl IntoIterator<Item = Polynomial>) -> Vec<Polynomial> {
    let mut seen: BTreeSet<Vec<(Monomial, u64)>> = BTreeSet::new();
    let mut out = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let g = g.monic();
        if seen.insert(g.terms().to_vec()) {
            out.push(g);
        }
    }
    out
}

impl Ideal {
    /// Builds an ideal from generators; zero generators are dropped and an
    /// empty list becomes the zero ideal `(0)`.
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            ring.check(g.ring())?;
        }
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Self::from_nonzero(ring, gens))
    }

    fn from_nonzero(ring: &Ring, gens: Vec<Polynomial>) -> Ideal {
        let gens = if gens.is_empty() { vec![Polynomial::zero(ring)] } else { gens };
        Ideal { ring: ring.clone(), gens }
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Self::from_nonzero(ring, vec![])
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Self::principal(&Polynomial::one(ring))
    }

    pub fn principal(f: &Polynomial) -> Ideal {
        Self::from_nonzero(f.ring(), if f.is_zero() { vec![] } else { vec![f.clone()] })
    }

    /// The homogeneous maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(ring: &Ring) -> Ideal {
        Self::from_nonzero(ring, (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    /// True when the presentation has a single generator.
    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    /// Largest total degree among the generators (0 for the zero ideal).
    pub fn max_generator_degree(&self) -> u64 {
        self.gens.iter().filter_map(|g| g.total_degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// True when every generator lies in `(x_1, ..., x_n)`.
    pub fn inside_maximal(&self) -> bool {
        self.gens.iter().all(|g| g.terms().iter().all(|(m, _)| !m.is_one()))
    }

    pub fn combine(&self, other: Option<&Ideal>, op: IdealOp) -> Result<Ideal> {
        match (op, other) {
            (IdealOp::Sum, Some(b)) => self.sum(b),
            (IdealOp::Product, Some(b)) => self.product(b),
            (IdealOp::Power(k), _) => self.power(k),
            _ => Err(Error::InvalidArgument("sum and product need a second ideal".into())),
        }
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check(&other.ring)?;
        Ok(Self::from_nonzero(&self.ring, dedup_monic(self.gens.iter().chain(other.gens.iter()).cloned())))
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check(&other.ring)?;
        let mut out = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                out.push(a.try_mul(b)?);
            }
        }
        Ok(Self::from_nonzero(&self.ring, dedup_monic(out)))
    }

    /// `a^k` with `a^0 = (1)`; generated by all k-fold products of generators.
    pub fn power(&self, k: u64) -> Result<Ideal> {
        if k == 0 {
            return Ok(Ideal::unit(&self.ring));
        }
        if self.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        if self.is_principal() {
            return Ok(Self::principal(&self.gens[0].pow(k)?));
        }
        let base = Self::from_nonzero(&self.ring, dedup_monic(self.gens.iter().cloned()));
        let mut acc = base.clone();
        for _ in 1..k {
            acc = acc.product(&base)?;
        }
        Ok(acc)
    }

    /// `a^[p^e]`, generated by the `p^e`-th powers of the stored generators.
    pub fn bracket_power(&self, e: u32) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.frobenius_power(e)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_nonzero(&self.ring, gens.into_iter().filter(|g| !g.is_zero()).collect()))
    }

    /// Moves the ideal into another ring with the same variables.
    pub fn to_ring(&self, ring: &Ring) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.to_ring(ring)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, gens)
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
