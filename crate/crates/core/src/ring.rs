use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{MonomialOrder, OrderKind};

/// Resource limits carried by a ring and honoured by every computation over it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest exponent any monomial may carry.
    pub exponent_bound: u64,
    /// Maximum number of S-pair reductions in one Buchberger run.
    pub spair_cap: u64,
    /// Maximum total degree of a critical pair that is actually reduced.
    pub max_degree: u64,
    /// Highest Frobenius level a stabilizing search may reach.
    pub max_level: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { exponent_bound: 1 << 32, spair_cap: 1_000_000, max_degree: 512, max_level: 16 }
    }
}

#[derive(Debug)]
struct RingData {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
    limits: Limits,
}

/// The polynomial ring `F_p[vars]` with a fixed monomial order.
///
/// Cloning is cheap. Two rings compare equal when field, variable names and
/// order agree; limits do not take part in the comparison.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars && self.0.order == other.0.order)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.0.field.characteristic(), self.0.vars.join(","))
    }
}

fn valid_name(v: &str) -> bool {
    let mut chars = v.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    /// Graded reverse lexicographic ring with default limits.
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S]) -> Result<Ring> {
        Self::with_options(p, vars, OrderKind::GrevLex, Limits::default())
    }

    pub fn with_options<S: AsRef<str>>(p: u64, vars: &[S], order: OrderKind, limits: Limits) -> Result<Ring> {
        let field = PrimeField::new(p)?;
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::InvalidArgument(format!("bad variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("duplicate variable {v}")));
            }
        }
        let order = MonomialOrder::new(order, vars.len());
        Ok(Ring(Arc::new(RingData { field, vars, order, limits })))
    }

    /// Same field and variables under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ring> {
        if order.priority().len() != self.nvars() {
            return Err(Error::InvalidArgument("order does not match the variable count".into()));
        }
        Ok(Ring(Arc::new(RingData { field: self.0.field, vars: self.0.vars.clone(), order, limits: self.0.limits })))
    }

    pub fn with_limits(&self, limits: Limits) -> Ring {
        Ring(Arc::new(RingData { field: self.0.field, vars: self.0.vars.clone(), order: self.0.order.clone(), limits }))
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.0.field
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.0.field.characteristic()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    #[inline]
    pub fn order(&self) -> &MonomialOrder {
        &self.0.order
    }

    #[inline]
    pub fn limits(&self) -> &Limits {
        &self.0.limits
    }

    #[inline]
    pub fn exponent_bound(&self) -> u64 {
        self.0.limits.exponent_bound
    }

    /// `p^e` checked against the exponent bound.
    pub fn q(&self, e: u32) -> Result<u64> {
        self.0.field.q(e, self.exponent_bound())
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub(crate) fn check(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }
}
