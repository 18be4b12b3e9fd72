//! Differential-operator certificates for `δ(1/x) = 1/x^p`.
//!
//! Over `R = F_p[x_1..x_n]` with `Q = p^(e+1)`, the operators in `D^(e+1)_R`
//! are exactly the `R^Q`-linear endomorphisms of `R`, and `R` is free over
//! `R^Q` on the monomials with exponents below `Q`. An operator is therefore
//! a table `mu -> δ(mu)`. Such a `δ` sends `x^(Q-1)` to `x^(Q-p)` exactly
//! when `δ(1/x) = 1/x^p` in `R_x`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frobroot::{chain_level, descending_chain, FrobeniusChainReport};
use crate::groebner::lift;
use crate::ideal::Ideal;
use crate::monomial::Monomial;
use crate::parse::parse_polynomial;
use crate::poly::{monomial_to_string, Polynomial};
use crate::ring::Ring;

/// An `R^Q`-linear operator given by its values on the free basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCertificate {
    pub x: Polynomial,
    /// `Q = p^level`.
    pub level: u32,
    /// Nonzero images `mu -> δ(mu)`, sorted descending by `mu`.
    pub images: Vec<(Monomial, Polynomial)>,
}

impl DeltaCertificate {
    pub fn ring(&self) -> &Ring {
        self.x.ring()
    }

    /// Applies the operator: `δ(sum c_mu^Q mu) = sum c_mu^Q δ(mu)`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        let ring = self.ring();
        let mut acc = Polynomial::zero(ring);
        for (mu, c) in f.digit_decompose(self.level)? {
            if let Some((_, img)) = self.images.iter().find(|(m, _)| *m == mu) {
                acc = acc.try_add(&c.frobenius_power(self.level)?.try_mul(img)?)?;
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let ring = self.ring();
        let images: Vec<Value> = self
            .images
            .iter()
            .map(|(mu, g)| json!({"basis": monomial_to_string(ring, mu), "image": g.to_string()}))
            .collect();
        json!({
            "p": ring.characteristic(),
            "vars": ring.vars(),
            "level": self.level,
            "x": self.x.to_string(),
            "images": images,
        })
    }

    /// Reads a certificate written by [`DeltaCertificate::to_json`].
    pub fn from_json(v: &Value) -> Result<DeltaCertificate> {
        let bad = |what: &str| Error::InvalidArgument(format!("certificate: missing or bad {what}"));
        let p = v["p"].as_u64().ok_or_else(|| bad("p"))?;
        let vars: Vec<String> = v["vars"]
            .as_array()
            .ok_or_else(|| bad("vars"))?
            .iter()
            .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("vars")))
            .collect::<Result<_>>()?;
        let level = v["level"].as_u64().ok_or_else(|| bad("level"))? as u32;
        let ring = Ring::new(p, &vars)?;
        let x = parse_polynomial(&ring, v["x"].as_str().ok_or_else(|| bad("x"))?)?;
        let mut images = Vec::new();
        for item in v["images"].as_array().ok_or_else(|| bad("images"))? {
            let mu = parse_polynomial(&ring, item["basis"].as_str().ok_or_else(|| bad("basis"))?)?;
            if !mu.is_monomial() || mu.leading_coeff() != 1 {
                return Err(bad("basis monomial"));
            }
            let img = parse_polynomial(&ring, item["image"].as_str().ok_or_else(|| bad("image"))?)?;
            images.push((mu.leading_monomial().expect("monomial").clone(), img));
        }
        let order = ring.order().clone();
        images.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Ok(DeltaCertificate { x, level, images })
    }
}

/// Builds `δ ∈ D^(e+1)` with `δ(x^(Q-1)) = x^(Q-p)`, `Q = p^(e+1)`, or `None`
/// when `x^(Q-p)` is outside `(I_(e+1)(x^(Q-1)))^[Q]`.
///
/// The images are the cofactors of `x^(Q-p)` against the generators
/// `c_mu^Q`, read off from the division quotients over the reduced basis.
pub fn construct_delta(x: &Polynomial, e: u32) -> Result<Option<DeltaCertificate>> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    let ring = x.ring();
    let p = ring.characteristic();
    let level = e + 1;
    let q = ring.q(level)?;
    let digits = x.pow(q - 1)?.digit_decompose(level)?;
    let gens = digits.iter().map(|(_, c)| c.frobenius_power(level)).collect::<Result<Vec<_>>>()?;
    let target = x.pow(q - p)?;
    let bracket = Ideal::new(ring, gens)?;
    let Some(cofactors) = lift(&target, &bracket)? else {
        return Ok(None);
    };
    let images = digits.into_iter().zip(cofactors).filter(|(_, g)| !g.is_zero()).map(|((mu, _), g)| (mu, g)).collect();
    Ok(Some(DeltaCertificate { x: x.clone(), level, images }))
}

/// Recomputes `sum c_mu^Q δ(mu)` for the digits of `x^(Q-1)` and compares with `x^(Q-p)`.
pub fn verify_delta(cert: &DeltaCertificate) -> Result<bool> {
    let ring = cert.ring();
    let q = ring.q(cert.level)?;
    let p = ring.characteristic();
    if cert.level == 0 || cert.x.is_zero() {
        return Ok(false);
    }
    for (mu, g) in &cert.images {
        if mu.exponents().iter().any(|&a| a >= q) || g.ring() != ring {
            return Ok(false);
        }
    }
    let lhs = cert.apply(&cert.x.pow(q - 1)?)?;
    Ok(lhs == cert.x.pow(q - p)?)
}

/// Whether `(R, x)` is F-pure at level `e`: `I_e(x^(p^e - 1)) = (1)`.
pub fn is_fpure_pair(x: &Polynomial, e: u32) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("e must be at least 1".into()));
    }
    Ok(chain_level(x, e)?.is_unit_ideal())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conclusion {
    /// `R_x = D_R · 1/x`, witnessed by a verified certificate at `certificate_level`.
    Generated { stabilization_index: u32, certificate_level: u32 },
    /// The chain did not stabilize within the horizon; nothing is asserted.
    Unstabilized { e_max: u32 },
    /// The chain stabilized but no verified certificate was obtained.
    CertificateFailed { stabilization_index: u32 },
}

impl Conclusion {
    pub fn message(&self) -> String {
        match self {
            Conclusion::Generated { certificate_level, .. } => {
                format!("R_x generated by 1/x, witnessed at level {certificate_level}")
            }
            Conclusion::Unstabilized { e_max } => {
                format!("unknown: chain not stabilized within e_max = {e_max}")
            }
            Conclusion::CertificateFailed { stabilization_index } => {
                format!("unknown: no verified certificate at stabilization index {stabilization_index}")
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Conclusion::Generated { .. })
    }
}

#[derive(Debug, Clone)]
pub struct GenerationReport {
    pub chain: FrobeniusChainReport,
    pub delta: Option<DeltaCertificate>,
    pub conclusion: Conclusion,
}

/// Runs the chain up to `e_max`; on stabilization at `e*` builds and verifies
/// a certificate at level `e* + 1`.
pub fn generation_report(x: &Polynomial, e_max: u32) -> Result<GenerationReport> {
    let chain = descending_chain(x, e_max)?;
    let Some(estar) = chain.stabilization_index else {
        return Ok(GenerationReport { chain, delta: None, conclusion: Conclusion::Unstabilized { e_max } });
    };
    let delta = construct_delta(x, estar)?;
    let conclusion = match &delta {
        Some(cert) if verify_delta(cert)? => {
            Conclusion::Generated { stabilization_index: estar, certificate_level: cert.level }
        }
        _ => Conclusion::CertificateFailed { stabilization_index: estar },
    };
    Ok(GenerationReport { chain, delta, conclusion })
}
