//! Generalized test ideals `τ(a^t)`, F-thresholds and F-jumping exponents.
//!
//! Over a polynomial ring `τ(a^t) = I_e(a^⌈t p^e⌉)` for all large `e`; the
//! sequence in `e` is ascending, so it is evaluated until it stops moving.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frobroot::{frobenius_root, root_of_power_times};
use crate::groebner::{buchberger, ideal_member, GroebnerBasis};
use crate::ideal::Ideal;

/// A nonnegative rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentRational {
    num: u64,
    den: u64,
}

impl ExponentRational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        let g = num.gcd(&den);
        Ok(ExponentRational { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Self {
        ExponentRational { num: n, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `⌈t · q⌉`.
    pub fn ceil_times(&self, q: u64) -> Result<u64> {
        let v = (self.num as u128 * q as u128).div_ceil(self.den as u128);
        u64::try_from(v).map_err(|_| Error::ExponentOverflow { bound: u64::MAX })
    }

    /// `⌊t · q⌋`.
    pub fn floor_times(&self, q: u64) -> Result<u64> {
        let v = self.num as u128 * q as u128 / self.den as u128;
        u64::try_from(v).map_err(|_| Error::ExponentOverflow { bound: u64::MAX })
    }

    /// `e` with `den = p^e`, if the denominator is a power of `p`.
    pub fn p_power_level(&self, p: u64) -> Option<u32> {
        let mut d = self.den;
        let mut e = 0;
        while d.is_multiple_of(p) {
            d /= p;
            e += 1;
        }
        (d == 1).then_some(e)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for ExponentRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for ExponentRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ExponentRational {
    type Err = Error;

    /// Accepts `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a rational exponent: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse().map_err(|_| bad())?;
                let d = d.trim().parse().map_err(|_| bad())?;
                Self::new(n, d)
            }
            None => Ok(Self::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// A computed `τ(a^t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestIdeal {
    pub basis: GroebnerBasis,
    /// First level of the stable run.
    pub level: u32,
    /// The denominator of `t` was not a power of `p`, so stabilization was
    /// detected by the triple-equality rule rather than proved.
    pub heuristic: bool,
}

/// `a^n` presented by a reduced basis, built by square-and-multiply.
fn reduced_power(a: &Ideal, n: u64) -> Result<Ideal> {
    if a.is_principal() {
        return Ok(Ideal::principal(&a.generators()[0].pow(n)?));
    }
    let base = buchberger(a)?.to_ideal();
    let mut acc = Ideal::unit(a.ring());
    for bit in (0..64 - n.leading_zeros()).rev() {
        acc = buchberger(&acc.product(&acc)?)?.to_ideal();
        if (n >> bit) & 1 == 1 {
            acc = buchberger(&acc.product(&base)?)?.to_ideal();
        }
    }
    Ok(acc)
}

/// `I_e(a^n)` as a reduced basis.
pub fn root_of_power(a: &Ideal, n: u64, e: u32) -> Result<GroebnerBasis> {
    let ring = a.ring();
    if a.is_principal() {
        let f = &a.generators()[0];
        return buchberger(&root_of_power_times(&Ideal::unit(ring), f, n, e)?);
    }
    buchberger(&frobenius_root(&reduced_power(a, n)?, e)?)
}

/// `τ(a^t)`.
///
/// Levels start at the least `e0` with `p^e0 ≥ den(t)`. A p-power denominator
/// needs one equality of consecutive levels; any other denominator needs
/// three in a row. Fails with `Unstabilized` past the ring's `max_level`.
pub fn test_ideal(a: &Ideal, t: ExponentRational) -> Result<TestIdeal> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("test ideal of the zero ideal".into()));
    }
    let ring = a.ring();
    if t.is_zero() {
        return Ok(TestIdeal { basis: buchberger(&Ideal::unit(ring))?, level: 0, heuristic: false });
    }
    let p = ring.characteristic();
    let max_level = ring.limits().max_level;
    let (e0, needed, heuristic) = match t.p_power_level(p) {
        Some(e) => (e, 1, false),
        None => {
            let mut e = 0;
            while ring.q(e)? < t.denominator() {
                e += 1;
            }
            (e, 3, true)
        }
    };
    if e0 > max_level {
        return Err(Error::Unstabilized { horizon: max_level });
    }
    let level = |e: u32| -> Result<GroebnerBasis> { root_of_power(a, t.ceil_times(ring.q(e)?)?, e) };
    let mut start = e0;
    let mut prev = level(e0)?;
    if prev.is_unit_ideal() {
        // the chain is ascending, nothing lies above (1)
        return Ok(TestIdeal { basis: prev, level: e0, heuristic });
    }
    let mut run = 0;
    for e in e0 + 1..=max_level {
        let cur = level(e)?;
        if cur == prev {
            run += 1;
            if run >= needed {
                return Ok(TestIdeal { basis: prev, level: start, heuristic });
            }
        } else {
            run = 0;
            start = e;
            if cur.is_unit_ideal() {
                return Ok(TestIdeal { basis: cur, level: e, heuristic });
            }
        }
        prev = cur;
    }
    Err(Error::Unstabilized { horizon: max_level })
}

/// `ν(q)`: the largest `r` with `a^r ⊄ m^[q]`, `q = p^e`, `m = (x_1..x_n)`.
pub fn nu(a: &Ideal, e: u32) -> Result<u64> {
    if a.is_zero() || !a.inside_maximal() {
        return Err(Error::InvalidArgument("nu needs a nonzero ideal inside (x_1..x_n)".into()));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("e must be at least 1".into()));
    }
    let ring = a.ring();
    let q = ring.q(e)?;
    let frob = Ideal::maximal(ring).bracket_power(e)?;
    let frob_gb = buchberger(&frob)?;
    let outside = |r: u64| -> Result<bool> {
        if a.is_principal() {
            let g = a.generators()[0].pow(r)?;
            return Ok(ideal_member(&g, &frob)?.is_none());
        }
        let power = reduced_power(a, r)?;
        Ok(!frob_gb.contains_ideal(&power)?)
    };
    // a^r ⊆ m^[q] once r > n(q-1); outside(0) holds
    let (mut lo, mut hi) = (0u64, ring.nvars() as u64 * (q - 1) + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if outside(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `(ν(q)/q, (ν(q)+1)/q]` with `q = p^e_max`; contains the F-pure threshold.
pub fn fpt_interval(a: &Ideal, e_max: u32) -> Result<(ExponentRational, ExponentRational)> {
    let q = a.ring().q(e_max)?;
    let v = nu(a, e_max)?;
    Ok((ExponentRational::new(v, q)?, ExponentRational::new(v + 1, q)?))
}

/// Every reduced-basis generator of `basis` has degree at most `t·d + r`.
pub fn degree_bound_holds(d: u64, t: ExponentRational, basis: &GroebnerBasis, r: u64) -> bool {
    // deg ≤ num·d/den + r  ⇔  deg·den ≤ num·d + r·den
    let rhs = t.numerator() as u128 * d as u128 + r as u128 * t.denominator() as u128;
    basis.elements().iter().all(|g| g.total_degree().unwrap_or(0) as u128 * t.denominator() as u128 <= rhs)
}

/// `τ(a^t)` is generated in degrees at most `t·d + r`, `d` the largest generator degree of `a`.
pub fn degree_bound_check(a: &Ideal, t: ExponentRational, r: u64) -> Result<bool> {
    let tau = test_ideal(a, t)?;
    Ok(degree_bound_holds(a.max_generator_degree(), t, &tau.basis, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpSearch {
    /// Evaluate every grid point.
    Exhaustive,
    /// Bisect between grid points with different values; relies on
    /// monotonicity in `t`.
    Bisect,
}

/// `τ` is constant on the closed grid range `[from, to]`.
#[derive(Debug, Clone)]
pub struct Plateau {
    pub from: ExponentRational,
    pub to: ExponentRational,
    pub tau: GroebnerBasis,
}

/// An F-jumping exponent lies in `(lo, hi]`.
#[derive(Debug, Clone)]
pub struct Jump {
    pub lo: ExponentRational,
    pub hi: ExponentRational,
    pub left: GroebnerBasis,
    pub right: GroebnerBasis,
}

/// Comparison of `τ` at a plateau's left end and at an interior sample.
#[derive(Debug, Clone)]
pub struct MidpointCheck {
    pub plateau: usize,
    pub sample: ExponentRational,
    pub agrees: bool,
}

/// Where `p · (lo, hi]` lands for a reported jump interval.
#[derive(Debug, Clone)]
pub struct ScalingEvidence {
    pub jump: usize,
    pub scaled_lo: ExponentRational,
    pub scaled_hi: ExponentRational,
    /// The scaled interval lies within the search range.
    pub in_range: bool,
    /// Some reported jump interval meets the scaled interval.
    pub meets_reported_jump: bool,
}

#[derive(Debug, Clone)]
pub struct JumpReport {
    pub ideal: Ideal,
    pub bound: ExponentRational,
    pub e_max: u32,
    /// Grid spacing is `1/resolution`.
    pub resolution: u64,
    pub plateaus: Vec<Plateau>,
    pub jumps: Vec<Jump>,
    pub midpoint_checks: Vec<MidpointCheck>,
    pub scaling_evidence: Vec<ScalingEvidence>,
    /// Some evaluation relied on the triple-equality rule.
    pub heuristic: bool,
}

impl JumpReport {
    pub fn plateaus_constant(&self) -> bool {
        self.midpoint_checks.iter().all(|c| c.agrees)
    }

    pub fn to_json(&self) -> Value {
        let ring = self.ideal.ring();
        let strings = |gb: &GroebnerBasis| -> Vec<String> { gb.elements().iter().map(|g| g.to_string()).collect() };
        json!({
            "p": ring.characteristic(),
            "vars": ring.vars(),
            "generators": self.ideal.generator_strings(),
            "T": self.bound.to_string(),
            "e_max": self.e_max,
            "heuristic": self.heuristic,
            "plateaus": self.plateaus.iter().map(|pl| json!({
                "from": pl.from.to_string(),
                "to": pl.to.to_string(),
                "tau_generators": strings(&pl.tau),
            })).collect::<Vec<_>>(),
            "jumps": self.jumps.iter().map(|j| json!({
                "interval_lo": j.lo.to_string(),
                "interval_hi": j.hi.to_string(),
            })).collect::<Vec<_>>(),
            "midpoint_checks": self.midpoint_checks.iter().map(|c| json!({
                "plateau": c.plateau,
                "sample": c.sample.to_string(),
                "agrees": c.agrees,
            })).collect::<Vec<_>>(),
            "p_scaling_evidence": self.scaling_evidence.iter().map(|s| json!({
                "jump": s.jump,
                "scaled_lo": s.scaled_lo.to_string(),
                "scaled_hi": s.scaled_hi.to_string(),
                "in_range": s.in_range,
                "meets_reported_jump": s.meets_reported_jump,
            })).collect::<Vec<_>>(),
        })
    }
}

struct Grid<'a> {
    a: &'a Ideal,
    q: u64,
    values: BTreeMap<u64, GroebnerBasis>,
    heuristic: bool,
}

impl Grid<'_> {
    fn at(&mut self, k: u64) -> Result<GroebnerBasis> {
        if let Some(v) = self.values.get(&k) {
            return Ok(v.clone());
        }
        let tau = test_ideal(self.a, ExponentRational::new(k, self.q)?)?;
        self.heuristic |= tau.heuristic;
        self.values.insert(k, tau.basis.clone());
        Ok(tau.basis)
    }

    fn bisect(&mut self, lo: u64, hi: u64) -> Result<()> {
        if hi - lo <= 1 {
            return Ok(());
        }
        if self.at(lo)? == self.at(hi)? {
            return Ok(());
        }
        let mid = lo + (hi - lo) / 2;
        self.at(mid)?;
        self.bisect(lo, mid)?;
        self.bisect(mid, hi)
    }
}

/// Evaluates `τ(a^(k/q))`, `q = p^e_max`, for `k = 0..⌈T q⌉` and reports the
/// strict drops as intervals `((k-1)/q, k/q]`.
pub fn jumping_exponents(a: &Ideal, bound: ExponentRational, e_max: u32) -> Result<JumpReport> {
    jumping_exponents_with(a, bound, e_max, JumpSearch::Bisect)
}

pub fn jumping_exponents_with(
    a: &Ideal,
    bound: ExponentRational,
    e_max: u32,
    search: JumpSearch,
) -> Result<JumpReport> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("jumps of the zero ideal".into()));
    }
    if bound.is_zero() {
        return Err(Error::InvalidArgument("T must be positive".into()));
    }
    let ring = a.ring();
    let p = ring.characteristic();
    let q = ring.q(e_max)?;
    let top = bound.ceil_times(q)?;
    let mut grid = Grid { a, q, values: BTreeMap::new(), heuristic: false };
    match search {
        JumpSearch::Exhaustive => {
            for k in 0..=top {
                grid.at(k)?;
            }
        }
        JumpSearch::Bisect => grid.bisect(0, top)?,
    }

    // between two evaluated points with equal values everything is equal
    let points: Vec<(u64, GroebnerBasis)> = grid.values.iter().map(|(k, v)| (*k, v.clone())).collect();
    let r = |k: u64| ExponentRational::new(k, q);
    let mut plateaus = Vec::new();
    let mut jumps = Vec::new();
    let mut start = 0usize;
    for i in 1..=points.len() {
        if i == points.len() || points[i].1 != points[start].1 {
            plateaus.push(Plateau { from: r(points[start].0)?, to: r(points[i - 1].0)?, tau: points[start].1.clone() });
            if i < points.len() {
                debug_assert_eq!(points[i - 1].0 + 1, points[i].0);
                jumps.push(Jump {
                    lo: r(points[i - 1].0)?,
                    hi: r(points[i].0)?,
                    left: points[i - 1].1.clone(),
                    right: points[i].1.clone(),
                });
                start = i;
            }
        }
    }

    let mut midpoint_checks = Vec::new();
    for (idx, pl) in plateaus.iter().enumerate() {
        let k1 = points.iter().find(|(k, _)| r(*k).map(|x| x == pl.from).unwrap_or(false)).expect("grid").0;
        let k2 = pl.to.numerator() * (q / pl.to.denominator());
        // interior sample on the next finer grid, rounded down for odd p
        let fine = (k1 + k2) * p / 2;
        let sample = ExponentRational::new(fine, q * p)?;
        if sample.is_zero() {
            continue;
        }
        let tau = test_ideal(a, sample)?;
        grid.heuristic |= tau.heuristic;
        midpoint_checks.push(MidpointCheck { plateau: idx, sample, agrees: tau.basis == pl.tau });
    }

    let mut scaling_evidence = Vec::new();
    for (idx, j) in jumps.iter().enumerate() {
        let scaled_lo = ExponentRational::new(j.lo.numerator() * p, j.lo.denominator())?;
        let scaled_hi = ExponentRational::new(j.hi.numerator() * p, j.hi.denominator())?;
        let in_range = scaled_hi <= bound;
        let meets_reported_jump = jumps.iter().any(|o| o.lo < scaled_hi && scaled_lo < o.hi);
        scaling_evidence.push(ScalingEvidence { jump: idx, scaled_lo, scaled_hi, in_range, meets_reported_jump });
    }

    Ok(JumpReport {
        ideal: a.clone(),
        bound,
        e_max,
        resolution: q,
        plateaus,
        jumps,
        midpoint_checks,
        scaling_evidence,
        heuristic: grid.heuristic,
    })
}
