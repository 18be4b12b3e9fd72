//! Numerical semigroups, their graded fractional ideals, and the Frobenius
//! pushforward of monomial curve rings `k[t^s : s ∈ S]`.
//!
//! Exponents are integers. A module over `R^{1/q}` or a summand of it is
//! recorded after multiplying all exponents by `q`, so it becomes a module
//! over `qS`; the factor `q` is the module's `scale`.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::frobroot::stabilization_index;

/// `S = ⟨n_1, ..., n_r⟩ ⊆ Z_{≥0}`, normalized to gcd 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// gcd of the input generators, divided out.
    scaling: u64,
    conductor: u64,
    gaps: Vec<u64>,
}

/// Sieves the semigroup; the conductor is one past the last gap.
pub fn build_semigroup(gens: &[u64]) -> Result<NumericalSemigroup> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("semigroup needs at least one generator".into()));
    }
    if gens.contains(&0) {
        return Err(Error::InvalidArgument("semigroup generators must be positive".into()));
    }
    let scaling = gens.iter().fold(0u64, |g, &n| g.gcd(&n));
    let mut generators: Vec<u64> = gens.iter().map(|n| n / scaling).collect();
    generators.sort_unstable();
    generators.dedup();
    let n1 = generators[0] as usize;
    let mut member = vec![true];
    let mut run = 1;
    // n1 consecutive members force every later integer in
    while run < n1 {
        let n = member.len();
        let m = generators.iter().any(|&g| (g as usize) <= n && member[n - g as usize]);
        member.push(m);
        run = if m { run + 1 } else { 0 };
    }
    let gaps: Vec<u64> = (0..member.len() as u64).filter(|&n| !member[n as usize]).collect();
    let conductor = gaps.last().map_or(0, |g| g + 1);
    Ok(NumericalSemigroup { generators, scaling, conductor, gaps })
}

impl NumericalSemigroup {
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// The gcd removed from the input generators.
    pub fn scaling(&self) -> u64 {
        self.scaling
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    /// Least positive element.
    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= 0 && (n as u64 >= self.conductor || self.gaps.binary_search(&(n as u64)).is_err())
    }

    /// Beyond `lo + span()` an `S`-module with least element `lo` has no generators.
    fn span(&self) -> i64 {
        (self.conductor + self.multiplicity()) as i64
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(u64::to_string).collect();
        write!(f, "<{}>", g.join(","))
    }
}

/// `gens + scale·S ⊆ Z`, a graded module over `k[t^(scale·s)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracIdeal {
    semigroup: NumericalSemigroup,
    scale: u64,
    /// Minimal, ascending.
    gens: Vec<i64>,
}

impl FracIdeal {
    pub fn new(s: &NumericalSemigroup, scale: u64, gens: &[i64]) -> Result<FracIdeal> {
        if scale == 0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        if gens.is_empty() {
            return Err(Error::InvalidArgument("fractional ideal needs a generator".into()));
        }
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(Self::minimal(s, scale, sorted))
    }

    /// `R` itself: generated by 0 at scale 1.
    pub fn ring(s: &NumericalSemigroup) -> FracIdeal {
        FracIdeal { semigroup: s.clone(), scale: 1, gens: vec![0] }
    }

    /// `Z_{≥0}` at scale 1, generated by `0, ..., c-1`.
    pub fn normalization(s: &NumericalSemigroup) -> FracIdeal {
        let top = s.conductor().max(1) as i64;
        Self::minimal(s, 1, (0..top).collect())
    }

    /// Greedy minimal generators from an ascending list of members.
    fn minimal(s: &NumericalSemigroup, scale: u64, ascending: Vec<i64>) -> FracIdeal {
        let mut out = FracIdeal { semigroup: s.clone(), scale, gens: Vec::new() };
        for z in ascending {
            if !out.contains(z) {
                out.gens.push(z);
            }
        }
        out
    }

    pub fn semigroup(&self) -> &NumericalSemigroup {
        &self.semigroup
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn generators(&self) -> &[i64] {
        &self.gens
    }

    pub fn min(&self) -> i64 {
        self.gens[0]
    }

    pub fn contains(&self, z: i64) -> bool {
        let s = self.scale as i64;
        self.gens.iter().any(|&g| z >= g && (z - g) % s == 0 && self.semigroup.contains((z - g) / s))
    }

    /// Above this every residue class met by the module is full.
    pub fn stable_bound(&self) -> i64 {
        self.gens.last().copied().unwrap_or(0) + (self.scale * self.semigroup.conductor()) as i64
    }

    pub fn translate(&self, d: i64) -> FracIdeal {
        FracIdeal {
            semigroup: self.semigroup.clone(),
            scale: self.scale,
            gens: self.gens.iter().map(|g| g + d).collect(),
        }
    }

    /// The image under `z ↦ k z`, a module over `k·scale·S`.
    pub fn scaled(&self, k: u64) -> FracIdeal {
        FracIdeal {
            semigroup: self.semigroup.clone(),
            scale: self.scale * k,
            gens: self.gens.iter().map(|g| g * k as i64).collect(),
        }
    }

    /// Inverse of [`FracIdeal::scaled`]; every generator and the scale must be divisible by `k`.
    pub fn unscaled(&self, k: u64) -> Result<FracIdeal> {
        let ki = k as i64;
        if !self.scale.is_multiple_of(k) || self.gens.iter().any(|g| g % ki != 0) {
            return Err(Error::InvalidArgument(format!("module is not divisible by {k}")));
        }
        Ok(FracIdeal {
            semigroup: self.semigroup.clone(),
            scale: self.scale / k,
            gens: self.gens.iter().map(|g| g / ki).collect(),
        })
    }

    /// `self ⊆ other` (same semigroup and scale).
    pub fn is_subset(&self, other: &FracIdeal) -> bool {
        self.gens.iter().all(|&g| other.contains(g))
    }

    /// Members of `[lo, hi)`.
    pub fn members_in(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..hi).filter(|&z| self.contains(z)).collect()
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", g.join(","))?;
        if self.scale != 1 {
            write!(f, "/{}", self.scale)?;
        }
        Ok(())
    }
}

/// Parses `{a,b,...}` (braces optional) into integers.
pub fn parse_generator_set(text: &str) -> Result<Vec<i64>> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidArgument(format!("not an integer: {t:?}"))))
        .collect()
}

/// `Hom(I, J) = {z : z + I ⊆ J}`.
///
/// Solved one residue class mod `scale` at a time; within a class the
/// condition is an intersection of translates of one-variable `S`-modules.
pub fn frac_hom(i: &FracIdeal, j: &FracIdeal) -> Result<FracIdeal> {
    if i.semigroup != j.semigroup || i.scale != j.scale {
        return Err(Error::InvalidArgument("Hom needs modules over the same semigroup and scale".into()));
    }
    let s = i.scale as i64;
    let sg = &i.semigroup;
    // least u with rho + s·u in J, per residue rho
    let least_in_class =
        |rho: i64| -> Option<i64> { j.gens.iter().filter(|g| g.rem_euclid(s) == rho).map(|g| (g - rho) / s).min() };
    let mut members = Vec::new();
    'class: for rho in 0..s {
        let (mut lower, mut upper) = (i64::MIN, i64::MIN);
        for &g in &i.gens {
            let target = (rho + g).rem_euclid(s);
            let offset = (rho + g - target) / s;
            let Some(m) = least_in_class(target) else {
                continue 'class;
            };
            lower = lower.max(m - offset);
            upper = upper.max(m - offset + sg.conductor() as i64);
        }
        for u in lower..upper + sg.span() {
            let z = rho + s * u;
            if i.gens.iter().all(|&g| j.contains(z + g)) {
                members.push(z);
            }
        }
    }
    if members.is_empty() {
        return Err(Error::InvalidArgument("Hom is zero".into()));
    }
    members.sort_unstable();
    Ok(FracIdeal::minimal(sg, i.scale, members))
}

/// One summand `⊕_{v ∈ S_i} R t^{v/q}` of `R^{1/q}`.
#[derive(Debug, Clone)]
pub struct ResidueClass {
    pub residue: u64,
    /// `r_i`, the least element of `S` congruent to `i`; `φ_i(1) = t^{r_i/q}`.
    pub least: u64,
    /// `S_i` as a module over `qS`.
    pub summand: FracIdeal,
    /// `S_i = r_i + q·Z_{≥0}`, i.e. `φ_i` is an isomorphism onto the summand.
    pub isomorphic: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct FFRTDecomposition {
    pub semigroup: NumericalSemigroup,
    pub q: u64,
    pub classes: Vec<ResidueClass>,
    /// `Σ_{j<c} R t^j`, the common summand when `q ≥ c`.
    pub module: FracIdeal,
    /// The classes partition `S` up to `check_bound`.
    pub partition_ok: bool,
    pub check_bound: i64,
}

impl FFRTDecomposition {
    /// `R^{1/q} ≅ M^{⊕q}` was verified: `q ≥ c` and every class is isomorphic.
    pub fn free_over_module(&self) -> bool {
        self.q >= self.semigroup.conductor() && self.classes.iter().all(|c| c.isomorphic == Some(true))
    }

    pub fn least_elements(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.least).collect()
    }
}

/// `S_i` as a module over `qS`.
fn residue_summand(s: &NumericalSemigroup, q: u64, i: u64) -> (u64, FracIdeal) {
    let qi = q as i64;
    let least = (i..).step_by(q as usize).find(|&z| s.contains(z as i64)).expect("S is cofinite");
    let hi = least as i64 + qi * s.span();
    let members: Vec<i64> = (least as i64..hi).step_by(q as usize).filter(|&z| s.contains(z)).collect();
    (least, FracIdeal::minimal(s, q, members))
}

/// Splits `R^{1/q}` by residues mod `q` and, for `q ≥ c`, checks each class
/// against `r_i + q·Z_{≥0}`.
pub fn ffrt_decompose(s: &NumericalSemigroup, q: u64) -> Result<FFRTDecomposition> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let module = FracIdeal::normalization(s);
    let scaled = module.scaled(q);
    let mut classes = Vec::with_capacity(q as usize);
    let mut check_bound = 0;
    for i in 0..q {
        let (least, summand) = residue_summand(s, q, i);
        check_bound = check_bound.max(summand.gens.last().copied().unwrap_or(0));
        classes.push(ResidueClass { residue: i, least, summand, isomorphic: None });
    }
    check_bound += (s.conductor() + q) as i64;

    let partition_ok = (0..check_bound).all(|z| {
        let hits = classes.iter().filter(|c| c.summand.contains(z)).count();
        hits == usize::from(s.contains(z)) && (hits == 0 || classes[(z as u64 % q) as usize].summand.contains(z))
    });

    if q >= s.conductor() {
        for c in &mut classes {
            let target = scaled.translate(c.least as i64);
            let same_gens = c.summand == target;
            let same_set = (0..check_bound).all(|z| c.summand.contains(z) == target.contains(z));
            c.isomorphic = Some(same_gens && same_set);
        }
    }
    Ok(FFRTDecomposition { semigroup: s.clone(), q, classes, module, partition_ok, check_bound })
}

/// `I_e(t^m, M) = Hom_R(R^{1/q}, M)·t^m` for an `S`-module `M` at scale 1.
///
/// Only the summand containing `t^{m/q}` contributes; its Hom into `M` is
/// computed at scale `q` and the images `t^{(m+z)/q}` are rescaled to scale 1.
pub fn frobenius_root_frac(m: u64, module: &FracIdeal, e: u32, p: u64) -> Result<FracIdeal> {
    let s = module.semigroup();
    if !s.contains(m as i64) {
        return Err(Error::InvalidArgument(format!("{m} is not in the semigroup")));
    }
    if module.scale() != 1 {
        return Err(Error::InvalidArgument("module must be at scale 1".into()));
    }
    if e == 0 {
        return Ok(FracIdeal::minimal(s, 1, module.gens.iter().map(|g| g + m as i64).collect()));
    }
    let q = p.checked_pow(e).ok_or(Error::ExponentOverflow { bound: u64::MAX })?;
    let (_, summand) = residue_summand(s, q, m % q);
    let hom = frac_hom(&summand, &module.scaled(q))?;
    hom.translate(m as i64).unscaled(q)
}

#[derive(Debug, Clone)]
pub struct FracChainReport {
    pub x: u64,
    pub e_max: u32,
    /// `levels[e - 1] = I_e(t^{(p^e - 1) x}, M)`.
    pub levels: Vec<FracIdeal>,
    pub stabilization_index: Option<u32>,
    /// Every step was confirmed to be a containment.
    pub descending: bool,
}

impl FracChainReport {
    /// Least generator per level.
    pub fn shifts(&self) -> Vec<i64> {
        self.levels.iter().map(FracIdeal::min).collect()
    }
}

/// The chain `I_e(t^{(p^e-1) x}, M)` for `e = 1..=e_max`.
pub fn chain_stabilize_frac(x: u64, module: &FracIdeal, e_max: u32, p: u64) -> Result<FracChainReport> {
    if e_max == 0 {
        return Err(Error::InvalidArgument("e_max must be at least 1".into()));
    }
    let mut levels = Vec::with_capacity(e_max as usize);
    for e in 1..=e_max {
        let q = p.checked_pow(e).ok_or(Error::ExponentOverflow { bound: u64::MAX })?;
        let m = (q - 1).checked_mul(x).ok_or(Error::ExponentOverflow { bound: u64::MAX })?;
        levels.push(frobenius_root_frac(m, module, e, p)?);
    }
    let descending = levels.windows(2).all(|w| w[1].is_subset(&w[0]));
    Ok(FracChainReport { x, e_max, stabilization_index: stabilization_index(&levels), levels, descending })
}
