//! Buchberger's algorithm, normal forms and the ideal decision procedures
//! (membership, containment, equality) built on reduced Gröbner bases.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::monomial::{Monomial, MonomialOrder, OrderKey};
use crate::poly::Polynomial;
use crate::ring::Ring;

/// A Gröbner basis of an ideal under the ring's monomial order.
///
/// When `reduced` is set the basis is the unique reduced basis: monic
/// elements sorted descending by leading monomial, no term of any element
/// divisible by another element's leading monomial. The zero ideal has the
/// empty basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Ring,
    elements: Vec<Polynomial>,
    reduced: bool,
}

/// A reduced basis together with, for every basis element, its expression
/// as a combination of the original generators.
#[derive(Debug, Clone)]
pub struct LiftedBasis {
    pub basis: GroebnerBasis,
    /// `cofactors[i][j]` multiplies generator `j` in the expression of element `i`.
    pub cofactors: Vec<Vec<Polynomial>>,
}

/// Multivariate division. Returns `(remainder, quotients)` with
/// `f = sum q_i d_i + remainder` and no remainder term divisible by any
/// divisor's leading monomial. Divisors are tried in the given order.
pub(crate) fn divide(f: &Polynomial, divisors: &[&Polynomial]) -> Result<(Polynomial, Vec<Polynomial>)> {
    let ring = f.ring();
    let field = *ring.field();
    let order = ring.order();
    let bound = ring.exponent_bound();
    let lead: Vec<(&Monomial, u64)> = divisors.iter().map(|d| d.leading_term().expect("nonzero divisor")).collect();
    let lead_inv: Vec<u64> = lead.iter().map(|(_, c)| field.inv(*c).expect("nonzero leading coefficient")).collect();

    let mut work: BTreeMap<OrderKey, (Monomial, u64)> =
        f.terms().iter().map(|(m, c)| (order.key(m), (m.clone(), *c))).collect();
    let mut rem = Vec::new();
    let mut quots: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); divisors.len()];

    while let Some((_, (m, c))) = work.pop_last() {
        let hit = lead.iter().position(|(lm, _)| lm.divides(&m));
        let Some(i) = hit else {
            rem.push((m, c));
            continue;
        };
        let t = lead[i].0.quotient_of(&m).expect("divisible");
        let coef = field.mul(c, lead_inv[i]);
        for (gm, gc) in divisors[i].terms().iter().skip(1) {
            let mm = t.mul(gm, bound)?;
            let delta = field.neg(field.mul(coef, *gc));
            match work.entry(order.key(&mm)) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert((mm, delta));
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = field.add(o.get().1, delta);
                    if s == 0 {
                        o.remove();
                    } else {
                        o.get_mut().1 = s;
                    }
                }
            }
        }
        quots[i].push((t, coef));
    }
    Ok((Polynomial::from_sorted(ring, rem), quots.into_iter().map(|q| Polynomial::from_sorted(ring, q)).collect()))
}

fn sub_combination(target: &mut [Polynomial], quotients: &[Polynomial], rows: &[&[Polynomial]]) -> Result<()> {
    for (q, row) in quotients.iter().zip(rows) {
        if q.is_zero() {
            continue;
        }
        for (t, r) in target.iter_mut().zip(row.iter()) {
            if !r.is_zero() {
                *t = t.try_sub(&q.try_mul(r)?)?;
            }
        }
    }
    Ok(())
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<'a> {
    ring: &'a Ring,
    polys: Vec<Polynomial>,
    cofs: Option<Vec<Vec<Polynomial>>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    reductions: u64,
}

impl<'a> Engine<'a> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().expect("basis elements are nonzero")
    }

    fn active_indices(&self) -> Vec<usize> {
        (0..self.polys.len()).filter(|&i| self.active[i]).collect()
    }

    /// Fully reduces `f` by the active elements, tracking cofactors.
    fn reduce(
        &self,
        f: &Polynomial,
        cof: Option<Vec<Polynomial>>,
        skip: Option<usize>,
    ) -> Result<(Polynomial, Option<Vec<Polynomial>>)> {
        let idx: Vec<usize> = self.active_indices().into_iter().filter(|&i| Some(i) != skip).collect();
        let divisors: Vec<&Polynomial> = idx.iter().map(|&i| &self.polys[i]).collect();
        let (rem, quots) = divide(f, &divisors)?;
        let cof = match (cof, &self.cofs) {
            (Some(mut c), Some(all)) => {
                let rows: Vec<&[Polynomial]> = idx.iter().map(|&i| all[i].as_slice()).collect();
                sub_combination(&mut c, &quots, &rows)?;
                Some(c)
            }
            _ => None,
        };
        Ok((rem, cof))
    }

    fn monic(f: Polynomial, cof: Option<Vec<Polynomial>>) -> (Polynomial, Option<Vec<Polynomial>>) {
        let field = *f.ring().field();
        let inv = field.inv(f.leading_coeff()).expect("nonzero");
        let cof = cof.map(|c| c.into_iter().map(|g| g.scale(inv)).collect());
        (f.scale(inv), cof)
    }

    /// Inserts a reduced, monic element and applies the Gebauer–Möller update.
    fn insert(&mut self, h: Polynomial, cof: Option<Vec<Polynomial>>) {
        let k = self.polys.len();
        self.polys.push(h);
        self.active.push(true);
        if let (Some(all), Some(c)) = (self.cofs.as_mut(), cof) {
            all.push(c);
        }
        let lh = self.lm(k).clone();

        let mut cand: Vec<(usize, Monomial)> =
            (0..k).filter(|&i| self.active[i]).map(|i| (i, lh.lcm(self.lm(i)))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while !cand.is_empty() {
            let (g, l) = cand.remove(0);
            let coprime = lh.is_coprime(self.lm(g));
            if coprime || (!cand.iter().any(|(_, l2)| l2.divides(&l)) && !kept.iter().any(|(_, l2)| l2.divides(&l))) {
                kept.push((g, l));
            }
        }
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !lh.is_coprime(self.lm(*g)))
            .map(|(g, l)| Pair { i: g, j: k, lcm: l })
            .collect();

        let polys = &self.polys;
        let lm = |i: usize| polys[i].leading_monomial().expect("nonzero");
        self.pairs.retain(|p| !(lh.divides(&p.lcm) && lm(p.i).lcm(&lh) != p.lcm && lm(p.j).lcm(&lh) != p.lcm));
        self.pairs.extend(fresh);

        for i in 0..k {
            if self.active[i] && lh.divides(self.lm(i)) {
                self.active[i] = false;
            }
        }
    }

    fn s_poly(&self, p: &Pair) -> Result<(Polynomial, Option<Vec<Polynomial>>)> {
        let ti = self.lm(p.i).quotient_of(&p.lcm).expect("lcm");
        let tj = self.lm(p.j).quotient_of(&p.lcm).expect("lcm");
        let a = self.polys[p.i].mul_term(&ti, 1)?;
        let b = self.polys[p.j].mul_term(&tj, 1)?;
        let s = a.try_sub(&b)?;
        let cof = match &self.cofs {
            Some(all) => {
                let mut out = Vec::with_capacity(all[p.i].len());
                for (ci, cj) in all[p.i].iter().zip(all[p.j].iter()) {
                    out.push(ci.mul_term(&ti, 1)?.try_sub(&cj.mul_term(&tj, 1)?)?);
                }
                Some(out)
            }
            None => None,
        };
        Ok((s, cof))
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order: &MonomialOrder = self.ring.order();
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| order.cmp(&a.lcm, &b.lcm).then((a.i, a.j).cmp(&(b.i, b.j))))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

fn run_buchberger(a: &Ideal, track: bool) -> Result<(GroebnerBasis, Option<Vec<Vec<Polynomial>>>)> {
    let ring = a.ring();
    let limits = *ring.limits();
    let ngens = a.generators().len();
    let mut eng = Engine {
        ring,
        polys: Vec::new(),
        cofs: if track { Some(Vec::new()) } else { None },
        active: Vec::new(),
        pairs: Vec::new(),
        reductions: 0,
    };

    let unit_result = |cof: Option<Vec<Polynomial>>| {
        (
            GroebnerBasis { ring: ring.clone(), elements: vec![Polynomial::one(ring)], reduced: true },
            cof.map(|c| vec![c]),
        )
    };

    for (j, g) in a.generators().iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let cof = track.then(|| {
            let mut v = vec![Polynomial::zero(ring); ngens];
            v[j] = Polynomial::one(ring);
            v
        });
        let (h, cof) = eng.reduce(g, cof, None)?;
        if h.is_zero() {
            continue;
        }
        let (h, cof) = Engine::monic(h, cof);
        if h.is_constant() {
            return Ok(unit_result(cof));
        }
        eng.insert(h, cof);
    }

    while let Some(pair) = eng.next_pair() {
        eng.reductions += 1;
        if eng.reductions > limits.spair_cap {
            return Err(Error::ResourceExceeded(format!("more than {} S-pair reductions", limits.spair_cap)));
        }
        if pair.lcm.degree() > limits.max_degree {
            return Err(Error::ResourceExceeded(format!(
                "critical pair of degree {} exceeds the cap {}",
                pair.lcm.degree(),
                limits.max_degree
            )));
        }
        let (s, cof) = eng.s_poly(&pair)?;
        let (h, cof) = eng.reduce(&s, cof, None)?;
        if h.is_zero() {
            continue;
        }
        let (h, cof) = Engine::monic(h, cof);
        if h.is_constant() {
            return Ok(unit_result(cof));
        }
        eng.insert(h, cof);
    }

    // The active set is a minimal basis; one tail-reduction pass makes it reduced.
    let idx = eng.active_indices();
    let mut finished: Vec<(Polynomial, Option<Vec<Polynomial>>)> = Vec::with_capacity(idx.len());
    for &i in &idx {
        let cof = eng.cofs.as_ref().map(|all| all[i].clone());
        let (r, cof) = eng.reduce(&eng.polys[i], cof, Some(i))?;
        finished.push(Engine::monic(r, cof));
    }
    let order = ring.order();
    finished.sort_by(|(a, _), (b, _)| {
        order.cmp(b.leading_monomial().expect("nonzero"), a.leading_monomial().expect("nonzero"))
    });
    let (elements, cofs): (Vec<_>, Vec<_>) = finished.into_iter().unzip();
    Ok((
        GroebnerBasis { ring: ring.clone(), elements, reduced: true },
        if track { Some(cofs.into_iter().map(|c| c.expect("tracked")).collect()) } else { None },
    ))
}

/// Reduced Gröbner basis of `a` under its ring's order.
pub fn buchberger(a: &Ideal) -> Result<GroebnerBasis> {
    Ok(run_buchberger(a, false)?.0)
}

/// Reduced Gröbner basis under an explicit order (the ideal is moved to a
/// copy of its ring carrying that order).
pub fn buchberger_with_order(a: &Ideal, order: &MonomialOrder) -> Result<GroebnerBasis> {
    let ring = a.ring().with_order(order.clone())?;
    buchberger(&a.to_ring(&ring)?)
}

/// Reduced Gröbner basis with cofactors expressing each element through the
/// generators of `a`.
pub fn buchberger_lifted(a: &Ideal) -> Result<LiftedBasis> {
    let (basis, cofactors) = run_buchberger(a, true)?;
    Ok(LiftedBasis { basis, cofactors: cofactors.expect("tracked") })
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.elements.clone()).expect("same ring")
    }

    /// Largest total degree of a basis element (0 for the zero ideal).
    pub fn max_degree(&self) -> u64 {
        self.elements.iter().filter_map(|g| g.total_degree()).max().unwrap_or(0)
    }

    /// `(remainder, quotients)` with `f = sum q_i g_i + remainder`.
    pub fn normal_form(&self, f: &Polynomial) -> Result<(Polynomial, Vec<Polynomial>)> {
        self.ring.check(f.ring())?;
        let divisors: Vec<&Polynomial> = self.elements.iter().collect();
        divide(f, &divisors)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.0.is_zero())
    }

    pub fn contains_ideal(&self, a: &Ideal) -> Result<bool> {
        for g in a.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that every S-polynomial of basis pairs reduces to zero.
    pub fn satisfies_s_pair_criterion(&self) -> Result<bool> {
        let els = &self.elements;
        for i in 0..els.len() {
            for j in i + 1..els.len() {
                let (li, ci) = els[i].leading_term().expect("nonzero");
                let (lj, cj) = els[j].leading_term().expect("nonzero");
                let field = self.ring.field();
                let l = li.lcm(lj);
                let a = els[i].mul_term(&li.quotient_of(&l).expect("lcm"), field.inv(ci).expect("nz"))?;
                let b = els[j].mul_term(&lj.quotient_of(&l).expect("lcm"), field.inv(cj).expect("nz"))?;
                if !self.contains(&a.try_sub(&b)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Structural check of the reduced-basis conditions.
    pub fn is_reduced_form(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, g)| {
            g.leading_coeff() == 1
                && self.elements.iter().enumerate().all(|(j, h)| {
                    i == j || g.terms().iter().all(|(m, _)| !h.leading_monomial().expect("nz").divides(m))
                })
        })
    }
}

/// Membership test; on success returns the division quotients over the
/// reduced basis of `a` (the basis itself is returned alongside).
pub fn ideal_member(f: &Polynomial, a: &Ideal) -> Result<Option<(GroebnerBasis, Vec<Polynomial>)>> {
    let gb = buchberger(a)?;
    let (rem, quots) = gb.normal_form(f)?;
    Ok(if rem.is_zero() { Some((gb, quots)) } else { None })
}

/// Expresses `f` through the generators of `a` (same length as `a.generators()`).
pub fn lift(f: &Polynomial, a: &Ideal) -> Result<Option<Vec<Polynomial>>> {
    let lifted = buchberger_lifted(a)?;
    let (rem, quots) = lifted.basis.normal_form(f)?;
    if !rem.is_zero() {
        return Ok(None);
    }
    let ring = a.ring();
    let mut out = vec![Polynomial::zero(ring); a.generators().len()];
    for (q, row) in quots.iter().zip(lifted.cofactors.iter()) {
        if q.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(row.iter()) {
            *o = o.try_add(&q.try_mul(c)?)?;
        }
    }
    Ok(Some(out))
}

/// `a ⊆ b`.
pub fn ideal_subset(a: &Ideal, b: &Ideal) -> Result<bool> {
    a.ring().check(b.ring())?;
    buchberger(b)?.contains_ideal(a)
}

/// Equality of ideals, decided by comparing reduced Gröbner bases.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    a.ring().check(b.ring())?;
    Ok(buchberger(a)? == buchberger(b)?)
}

/// The ideal presented by its reduced basis.
pub fn canonical(a: &Ideal) -> Result<Ideal> {
    Ok(buchberger(a)?.to_ideal())
}
