//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::cell::RefCell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use frobkit::dmod::{construct_delta, generation_report, verify_delta};
use frobkit::frobroot::{chain_level, descending_chain, frobenius_root, root_compose_check};
use frobkit::semigroup::{build_semigroup, chain_stabilize_frac, ffrt_decompose, FracIdeal};
use frobkit::testideal::{
    degree_bound_check, degree_bound_holds, fpt_interval, jumping_exponents, nu, test_ideal, ExponentRational,
    JumpReport,
};
use frobkit::{
    buchberger, ideal_equal, ideal_subset, parse_polynomial, GroebnerBasis, Ideal, Monomial, Polynomial, Ring,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEP_LIMIT: Duration = Duration::from_secs(60);
const TEST_IDEAL_LIMIT: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

/// A computed `τ(a^t)` together with what the degree bound needs.
struct TauRecord {
    what: String,
    d: u64,
    t: ExponentRational,
    n: u64,
    basis: GroebnerBasis,
}

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

fn has_monomial(gb: &GroebnerBasis, v: &[u64]) -> bool {
    gb.contains(&Polynomial::monomial(gb.ring(), Monomial::new(v.iter().copied()))).unwrap()
}

fn rat(n: u64, d: u64) -> ExponentRational {
    ExponentRational::new(n, d).unwrap()
}

fn in_interval(lo: &ExponentRational, hi: &ExponentRational, v: &ExponentRational) -> bool {
    lo < v && v <= hi
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    let msg = format!("{detail}; {:.1} s (limit {} s)", took.as_secs_f64(), limit.as_secs());
    if took < limit {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn corpus(p: u64) -> Vec<Polynomial> {
    let ring = Ring::new(p, &names(2)).unwrap();
    [
        "x",
        "x*y",
        "x^2*y",
        "x^2 + y^3",
        "x^3 + y^3",
        "x*y*(x + y)",
        "x^2 + y^2",
        "y^2 + x^3 + x",
        "x^3*y^2",
        "x^2*y + x*y^3 + y^5",
    ]
    .iter()
    .map(|s| parse_polynomial(&ring, s).unwrap())
    .collect()
}

fn c1_root_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut ideals, mut mismatches) = (0usize, 0usize);
    for n in 1..=3 {
        let pool = exponents_up_to(n, 4);
        let mut sets: Vec<Vec<Vec<u64>>> = Vec::new();
        for i in 0..pool.len() {
            sets.push(vec![pool[i].clone()]);
            for j in i + 1..pool.len() {
                sets.push(vec![pool[i].clone(), pool[j].clone()]);
            }
        }
        for _ in 0..150 {
            sets.push((0..3).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect());
        }
        for p in [2u64, 3] {
            let ring = Ring::new(p, &names(n)).unwrap();
            for e in 1..=2u32 {
                let q = p.pow(e);
                for gens in &sets {
                    ideals += 1;
                    let root = buchberger(&frobenius_root(&monomial_ideal(&ring, gens), e).unwrap()).unwrap();
                    // root generators have exponents ≤ 2, so the box [0,3]^n decides equality
                    let table = choice_root(gens, q, n, 3);
                    if grid(n, 3).iter().zip(table).any(|(v, want)| has_monomial(&root, v) != want) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} of {ideals} roots differ from exhaustive search"))?;
    within(start, SWEEP_LIMIT, format!("{ideals} monomial ideals match exhaustive search"))
}

fn c2_ideal_basics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let (mut cases, mut violations) = (0usize, Vec::new());
    for p in [2u64, 3, 5] {
        let ring = Ring::new(p, &names(2)).unwrap();
        for _ in 0..70 {
            let e = rng.gen_range(1..=2u32);
            let b = random_ideal(&mut rng, &ring, 2, 3);
            let a = b.product(&random_ideal(&mut rng, &ring, 1, 2)).unwrap();
            let x = random_nonzero_poly(&mut rng, &ring, 4, 3);
            cases += 1;
            if !ideal_subset(&frobenius_root(&a, e).unwrap(), &frobenius_root(&b, e).unwrap()).unwrap() {
                violations.push(format!("(1) p={p} e={e} a={a}"));
            }
            let dropped = frobenius_root(&a.bracket_power(1).unwrap(), e).unwrap();
            if !ideal_equal(&dropped, &frobenius_root(&a, e - 1).unwrap()).unwrap() {
                violations.push(format!("(2) p={p} e={e} a={a}"));
            }
            let chain = descending_chain(&x, e + 1).unwrap();
            let steps_ok = chain.levels.windows(2).all(|w| w[0].contains_ideal(&w[1].to_ideal()).unwrap());
            if !chain.descending || !steps_ok {
                violations.push(format!("(3) p={p} e={e} x={x}"));
            }
            if !root_compose_check(&a, 1, e).unwrap() {
                violations.push(format!("compose p={p} e={e} a={a}"));
            }
        }
    }
    ensure(cases >= 200, || format!("only {cases} cases"))?;
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    Ok(format!("{cases} random cases, 0 violations"))
}

fn c3_certificate_equivalence() -> Outcome {
    let (mut checked, mut certs) = (0usize, 0usize);
    for p in [2u64, 3] {
        for x in corpus(p) {
            for e in 0..=3u32 {
                let same = chain_level(&x, e).unwrap() == chain_level(&x, e + 1).unwrap();
                let cert = construct_delta(&x, e).unwrap();
                checked += 1;
                ensure(cert.is_some() == same, || {
                    format!("{x} over F_{p}, e = {e}: certificate {} but levels equal = {same}", cert.is_some())
                })?;
                if let Some(c) = cert {
                    certs += 1;
                    ensure(verify_delta(&c).unwrap(), || format!("certificate for {x} over F_{p}, e = {e} fails"))?;
                }
            }
        }
    }
    Ok(format!("20 polynomials, {checked} levels, {certs} certificates all verified"))
}

fn c4_generation() -> Outcome {
    for p in [2u64, 3] {
        for x in corpus(p) {
            let rep = generation_report(&x, 6).unwrap();
            ensure(rep.conclusion.is_positive(), || format!("{x} over F_{p}: {}", rep.conclusion.message()))?;
        }
    }
    let mut pure = 0;
    for p in [2u64, 3, 5] {
        let ring = Ring::new(p, &names(3)).unwrap();
        for s in ["x", "y", "x*y", "x*z", "x*y*z"] {
            let x = parse_polynomial(&ring, s).unwrap();
            let rep = generation_report(&x, 6).unwrap();
            ensure(rep.chain.stabilization_index == Some(1), || {
                format!("{s} over F_{p}: e* = {:?}", rep.chain.stabilization_index)
            })?;
            ensure(rep.chain.levels.iter().all(GroebnerBasis::is_unit_ideal), || {
                format!("{s} over F_{p}: chain not constantly (1)")
            })?;
            ensure(rep.conclusion.is_positive(), || format!("{s} over F_{p}: {}", rep.conclusion.message()))?;
            pure += 1;
        }
    }
    Ok(format!("20 corpus polynomials positive within e_max = 6; {pure} squarefree monomials at e* = 1 with chain (1)"))
}

/// `ν(q)` for `x^2 + y^3` from binomial digits: the largest `r` with some
/// `C(r, i) ≢ 0 (mod p)` and both `2i < q` and `3(r - i) < q`.
fn cusp_nu_by_lucas(p: u64, q: u64) -> u64 {
    let nonzero = |mut r: u64, mut i: u64| {
        while r > 0 || i > 0 {
            if i % p > r % p {
                return false;
            }
            r /= p;
            i /= p;
        }
        true
    };
    (0..2 * q).filter(|&r| (0..=r).any(|i| 2 * i < q && 3 * (r - i) < q && nonzero(r, i))).max().unwrap()
}

fn plateau_gens(rep: &JumpReport) -> Vec<GroebnerBasis> {
    rep.plateaus.iter().map(|pl| pl.tau.clone()).collect()
}

fn c5_test_ideals(taus: &RefCell<Vec<TauRecord>>) -> Outcome {
    let start = Instant::now();
    let f2 = Ring::new(2, &names(2)).unwrap();
    let m = Ideal::new(&f2, vec![parse_polynomial(&f2, "x").unwrap(), parse_polynomial(&f2, "y").unwrap()]).unwrap();
    let t = ExponentRational::integer(2);
    let tau = test_ideal(&m, t).unwrap();
    ensure(tau.basis == buchberger(&m).unwrap(), || format!("τ((x,y)^2) over F_2 is {:?}", tau.basis))?;
    // monomial test ideals: w ∈ τ iff w + 1 is interior to t·Newt(a)
    for v in grid(2, 4) {
        let w: Vec<u64> = v.iter().map(|x| x + 1).collect();
        ensure(has_monomial(&tau.basis, &v) == in_newton_interior(&[vec![1, 0], vec![0, 1]], 2, 1, &w), || {
            format!("Newton check at {v:?}")
        })?;
    }
    taus.borrow_mut().push(TauRecord { what: "τ(m^2), F_2".into(), d: 1, t, n: 2, basis: tau.basis });

    for p in [2u64, 3] {
        let ring = Ring::new(p, &names(1)).unwrap();
        let x = parse_polynomial(&ring, "x").unwrap();
        let a = Ideal::principal(&x);
        let rep = jumping_exponents(&a, ExponentRational::integer(3), 2).unwrap();
        ensure(rep.jumps.len() == 3, || format!("(x) over F_{p}: {} jumps on (0,3]", rep.jumps.len()))?;
        for (k, j) in rep.jumps.iter().enumerate() {
            let want = ExponentRational::integer(k as u64 + 1);
            ensure(in_interval(&j.lo, &j.hi, &want), || format!("(x) over F_{p}: jump {k} is ({}, {}]", j.lo, j.hi))?;
        }
        for (k, pl) in rep.plateaus.iter().enumerate() {
            let want = buchberger(&Ideal::principal(&x.pow(k as u64).unwrap())).unwrap();
            ensure(pl.tau == want, || format!("(x) over F_{p}: plateau {k} is not (x^{k})"))?;
            taus.borrow_mut().push(TauRecord {
                what: format!("τ((x)^{}), F_{p}", pl.from),
                d: 1,
                t: pl.from,
                n: 1,
                basis: pl.tau.clone(),
            });
        }
    }

    let f7 = Ring::new(7, &names(2)).unwrap();
    let cusp = Ideal::principal(&parse_polynomial(&f7, "x^2 + y^3").unwrap());
    let (lo, hi) = fpt_interval(&cusp, 4).unwrap();
    let five_sixths = rat(5, 6);
    ensure(in_interval(&lo, &hi, &five_sixths), || format!("fpt interval ({lo}, {hi}] misses 5/6"))?;
    ensure(lo.denominator() == 2401 && hi.numerator() == lo.numerator() + 1, || {
        format!("width of ({lo}, {hi}] is not 7^-4")
    })?;
    let oracle = cusp_nu_by_lucas(7, 2401);
    let got = nu(&cusp, 4).unwrap();
    ensure(got == oracle, || format!("ν(7^4) = {got}, binomial digits give {oracle}"))?;
    let tau = test_ideal(&cusp, five_sixths).unwrap();
    taus.borrow_mut().push(TauRecord { what: "τ(f^(5/6)), F_7".into(), d: 3, t: five_sixths, n: 2, basis: tau.basis });

    within(start, TEST_IDEAL_LIMIT, format!("τ(m^2) = m; (x) jumps at 1, 2, 3; fpt(x^2+y^3) ∈ ({lo}, {hi}], ν = {got}"))
}

fn c6_jumps(taus: &RefCell<Vec<TauRecord>>) -> Outcome {
    let f2 = Ring::new(2, &names(2)).unwrap();
    let m = Ideal::new(&f2, vec![parse_polynomial(&f2, "x").unwrap(), parse_polynomial(&f2, "y").unwrap()]).unwrap();
    let f7 = Ring::new(7, &names(2)).unwrap();
    let cusp = Ideal::principal(&parse_polynomial(&f7, "x^2 + y^3").unwrap());
    let cases = [
        (
            "(x,y) over F_2",
            m,
            ExponentRational::integer(3),
            3,
            vec![ExponentRational::integer(2), ExponentRational::integer(3)],
            1,
        ),
        ("x^2+y^3 over F_7", cusp, ExponentRational::integer(1), 4, vec![rat(5, 6), ExponentRational::integer(1)], 3),
    ];
    let mut summary = Vec::new();
    for (what, a, bound, e_max, targets, d) in cases {
        let rep = jumping_exponents(&a, bound, e_max).unwrap();
        ensure(rep.jumps.len() == 2, || format!("{what}: {} jumps", rep.jumps.len()))?;
        for (j, want) in rep.jumps.iter().zip(&targets) {
            ensure(in_interval(&j.lo, &j.hi, want), || format!("{what}: ({}, {}] misses {want}", j.lo, j.hi))?;
        }
        ensure(rep.plateaus_constant(), || format!("{what}: a midpoint sample disagrees"))?;
        let gens = plateau_gens(&rep);
        ensure(gens.windows(2).all(|w| w[0] != w[1]), || format!("{what}: adjacent plateaus coincide"))?;
        for pl in &rep.plateaus {
            taus.borrow_mut().push(TauRecord {
                what: format!("{what} at {}", pl.from),
                d,
                t: pl.from,
                n: 2,
                basis: pl.tau.clone(),
            });
        }
        let shown: Vec<String> = rep.jumps.iter().map(|j| format!("({}, {}]", j.lo, j.hi)).collect();
        summary.push(format!("{what}: {}", shown.join(" ")));
        summary.push(format!("{} midpoints agree", rep.midpoint_checks.len()));
    }
    Ok(summary.join("; "))
}

fn c7_degree_bound(taus: &RefCell<Vec<TauRecord>>) -> Outcome {
    let taus = taus.borrow();
    ensure(!taus.is_empty(), || "no test ideals recorded".into())?;
    for r in taus.iter() {
        ensure(degree_bound_holds(r.d, r.t, &r.basis, r.n), || format!("{} exceeds t·d + n", r.what))?;
    }
    let f7 = Ring::new(7, &names(2)).unwrap();
    let cusp = Ideal::principal(&parse_polynomial(&f7, "x^2 + y^3").unwrap());
    ensure(degree_bound_check(&cusp, rat(5, 6), 2).unwrap(), || "degree_bound_check on the cusp".into())?;
    Ok(format!("{} test ideals generated within degree t·d + n", taus.len()))
}

fn c8_semigroups() -> Outcome {
    let mut decompositions = 0;
    for (gens, qs) in [(vec![2u64, 3], vec![2u64, 3, 4, 5, 7, 8, 9]), (vec![3, 5], vec![8, 9, 11, 13, 16, 25, 27])] {
        let s = build_semigroup(&gens).unwrap();
        let table = semigroup_table(&gens, 400);
        for q in qs {
            ensure(q >= s.conductor(), || format!("q = {q} below conductor"))?;
            let d = ffrt_decompose(&s, q).unwrap();
            ensure(d.partition_ok && d.free_over_module(), || format!("⟨{gens:?}⟩, q = {q}: not M^(⊕q)"))?;
            // each residue class of S is r_i + qN, checked directly
            for c in &d.classes {
                let class: Vec<usize> = (0..300).filter(|&n| table[n] && n as u64 % q == c.residue).collect();
                let want: Vec<usize> =
                    (0..300).filter(|&n| n as u64 >= c.least && (n as u64 - c.least).is_multiple_of(q)).collect();
                ensure(class == want, || format!("⟨{gens:?}⟩, q = {q}, class {}", c.residue))?;
            }
            decompositions += 1;
        }
    }
    let mut chains = 0;
    for gens in [vec![2u64, 3], vec![3, 5]] {
        let s = build_semigroup(&gens).unwrap();
        for &x in s.generators() {
            for module in [FracIdeal::ring(&s), FracIdeal::normalization(&s)] {
                for p in [2u64, 3, 5] {
                    let rep = chain_stabilize_frac(x, &module, 6, p).unwrap();
                    ensure(rep.descending && rep.stabilization_index.is_some(), || {
                        format!("⟨{gens:?}⟩, x = t^{x}, M = {module}, p = {p}: no stabilization within 6")
                    })?;
                    chains += 1;
                }
            }
        }
    }
    Ok(format!("{decompositions} decompositions verified; {chains} chains stabilize within e_max = 6"))
}

fn c9_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let run = |f: &PathBuf| {
        Command::new(env!("CARGO_BIN_EXE_frobkit")).arg(f).env_remove("FROBKIT_SPAIR_CAP").output().unwrap()
    };
    for f in &files {
        let first = run(f);
        for _ in 0..2 {
            let again = run(f);
            ensure(again.stdout == first.stdout && again.status == first.status, || {
                format!("{} differs between runs", f.display())
            })?;
        }
    }
    Ok(format!("{} fixtures, 3 runs each, byte-identical", files.len()))
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let taus = RefCell::new(Vec::new());
    let criteria: Vec<Criterion> = vec![
        ("C1 Frobenius roots vs exhaustive search", Box::new(c1_root_oracle)),
        ("C2 root monotonicity, bracket drop, chain descent", Box::new(c2_ideal_basics)),
        ("C3 certificates exactly at chain equalities", Box::new(c3_certificate_equivalence)),
        ("C4 R_x generated by 1/x", Box::new(c4_generation)),
        ("C5 test-ideal golden values", Box::new(|| c5_test_ideals(&taus))),
        ("C6 jumps at resolution", Box::new(|| c6_jumps(&taus))),
        ("C7 degree bound with r = n", Box::new(|| c7_degree_bound(&taus))),
        ("C8 semigroup FFRT and chains", Box::new(c8_semigroups)),
        ("C9 deterministic CLI output", Box::new(c9_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
