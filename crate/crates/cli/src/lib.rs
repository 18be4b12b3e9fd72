//! Problem-file grammar and command dispatch for the `frobkit` binary.
//!
//! A problem file is line oriented:
//!
//! ```text
//! p=7
//! vars=x,y
//! ideal a = x^2+y^3
//! cmd jumps a T=1 emax=4
//! ```
//!
//! Semigroup problems replace `vars=` with `semigroup 2,3` and define
//! modules as `ideal M = {0,1}`. Blank lines and lines starting with `#`
//! are ignored. Reports are JSON with sorted keys.

use std::collections::BTreeMap;
use std::fmt;

use frobkit::dmod::{construct_delta, generation_report, is_fpure_pair, verify_delta, Conclusion};
use frobkit::frobroot::{descending_chain, frobenius_root};
use frobkit::semigroup::{
    build_semigroup, chain_stabilize_frac, ffrt_decompose, parse_generator_set, FracIdeal, NumericalSemigroup,
};
use frobkit::testideal::{degree_bound_holds, fpt_interval, jumping_exponents, nu, test_ideal, ExponentRational};
use frobkit::{
    buchberger, parse_polynomial, parse_polynomial_list, Error, GroebnerBasis, Ideal, Limits, OrderKind, Polynomial,
    PrimeField, Ring,
};
use serde_json::{json, Value};
use thiserror::Error as ThisError;

pub const DEFAULT_EMAX: u32 = 4;

/// A located problem-file error; line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
#[error("line {line}, column {column}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn diag<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, Diagnostic> {
    Err(Diagnostic { line, column, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CommandName {
    FrobRoot,
    Chain,
    DeltaCert,
    FpurePair,
    TestIdeal,
    Nu,
    Fpt,
    Jumps,
    DegreeCheck,
    FfrtDecompose,
    FracChain,
}

impl CommandName {
    pub const ALL: [CommandName; 11] = [
        CommandName::FrobRoot,
        CommandName::Chain,
        CommandName::DeltaCert,
        CommandName::FpurePair,
        CommandName::TestIdeal,
        CommandName::Nu,
        CommandName::Fpt,
        CommandName::Jumps,
        CommandName::DegreeCheck,
        CommandName::FfrtDecompose,
        CommandName::FracChain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::FrobRoot => "frob-root",
            CommandName::Chain => "chain",
            CommandName::DeltaCert => "delta-cert",
            CommandName::FpurePair => "fpure-pair",
            CommandName::TestIdeal => "test-ideal",
            CommandName::Nu => "nu",
            CommandName::Fpt => "fpt",
            CommandName::Jumps => "jumps",
            CommandName::DegreeCheck => "degree-check",
            CommandName::FfrtDecompose => "ffrt-decompose",
            CommandName::FracChain => "frac-chain",
        }
    }

    fn parse(s: &str) -> Option<CommandName> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    fn on_semigroup(self) -> bool {
        matches!(self, CommandName::FfrtDecompose | CommandName::FracChain)
    }

    /// `(allowed parameters, required parameters, needs a target)`.
    fn signature(self) -> (&'static [&'static str], &'static [&'static str], bool) {
        match self {
            CommandName::FrobRoot => (&["e"], &["e"], true),
            CommandName::Chain => (&["emax"], &[], true),
            CommandName::DeltaCert => (&["e", "emax"], &[], true),
            CommandName::FpurePair => (&["e"], &["e"], true),
            CommandName::TestIdeal => (&["t"], &["t"], true),
            CommandName::Nu => (&["e"], &["e"], true),
            CommandName::Fpt => (&["emax"], &[], true),
            CommandName::Jumps => (&["T", "emax"], &["T"], true),
            CommandName::DegreeCheck => (&["t", "r"], &["t"], true),
            CommandName::FfrtDecompose => (&["q"], &["q"], false),
            CommandName::FracChain => (&["x", "emax"], &["x"], false),
        }
    }
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Polynomial { vars: Vec<String> },
    Semigroup { generators: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Int(u64),
    Rational(ExponentRational),
}

impl Param {
    fn to_json(&self) -> Value {
        match self {
            Param::Int(n) => json!(n),
            Param::Rational(r) => json!(r.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub name: CommandName,
    pub target: Option<String>,
    pub params: BTreeMap<String, Param>,
}

/// A validated problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub p: Option<u64>,
    pub ambient: Ambient,
    /// Generator texts, polynomial or `{..}` sets.
    pub ideals: BTreeMap<String, String>,
    pub polys: BTreeMap<String, String>,
    pub command: Command,
}

struct Located<'a> {
    line: usize,
    /// 0-based byte offset of `text` in its line.
    offset: usize,
    text: &'a str,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits `rest` on commas, reporting each piece with its column offset.
fn comma_items(offset: usize, rest: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in rest.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        out.push((offset + start + lead, piece.trim()));
        start += piece.len() + 1;
    }
    out
}

/// The value after `key` on a `key = value` or `key value` line.
fn after_key(l: &Located, key: &str, need_eq: bool) -> Result<(usize, String), Diagnostic> {
    let rest = &l.text[key.len()..];
    let trimmed = rest.trim_start();
    let mut off = l.offset + key.len() + (rest.len() - trimmed.len());
    let value = match trimmed.strip_prefix('=') {
        Some(v) => {
            off += 1 + (v.len() - v.trim_start().len());
            v.trim()
        }
        None if need_eq => return diag(l.line, off + 1, format!("expected '=' after {key}")),
        None => trimmed.trim(),
    };
    if value.is_empty() {
        return diag(l.line, off + 1, format!("missing value for {key}"));
    }
    Ok((off, value.to_string()))
}

/// `NAME = text` after `ideal`/`poly`.
fn definition<'a>(l: &Located<'a>, key: &str) -> Result<(String, Located<'a>), Diagnostic> {
    let rest = &l.text[key.len()..];
    if !rest.starts_with(char::is_whitespace) {
        return diag(l.line, l.offset + key.len() + 1, format!("expected a name after {key}"));
    }
    let Some(eq) = rest.find('=') else {
        return diag(l.line, l.offset + l.text.len() + 1, "expected '='");
    };
    let name = rest[..eq].trim();
    let name_col = l.offset + key.len() + (rest.len() - rest.trim_start().len()) + 1;
    if !is_identifier(name) {
        return diag(l.line, name_col, format!("bad name {name:?}"));
    }
    let body = &rest[eq + 1..];
    let lead = body.len() - body.trim_start().len();
    let text = body.trim();
    let offset = l.offset + key.len() + eq + 1 + lead;
    if text.is_empty() {
        return diag(l.line, offset + 1, format!("empty definition of {name}"));
    }
    Ok((name.to_string(), Located { line: l.line, offset, text }))
}

fn keyword(text: &str) -> &str {
    let end = text.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_')).unwrap_or(text.len());
    &text[..end]
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, Diagnostic> {
    let mut p: Option<(u64, usize, usize)> = None;
    let mut ambient: Option<Ambient> = None;
    let mut defs: Vec<(bool, String, Located)> = Vec::new();
    let mut cmd: Option<Located> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let l = Located { line, offset: raw.len() - raw.trim_start().len(), text: trimmed };
        if cmd.is_some() {
            return diag(line, l.offset + 1, "nothing may follow the cmd line");
        }
        match keyword(trimmed) {
            "p" => {
                let (off, v) = after_key(&l, "p", true)?;
                let n: u64 = v.parse().or_else(|_| diag(line, off + 1, format!("p must be an integer (got {v:?})")))?;
                PrimeField::new(n).or_else(|e| diag(line, off + 1, e.to_string()))?;
                if p.replace((n, line, off)).is_some() {
                    return diag(line, l.offset + 1, "p given twice");
                }
            }
            "vars" => {
                let (off, v) = after_key(&l, "vars", true)?;
                let mut vars = Vec::new();
                for (col, name) in comma_items(off, &v) {
                    if !is_identifier(name) {
                        return diag(line, col + 1, format!("bad variable name {name:?}"));
                    }
                    if vars.iter().any(|v: &String| v == name) {
                        return diag(line, col + 1, format!("variable {name} declared twice"));
                    }
                    vars.push(name.to_string());
                }
                if ambient.replace(Ambient::Polynomial { vars }).is_some() {
                    return diag(line, l.offset + 1, "ambient ring given twice");
                }
            }
            "semigroup" => {
                let (off, v) = after_key(&l, "semigroup", false)?;
                let mut generators = Vec::new();
                for (col, item) in comma_items(off, &v) {
                    match item.parse::<u64>() {
                        Ok(n) if n > 0 => generators.push(n),
                        _ => return diag(line, col + 1, format!("bad semigroup generator {item:?}")),
                    }
                }
                if ambient.replace(Ambient::Semigroup { generators }).is_some() {
                    return diag(line, l.offset + 1, "ambient ring given twice");
                }
            }
            kw @ ("ideal" | "poly") => {
                let (name, body) = definition(&l, kw)?;
                if defs.iter().any(|(_, n, _)| *n == name) {
                    return diag(line, l.offset + 1, format!("{name} defined twice"));
                }
                defs.push((kw == "ideal", name, body));
            }
            "cmd" => cmd = Some(l),
            other => {
                return diag(line, l.offset + 1, format!("unknown statement {other:?}"));
            }
        }
    }

    let Some(ambient) = ambient else {
        return diag(1, 1, "missing vars= or semigroup line");
    };
    let Some(cmd) = cmd else {
        return diag(text.lines().count().max(1), 1, "missing cmd line");
    };

    // definitions are checked against the declared ring
    let mut ideals = BTreeMap::new();
    let mut polys = BTreeMap::new();
    match &ambient {
        Ambient::Polynomial { vars } => {
            let Some((pv, _, _)) = p else {
                return diag(1, 1, "missing p= line");
            };
            let ring = Ring::new(pv, vars).or_else(|e| diag(1, 1, e.to_string()))?;
            for (is_ideal, name, body) in &defs {
                let parsed = if *is_ideal {
                    parse_polynomial_list(&ring, body.text).map(|_| ())
                } else {
                    parse_polynomial(&ring, body.text).map(|_| ())
                };
                if let Err(e) = parsed {
                    return Err(locate(body, e));
                }
                let map = if *is_ideal { &mut ideals } else { &mut polys };
                map.insert(name.clone(), body.text.to_string());
            }
        }
        Ambient::Semigroup { .. } => {
            for (is_ideal, name, body) in &defs {
                if !is_ideal {
                    return diag(body.line, body.offset + 1, "semigroup problems define modules with `ideal`");
                }
                if parse_generator_set(body.text).map(|g| g.is_empty()).unwrap_or(true) {
                    return diag(body.line, body.offset + 1, "expected a set of integers like {0,1}");
                }
                ideals.insert(name.clone(), body.text.to_string());
            }
        }
    }

    let command = parse_command(&cmd, &ambient, &ideals, &polys)?;
    Ok(ProblemSpec { p: p.map(|(v, _, _)| v), ambient, ideals, polys, command })
}

fn locate(body: &Located, e: Error) -> Diagnostic {
    match e {
        Error::Parse { column, message } => Diagnostic { line: body.line, column: body.offset + column, message },
        other => Diagnostic { line: body.line, column: body.offset + 1, message: other.to_string() },
    }
}

fn parse_command(
    l: &Located,
    ambient: &Ambient,
    ideals: &BTreeMap<String, String>,
    polys: &BTreeMap<String, String>,
) -> Result<Command, Diagnostic> {
    // (column, token) pairs after `cmd`
    let mut tokens = Vec::new();
    let mut pos = 0;
    for tok in l.text.split_whitespace() {
        let at = l.text[pos..].find(tok).expect("token") + pos;
        tokens.push((l.offset + at + 1, tok));
        pos = at + tok.len();
    }
    let Some(&(col, name)) = tokens.get(1) else {
        return diag(l.line, l.offset + 4, "cmd needs a command name");
    };
    let Some(name) = CommandName::parse(name) else {
        return diag(l.line, col, format!("unknown command {name:?}"));
    };
    let semigroup = matches!(ambient, Ambient::Semigroup { .. });
    if name.on_semigroup() != semigroup {
        let need = if semigroup { "a vars= ring" } else { "a semigroup line" };
        return diag(l.line, col, format!("{name} needs {need}"));
    }
    let (allowed, required, needs_target) = name.signature();
    let mut target = None;
    let mut params = BTreeMap::new();
    for &(col, tok) in &tokens[2..] {
        match tok.split_once('=') {
            None => {
                if target.is_some() {
                    return diag(l.line, col, format!("unexpected argument {tok:?}"));
                }
                let known = ideals.contains_key(tok) || polys.contains_key(tok) || (semigroup && tok == "R");
                if !known {
                    return diag(l.line, col, format!("{tok} is not defined"));
                }
                target = Some(tok.to_string());
            }
            Some((k, v)) => {
                if !allowed.contains(&k) {
                    return diag(l.line, col, format!("{name} does not take {k}="));
                }
                let vcol = col + k.len() + 1;
                let value = if matches!(k, "t" | "T") {
                    let r: ExponentRational =
                        v.parse().or_else(|_| diag(l.line, vcol, format!("malformed rational {v:?}")))?;
                    if r.is_zero() {
                        return diag(l.line, vcol, format!("{k} must be positive"));
                    }
                    Param::Rational(r)
                } else {
                    Param::Int(v.parse().or_else(|_| diag(l.line, vcol, format!("{k} must be a nonnegative integer")))?)
                };
                if params.insert(k.to_string(), value).is_some() {
                    return diag(l.line, col, format!("{k} given twice"));
                }
            }
        }
    }
    for r in required {
        if !params.contains_key(*r) {
            return diag(l.line, col, format!("{name} needs {r}="));
        }
    }
    if needs_target && target.is_none() {
        return diag(l.line, col, format!("{name} needs the name of an ideal or polynomial"));
    }
    if name == CommandName::FracChain && !params.contains_key("x") {
        return diag(l.line, col, "frac-chain needs x=");
    }
    Ok(Command { name, target, params })
}

/// Command-line options that affect computation or rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Horizon used when the cmd line gives no `emax=`.
    pub e_max: u32,
    pub order: OrderKind,
    /// Spaces per level; 0 renders compactly.
    pub json_indent: usize,
    pub spair_cap: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            e_max: DEFAULT_EMAX,
            order: OrderKind::GrevLex,
            json_indent: 2,
            spair_cap: Limits::default().spair_cap,
        }
    }
}

/// Flag, then the `FROBKIT_SPAIR_CAP` value, then the library default.
pub fn effective_spair_cap(flag: Option<u64>, env: Option<&str>) -> Result<u64, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match env {
        Some(s) => s.trim().parse().map_err(|_| format!("FROBKIT_SPAIR_CAP must be a nonnegative integer (got {s:?})")),
        None => Ok(Limits::default().spair_cap),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Inconclusive,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Inconclusive => 1,
            Status::Error => 2,
        }
    }
}

/// The JSON document and exit code of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    pub status: Status,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

fn order_name(o: OrderKind) -> &'static str {
    match o {
        OrderKind::GrevLex => "grevlex",
        OrderKind::Lex => "lex",
    }
}

pub fn parse_order(s: &str) -> Option<OrderKind> {
    match s {
        "grevlex" => Some(OrderKind::GrevLex),
        "lex" => Some(OrderKind::Lex),
        _ => None,
    }
}

struct Ctx<'a> {
    spec: &'a ProblemSpec,
    ring: Option<Ring>,
    semigroup: Option<NumericalSemigroup>,
    e_max: u32,
}

/// Computed value and, when inconclusive, the status word to report.
type Computed = (Value, Option<&'static str>);

fn unless(ok: bool, word: &'static str) -> Option<&'static str> {
    (!ok).then_some(word)
}

fn gens(gb: &GroebnerBasis) -> Value {
    json!(gb.elements().iter().map(|g| g.to_string()).collect::<Vec<_>>())
}

impl Ctx<'_> {
    fn ring(&self) -> &Ring {
        self.ring.as_ref().expect("polynomial problem")
    }

    fn target(&self) -> &str {
        self.spec.command.target.as_deref().expect("validated")
    }

    fn int(&self, key: &str) -> Option<u64> {
        match self.spec.command.params.get(key) {
            Some(Param::Int(n)) => Some(*n),
            _ => None,
        }
    }

    fn level(&self, key: &str) -> Result<u32, Error> {
        let v = self.int(key).expect("validated");
        u32::try_from(v).map_err(|_| Error::InvalidArgument(format!("{key} is too large")))
    }

    fn rational(&self, key: &str) -> ExponentRational {
        match self.spec.command.params.get(key) {
            Some(Param::Rational(r)) => *r,
            _ => unreachable!("validated"),
        }
    }

    fn ideal(&self) -> Result<Ideal, Error> {
        let name = self.target();
        let ring = self.ring();
        if let Some(t) = self.spec.ideals.get(name) {
            return Ideal::new(ring, parse_polynomial_list(ring, t)?);
        }
        Ok(Ideal::principal(&parse_polynomial(ring, &self.spec.polys[name])?))
    }

    fn poly(&self) -> Result<Polynomial, Error> {
        let name = self.target();
        let ring = self.ring();
        if let Some(t) = self.spec.polys.get(name) {
            return parse_polynomial(ring, t);
        }
        let list = parse_polynomial_list(ring, &self.spec.ideals[name])?;
        match <[Polynomial; 1]>::try_from(list) {
            Ok([f]) => Ok(f),
            Err(_) => Err(Error::InvalidArgument(format!("{name} must be a single polynomial"))),
        }
    }

    fn module(&self) -> Result<FracIdeal, Error> {
        let s = self.semigroup.as_ref().expect("semigroup problem");
        match self.spec.command.target.as_deref() {
            None | Some("R") => Ok(FracIdeal::ring(s)),
            Some(name) => FracIdeal::new(s, 1, &parse_generator_set(&self.spec.ideals[name])?),
        }
    }

    fn prime(&self) -> Result<u64, Error> {
        self.spec.p.ok_or_else(|| Error::InvalidArgument("this command needs a p= line".into()))
    }

    fn dispatch(&self) -> Result<Computed, Error> {
        match self.spec.command.name {
            CommandName::FrobRoot => {
                let a = self.ideal()?;
                let root = buchberger(&frobenius_root(&a, self.level("e")?)?)?;
                Ok((gens(&root), None))
            }
            CommandName::Chain => {
                let rep = descending_chain(&self.poly()?, self.e_max)?;
                let levels: Vec<Value> = rep.levels.iter().map(gens).collect();
                Ok((
                    json!({
                        "levels": levels,
                        "descending": rep.descending,
                        "stabilization_index": rep.stabilization_index,
                    }),
                    unless(rep.stabilization_index.is_some(), "unstabilized"),
                ))
            }
            CommandName::DeltaCert => self.delta_cert(),
            CommandName::FpurePair => {
                let e = self.level("e")?;
                Ok((json!({"fpure": is_fpure_pair(&self.poly()?, e)?}), None))
            }
            CommandName::TestIdeal => {
                let tau = test_ideal(&self.ideal()?, self.rational("t"))?;
                Ok((
                    json!({
                        "generators": gens(&tau.basis),
                        "level": tau.level,
                        "heuristic": tau.heuristic,
                    }),
                    None,
                ))
            }
            CommandName::Nu => Ok((json!(nu(&self.ideal()?, self.level("e")?)?), None)),
            CommandName::Fpt => {
                let (lo, hi) = fpt_interval(&self.ideal()?, self.e_max)?;
                Ok((json!({"interval_lo": lo.to_string(), "interval_hi": hi.to_string()}), None))
            }
            CommandName::Jumps => {
                let rep = jumping_exponents(&self.ideal()?, self.rational("T"), self.e_max)?;
                let ok = rep.plateaus_constant();
                Ok((rep.to_json(), unless(ok, "inconclusive")))
            }
            CommandName::DegreeCheck => {
                let a = self.ideal()?;
                let t = self.rational("t");
                let r = self.int("r").unwrap_or(self.ring().nvars() as u64);
                let tau = test_ideal(&a, t)?;
                let holds = degree_bound_holds(a.max_generator_degree(), t, &tau.basis, r);
                Ok((
                    json!({
                        "holds": holds,
                        "d": a.max_generator_degree(),
                        "tau_generators": gens(&tau.basis),
                        "tau_degrees": tau.basis.elements().iter().map(|g| g.total_degree()).collect::<Vec<_>>(),
                        "heuristic": tau.heuristic,
                    }),
                    None,
                ))
            }
            CommandName::FfrtDecompose => self.ffrt(),
            CommandName::FracChain => {
                let p = self.prime()?;
                let x = self.int("x").expect("validated");
                let rep = chain_stabilize_frac(x, &self.module()?, self.e_max, p)?;
                let levels: Vec<Value> = rep.levels.iter().map(|l| json!(l.generators())).collect();
                Ok((
                    json!({
                        "levels": levels,
                        "shifts": rep.shifts(),
                        "descending": rep.descending,
                        "stabilization_index": rep.stabilization_index,
                    }),
                    unless(rep.stabilization_index.is_some(), "unstabilized"),
                ))
            }
        }
    }

    fn delta_cert(&self) -> Result<Computed, Error> {
        let x = self.poly()?;
        if self.int("e").is_some() {
            let e = self.level("e")?;
            let cert = construct_delta(&x, e)?;
            let verified = match &cert {
                Some(c) => verify_delta(c)?,
                None => false,
            };
            return Ok((
                json!({
                    "exists": cert.is_some(),
                    "verified": verified,
                    "certificate": cert.map(|c| c.to_json()),
                }),
                None,
            ));
        }
        let rep = generation_report(&x, self.e_max)?;
        let positive = rep.conclusion.is_positive();
        let word = match rep.conclusion {
            Conclusion::Unstabilized { .. } => "unstabilized",
            _ => "inconclusive",
        };
        let stabilization = match rep.conclusion {
            Conclusion::Generated { stabilization_index, .. }
            | Conclusion::CertificateFailed { stabilization_index } => Some(stabilization_index),
            Conclusion::Unstabilized { .. } => None,
        };
        Ok((
            json!({
                "levels": rep.chain.levels.iter().map(gens).collect::<Vec<_>>(),
                "stabilization_index": stabilization,
                "conclusion": rep.conclusion.message(),
                "generated": positive,
                "certificate": rep.delta.map(|c| c.to_json()),
            }),
            unless(positive, word),
        ))
    }

    fn ffrt(&self) -> Result<Computed, Error> {
        let s = self.semigroup.as_ref().expect("semigroup problem");
        let q = self.int("q").expect("validated");
        let base = match self.spec.p {
            Some(p) => Some(p),
            None => smallest_prime_factor(q),
        };
        let is_power = match base {
            None => q == 1,
            Some(p) => {
                let mut v = q;
                while v.is_multiple_of(p) {
                    v /= p;
                }
                v == 1
            }
        };
        if !is_power {
            return Err(Error::InvalidArgument(format!("q = {q} is not a power of p")));
        }
        let d = ffrt_decompose(s, q)?;
        let classes: Vec<Value> = d
            .classes
            .iter()
            .map(|c| {
                json!({
                    "residue": c.residue,
                    "least": c.least,
                    "summand_generators": c.summand.generators(),
                    "isomorphic": c.isomorphic,
                })
            })
            .collect();
        let free = d.free_over_module();
        Ok((
            json!({
                "q": q,
                "conductor": s.conductor(),
                "gaps": s.gaps(),
                "least_elements": d.least_elements(),
                "module_generators": d.module.generators(),
                "classes": classes,
                "partition_ok": d.partition_ok,
                "check_bound": d.check_bound,
                "free_over_module": free,
                "claim": if free { Value::from(format!("R^(1/{q}) = M^{q}")) } else { Value::Null },
            }),
            unless(d.partition_ok && (q < s.conductor() || free), "inconclusive"),
        ))
    }
}

fn smallest_prime_factor(n: u64) -> Option<u64> {
    (2..=n).find(|d| n.is_multiple_of(*d))
}

fn input_echo(spec: &ProblemSpec, opts: &Options) -> Value {
    let mut input = serde_json::Map::new();
    input.insert("p".into(), json!(spec.p));
    match &spec.ambient {
        Ambient::Polynomial { vars } => input.insert("vars".into(), json!(vars)),
        Ambient::Semigroup { generators } => input.insert("semigroup".into(), json!(generators)),
    };
    input.insert("ideals".into(), json!(spec.ideals));
    input.insert("polys".into(), json!(spec.polys));
    let mut params: serde_json::Map<String, Value> =
        spec.command.params.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
    let (allowed, _, _) = spec.command.name.signature();
    if allowed.contains(&"emax") {
        params.entry("emax").or_insert(json!(opts.e_max));
    }
    if spec.command.name == CommandName::DegreeCheck {
        if let Ambient::Polynomial { vars } = &spec.ambient {
            params.entry("r").or_insert(json!(vars.len()));
        }
    }
    input.insert(
        "command".into(),
        json!({
            "name": spec.command.name.as_str(),
            "target": spec.command.target,
            "params": params,
        }),
    );
    input.insert(
        "options".into(),
        json!({
            "order": order_name(opts.order),
            "spair_cap": opts.spair_cap,
            "default_emax": opts.e_max,
        }),
    );
    Value::Object(input)
}

/// Runs a validated problem.
pub fn run(spec: &ProblemSpec, opts: &Options) -> Outcome {
    let e_max = match spec.command.params.get("emax") {
        Some(Param::Int(n)) => u32::try_from(*n).unwrap_or(u32::MAX),
        _ => opts.e_max,
    };
    let input = input_echo(spec, opts);
    let built = build_context(spec, opts, e_max);
    let result = built.and_then(|ctx| ctx.dispatch());
    let (status, mut doc) = match result {
        Ok((value, None)) => (Status::Ok, json!({"status": "ok", "result": value})),
        Ok((value, Some(word))) => (Status::Inconclusive, json!({"status": word, "result": value})),
        Err(e @ Error::Unstabilized { .. }) => {
            (Status::Inconclusive, json!({"status": "unstabilized", "error": e.to_string(), "result": null}))
        }
        Err(e) => (Status::Error, json!({"status": "error", "error": e.to_string(), "result": null})),
    };
    doc["input"] = input;
    Outcome { document: doc, status }
}

fn build_context<'a>(spec: &'a ProblemSpec, opts: &Options, e_max: u32) -> Result<Ctx<'a>, Error> {
    let limits = Limits { spair_cap: opts.spair_cap, ..Limits::default() };
    let (ring, semigroup) = match &spec.ambient {
        Ambient::Polynomial { vars } => {
            let p = spec.p.expect("validated");
            (Some(Ring::with_options(p, vars, opts.order, limits)?), None)
        }
        Ambient::Semigroup { generators } => (None, Some(build_semigroup(generators)?)),
    };
    Ok(Ctx { spec, ring, semigroup, e_max })
}

/// Serializes with `indent` spaces per level (compact when 0).
pub fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let mut out = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("in-memory JSON");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Parses, runs and renders; parse failures become status-2 documents.
pub fn execute(text: &str, opts: &Options) -> (String, i32) {
    let outcome = match parse_problem(text) {
        Ok(spec) => run(&spec, opts),
        Err(d) => Outcome {
            document: json!({
                "status": "error",
                "error": d.to_string(),
                "line": d.line,
                "column": d.column,
                "result": null,
            }),
            status: Status::Error,
        },
    };
    let mut s = render(&outcome.document, opts.json_indent);
    s.push('\n');
    (s, outcome.exit_code())
}
