//! The algebroid description file.
//!
//! Line-oriented, with `[section]` or `[section NAME]` headers and `key = value` entries.
//! `#` starts a comment. Polynomials use rational coefficients, `*` and `^`.

use std::collections::{BTreeMap, BTreeSet};

use algebroid::algebroid::{BundleModel, ConnectionModel, LieAlgebroidModel, Patch};
use algebroid::exact_algebra::expr::{parse_elem, parse_poly, Symbol};
use algebroid::exact_algebra::rational::{parse_rational, qf};
use algebroid::exact_algebra::{Elem, ExactError, GcAlgebra, MultiPoly, Rational};
use algebroid::ruth::{RepMap, RepUH};
use algebroid::weil::WeilAlgebra;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn at(line: usize, column: usize, message: impl Into<String>) -> InputError {
    InputError::Parse {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Debug)]
struct Entry {
    line: usize,
    key: String,
    value: String,
    value_col: usize,
}

impl Entry {
    fn err(&self, message: impl Into<String>) -> InputError {
        at(self.line, self.value_col, message)
    }

    fn key_err(&self, message: impl Into<String>) -> InputError {
        at(self.line, 1, message)
    }

    fn words(&self) -> Vec<&str> {
        self.key.split_whitespace().collect()
    }

    /// Re-anchors an expression error at its column inside the value.
    fn expr_err(&self, e: ExactError) -> InputError {
        match e {
            ExactError::Parse { column, message } => at(self.line, self.value_col + column - 1, message),
            other => self.err(other.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
struct Section {
    kind: String,
    arg: Option<String>,
    line: usize,
    entries: Vec<Entry>,
}

const SECTIONS: [&str; 11] = [
    "patch",
    "bundle",
    "anchor",
    "brackets",
    "internal_diff",
    "connection",
    "rep",
    "map",
    "form",
    "mc",
    "options",
];

fn split_sections(text: &str) -> Result<Vec<Section>, InputError> {
    let mut out: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| at(line, indent + 1, "section header must end with ']'"))?;
            let mut parts = inner.split_whitespace();
            let kind = parts.next().ok_or_else(|| at(line, indent + 1, "empty section header"))?.to_string();
            if !SECTIONS.contains(&kind.as_str()) {
                return Err(at(line, indent + 2, format!("unknown section '{kind}'")));
            }
            let arg = parts.next().map(str::to_string);
            if parts.next().is_some() {
                return Err(at(line, indent + 1, "section header takes at most one name"));
            }
            let named = matches!(kind.as_str(), "rep" | "map" | "form");
            if named != arg.is_some() {
                let msg = if named { "section needs a name" } else { "section takes no name" };
                return Err(at(line, indent + 1, format!("[{kind}]: {msg}")));
            }
            if !named && out.iter().any(|s| s.kind == kind) {
                return Err(at(line, indent + 1, format!("duplicate section [{kind}]")));
            }
            if named && out.iter().any(|s| s.kind == kind && s.arg == arg) {
                return Err(at(line, indent + 1, format!("duplicate section [{kind} {}]", arg.unwrap_or_default())));
            }
            out.push(Section {
                kind,
                arg,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let eq = content.find('=').ok_or_else(|| at(line, indent + 1, "expected 'key = value'"))?;
        let key = content[..eq].trim().to_string();
        if key.is_empty() {
            return Err(at(line, indent + 1, "missing key before '='"));
        }
        let after = &content[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        let value_col = content[..eq + 1 + lead].chars().count() + 1;
        let section = out
            .last_mut()
            .ok_or_else(|| at(line, indent + 1, "entry before the first section header"))?;
        section.entries.push(Entry {
            line,
            key,
            value: after.trim().to_string(),
            value_col,
        });
    }
    Ok(out)
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// A symplectic form block: the components `omega0, omega1, ...` in Weil generators.
#[derive(Clone, Debug)]
pub struct FormSpec {
    pub degree: i64,
    pub comps: Vec<Elem>,
}

/// A Maurer-Cartan query; `alpha` entries are parsed once the enh model is known.
#[derive(Clone, Debug)]
pub struct McSpec {
    pub base: Vec<String>,
    pub point: Vec<Rational>,
    alpha: Vec<Entry>,
}

impl McSpec {
    /// Components of `alpha` in the order of `names`; absent entries are zero.
    pub fn alpha(&self, base: &GcAlgebra, names: &[String]) -> Result<Vec<Elem>, InputError> {
        let mut out = vec![Elem::zero(); names.len()];
        for entry in &self.alpha {
            let idx = names
                .iter()
                .position(|n| n == &entry.key)
                .ok_or_else(|| entry.key_err(format!("'{}' is not a generator of the enh model; expected one of {}", entry.key, names.join(", "))))?;
            let resolve = |s: &str| base.gen_index(s).map(Symbol::Gen);
            out[idx] = parse_elem(base, &entry.value, resolve).map_err(|e| entry.expr_err(e))?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub truncate: Option<u32>,
    pub weight: Option<i64>,
    pub seed: Option<u64>,
    pub lo: Option<i32>,
    pub hi: Option<i32>,
    pub arity: Option<i32>,
    pub points: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct AlgebroidFile {
    pub algebroid: LieAlgebroidModel,
    pub connection: ConnectionModel,
    pub reps: Vec<(String, RepUH)>,
    pub maps: Vec<(String, RepMap)>,
    pub forms: Vec<(String, FormSpec)>,
    pub mc: Option<McSpec>,
    pub options: Options,
    pub warnings: Vec<String>,
}

struct Ctx<'a> {
    patch: &'a Patch,
    bundle: &'a BundleModel,
}

impl Ctx<'_> {
    fn poly(&self, e: &Entry) -> Result<MultiPoly, InputError> {
        parse_poly(&e.value, self.patch.names()).map_err(|err| e.expr_err(err))
    }

    fn frame(&self, e: &Entry, name: &str) -> Result<usize, InputError> {
        (0..self.bundle.rank())
            .find(|&a| self.bundle.name(a) == name)
            .ok_or_else(|| e.key_err(format!("unknown frame '{name}'")))
    }

    fn coord(&self, e: &Entry, name: &str) -> Result<usize, InputError> {
        self.patch
            .names()
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| e.key_err(format!("unknown coordinate '{name}'")))
    }
}

fn expect_words<'a>(e: &'a Entry, n: usize, shape: &str) -> Result<Vec<&'a str>, InputError> {
    let w = e.words();
    if w.len() != n {
        return Err(e.key_err(format!("expected '{shape} = value'")));
    }
    Ok(w)
}

fn known_keys(s: &Section, allowed: &[&str]) -> Result<(), InputError> {
    for e in &s.entries {
        if !allowed.contains(&e.key.as_str()) {
            return Err(e.key_err(format!("unknown key '{}' in [{}]", e.key, s.kind)));
        }
    }
    Ok(())
}

fn parse_options(s: Option<&Section>) -> Result<Options, InputError> {
    let mut o = Options::default();
    let Some(s) = s else { return Ok(o) };
    known_keys(s, &["truncate", "weight", "seed", "lo", "hi", "arity", "points"])?;
    for e in &s.entries {
        let bad = || e.err(format!("invalid value for '{}'", e.key));
        match e.key.as_str() {
            "truncate" => o.truncate = Some(e.value.parse().map_err(|_| bad())?),
            "weight" => o.weight = Some(e.value.parse().map_err(|_| bad())?),
            "seed" => o.seed = Some(e.value.parse().map_err(|_| bad())?),
            "lo" => o.lo = Some(e.value.parse().map_err(|_| bad())?),
            "hi" => o.hi = Some(e.value.parse().map_err(|_| bad())?),
            "arity" => o.arity = Some(e.value.parse().map_err(|_| bad())?),
            "points" => o.points = Some(e.value.parse().map_err(|_| bad())?),
            _ => unreachable!(),
        }
    }
    Ok(o)
}

fn set_brackets(l: &mut LieAlgebroidModel, ctx: &Ctx, s: &Section, strict: bool, warnings: &mut Vec<String>) -> Result<(), InputError> {
    let mut given: BTreeMap<(usize, usize, usize), (MultiPoly, &Entry)> = BTreeMap::new();
    for e in &s.entries {
        let w = expect_words(e, 3, "a b k")?;
        let key = (ctx.frame(e, w[0])?, ctx.frame(e, w[1])?, ctx.frame(e, w[2])?);
        if given.contains_key(&key) {
            return Err(e.key_err(format!("bracket [{}, {}] -> {} given twice", w[0], w[1], w[2])));
        }
        given.insert(key, (ctx.poly(e)?, e));
    }
    let mut done = BTreeSet::new();
    for (&(a, b, k), (p, e)) in &given {
        if done.contains(&(a, b, k)) {
            continue;
        }
        done.insert((a, b, k));
        done.insert((b, a, k));
        let koszul = (ctx.bundle.degree(a) * ctx.bundle.degree(b)).rem_euclid(2) == 1;
        let mut value = p.clone();
        if let Some((q, e2)) = given.get(&(b, a, k)).filter(|_| a != b) {
            let expected = if koszul { p.clone() } else { p.neg() };
            if q != &expected {
                if strict {
                    return Err(e2.err(format!(
                        "bracket [{}, {}] is not graded-antisymmetric to line {} (use --lenient to antisymmetrize)",
                        ctx.bundle.name(b),
                        ctx.bundle.name(a),
                        e.line
                    )));
                }
                let partner = if koszul { q.clone() } else { q.neg() };
                value = p.add(&partner).scale(&qf(1, 2));
                warnings.push(format!(
                    "lines {} and {}: bracket [{}, {}] antisymmetrized",
                    e.line,
                    e2.line,
                    ctx.bundle.name(a),
                    ctx.bundle.name(b)
                ));
            }
        }
        l.set_bracket(a, b, k, value).map_err(|err| e.err(err.to_string()))?;
    }
    Ok(())
}

fn ce_resolver(alg: &GcAlgebra) -> impl Fn(&str) -> Option<Symbol> + '_ {
    move |s: &str| alg.var_index(s).map(Symbol::Var).or_else(|| alg.gen_index(s).map(Symbol::Gen))
}

fn parse_rep(l: &LieAlgebroidModel, ctx: &Ctx, s: &Section) -> Result<RepUH, InputError> {
    let frames_entry = s
        .entries
        .iter()
        .find(|e| e.key == "frames")
        .ok_or_else(|| at(s.line, 1, "[rep] needs 'frames = name:degree, ...'"))?;
    let mut frame = Vec::new();
    for item in split_list(&frames_entry.value) {
        let (name, deg) = item
            .split_once(':')
            .ok_or_else(|| frames_entry.err(format!("frame '{item}' must be written name:degree")))?;
        let deg: i32 = deg.trim().parse().map_err(|_| frames_entry.err(format!("bad degree in '{item}'")))?;
        frame.push((name.trim().to_string(), deg));
    }
    let fiber = BundleModel::new(ctx.patch.clone(), frame).map_err(|e| frames_entry.err(e.to_string()))?;
    let n = fiber.rank();
    let calg = algebroid::algebroid::CeAlgebra::new(l);
    let mut ops = vec![vec![Elem::zero(); n]; n];
    for e in s.entries.iter().filter(|e| e.key != "frames") {
        let w = expect_words(e, 2, "source target")?;
        let find = |name: &str| (0..n).find(|&i| fiber.name(i) == name).ok_or_else(|| e.key_err(format!("unknown fiber frame '{name}'")));
        let (i, j) = (find(w[0])?, find(w[1])?);
        ops[i][j] = parse_elem(calg.alg(), &e.value, ce_resolver(calg.alg())).map_err(|err| e.expr_err(err))?;
    }
    RepUH::new(l, fiber, ops).map_err(|e| at(s.line, 1, format!("[rep {}]: {}", s.arg.clone().unwrap_or_default(), e)))
}

fn parse_map(reps: &[(String, RepUH)], s: &Section) -> Result<RepMap, InputError> {
    let lookup = |key: &str| -> Result<&RepUH, InputError> {
        let e = s
            .entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| at(s.line, 1, format!("[map] needs '{key} = REP'")))?;
        reps.iter()
            .find(|(n, _)| n == &e.value)
            .map(|(_, r)| r)
            .ok_or_else(|| e.err(format!("unknown representation '{}'", e.value)))
    };
    let (src, tgt) = (lookup("source")?, lookup("target")?);
    let calg = src.ce().alg();
    let mut comps = vec![vec![Elem::zero(); tgt.rank()]; src.rank()];
    for e in s.entries.iter().filter(|e| e.key != "source" && e.key != "target") {
        let w = expect_words(e, 2, "source_frame target_frame")?;
        let i = (0..src.rank())
            .find(|&i| src.fiber().name(i) == w[0])
            .ok_or_else(|| e.key_err(format!("unknown source frame '{}'", w[0])))?;
        let j = (0..tgt.rank())
            .find(|&j| tgt.fiber().name(j) == w[1])
            .ok_or_else(|| e.key_err(format!("unknown target frame '{}'", w[1])))?;
        comps[i][j] = parse_elem(calg, &e.value, ce_resolver(calg)).map_err(|err| e.expr_err(err))?;
    }
    RepMap::new(src, tgt, comps).map_err(|e| at(s.line, 1, format!("[map {}]: {}", s.arg.clone().unwrap_or_default(), e)))
}

fn parse_form(l: &LieAlgebroidModel, nabla: &ConnectionModel, s: &Section) -> Result<FormSpec, InputError> {
    let mut degree = None;
    let mut comps: BTreeMap<usize, Elem> = BTreeMap::new();
    let weil = WeilAlgebra::new(l, nabla).map_err(|e| at(s.line, 1, format!("[form]: {e}")))?;
    let walg = weil.alg();
    for e in &s.entries {
        if e.key == "degree" {
            degree = Some(e.value.parse::<i64>().map_err(|_| e.err("degree must be an integer"))?);
        } else if let Some(i) = e.key.strip_prefix("omega").and_then(|i| i.parse::<usize>().ok()) {
            let v = parse_elem(walg, &e.value, ce_resolver(walg)).map_err(|err| e.expr_err(err))?;
            comps.insert(i, v);
        } else {
            return Err(e.key_err(format!("unknown key '{}' in [form]; expected degree or omega<i>", e.key)));
        }
    }
    let degree = degree.ok_or_else(|| at(s.line, 1, "[form] needs 'degree = n'"))?;
    let len = comps.keys().next_back().map_or(0, |m| m + 1);
    let comps = (0..len).map(|i| comps.remove(&i).unwrap_or_default()).collect();
    Ok(FormSpec { degree, comps })
}

fn parse_mc(s: &Section, dim: usize) -> Result<McSpec, InputError> {
    let mut base = None;
    let mut point = None;
    let mut alpha = Vec::new();
    for e in &s.entries {
        match e.key.as_str() {
            "base" => {
                let names = split_list(&e.value);
                if names.is_empty() {
                    return Err(e.err("base needs at least one generator"));
                }
                base = Some(names);
            }
            "point" => {
                let coords: Option<Vec<Rational>> = split_list(&e.value).iter().map(|c| parse_rational(c)).collect();
                let coords = coords.ok_or_else(|| e.err("point coordinates must be rationals"))?;
                if coords.len() != dim {
                    return Err(e.err(format!("point needs {dim} coordinates")));
                }
                point = Some(coords);
            }
            _ => alpha.push(e.clone()),
        }
    }
    Ok(McSpec {
        base: base.ok_or_else(|| at(s.line, 1, "[mc] needs 'base = g1, g2, ...'"))?,
        point: point.unwrap_or_else(|| vec![Rational::default(); dim]),
        alpha,
    })
}

/// Parses and validates a description file.
pub fn parse(text: &str, strict: bool) -> Result<AlgebroidFile, InputError> {
    let sections = split_sections(text)?;
    let find = |kind: &str| sections.iter().find(|s| s.kind == kind);
    let mut warnings = Vec::new();

    let patch = match find("patch") {
        None => Patch::point(),
        Some(s) => {
            known_keys(s, &["coords"])?;
            match s.entries.first() {
                None => Patch::point(),
                Some(e) => Patch::new(split_list(&e.value)).map_err(|err| e.err(err.to_string()))?,
            }
        }
    };
    let bundle_sec = find("bundle").ok_or_else(|| InputError::Invalid("missing [bundle] section".into()))?;
    let mut frame = Vec::new();
    for e in &bundle_sec.entries {
        expect_words(e, 1, "frame")?;
        let d: i32 = e.value.parse().map_err(|_| e.err("frame degree must be an integer"))?;
        frame.push((e.key.clone(), d));
    }
    let bundle = BundleModel::new(patch.clone(), frame).map_err(|e| at(bundle_sec.line, 1, e.to_string()))?;
    let ctx = Ctx {
        patch: &patch,
        bundle: &bundle,
    };
    let mut l = LieAlgebroidModel::zero(bundle.clone());

    if let Some(s) = find("anchor") {
        for e in &s.entries {
            let w = expect_words(e, 2, "frame coordinate")?;
            let (a, i) = (ctx.frame(e, w[0])?, ctx.coord(e, w[1])?);
            l.set_anchor(a, i, ctx.poly(e)?).map_err(|err| e.err(err.to_string()))?;
        }
    }
    if let Some(s) = find("brackets") {
        set_brackets(&mut l, &ctx, s, strict, &mut warnings)?;
    }
    if let Some(s) = find("internal_diff") {
        for e in &s.entries {
            let w = expect_words(e, 2, "a b")?;
            let (a, b) = (ctx.frame(e, w[0])?, ctx.frame(e, w[1])?);
            l.set_internal_diff(a, b, ctx.poly(e)?).map_err(|err| e.err(err.to_string()))?;
        }
    }
    let connection = match find("connection") {
        None => ConnectionModel::flat(&bundle),
        Some(s) => {
            let (n, r) = (patch.dim(), bundle.rank());
            let mut gamma = vec![vec![vec![MultiPoly::zero(); r]; r]; n];
            for e in &s.entries {
                let w = expect_words(e, 3, "coordinate a k")?;
                let (i, a, k) = (ctx.coord(e, w[0])?, ctx.frame(e, w[1])?, ctx.frame(e, w[2])?);
                gamma[i][a][k] = ctx.poly(e)?;
            }
            ConnectionModel::new(&bundle, gamma).map_err(|e| at(s.line, 1, e.to_string()))?
        }
    };
    let l = l.with_connection(connection.clone()).map_err(|e| InputError::Invalid(e.to_string()))?;

    let mut reps = Vec::new();
    for s in sections.iter().filter(|s| s.kind == "rep") {
        reps.push((s.arg.clone().unwrap_or_default(), parse_rep(&l, &ctx, s)?));
    }
    let mut maps = Vec::new();
    for s in sections.iter().filter(|s| s.kind == "map") {
        maps.push((s.arg.clone().unwrap_or_default(), parse_map(&reps, s)?));
    }
    let mut forms = Vec::new();
    for s in sections.iter().filter(|s| s.kind == "form") {
        forms.push((s.arg.clone().unwrap_or_default(), parse_form(&l, &connection, s)?));
    }
    let mc = find("mc").map(|s| parse_mc(s, patch.dim())).transpose()?;
    let options = parse_options(find("options"))?;
    Ok(AlgebroidFile {
        algebroid: l,
        connection,
        reps,
        maps,
        forms,
        mc,
        options,
        warnings,
    })
}
