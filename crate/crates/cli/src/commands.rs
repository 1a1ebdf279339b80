use algebroid::algebroid::ce::weight_shift;
use algebroid::algebroid::{check_axioms, CeAlgebra, SliceMode};
use algebroid::deformation::{def_cohomology, mc_of_algebroid};
use algebroid::exact_algebra::Cohomology;
use algebroid::jets_enh::{build_enh, extract_brackets, j_infty_compare, mc_check, tangent_compare, NilpotentBase};
use algebroid::ruth::{adjoint, is_weak_equivalence, RepUH, SamplePolicy};
use algebroid::symplectic::{certify_closed, check_roytenberg, lift_roytenberg, transfer_to_enh, ClosedTwoForm, TwoForm};
use algebroid::verdict::{CheckReport, Verdict};
use algebroid::weil::WeilAlgebra;
use clap::ValueEnum;

use crate::format::{AlgebroidFile, InputError};
use crate::report::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    CeCohomology,
    DefComplex,
    RepValidate,
    RepWeq,
    Weil,
    Enh,
    TangentCompare,
    Symplectic,
    McCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::CeCohomology => "ce-cohomology",
            Command::DefComplex => "def-complex",
            Command::RepValidate => "rep-validate",
            Command::RepWeq => "rep-weq",
            Command::Weil => "weil",
            Command::Enh => "enh",
            Command::TangentCompare => "tangent-compare",
            Command::Symplectic => "symplectic",
            Command::McCheck => "mc-check",
        }
    }
}

/// Resolved run parameters.
#[derive(Clone, Debug)]
pub struct Settings {
    pub mode: SliceMode,
    pub truncate: u32,
    pub policy: SamplePolicy,
    pub lo: Option<i32>,
    pub hi: Option<i32>,
    pub arity: i32,
}

pub fn mode_label(mode: SliceMode) -> String {
    match mode {
        SliceMode::Weight(w) => format!("weight {w}"),
        SliceMode::Truncate(k) => format!("truncate {k}"),
    }
}

#[derive(Default)]
pub struct Outcome {
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    pub caveats: Vec<String>,
}

impl Outcome {
    fn report(&mut self, r: CheckReport) {
        self.verdicts.extend(r.verdicts);
    }

    fn prefixed(&mut self, prefix: &str, r: CheckReport) {
        self.verdicts.extend(r.verdicts.into_iter().map(|mut v| {
            v.name = format!("{prefix}: {}", v.name);
            v
        }));
    }
}

fn invalid(e: impl std::fmt::Display) -> InputError {
    InputError::Invalid(e.to_string())
}

fn dims_table(name: &str, h: &Cohomology, lo: i32, hi: i32) -> Table {
    let mut t = Table::new(name, &["degree", "dim"]);
    for k in lo..=hi {
        t.row(vec![k.to_string(), h.dim(k).to_string()]);
    }
    t
}

fn approx_caveat(out: &mut Outcome, what: &str, approximate: bool, s: &Settings) {
    if approximate {
        out.caveats.push(format!(
            "{what}: coefficients truncated at polynomial degree {}; dimensions are approximate",
            s.truncate
        ));
    }
}

fn require_homogeneous(f: &AlgebroidFile, s: &Settings) -> Result<(), InputError> {
    if let SliceMode::Weight(_) = s.mode {
        weight_shift(&f.algebroid).map_err(|e| invalid(format!("--weight needs weight-homogeneous data: {e}")))?;
    }
    Ok(())
}

fn check(f: &AlgebroidFile, out: &mut Outcome) -> Result<(), InputError> {
    let l = &f.algebroid;
    out.report(check_axioms(l));
    out.verdicts.push(Verdict::from_witness("d_squared", CeAlgebra::new(l).d_squared_witness()));
    let m = mc_of_algebroid(l);
    let mm = m.bracket(&m).map_err(invalid)?;
    let witness = (!mm.is_zero()).then(|| format!("[m, m] has components of arity {:?}", mm.arities()));
    out.verdicts.push(Verdict::from_witness("maurer_cartan", witness));
    Ok(())
}

fn ce_cohomology(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    require_homogeneous(f, s)?;
    let ce = CeAlgebra::new(&f.algebroid);
    let (dlo, dhi) = ce.default_degrees();
    let (lo, hi) = (s.lo.unwrap_or(dlo), s.hi.unwrap_or(dhi));
    out.verdicts.push(Verdict::from_witness("d_squared", ce.d_squared_witness()));
    let h = ce.cohomology(s.mode, lo, hi).map_err(invalid)?;
    out.tables.push(dims_table("H(C(L))", &h, lo, hi));
    approx_caveat(out, "ce-cohomology", matches!(s.mode, SliceMode::Truncate(_)), s);
    Ok(())
}

fn def_complex(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    require_homogeneous(f, s)?;
    let (lo, hi) = (s.lo.unwrap_or(-1), s.hi.unwrap_or(2));
    let m = mc_of_algebroid(&f.algebroid);
    let mm = m.bracket(&m).map_err(invalid)?;
    out.verdicts.push(Verdict::from_witness(
        "maurer_cartan",
        (!mm.is_zero()).then(|| format!("[m, m] has components of arity {:?}", mm.arities())),
    ));
    let h = def_cohomology(&f.algebroid, s.mode, lo, hi, s.arity).map_err(invalid)?;
    out.tables.push(dims_table("H(Def(L))", &h, lo, hi));
    out.caveats.push(format!("multiderivations of arity at most {}", s.arity));
    approx_caveat(out, "def-complex", matches!(s.mode, SliceMode::Truncate(_)), s);
    Ok(())
}

fn all_reps(f: &AlgebroidFile) -> Result<Vec<(String, RepUH)>, InputError> {
    let mut reps = vec![("adjoint".to_string(), adjoint(&f.algebroid, &f.connection).map_err(invalid)?)];
    reps.extend(f.reps.iter().cloned());
    Ok(reps)
}

fn rep_validate(f: &AlgebroidFile, out: &mut Outcome) -> Result<(), InputError> {
    let mut t = Table::new("representations", &["name", "rank", "frame"]);
    for (name, r) in all_reps(f)? {
        let frame: Vec<String> = r.fiber().frame().iter().map(|(n, d)| format!("{n}:{d}")).collect();
        t.row(vec![name.clone(), r.rank().to_string(), frame.join(" ")]);
        let report = r.validate();
        let valid = report.all_pass();
        out.prefixed(&format!("rep {name}"), report);
        if valid {
            let dual = r.dual().map_err(invalid)?;
            out.verdicts.push({
                let mut v = r.check_pairing(&dual);
                v.name = format!("rep {name}: dual pairing");
                v
            });
        }
    }
    out.tables.push(t);
    Ok(())
}

fn rep_weq(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    if f.maps.is_empty() {
        return Err(invalid("rep-weq needs at least one [map NAME] section"));
    }
    let mut t = Table::new("cone cohomology at sample points", &["map", "point", "H(cone)", "H(source)", "H(target)"]);
    let fmt = |m: &std::collections::BTreeMap<i32, usize>| -> String {
        let parts: Vec<String> = m.iter().map(|(k, d)| format!("{k}:{d}")).collect();
        format!("{{{}}}", parts.join(" "))
    };
    for (name, map) in &f.maps {
        let mut v = map.check_cochain();
        let cochain = v.pass;
        v.name = format!("map {name}: cochain");
        out.verdicts.push(v);
        if !cochain {
            continue;
        }
        let weq = is_weak_equivalence(map, &s.policy).map_err(invalid)?;
        let mut failing = None;
        for ev in &weq.evidence {
            let point: Vec<String> = ev.point.iter().map(ToString::to_string).collect();
            let point = format!("({})", point.join(", "));
            if !ev.cone_acyclic() && failing.is_none() {
                failing = Some(format!("cone not acyclic at {point}: {}", fmt(&ev.cone_dims)));
            }
            t.row(vec![name.clone(), point, fmt(&ev.cone_dims), fmt(&ev.source_dims), fmt(&ev.target_dims)]);
        }
        out.verdicts.push(
            Verdict::from_witness(format!("map {name}: weak_equivalence"), failing)
                .with_note(format!("{} sample points", weq.evidence.len())),
        );
    }
    out.tables.push(t);
    Ok(())
}

fn weil(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    require_homogeneous(f, s)?;
    let w = WeilAlgebra::new(&f.algebroid, &f.connection).map_err(invalid)?;
    let (lo, hi) = (s.lo.unwrap_or(0), s.hi.unwrap_or(4));
    let (h, approximate) = w.cohomology(s.mode, lo, hi).map_err(invalid)?;
    out.tables.push(dims_table("H(W(L))", &h, lo, hi));
    let bad = (lo..=hi).find(|&k| if k == 0 { h.dim(0) > 1 } else { h.dim(k) != 0 });
    out.verdicts.push(Verdict::from_witness(
        "acyclic",
        bad.map(|k| format!("H^{k} has dimension {}", h.dim(k))),
    ));
    approx_caveat(out, "weil", approximate, s);
    Ok(())
}

fn enh(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    let e = build_enh(&f.algebroid, &f.connection, s.truncate).map_err(invalid)?;
    out.report(e.validate());
    out.report(j_infty_compare(&e, s.policy.seed));
    let mut t = Table::new("l_n (dual form)", &["n", "generator", "component"]);
    for n in 0..=s.truncate + 1 {
        for (name, c) in extract_brackets(&e, n).map_err(invalid)? {
            if !c.is_zero() {
                t.row(vec![n.to_string(), name, e.display(&c)]);
            }
        }
    }
    out.tables.push(t);
    out.caveats.push(format!("jets kept modulo F^{}", s.truncate + 1));
    Ok(())
}

fn symplectic(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    if f.forms.is_empty() {
        return Err(invalid("symplectic needs at least one [form NAME] section"));
    }
    let (l, nabla) = (&f.algebroid, &f.connection);
    let e = build_enh(l, nabla, s.truncate).map_err(invalid)?;
    let mut t = Table::new("closed forms", &["form", "i", "omega_i"]);
    for (name, spec) in &f.forms {
        let prefix = format!("form {name}");
        let closed = if spec.comps.len() <= 1 {
            let value = spec.comps.first().cloned().unwrap_or_default();
            let eta = TwoForm::new(l, nabla, spec.degree, value).map_err(|e| invalid(format!("{prefix}: {e}")))?;
            let report = check_roytenberg(&eta, &s.policy);
            let ok = report.all_pass();
            out.prefixed(&prefix, report);
            if !ok {
                continue;
            }
            lift_roytenberg(&eta, &s.policy).map_err(invalid)?
        } else {
            ClosedTwoForm::new(l, nabla, spec.degree, spec.comps.clone()).map_err(|e| invalid(format!("{prefix}: {e}")))?
        };
        for (i, c) in closed.comps().iter().enumerate() {
            t.row(vec![name.clone(), i.to_string(), closed.weil().alg().display(c)]);
        }
        if spec.comps.len() > 1 {
            out.prefixed(&prefix, certify_closed(&closed));
        }
        out.prefixed(&prefix, transfer_to_enh(&closed, &e, &s.policy).map_err(invalid)?);
    }
    out.tables.push(t);
    Ok(())
}

fn mc(f: &AlgebroidFile, s: &Settings, out: &mut Outcome) -> Result<(), InputError> {
    let spec = f.mc.as_ref().ok_or_else(|| invalid("mc-check needs an [mc] section"))?;
    let e = build_enh(&f.algebroid, &f.connection, s.truncate).map_err(invalid)?;
    let names: Vec<&str> = spec.base.iter().map(String::as_str).collect();
    let base = NilpotentBase::exterior(&names);
    let gens: Vec<String> = e.v_generators().into_iter().map(|(n, _)| n).collect();
    let alpha = spec.alpha(base.alg(), &gens)?;
    let res = mc_check(&e, &base, &spec.point, &alpha).map_err(invalid)?;
    let mut t = Table::new("curvature", &["generator", "residual"]);
    let mut witness = None;
    for (name, r) in &res.residual {
        let shown = if r.is_zero() { "0".to_string() } else { base.alg().display(r) };
        if !r.is_zero() && witness.is_none() {
            witness = Some(format!("residual at {name} = {shown}"));
        }
        t.row(vec![name.clone(), shown]);
    }
    out.tables.push(t);
    out.verdicts.push(Verdict::from_witness("maurer_cartan", witness));
    if !res.exact {
        out.caveats.push(format!("jet truncation at F^{} may hide terms of the curvature", s.truncate + 1));
    }
    Ok(())
}

pub fn run(cmd: Command, f: &AlgebroidFile, s: &Settings) -> Result<Outcome, InputError> {
    let mut out = Outcome::default();
    match cmd {
        Command::Check => check(f, &mut out)?,
        Command::CeCohomology => ce_cohomology(f, s, &mut out)?,
        Command::DefComplex => def_complex(f, s, &mut out)?,
        Command::RepValidate => rep_validate(f, &mut out)?,
        Command::RepWeq => rep_weq(f, s, &mut out)?,
        Command::Weil => weil(f, s, &mut out)?,
        Command::Enh => enh(f, s, &mut out)?,
        Command::TangentCompare => out.report(tangent_compare(&f.algebroid, &f.connection, s.truncate).map_err(invalid)?),
        Command::Symplectic => symplectic(f, s, &mut out)?,
        Command::McCheck => mc(f, s, &mut out)?,
    }
    Ok(out)
}
