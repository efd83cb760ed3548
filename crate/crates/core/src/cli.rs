//! Command-line surface. Every command produces one [`Report`] written as
//! JSON (or CSV, one root per row) to stdout or `--output`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::charvariety::{BundleParam, Component};
use crate::error::Error;
use crate::exactalg::roots::DEFAULT_TOL;
use crate::exactalg::CNum;
use crate::monodromy::{apply_word, parse_word, torsion_polynomial, TraceTriple};
use crate::torsion::{slope_checks, slope_fns, slope_fns_unchecked, torsion_lambda, SlopeParam};
use crate::charvariety::boundary_functions;
use crate::verifier::{
    cross_check, default_slopes, extra_closed_form, fiber_sum_all, fiber_sum_extra, fiber_sum_geometric_with,
    identity_suite, jacobi_selftest, Check, FiberReport, GenericDraws, Genericity, RootRow,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Acceptance bound for normalized fiber sums and cross-pathway deviations.
pub const VANISHING_TOL: f64 = 1e-8;
/// Relative bound for the extra-component closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// `|total| / max |1/𝕋|` above which the original conjecture counts as failing.
pub const NONVANISHING_FLOOR: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(name = "optb", version, about = "Adjoint torsion of once-punctured torus bundles M_n")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Relative tolerance of the polynomial root finder.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    root_tol: f64,
    /// Override of the command's acceptance bound.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Precision::Binary64)]
    precision: Precision,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Binary64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ComponentArg {
    Geometric,
    Extra,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact identity suite for one bundle.
    Identities {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Repeatable; defaults to the standard slope list.
        #[arg(long = "slope", value_parser = parse_pair, allow_hyphen_values = true)]
        slopes: Vec<(i64, i64)>,
    },
    /// The λ-torsion as a rational function of y.
    TorsionLambda {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        y: Option<CNum>,
    },
    /// Trace and torsion functions for one slope.
    SlopeFns {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        slope: (i64, i64),
        #[arg(long)]
        allow_nonprimitive: bool,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        y: Option<CNum>,
    },
    /// Σ 1/𝕋 over trace fibers.
    FiberSum {
        #[command(flatten)]
        fiber: FiberArgs,
        #[arg(long, value_enum, default_value_t = ComponentArg::Geometric)]
        component: ComponentArg,
    },
    /// Trace-derivative torsion against the Jacobian pathway.
    CrossCheck {
        #[command(flatten)]
        fiber: FiberArgs,
    },
    /// Extra-component sums for p = 4q + 1 against their closed form.
    Counterexample {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        q_max: i64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Action of a monodromy word on trace coordinates.
    Monodromy {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Print 3 − tr(Jacobian) instead of the image triple.
        #[arg(long)]
        torsion: bool,
    },
    /// Runs a JSON list of jobs in parallel.
    Sweep {
        #[arg(long)]
        jobs: PathBuf,
    },
    /// Residue-theorem self-test of the summation machinery.
    JacobiSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct FiberArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    slope: (i64, i64),
    /// A fixed trace value; otherwise `--samples` values are drawn from `--seed`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    c: Option<CNum>,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected p,q, got {s:?}"))?;
    let p = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let q = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((p, q))
}

/// `re[,im]`.
fn parse_complex(s: &str) -> Result<CNum, String> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(CNum::new(re, im))
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct CheckOut {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
}

impl From<Check> for CheckOut {
    fn from(c: Check) -> Self {
        CheckOut {
            name: c.name,
            status: if c.passed { "pass" } else { "fail" },
            detail: c.detail,
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct RootOut {
    pub y: [f64; 2],
    pub torsion: [f64; 2],
    pub inv_torsion: [f64; 2],
    pub c: [f64; 2],
    pub component: Component,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<[f64; 2]>,
    pub weight: f64,
}

fn pair(z: CNum) -> [f64; 2] {
    [z.re, z.im]
}

impl RootOut {
    fn new(row: &RootRow, c: CNum) -> Self {
        RootOut {
            y: pair(row.y),
            torsion: pair(row.torsion),
            inv_torsion: pair(row.inv_torsion),
            c: pair(c),
            component: row.component,
            m: row.m.map(pair),
            weight: row.weight,
        }
    }
}

/// One command's output. Keys are stable; fields that do not apply are null.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    pub n: Option<i64>,
    pub slope: Option<[i64; 2]>,
    pub c: Option<[f64; 2]>,
    pub seed: Option<u64>,
    pub precision: Precision,
    pub roots: Vec<RootOut>,
    pub sum: Option<[f64; 2]>,
    pub normalized_residual: Option<f64>,
    pub genericity: Option<Genericity>,
    pub checks: Vec<CheckOut>,
    pub data: Value,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            n: None,
            slope: None,
            c: None,
            seed: None,
            precision: Precision::Binary64,
            roots: Vec::new(),
            sum: None,
            normalized_residual: None,
            genericity: None,
            checks: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c.into());
    }
}

/// Why a command produced no report.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse { .. } | Error::DegenerateSlope { .. } => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the command line `args` (including the program name) and returns
/// the exit code: 0 when every check passes, 1 on a failed check or a
/// computation error, 2 on a usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&cli.command, &cli.global) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let text = match cli.global.format {
        Format::Json => render_json(&report),
        Format::Csv => render_csv(&report),
    };
    let written = match &cli.global.output {
        Some(path) => fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 1;
    }
    for c in report.checks.iter().filter(|c| c.status != "pass") {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    if report.passed() {
        0
    } else {
        1
    }
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// One root per row; reports without roots give just the header.
pub fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "command", "n", "p", "q", "c_re", "c_im", "component", "y_re", "y_im", "m_re", "m_im", "torsion_re",
        "torsion_im", "inv_torsion_re", "inv_torsion_im", "weight",
    ])
    .expect("in-memory write");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in &report.roots {
        w.write_record([
            report.command.clone(),
            opt(report.n.map(|n| n.to_string())),
            opt(report.slope.map(|s| s[0].to_string())),
            opt(report.slope.map(|s| s[1].to_string())),
            r.c[0].to_string(),
            r.c[1].to_string(),
            r.component.to_string(),
            r.y[0].to_string(),
            r.y[1].to_string(),
            opt(r.m.map(|m| m[0].to_string())),
            opt(r.m.map(|m| m[1].to_string())),
            r.torsion[0].to_string(),
            r.torsion[1].to_string(),
            r.inv_torsion[0].to_string(),
            r.inv_torsion[1].to_string(),
            r.weight.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn execute(cmd: &Command, g: &Global) -> Outcome<Report> {
    if !(g.root_tol > 0.0) || g.tol.is_some_and(|t| !(t > 0.0)) {
        return Err(Failure::Usage("tolerances must be positive".into()));
    }
    match cmd {
        Command::Identities { n, slopes } => identities(*n, slopes),
        Command::TorsionLambda { n, y } => torsion_lambda_cmd(*n, *y),
        Command::SlopeFns {
            n,
            slope,
            allow_nonprimitive,
            y,
        } => slope_fns_cmd(*n, *slope, *allow_nonprimitive, *y),
        Command::FiberSum { fiber, component } => fiber_sum_cmd(fiber, *component, g),
        Command::CrossCheck { fiber } => cross_check_cmd(fiber, g),
        Command::Counterexample {
            n,
            q_max,
            samples,
            seed,
        } => counterexample(*n, *q_max, *samples, *seed, g),
        Command::Monodromy { word, torsion } => monodromy_cmd(word, *torsion),
        Command::Sweep { jobs } => sweep(jobs, g),
        Command::JacobiSelftest { seed, trials } => jacobi(*seed, *trials),
    }
}

fn hyperbolic(n: i64) -> Outcome<BundleParam> {
    let bp = BundleParam::new(n);
    bp.require_hyperbolic()?;
    Ok(bp)
}

fn identities(n: i64, slopes: &[(i64, i64)]) -> Outcome<Report> {
    let bp = hyperbolic(n)?;
    let slopes = if slopes.is_empty() {
        default_slopes()
    } else {
        slopes.iter().map(|&(p, q)| SlopeParam::new(p, q)).collect::<Result<_, _>>()?
    };
    let suite = identity_suite(bp, &slopes)?;
    let mut r = Report::new("identities");
    r.n = Some(n);
    r.data = json!({ "slopes": slopes.iter().map(|s| [s.p, s.q]).collect::<Vec<_>>() });
    suite.checks.into_iter().for_each(|c| r.push(c));
    Ok(r)
}

fn torsion_lambda_cmd(n: i64, y: Option<CNum>) -> Outcome<Report> {
    let bp = hyperbolic(n)?;
    let t = torsion_lambda(bp)?;
    let mut data = Map::new();
    data.insert("numerator".into(), t.num().to_string().into());
    data.insert("denominator".into(), t.den().to_string().into());
    if let Some(y) = y {
        data.insert("y".into(), json!(pair(y)));
        data.insert("value".into(), json!(pair(t.eval_c(y)?)));
    }
    let mut r = Report::new("torsion-lambda");
    r.n = Some(n);
    r.data = Value::Object(data);
    Ok(r)
}

fn slope_fns_cmd(n: i64, (p, q): (i64, i64), allow_nonprimitive: bool, y: Option<CNum>) -> Outcome<Report> {
    let bp = hyperbolic(n)?;
    let slope = if allow_nonprimitive {
        SlopeParam::class(p, q)?
    } else {
        SlopeParam::new(p, q)?
    };
    let sf = slope_fns_unchecked(bp, slope, boundary_functions(bp)?)?;
    let mut r = Report::new("slope-fns");
    r.n = Some(n);
    r.slope = Some([p, q]);
    slope_checks(&sf).into_iter().for_each(|c| r.push(c));
    let mut data = Map::new();
    data.insert("parity".into(), json!(sf.parity));
    data.insert("weight".into(), json!(sf.weight()));
    data.insert("degree_margin".into(), json!(sf.degree_margin()));
    for (key, f) in [
        ("g", &sf.g),
        ("h", &sf.h),
        ("trace_fn", &sf.trace_fn),
        ("trace_deriv", &sf.trace_deriv),
        ("g_fn", &sf.g_fn),
    ] {
        data.insert(key.into(), f.to_string().into());
    }
    if let Some(y) = y {
        data.insert("y".into(), json!(pair(y)));
        data.insert("torsion".into(), json!(pair(sf.torsion_at(y)?.value)));
    }
    r.data = Value::Object(data);
    Ok(r)
}

/// Geometric and extra fibers over one `c`, either possibly absent.
struct FiberPair {
    c: CNum,
    geometric: Option<FiberReport>,
    extra: Option<FiberReport>,
}

impl FiberPair {
    fn total(&self) -> CNum {
        [&self.geometric, &self.extra]
            .into_iter()
            .flatten()
            .map(|f| f.sum)
            .sum()
    }

    fn max_inv_torsion(&self) -> f64 {
        [&self.geometric, &self.extra]
            .into_iter()
            .flatten()
            .map(|f| f.max_inv_torsion)
            .fold(0.0, f64::max)
    }

    fn summary(&self, n: i64, slope: SlopeParam) -> Value {
        let extra_closed = (slope.p == 4 * slope.q + 1 && self.extra.is_some()).then(|| pair(extra_closed_form(n, self.c)));
        json!({
            "c": pair(self.c),
            "geometric_sum": self.geometric.as_ref().map(|f| pair(f.sum)),
            "geometric_normalized_residual": self.geometric.as_ref().map(|f| f.normalized_residual),
            "geometric_degree": self.geometric.as_ref().map(|f| f.fiber_degree),
            "extra_sum": self.extra.as_ref().map(|f| pair(f.sum)),
            "extra_closed_form": extra_closed,
            "total": pair(self.total()),
            "normalized_total": self.total().norm() / self.max_inv_torsion(),
        })
    }
}

fn fiber_checks(r: &mut Report, fp: &FiberPair, label: &str, n: i64, slope: SlopeParam, vanishing_tol: f64) {
    if let Some(geo) = &fp.geometric {
        r.push(Check::threshold(format!("geometric_vanishing[{label}]"), geo.normalized_residual, vanishing_tol));
        r.push(fiber_size_check(geo, label));
    }
    if let Some(extra) = &fp.extra {
        r.push(fiber_size_check(extra, label));
        if slope.p == 4 * slope.q + 1 {
            r.push(closed_form_check(extra, n, label));
        }
    }
}

fn fiber_size_check(f: &FiberReport, label: &str) -> Check {
    Check::compare(format!("fiber_size[{}:{label}]", f.component), f.roots.len() == f.fiber_degree, || {
        format!("{} roots for degree {}", f.roots.len(), f.fiber_degree)
    })
}

fn closed_form_check(extra: &FiberReport, n: i64, label: &str) -> Check {
    let want = extra_closed_form(n, extra.c);
    let dev = (extra.sum - want).norm() / want.norm();
    Check::threshold(format!("extra_closed_form[{label}]"), dev, CLOSED_FORM_TOL)
}

fn fiber_sum_cmd(a: &FiberArgs, component: ComponentArg, g: &Global) -> Outcome<Report> {
    let bp = hyperbolic(a.n)?;
    let slope = SlopeParam::new(a.slope.0, a.slope.1)?;
    let tol = g.root_tol;
    let sf = match component {
        ComponentArg::Extra => None,
        _ => Some(slope_fns(bp, slope)?),
    };
    if component == ComponentArg::Extra && !bp.has_extra_component() {
        return Err(Failure::Usage(format!("M_{} has no extra component (needs n ≡ 2 mod 4)", a.n)));
    }
    let one = |c: CNum| -> crate::Result<FiberPair> {
        match component {
            ComponentArg::Geometric => Ok(FiberPair {
                c,
                geometric: Some(fiber_sum_geometric_with(sf.as_ref().expect("built above"), c, tol)?),
                extra: None,
            }),
            ComponentArg::Extra => Ok(FiberPair {
                c,
                geometric: None,
                extra: Some(fiber_sum_extra(bp, slope, c, tol)?),
            }),
            ComponentArg::All => {
                let all = fiber_sum_all(sf.as_ref().expect("built above"), c, tol)?;
                Ok(FiberPair {
                    c,
                    geometric: Some(all.geometric),
                    extra: all.extra,
                })
            }
        }
    };
    let fibers: Vec<FiberPair> = match a.c {
        Some(c) => vec![one(c)?],
        None => {
            let mut draws = GenericDraws::new(a.seed);
            (0..a.samples).map(|_| draws.until_generic(one)).collect::<crate::Result<_>>()?
        }
    };

    let mut r = Report::new("fiber-sum");
    r.n = Some(a.n);
    r.slope = Some([slope.p, slope.q]);
    if a.c.is_none() {
        r.seed = Some(a.seed);
    }
    let vanishing_tol = g.tol.unwrap_or(VANISHING_TOL);
    for (i, fp) in fibers.iter().enumerate() {
        for f in [&fp.geometric, &fp.extra].into_iter().flatten() {
            r.roots.extend(f.roots.iter().map(|row| RootOut::new(row, fp.c)));
        }
        fiber_checks(&mut r, fp, &i.to_string(), a.n, slope, vanishing_tol);
    }
    let headline = |fp: &FiberPair| match component {
        ComponentArg::Geometric => fp.geometric.as_ref().map(|f| f.normalized_residual).unwrap_or(f64::NAN),
        ComponentArg::Extra => fp.extra.as_ref().map(|f| f.normalized_residual).unwrap_or(f64::NAN),
        ComponentArg::All => fp.total().norm() / fp.max_inv_torsion(),
    };
    if let [fp] = fibers.as_slice() {
        r.c = Some(pair(fp.c));
        r.sum = Some(pair(fp.total()));
        r.genericity = fp.geometric.as_ref().or(fp.extra.as_ref()).map(|f| f.genericity.clone());
    }
    r.normalized_residual = fibers.iter().map(headline).reduce(f64::max);
    r.data = json!({
        "component": match component {
            ComponentArg::Geometric => "geometric",
            ComponentArg::Extra => "extra",
            ComponentArg::All => "all",
        },
        "fibers": fibers.iter().map(|fp| fp.summary(a.n, slope)).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn cross_check_cmd(a: &FiberArgs, g: &Global) -> Outcome<Report> {
    let bp = hyperbolic(a.n)?;
    let slope = SlopeParam::new(a.slope.0, a.slope.1)?;
    let sf = slope_fns(bp, slope)?;
    let rep = cross_check(&sf, a.c, a.seed, a.samples, g.root_tol)?;
    let mut r = Report::new("cross-check");
    r.n = Some(a.n);
    r.slope = Some([slope.p, slope.q]);
    r.c = a.c.map(pair);
    r.seed = a.c.is_none().then_some(a.seed);
    r.normalized_residual = Some(rep.max_relative_deviation);
    r.push(Check::threshold(
        "max_relative_deviation",
        rep.max_relative_deviation,
        g.tol.unwrap_or(VANISHING_TOL),
    ));
    r.push(Check::compare("sample_count", rep.rows.len() >= a.samples, || {
        format!("{} of {} points compared", rep.rows.len(), a.samples)
    }));
    r.data = serde_json::to_value(&rep).expect("reports serialize");
    Ok(r)
}

fn counterexample(n: i64, q_max: i64, samples: usize, seed: u64, g: &Global) -> Outcome<Report> {
    let bp = hyperbolic(n)?;
    if !bp.has_extra_component() {
        return Err(Failure::Usage(format!("counterexample needs n ≡ 2 mod 4, got n = {n}")));
    }
    if q_max < 0 {
        return Err(Failure::Usage("--q-max must be non-negative".into()));
    }
    let floor = g.tol.unwrap_or(NONVANISHING_FLOOR);
    let mut r = Report::new("counterexample");
    r.n = Some(n);
    r.seed = Some(seed);
    let mut rows = Vec::new();
    for q in 0..=q_max {
        let slope = SlopeParam::new(4 * q + 1, q)?;
        let sf = slope_fns(bp, slope)?;
        let mut draws = GenericDraws::new(seed);
        for i in 0..samples {
            let all = draws.until_generic(|c| fiber_sum_all(&sf, c, g.root_tol))?;
            let fp = FiberPair {
                c: all.geometric.c,
                geometric: Some(all.geometric),
                extra: all.extra,
            };
            let label = format!("{slope}#{i}");
            let extra = fp.extra.as_ref().expect("n ≡ 2 mod 4 and p ≠ 4q");
            r.push(closed_form_check(extra, n, &label));
            let normalized = fp.total().norm() / fp.max_inv_torsion();
            r.push(Check::compare(format!("total_nonvanishing[{label}]"), normalized > floor, || {
                format!("|total| / max|1/T| = {normalized:.3e} <= {floor:.0e}")
            }));
            let mut s = fp.summary(n, slope);
            s["slope"] = json!([slope.p, slope.q]);
            rows.push(s);
        }
    }
    r.data = json!({ "fibers": rows });
    Ok(r)
}

fn monodromy_cmd(word: &str, torsion: bool) -> Outcome<Report> {
    let w = parse_word(word)?;
    let mut r = Report::new("monodromy");
    r.data = if torsion {
        json!({ "word": w.to_string(), "torsion": torsion_polynomial(&w).to_string() })
    } else {
        let t = apply_word(&w, &TraceTriple::identity());
        json!({ "word": w.to_string(), "triple": t.0.iter().map(|p| p.to_string()).collect::<Vec<_>>() })
    };
    Ok(r)
}

fn jacobi(seed: u64, trials: usize) -> Outcome<Report> {
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let rep = jacobi_selftest(seed, trials)?;
    let mut r = Report::new("jacobi-selftest");
    r.seed = Some(seed);
    r.data = json!({
        "trials": rep.trials,
        "positive_failures": rep.positive_failures,
        "negative_failures": rep.negative_failures,
        "max_positive_residual": rep.max_positive_residual,
        "max_negative_residual": rep.max_negative_residual,
    });
    rep.checks.into_iter().for_each(|c| r.push(c));
    Ok(r)
}

/// Turns a job object such as `{"command": "fiber-sum", "n": 4, "slope": [1, 0]}`
/// into an argument vector. Arrays become comma lists; `true` becomes a bare flag.
fn job_argv(job: &Value) -> Outcome<Vec<String>> {
    let obj = job.as_object().ok_or_else(|| Failure::Usage(format!("job is not an object: {job}")))?;
    let command = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::Usage(format!("job has no command: {job}")))?;
    if command == "sweep" {
        return Err(Failure::Usage("sweep jobs cannot nest".into()));
    }
    let mut argv = vec!["optb".to_string(), command.to_string()];
    for (key, value) in obj.iter().filter(|(k, _)| k.as_str() != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        let scalar = |v: &Value| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(x) => Ok(x.to_string()),
            other => Err(Failure::Usage(format!("unsupported value for {key}: {other}"))),
        };
        match value {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Outcome<Vec<_>>>()?;
                argv.extend([flag, parts.join(",")]);
            }
            other => argv.extend([flag, scalar(other)?]),
        }
    }
    Ok(argv)
}

fn sweep(path: &PathBuf, g: &Global) -> Outcome<Report> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let jobs: Vec<Value> =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut keyed = jobs
        .iter()
        .map(|job| Ok((job.to_string(), job_argv(job)?)))
        .collect::<Outcome<Vec<_>>>()?;
    keyed.sort();
    for (key, argv) in &keyed {
        Cli::try_parse_from(argv).map_err(|e| Failure::Usage(format!("job {key}: {e}")))?;
    }
    let results: Vec<(String, Outcome<Report>)> = keyed
        .par_iter()
        .map(|(key, argv)| {
            let cli = Cli::try_parse_from(argv).expect("validated above");
            let mut global = cli.global.clone();
            global.root_tol = if argv.iter().any(|a| a == "--root-tol") { global.root_tol } else { g.root_tol };
            global.tol = global.tol.or(g.tol);
            (key.clone(), execute(&cli.command, &global))
        })
        .collect();

    let mut r = Report::new("sweep");
    let mut reports = Vec::new();
    for (key, outcome) in results {
        match outcome {
            Ok(job) => {
                for c in &job.checks {
                    r.checks.push(CheckOut {
                        name: format!("{key} {}", c.name),
                        status: c.status,
                        detail: c.detail.clone(),
                    });
                }
                reports.push(json!({ "job": key, "report": job }));
            }
            Err(Failure::Usage(msg)) | Err(Failure::Run(msg)) => {
                r.checks.push(CheckOut {
                    name: format!("{key} error"),
                    status: "fail",
                    detail: msg.clone(),
                });
                reports.push(json!({ "job": key, "error": msg }));
            }
        }
    }
    r.data = json!({ "jobs": reports });
    Ok(r)
}
