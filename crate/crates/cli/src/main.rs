use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use cmc1_core::algebra::ExtComplex;
use cmc1_core::classifier::{
    check_facts, enumerate_low_ta, gauss_bonnet_ta, minimal_surface_table, render_table, threenoid_contradiction, threenoid_sweep,
};
use cmc1_core::expr::{BranchState, MeroExpr};
use cmc1_core::families::{FamilyParams, WeierstrassData};
use cmc1_core::frobenius::{indicial_roots, log_term_coefficient, o23_data, ode_from_data, series_oracle, MKind, SeriesODE};
use cmc1_core::invariants::{metric_product_check, schwarzian_identity_check, total_absolute_curvature, QuadratureSpec};
use cmc1_core::lift::{IntegratorOptions, LiftSource};
use cmc1_core::mesh::{sample_mesh, GridSpec, MeshDiagnostics};
use cmc1_core::monodromy::{fuzz, FuzzKind};
use cmc1_core::Error;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "cmc1",
    version,
    about = "CMC-1 surfaces in hyperbolic space: meshes, invariants, classification",
    after_help = "--config FILE reads a JSON object such as {\"command\": \"ta\", \"family\": \"catenoid-cousin\", \"mu\": 0.5}; \
                  its keys become flags and flags on the command line override them."
)]
struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "CMC1_THREADS")]
    threads: Option<usize>,
    /// Add wall-clock seconds to reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a mesh, write OBJ, print diagnostics.
    Surface(SurfaceArgs),
    /// Total absolute curvature by quadrature.
    Ta(TaArgs),
    /// Low total-curvature classification table.
    Classify(ClassifyArgs),
    /// Three-end sign contradiction, single case or sweep.
    Threenoid(ThreenoidArgs),
    /// Log-term coefficient at a regular singular point of the lift ODE.
    Logterm(LogtermArgs),
    /// Randomized checks.
    Fuzz(FuzzArgs),
    /// Run the invariant suite for one family; nonzero exit on failure.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Horosphere,
    EnneperCousin,
    CatenoidCousin,
    CatenoidCover,
    WarpedCatenoid,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Cover degree (catenoid-cover) or the warped-catenoid parameter.
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
}

fn required<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidParams(format!("--{flag} is required for {family}")))
}

impl FamilyArgs {
    fn params(&self) -> Result<FamilyParams, Error> {
        Ok(match self.family {
            Family::Horosphere => FamilyParams::Horosphere,
            Family::EnneperCousin => FamilyParams::EnneperCousin,
            Family::CatenoidCousin => FamilyParams::CatenoidCousin { mu: required(self.mu, "mu", "catenoid-cousin")? },
            Family::CatenoidCover => FamilyParams::CatenoidCover {
                mu: required(self.mu, "mu", "catenoid-cover")?,
                delta: required(self.delta, "delta", "catenoid-cover")?,
            },
            Family::WarpedCatenoid => FamilyParams::WarpedCatenoid {
                delta: required(self.delta, "delta", "warped-catenoid")?,
                l: required(self.l, "l", "warped-catenoid")?,
                b: required(self.b, "b", "warped-catenoid")?,
            },
        })
    }

    fn build(&self) -> Result<WeierstrassData, Error> {
        self.params()?.build()
    }
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, default_value_t = 1e-9)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_cells: usize,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec { abs_tol: self.abs_tol, rel_tol: self.rel_tol, max_cells: self.max_cells, ..Default::default() }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Source {
    Numeric,
    Closed,
}

#[derive(Args)]
struct LiftArgs {
    /// Lift from numeric integration or from the closed form (when the family has one).
    #[arg(long, value_enum, default_value = "numeric")]
    source: Source,
    /// Integrator local error target.
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
}

impl LiftArgs {
    fn source(&self, data: &WeierstrassData) -> Result<LiftSource, Error> {
        match self.source {
            Source::Numeric => Ok(LiftSource::Numeric(IntegratorOptions { tol: self.tol, ..Default::default() })),
            Source::Closed if data.closed_form.is_some() => Ok(LiftSource::ClosedForm),
            Source::Closed => Err(Error::InvalidParams(format!("{} has no closed-form lift", data.name))),
        }
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.25)]
    r_min: f64,
    #[arg(long, default_value_t = 4.0)]
    r_max: f64,
    #[arg(long, default_value_t = 24)]
    nr: usize,
    #[arg(long, default_value_t = 48)]
    ntheta: usize,
    /// Start of a cut-away angular range (radians).
    #[arg(long, requires = "theta_max")]
    theta_min: Option<f64>,
    #[arg(long, requires = "theta_min")]
    theta_max: Option<f64>,
}

impl GridArgs {
    fn grid(&self) -> GridSpec {
        GridSpec {
            r_min: self.r_min,
            r_max: self.r_max,
            nr: self.nr,
            ntheta: self.ntheta,
            theta: self.theta_min.zip(self.theta_max),
        }
    }
}

#[derive(Args)]
#[command(args_override_self = true)]
struct SurfaceArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    lift: LiftArgs,
    #[arg(long, default_value = "surface.obj")]
    out: PathBuf,
    /// Number of mean-curvature sample points.
    #[arg(long, default_value_t = 64)]
    h_samples: usize,
    /// Finite-difference step relative to |z|.
    #[arg(long, default_value_t = 0.02)]
    h_rel: f64,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct TaArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    #[value(name = "4pi")]
    FourPi,
    Minimal,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct ClassifyArgs {
    #[arg(long, value_enum, default_value = "4pi")]
    table: Table,
    /// Full case analysis as JSON, including rejected branches.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct ThreenoidArgs {
    /// Three end orders, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "sweep")]
    mu: Option<Vec<f64>>,
    /// Orders of the Hopf differential at the three ends.
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 0, 0])]
    mu_sharp: Vec<u32>,
    /// Number of random admissible cases.
    #[arg(long)]
    sweep: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
#[command(args_override_self = true)]
#[command(group(ArgGroup::new("input").required(true).args(["mu", "w", "a"])))]
struct LogtermArgs {
    /// End order for O(-2,-3) data at z = 0.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Defaults to (mu^2 - 1)/4, the value forced by the end at z = 0.
    #[arg(long, allow_hyphen_values = true, requires = "mu")]
    theta: Option<f64>,
    /// `omega = w dz` as an expression in z, e.g. `0.5*z^-1.8`.
    #[arg(long, allow_hyphen_values = true, requires = "q")]
    w: Option<String>,
    /// Hopf coefficient `Q = q dz^2` as an expression in z.
    #[arg(long, allow_hyphen_values = true, requires = "w")]
    q: Option<String>,
    /// Expansion point: a complex number or `inf`.
    #[arg(long, default_value = "0", allow_hyphen_values = true, requires = "w")]
    at: String,
    /// Raw coefficients `a_j` of `a = (1/t) sum a_j t^j`, comma separated (`1.5`, `0.2-1i`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "b")]
    a: Option<Vec<Complex64>>,
    /// Raw coefficients `b_j` of `b = (1/t^2) sum b_j t^j`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "a")]
    b: Option<Vec<Complex64>>,
    /// Series truncation order for expression input.
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// Also solve the truncated series by dense elimination up to this order.
    #[arg(long)]
    oracle: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzTarget {
    Su2,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FuzzSuite {
    All,
    Trig,
    Product,
    OddProduct,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct FuzzArgs {
    #[arg(value_enum)]
    target: FuzzTarget,
    #[arg(long, value_enum, default_value = "all")]
    suite: FuzzSuite,
    #[arg(long, default_value_t = 100_000)]
    count: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Largest half-length of odd products.
    #[arg(long, default_value_t = 3)]
    m: usize,
}

#[derive(Args)]
#[command(args_override_self = true)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    quad: QuadArgs,
}

fn print_json<T: Serialize>(v: &T) {
    let mut out = std::io::stdout().lock();
    // a closed pipe downstream is not an error for a report printer
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn print_text(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn with_seconds(mut v: Value, start: Instant, timing: bool) -> Value {
    if timing {
        v["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    v
}

enum Failure {
    Usage(Error),
    Run(Error),
    Violations,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Hypothesis(_) | Error::Parse { .. } => Failure::Usage(e),
            e => Failure::Run(e),
        }
    }
}

fn cmd_surface(a: &SurfaceArgs, timing: bool) -> Result<(), Failure> {
    let start = Instant::now();
    let data = a.family.build()?;
    let source = a.lift.source(&data)?;
    let mesh = sample_mesh(&data, source, &a.grid.grid())?;
    let file = File::create(&a.out).map_err(|e| Failure::Run(Error::InvalidParams(format!("{}: {e}", a.out.display()))))?;
    mesh.write_obj(BufWriter::new(file)).map_err(|e| Failure::Run(Error::InvalidParams(format!("{}: {e}", a.out.display()))))?;
    let survey = mesh.curvature_survey(&data, source, a.h_samples, a.h_rel)?;
    let diag = MeshDiagnostics::new(&mesh, &survey);
    let ta = total_absolute_curvature(&data, &a.quad.spec())?;
    let min_order = survey.iter().filter_map(|r| r.order).reduce(f64::min);
    let v = json!({
        "family": data.name,
        "out": a.out.display().to_string(),
        "vertices": mesh.vertices.len(),
        "faces": mesh.faces.len(),
        "det_drift": diag.det_drift,
        "mean_curvature_max_err": diag.mean_curvature_max_err,
        "mean_curvature_samples": survey.len(),
        "mean_curvature_min_order": min_order,
        "grid": diag.grid,
        "ta": ta.ta,
        "ta_over_4pi": ta.ta_over_4pi,
    });
    print_json(&with_seconds(v, start, timing));
    Ok(())
}

fn cmd_ta(a: &TaArgs, timing: bool) -> Result<(), Failure> {
    let start = Instant::now();
    let data = a.family.build()?;
    let r = total_absolute_curvature(&data, &a.quad.spec())?;
    print_json(&with_seconds(serde_json::to_value(r).expect("serializable"), start, timing));
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs) -> Result<(), Failure> {
    match (a.table, a.json) {
        (Table::FourPi, false) => print_text(&enumerate_low_ta(4.0 * PI)?.render_table()),
        (Table::FourPi, true) => print_json(&enumerate_low_ta(4.0 * PI)?),
        (Table::Minimal, false) => print_text(&render_table(&minimal_surface_table())),
        (Table::Minimal, true) => print_json(&minimal_surface_table()),
    }
    Ok(())
}

fn cmd_threenoid(a: &ThreenoidArgs) -> Result<(), Failure> {
    if let Some(n) = a.sweep {
        let r = threenoid_sweep(n, a.seed);
        print_json(&r);
        return if r.contradictions == r.cases && r.filter_ok == r.cases { Ok(()) } else { Err(Failure::Violations) };
    }
    let mu = a.mu.as_ref().ok_or_else(|| Failure::Usage(Error::InvalidParams("give --mu a,b,c or --sweep N".into())))?;
    if mu.len() != 3 || a.mu_sharp.len() != 3 {
        return Err(Failure::Usage(Error::InvalidParams("--mu and --mu-sharp take exactly three values".into())));
    }
    let r = threenoid_contradiction([mu[0], mu[1], mu[2]], [a.mu_sharp[0], a.mu_sharp[1], a.mu_sharp[2]])?;
    print_json(&r);
    Ok(())
}

fn parse_point(s: &str) -> Result<ExtComplex, Error> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(ExtComplex::Infinity);
    }
    s.parse::<Complex64>().map(ExtComplex::Finite).map_err(|e| Error::InvalidParams(format!("--at {s}: {e}")))
}

fn cmd_logterm(a: &LogtermArgs) -> Result<(), Failure> {
    let (ode, mut v) = if let Some(mu) = a.mu {
        let theta = a.theta.unwrap_or((mu * mu - 1.0) / 4.0);
        let (w, q) = o23_data(mu, Complex64::new(theta, 0.0))?;
        let ode = ode_from_data(&w, &q, ExtComplex::Finite(Complex64::new(0.0, 0.0)), a.order.max(a.oracle.unwrap_or(0)))?;
        (ode, json!({ "mu": mu, "theta": theta }))
    } else if let (Some(w), Some(q)) = (&a.w, &a.q) {
        let at = parse_point(&a.at)?;
        let n = a.order.max(a.oracle.unwrap_or(0));
        let ode = ode_from_data(&MeroExpr::parse(w)?, &MeroExpr::parse(q)?, at, n)?;
        (ode, json!({ "w": w, "q": q, "at": at }))
    } else {
        let (ca, cb) = (a.a.clone().unwrap_or_default(), a.b.clone().unwrap_or_default());
        (SeriesODE::new(ca, cb)?, json!({}))
    };
    let ind = indicial_roots(ode.a[0], ode.b[0]);
    let report = match ind.kind {
        MKind::PositiveInteger(m) if m as usize <= ode.n() => Some(log_term_coefficient(&ode, ind.lambda, m)?),
        MKind::PositiveInteger(m) => {
            return Err(Failure::Usage(Error::InvalidParams(format!("m = {m} exceeds the truncation order {}", ode.n()))))
        }
        _ => None,
    };
    v["indicial"] = serde_json::to_value(ind).expect("serializable");
    v["log_term"] = serde_json::to_value(&report).expect("serializable");
    if let Some(n) = a.oracle {
        let n = n.min(ode.n());
        v["oracle"] = serde_json::to_value(series_oracle(&ode, ind.lambda, n)).expect("serializable");
    }
    print_json(&v);
    Ok(())
}

fn cmd_fuzz(a: &FuzzArgs) -> Result<(), Failure> {
    let FuzzTarget::Su2 = a.target;
    let kinds: Vec<FuzzKind> = match a.suite {
        FuzzSuite::All => vec![FuzzKind::Trig, FuzzKind::Product, FuzzKind::OddProduct],
        FuzzSuite::Trig => vec![FuzzKind::Trig],
        FuzzSuite::Product => vec![FuzzKind::Product],
        FuzzSuite::OddProduct => vec![FuzzKind::OddProduct],
    };
    let reports: Vec<_> = kinds.into_iter().map(|k| fuzz(k, a.count, a.seed, a.m)).collect();
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    let trials: u64 = reports.iter().map(|r| r.trials).sum();
    let worst = reports.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min);
    print_json(&json!({ "trials": trials, "violations": violations, "worst_margin": worst, "seed": a.seed, "suites": reports }));
    if violations == 0 {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check { name, value, tolerance, pass: value <= tolerance, note: None }
}

/// Deterministic probe points in the annulus `0.3 <= |z| <= 3`.
fn probe_points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            Complex64::from_polar(0.3 * 10f64.powf(t), 2.399_963 * k as f64 + 0.1)
        })
        .collect()
}

fn cmd_verify(a: &VerifyArgs, timing: bool) -> Result<(), Failure> {
    let start = Instant::now();
    let data = a.family.build()?;
    let spec = data.type_spec();
    let mut checks = Vec::new();

    let facts = check_facts(&spec);
    let mut c = check("facts_ledger_violations", facts.len() as f64, 0.0);
    if !facts.is_empty() {
        c.note = Some(facts.iter().map(|v| v.detail.clone()).collect::<Vec<_>>().join("; "));
    }
    checks.push(c);

    let ta = total_absolute_curvature(&data, &a.quad.spec())?;
    let gb = gauss_bonnet_ta(&spec)?;
    if data.flat {
        checks.push(check("ta_flat_is_zero", ta.ta.abs(), 0.0));
    } else {
        checks.push(check("ta_vs_gauss_bonnet_rel", (ta.ta - gb).abs() / gb, 1e-3));
        let bound = 2.0 * PI * (spec.n() as f64 - 2.0 + 2.0 * spec.genus as f64);
        let mut c = check("cohn_vossen_strict", if ta.ta > bound { 0.0 } else { 1.0 }, 0.0);
        c.note = Some(format!("TA = {} > {}", ta.ta, bound));
        checks.push(c);

        let mut worst: f64 = 0.0;
        for z in probe_points(32) {
            worst = worst.max(metric_product_check(&data, z)?.residual);
        }
        checks.push(check("metric_product_residual", worst, 1e-12));

        let source =
            if data.closed_form.is_some() { LiftSource::ClosedForm } else { LiftSource::Numeric(IntegratorOptions::default()) };
        let mut worst: f64 = 0.0;
        for z in probe_points(16) {
            worst = worst.max(schwarzian_identity_check(&data, source, &BranchState::new(z))?.residual);
        }
        checks.push(check("schwarzian_identity_residual", worst, 1e-5));
    }

    let source = LiftSource::Numeric(IntegratorOptions { tol: 1e-13, ..Default::default() });
    let grid = GridSpec { r_min: 0.4, r_max: 2.5, nr: 9, ntheta: 16, theta: None };
    let mesh = sample_mesh(&data, source, &grid)?;
    let survey = mesh.curvature_survey(&data, source, 60, 0.02)?;
    let diag = MeshDiagnostics::new(&mesh, &survey);
    checks.push(check("mean_curvature_max_err", diag.mean_curvature_max_err, 1e-3));
    let min_order = survey.iter().filter_map(|r| r.order).fold(f64::INFINITY, f64::min);
    let mut c = check("richardson_order_deficit", (1.5 - min_order).max(0.0), 0.0);
    c.note = Some(format!("{} samples, min observed order {}", survey.len(), min_order));
    checks.push(c);
    checks.push(check("det_drift", diag.det_drift, 1e-9));

    let pass = checks.iter().all(|c| c.pass);
    let v = json!({ "family": data.name, "type": spec.type_label(), "pass": pass, "checks": checks });
    print_json(&with_seconds(v, start, timing));
    if pass {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

/// Replaces `--config FILE` with the subcommand and flags it names.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config=")) else {
        return Ok(args);
    };
    let (path, skip) = match args[pos].to_string_lossy().strip_prefix("--config=") {
        Some(p) => (p.to_string(), 1),
        None => (args.get(pos + 1).ok_or("--config needs a file")?.to_string_lossy().into_owned(), 2),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let Value::Object(map) = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))? else {
        return Err(format!("{path}: expected a JSON object"));
    };
    let command = map.get("command").and_then(Value::as_str).ok_or(format!("{path}: missing \"command\""))?;
    let mut out: Vec<OsString> = args[..pos].to_vec();
    out.extend(command.split_whitespace().map(OsString::from));
    for (key, value) in &map {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let scalar = |v: &Value| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(format!("{path}: unsupported value for {key}")),
        };
        match value {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(",");
                out.push(format!("{flag}={joined}").into());
            }
            v => out.push(format!("{flag}={}", scalar(v)?).into()),
        }
    }
    out.extend(args[pos + skip..].iter().cloned());
    Ok(out)
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match &cli.cmd {
        Command::Surface(a) => cmd_surface(a, cli.timing),
        Command::Ta(a) => cmd_ta(a, cli.timing),
        Command::Classify(a) => cmd_classify(a),
        Command::Threenoid(a) => cmd_threenoid(a),
        Command::Logterm(a) => cmd_logterm(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Verify(a) => cmd_verify(a, cli.timing),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violations) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
