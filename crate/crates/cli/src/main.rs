use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mhbesov::coeffs::Route;
use mhbesov::mh::{norm_report, FunctionSpec, NormReport, SobolevNorm};
use mhbesov::parallel::ExecutionMode;
use mhbesov::quadrature::DEFAULT_REL_TOL;
use mhbesov::sweep::{sweep_coefficients, SweepConfig, SweepRow};
use mhbesov::verify::{run_suite, Suite, SuiteReport, VerifyConfig};

mod render;

use render::num;

/// Coefficient sweeps, verification suites and norm reports for
/// M-harmonic functions on the unit ball.
#[derive(Parser, Debug)]
#[command(name = "mhbesov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate c_pq(s) over 0 ≤ p ≤ pmax, 0 ≤ q ≤ qmax.
    Coeffs(CoeffsArgs),
    /// Run one verification suite, or all of them.
    Verify(VerifyArgs),
    /// Norm report for a function given as a JSON spec file.
    Norms(NormsArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn mode(&self) -> ExecutionMode {
        if self.sequential {
            ExecutionMode::Sequential
        } else {
            ExecutionMode::default()
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Weight exponent; repeat for several values.
    #[arg(long = "s", required = true, allow_negative_numbers = true)]
    s: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    pmax: u32,
    #[arg(long, default_value_t = 8)]
    qmax: u32,
    /// auto, quadrature, double_integral, closed_p0 or series_noninteger.
    #[arg(long, default_value = "auto")]
    route: Route,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// identity-pe, asymptotics, eigenvalues, radial-ode, norm-equivalence,
    /// mean-value, sobolev, blowup or all.
    suite: String,
    /// Dimension; repeat for several. Defaults depend on the suite.
    #[arg(long = "n")]
    n: Vec<u32>,
    #[arg(long = "s", allow_negative_numbers = true)]
    s: Vec<f64>,
    #[arg(long)]
    pmax: Option<u32>,
    #[arg(long)]
    qmax: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct NormsArgs {
    /// JSON function spec: {"n": .., "components": [{"p", "q", "terms": [{"alpha", "beta", "re", "im"}]}]}.
    spec: PathBuf,
    #[arg(long = "s", default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    /// Number of tangential derivatives; also the Sobolev order.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Smoothing exponent of the box-smoothed norm.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Checks,
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<mhbesov::Error> for Failure {
    fn from(e: mhbesov::Error) -> Self {
        Failure::Compute(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Coeffs(a) => cmd_coeffs(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Norms(a) => cmd_norms(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<(), Failure> {
    let cfg = SweepConfig::new(a.n, a.s.clone(), a.pmax, a.qmax)
        .with_route(a.route)
        .with_tol(a.tol)
        .with_mode(a.common.mode());
    let rows = sweep_coefficients(&cfg).map_err(|e| anyhow::anyhow!(e))?;
    let mut out = open_output(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => write_rows_csv(&mut out, &rows)?,
        Format::Json => render::write_json(&mut out, &rows)?,
    }
    out.flush().context("writing output")?;
    Ok(())
}

fn write_rows_csv(out: &mut dyn Write, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "q", "s", "value", "err_est", "route", "normalized_value"])?;
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.q.to_string(),
            num(r.s),
            num(r.value),
            num(r.err_est),
            r.route.to_string(),
            num(r.normalized_value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(anyhow::Error::from)?]
    };
    let cfg = VerifyConfig {
        dims: (!a.n.is_empty()).then(|| a.n.clone()),
        s: (!a.s.is_empty()).then(|| a.s.clone()),
        p_max: a.pmax,
        q_max: a.qmax,
        rel_tol: a.tol,
        seed: a.seed,
        mode: a.common.mode(),
    };
    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        let rep = run_suite(suite, &cfg).with_context(|| format!("suite {suite}"))?;
        for c in &rep.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            eprintln!("{tag} {suite} {} [{}] {:.2?}", c.check, c.parameters, c.runtime);
        }
        reports.push(rep);
    }
    let mut out = open_output(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => render::write_suites_csv(&mut out, &reports)?,
        Format::Json => render::write_json(&mut out, &reports)?,
    }
    out.flush().context("writing output")?;
    if reports.iter().all(SuiteReport::all_pass) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_norms(a: &NormsArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.spec).with_context(|| format!("reading {}", a.spec.display()))?;
    let spec: FunctionSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.spec.display()))?;
    let f = spec.to_function().context("invalid function spec")?;
    let report = norm_report(&f, a.s, a.m, a.t, a.tol)?;
    let mut out = open_output(a.common.out.as_deref())?;
    match a.common.format {
        Format::Csv => write_norms_csv(&mut out, &report)?,
        Format::Json => render::write_json(&mut out, &report)?,
    }
    out.flush().context("writing output")?;
    Ok(())
}

fn write_norms_csv(out: &mut dyn Write, r: &NormReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["quantity", "value"])?;
    let head = [("n", r.n.to_string()), ("s", num(r.s)), ("m", r.m.to_string()), ("t", num(r.t))];
    for (k, v) in head {
        w.write_record([k.to_string(), v])?;
    }
    let q = [
        ("bergman_s", r.bergman_s),
        ("tangential_m", r.tangential_m),
        ("box_smoothed_t", r.box_smoothed_t),
        ("hardy_smoothed", r.hardy_smoothed),
    ];
    for (k, v) in q {
        w.write_record([k.to_string(), num(v)])?;
    }
    let sob = match r.sobolev_m {
        Some(SobolevNorm::Finite(v)) => num(v),
        Some(SobolevNorm::Divergent { p, q, k }) => format!("divergent at (p, q) = ({p}, {q}), k = {k}"),
        None => "undefined".to_string(),
    };
    w.write_record(["sobolev_m".to_string(), sob])?;
    for (x, y, v) in &r.ratios {
        w.write_record([format!("ratio {x}/{y}"), num(*v)])?;
    }
    w.flush()?;
    Ok(())
}
