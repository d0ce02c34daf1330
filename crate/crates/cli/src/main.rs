//! `tto-lab`: build truncated Toeplitz matrices, verify identities, run
//! scenario scans and plot their reports.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage error.

mod args;
mod output;
mod plot;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tto_lab::harness::{self, ScanReport, Scenario};
use tto_lab::inner::{make_blaschke, BlaschkeProduct};
use tto_lab::modelspace::{build_basis, Resolution};
use tto_lab::spectral::{self, verify_identity, IdentityName, IdentityParams};
use tto_lab::symbols::{Symbol, TrigPolynomial};
use tto_lab::tto::{
    clark_functional_gap_exact, clark_unitary_exact, kernel_origin_coords, shift_matrix,
    truncated_toeplitz, tto_functional, Method, OperatorMatrix,
};
use tto_lab::{random, Complex64};

use crate::args::{parse_complex, parse_complex_list, parse_symbol};
use crate::output::{resolve, write_atomic};
use crate::plot::{emit_plot, PlotKind};

const SYMBOL_HELP: &str = "symbol: an expression such as chi, z-1, 2*chi+3, z^2+conj(z), 0.5i*z^-1; \
inline JSON ({\"type\": \"trig\", \"coeffs\": {\"-1\": [1, 0]}}, {\"type\": \"chi\"}, \
{\"type\": \"jump\", \"jumps\": [{\"at\": [1, 0], \"height\": [1, 0]}], \"background\": {...}}, \
{\"type\": \"sampled\", \"values\": [[re, im], ...]}); or @file.json";

const SCENARIO_SCHEMA: &str = r#"scenario JSON:
{
  "kind": "compactness" | "essential-spectrum" | "essential-norm" | "clark-comparison" | "pc-reduction" | "identity-suite",
  "family": {"xi": [re, im], "rate": r, "degrees": [..], "phase": [re, im]}      (default xi = 1, r = 1/3, 8..48)
          | {"monomial": [degrees]} | {"random": {"degrees": [..], "max_modulus": 0.9}},
  "symbol": "z-1" | {"type": ...},
  "alpha": [re, im],          (default [1, 0])
  "tolerance": t,             (per-kind default)
  "rank_tol": 1e-9,
  "d_chi": 256,
  "quadrature": N,            (identity suite grid; automatic when absent)
  "seed": 0,
  "record_timing": false,
  "output": {"csv": path, "json": path}
}"#;

/// Bad flags or unusable inputs; exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser, Debug)]
#[command(name = "tto-lab", version, about = "Truncated Toeplitz operator laboratory")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "TTO_LAB_OUT", default_value = "out")]
    out_dir: PathBuf,
    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build A_phi^u and write it as CSV (or JSON when the file ends in .json).
    Build(BuildArgs),
    /// Check exact operator identities.
    Verify(VerifyArgs),
    /// Run a scenario sweep from a JSON config.
    Scan(ScanArgs),
    /// Clark unitary U_alpha and its checks.
    Clark(ClarkArgs),
    /// Eigenvalues and singular values of A_phi^u.
    Spectrum(SpectrumArgs),
    /// SVG plot of a scan report.
    Plot(PlotArgs),
}

#[derive(Clone, Debug)]
struct ZeroList(Vec<Complex64>);

#[derive(Args, Debug)]
#[group(id = "inner", required = true, multiple = false)]
struct InnerArgs {
    /// Comma-separated zeros, each as a+bi.
    #[arg(long, group = "inner", value_parser = |s: &str| parse_complex_list(s).map(ZeroList), allow_hyphen_values = true)]
    zeros: Option<ZeroList>,
    /// u = z^n, or a random product of degree n with --random.
    #[arg(long, group = "inner")]
    degree: Option<usize>,
}

#[derive(Args, Debug)]
struct InnerOptions {
    #[command(flatten)]
    inner: InnerArgs,
    /// Unimodular phase of u.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    phase: Option<Complex64>,
    /// With --degree: random zeros in |a| <= 0.9 drawn from --seed.
    #[arg(long, requires = "degree")]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InnerOptions {
    fn blaschke(&self) -> Result<BlaschkeProduct> {
        let phase = self.phase.unwrap_or(Complex64::new(1.0, 0.0));
        let u = match (&self.inner.zeros, self.inner.degree) {
            (Some(z), _) => make_blaschke(z.0.clone(), phase),
            (None, Some(n)) if self.random => {
                let mut rng = random::rng(self.seed);
                let z = random::zeros(&mut rng, n, 0.9, 1e-3);
                make_blaschke(z, phase)
            }
            (None, Some(n)) => make_blaschke(vec![Complex64::new(0.0, 0.0); n], phase),
            (None, None) => return Err(usage("one of --zeros or --degree is required")),
        };
        u.map_err(|e| usage(format!("invalid inner function: {e}")))
    }
}

fn blaschke_json(u: &BlaschkeProduct) -> serde_json::Value {
    json!({"zeros": u.zeros(), "phase": u.phase()})
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Functional calculus for trig symbols, quadrature otherwise.
    Auto,
    FunctionalCalculus,
    Quadrature,
}

fn parse_symbol_arg(s: &str) -> Result<Symbol, String> {
    parse_symbol(s).map_err(|e| format!("{e}\n{SYMBOL_HELP}"))
}

#[derive(Args, Debug)]
struct OperatorOptions {
    #[command(flatten)]
    u: InnerOptions,
    #[arg(long, value_parser = parse_symbol_arg, allow_hyphen_values = true, default_value = "z")]
    symbol: Symbol,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Quadrature grid size (power of two); automatic when absent.
    #[arg(long)]
    quadrature: Option<usize>,
}

impl OperatorOptions {
    fn operator(&self, u: &BlaschkeProduct) -> Result<OperatorMatrix> {
        let method = match (self.method, &self.symbol) {
            (MethodArg::Auto, Symbol::Trig(_)) | (MethodArg::FunctionalCalculus, _) => Method::FunctionalCalculus,
            _ => Method::Quadrature,
        };
        match (method, &self.symbol) {
            (Method::FunctionalCalculus, Symbol::Trig(p)) => Ok(tto_functional(u, p)),
            (Method::FunctionalCalculus, _) => Err(usage(
                "--method functional-calculus needs a trigonometric polynomial symbol",
            )),
            (Method::Quadrature, phi) => {
                let resolution = self.quadrature.map_or(Resolution::Auto, Resolution::Points);
                let basis = build_basis(u, resolution)?;
                Ok(truncated_toeplitz(&basis, phi, Method::Quadrature)?)
            }
        }
    }
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    op: OperatorOptions,
    /// Output file, relative to the output directory.
    #[arg(long, default_value = "matrix.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
#[group(id = "which", required = true, multiple = false)]
struct WhichIdentities {
    /// Every identity.
    #[arg(long, group = "which")]
    all: bool,
    /// One identity; repeatable.
    #[arg(long, group = "which", value_parser = parse_identity)]
    identity: Vec<IdentityName>,
}

fn parse_identity(s: &str) -> Result<IdentityName, String> {
    s.parse().map_err(|e| {
        let names: Vec<_> = IdentityName::ALL.iter().map(|n| n.as_str()).collect();
        format!("{e} (known: {})", names.join(", "))
    })
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    which: WhichIdentities,
    #[command(flatten)]
    u: InnerOptions,
    #[arg(long)]
    quadrature: Option<usize>,
    /// Clark parameter; random from --seed when absent.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    /// phi for the hankel and csym identities.
    #[arg(long, value_parser = parse_symbol_arg, allow_hyphen_values = true)]
    phi: Option<Symbol>,
    /// psi for the hankel identity.
    #[arg(long, value_parser = parse_symbol_arg, allow_hyphen_values = true)]
    psi: Option<Symbol>,
    #[arg(long, default_value = "verify.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClarkArgs {
    #[command(flatten)]
    u: InnerOptions,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    alpha: Complex64,
    /// Also report phi(U) - A_phi for this symbol.
    #[arg(long, value_parser = parse_symbol_arg, allow_hyphen_values = true)]
    symbol: Option<Symbol>,
    #[arg(long, default_value = "clark")]
    stem: String,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    op: OperatorOptions,
    #[arg(long, default_value_t = spectral::RANK_TOL)]
    rank_tol: f64,
    #[arg(long, default_value = "spectrum")]
    stem: String,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Scan report JSON.
    #[arg(long)]
    report: PathBuf,
    #[arg(long, value_parser = |s: &str| s.parse::<PlotKind>())]
    kind: PlotKind,
    /// SVG path; the raw CSV goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() || e.downcast_ref::<plot::EmptyReport>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// `Ok(pass)` on completion.
fn run(cli: &Cli) -> Result<bool> {
    let out = &cli.out_dir;
    match &cli.command {
        Command::Build(a) => build(out, a),
        Command::Verify(a) => verify(out, a),
        Command::Scan(a) => scan(out, a),
        Command::Clark(a) => clark(out, a),
        Command::Spectrum(a) => spectrum(out, a),
        Command::Plot(a) => plot_cmd(out, a),
    }
}

fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s.into_bytes()
}

fn build(out: &Path, a: &BuildArgs) -> Result<bool> {
    let u = a.op.u.blaschke()?;
    let m = a.op.operator(&u)?;
    let path = resolve(out, &a.out);
    if path.extension().is_some_and(|e| e == "json") {
        let mut v = m.to_json();
        v["symbol"] = serde_json::to_value(&a.op.symbol)?;
        v["seed"] = json!(a.op.u.seed);
        write_atomic(&path, &json_bytes(&v))?;
    } else {
        let mut buf = Vec::new();
        m.write_csv(&mut buf)?;
        write_atomic(&path, &buf)?;
    }
    println!("{}", path.display());
    Ok(true)
}

fn trig_of(s: &Option<Symbol>, flag: &str) -> Result<Option<TrigPolynomial>> {
    match s {
        None => Ok(None),
        Some(Symbol::Trig(p)) => Ok(Some(p.clone())),
        Some(_) => Err(usage(format!("{flag} must be a trigonometric polynomial"))),
    }
}

fn verify(out: &Path, a: &VerifyArgs) -> Result<bool> {
    let u = a.u.blaschke()?;
    let resolution = a.quadrature.map_or(Resolution::Auto, Resolution::Points);
    let basis = build_basis(&u, resolution)?;
    let params = IdentityParams {
        phi: trig_of(&a.phi, "--phi")?,
        psi: trig_of(&a.psi, "--psi")?,
        alpha: a.alpha,
        seed: a.u.seed,
        ..IdentityParams::default()
    };
    let names: Vec<IdentityName> = if a.which.all {
        IdentityName::ALL.to_vec()
    } else {
        a.which.identity.clone()
    };
    let reports = names
        .iter()
        .map(|&n| verify_identity(n, &basis, &params))
        .collect::<tto_lab::Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        println!(
            "{:<16} residual {:.3e}  tolerance {:.0e}  {}",
            r.identity.as_str(),
            r.residual,
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let doc = json!({
        "blaschke": blaschke_json(&u),
        "quadrature_points": basis.points(),
        "seed": a.u.seed,
        "pass": pass,
        "reports": reports,
    });
    write_atomic(&resolve(out, &a.out), &json_bytes(&doc))?;
    Ok(pass)
}

fn scan(out: &Path, a: &ScanArgs) -> Result<bool> {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| usage(format!("--config {}: {e}", a.config.display())))?;
    let mut scenario = Scenario::from_json(&text)
        .map_err(|e| usage(format!("--config {}: {e}\n{SCENARIO_SCHEMA}", a.config.display())))?;
    if let Some(seed) = a.seed {
        scenario.seed = seed;
    }
    let report = harness::run(&scenario).map_err(|e| match e {
        tto_lab::Error::Scenario(_) | tto_lab::Error::BadDegrees | tto_lab::Error::WrongJumpSet(_) => {
            usage(format!("--config {}: {e}\n{SCENARIO_SCHEMA}", a.config.display()))
        }
        other => other.into(),
    })?;
    let kind = scenario.kind.as_str();
    let csv = a
        .csv
        .clone()
        .or(scenario.output.csv.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{kind}.csv")));
    let json_path = a
        .json
        .clone()
        .or(scenario.output.json.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{kind}.json")));
    write_atomic(&resolve(out, &csv), report.csv_string().as_bytes())?;
    write_atomic(&resolve(out, &json_path), report.to_json_string().as_bytes())?;
    print!("{}", report.csv_string());
    println!(
        "{kind}: {}{}",
        if report.pass { "pass" } else { "FAIL" },
        report.verdict.map(|v| format!(" ({})", serde_json::to_value(v).unwrap().as_str().unwrap_or(""))).unwrap_or_default()
    );
    Ok(report.pass)
}

/// Unitarity, rank-one perturbation, eigenvalue and cyclicity checks.
const CLARK_UNITARITY_TOL: f64 = 1e-8;
const CLARK_EIGEN_TOL: f64 = 1e-6;

fn clark(out: &Path, a: &ClarkArgs) -> Result<bool> {
    let u = a.u.blaschke()?;
    if (a.alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(usage(format!("--alpha {} is not unimodular", a.alpha)));
    }
    let n = u.degree();
    let unitary = clark_unitary_exact(&u, a.alpha)?;
    let m = &unitary.entries;
    let unitarity = (m * m.adjoint() - nalgebra::DMatrix::identity(n, n)).norm();
    let perturbation = m - shift_matrix(&u);
    let rank = spectral::numerical_rank(&perturbation, spectral::RANK_TOL)?;
    let eig = spectral::eigenvalues(&unitary)?;
    let residuals = eig
        .eigenvalues
        .iter()
        .map(|&z| u.eval(z).map(|v| (v - a.alpha).norm()))
        .collect::<tto_lab::Result<Vec<_>>>()?;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let k0: Vec<Complex64> = kernel_origin_coords(&u).iter().copied().collect();
    let krylov = spectral::krylov_rank(&unitary, &k0, 1e-10);
    let mut doc = json!({
        "blaschke": blaschke_json(&u),
        "alpha": a.alpha,
        "seed": a.u.seed,
        "unitarity_residual": unitarity,
        "perturbation_rank": rank,
        "eigenvalues": eig.eigenvalues,
        "eigen_residuals": residuals,
        "krylov_rank": krylov,
    });
    let mut pass = unitarity < CLARK_UNITARITY_TOL && rank == 1 && worst < CLARK_EIGEN_TOL && krylov == n;
    if let Some(sym) = &a.symbol {
        let Symbol::Trig(phi) = sym else {
            return Err(usage("--symbol must be a trigonometric polynomial for clark"));
        };
        let (phi_u, gap) = clark_functional_gap_exact(&u, a.alpha, phi)?;
        let f = &phi_u.entries;
        let normality = (f * f.adjoint() - f.adjoint() * f).norm();
        let gap_rank = spectral::numerical_rank(&gap, spectral::RANK_TOL)?;
        doc["symbol"] = serde_json::to_value(sym)?;
        doc["gap_rank"] = json!(gap_rank);
        doc["gap_rank_bound"] = json!(phi.bandwidth());
        doc["normality_defect"] = json!(normality);
        pass &= gap_rank <= phi.bandwidth() && normality < CLARK_UNITARITY_TOL;
    }
    doc["pass"] = json!(pass);
    let mut buf = Vec::new();
    unitary.write_csv(&mut buf)?;
    write_atomic(&out.join(format!("{}.csv", a.stem)), &buf)?;
    write_atomic(&out.join(format!("{}.json", a.stem)), &json_bytes(&doc))?;
    println!(
        "unitarity {unitarity:.3e}  rank(U - A_z) {rank}  max |u(zeta) - alpha| {worst:.3e}  krylov {krylov}/{n}  {}",
        if pass { "pass" } else { "FAIL" }
    );
    Ok(pass)
}

fn spectrum(out: &Path, a: &SpectrumArgs) -> Result<bool> {
    let u = a.op.u.blaschke()?;
    let m = a.op.operator(&u)?;
    let eig = spectral::eigenvalues(&m)?;
    let sv = spectral::singular_values(&m)?.singular_values;
    let rank = spectral::rank_of(&sv, a.rank_tol);
    let doc = json!({
        "blaschke": blaschke_json(&u),
        "symbol": a.op.symbol,
        "provenance": m.provenance,
        "seed": a.op.u.seed,
        "eigenvalues": eig.eigenvalues,
        "eigen_residuals": eig.residuals,
        "singular_values": sv,
        "rank": rank,
        "rank_tol": a.rank_tol,
    });
    let mut csv = String::from("index,eig_re,eig_im,sigma\n");
    for (i, (z, s)) in eig.eigenvalues.iter().zip(&sv).enumerate() {
        csv.push_str(&format!("{},{},{},{}\n", i + 1, z.re, z.im, s));
    }
    write_atomic(&out.join(format!("{}.csv", a.stem)), csv.as_bytes())?;
    write_atomic(&out.join(format!("{}.json", a.stem)), &json_bytes(&doc))?;
    print!("{csv}");
    Ok(true)
}

fn plot_cmd(out: &Path, a: &PlotArgs) -> Result<bool> {
    let text = fs::read_to_string(&a.report)
        .map_err(|e| usage(format!("--report {}: {e}", a.report.display())))?;
    let report: ScanReport = serde_json::from_str(&text)
        .map_err(|e| usage(format!("--report {} is not a scan report: {e}", a.report.display())))?;
    let plot = emit_plot(&report, a.kind)?;
    let kind = match a.kind {
        PlotKind::EigScatter => "eig-scatter",
        PlotKind::SvDecay => "sv-decay",
    };
    let svg = match &a.out {
        Some(p) => resolve(out, p),
        None => {
            let stem = a.report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            out.join(format!("{stem}-{kind}.svg"))
        }
    };
    write_atomic(&svg, plot.svg.as_bytes())?;
    write_atomic(&svg.with_extension("csv"), plot.csv.as_bytes()).context("writing plot data")?;
    println!("{}", svg.display());
    Ok(true)
}
