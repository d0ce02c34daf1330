//! Acceptance run. Prints one `criterion N: pass|fail` line per criterion and
//! exits non-zero if any fails. Every threshold is pinned here, not read
//! from the library, so loosening a library default cannot turn this green.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use tto_lab::harness::{self, is_decreasing, is_strictly_decreasing, ScanReport, Scenario, ScenarioKind};
use tto_lab::inner::{accumulation_family, BlaschkeProduct};
use tto_lab::modelspace::{build_basis, kernel_density_grid, reproducing_kernel, ModelBasis, Resolution};
use tto_lab::random;
use tto_lab::spectral::{
    eigenvalues, krylov_rank, matching_distance, min_separation, numerical_rank, singular_values,
    verify_identity, IdentityName, IdentityParams,
};
use tto_lab::symbols::{Symbol, TrigPolynomial};
use tto_lab::tto::{
    clark_functional_gap, clark_unitary, compressed_shift, functional_calculus, hankel_auto_order,
    hankel_semicommutator_residual, shift_matrix, truncated_toeplitz, Method,
};
use tto_lab::Complex64;

type CMatrix = DMatrix<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

// ---- pinned thresholds -------------------------------------------------------

const GRAM_TOL: f64 = 1e-10;
const HESSENBERG_TOL: f64 = 1e-12;
const CSYM_TOL: f64 = 1e-8;
const DEFECT_TOL: f64 = 1e-8;
const TELESCOPING_TOL: f64 = 1e-10;
const ZERO_SYMBOL_TOL: f64 = 1e-6;
const SUITE_BUDGET: Duration = Duration::from_secs(60);

const AGREEMENT_TOL: f64 = 1e-8;
const AGREEMENT_BUDGET: Duration = Duration::from_secs(30);

const SPECTRUM_TOL: f64 = 1e-8;
const SPECTRUM_MIN_SEPARATION: f64 = 1e-3;

const UNITARITY_TOL: f64 = 1e-8;
const RANK_THRESHOLD: f64 = 1e-9;
const CLARK_EIG_TOL: f64 = 1e-6;
const KRYLOV_TOL: f64 = 1e-10;
const ROOTS_TOL: f64 = 1e-8;

const NORMALITY_TOL: f64 = 1e-8;

const HANKEL_TOL: f64 = 1e-6;
const HANKEL_BUDGET: Duration = Duration::from_secs(30);

const COMPACT_FINAL: f64 = 0.05;
const NONCOMPACT_FLOOR: f64 = 1.0;
const COMPACTNESS_BUDGET: Duration = Duration::from_secs(120);
/// Closed-form route vs the quadrature oracle, where the oracle can resolve the member.
const ORACLE_TOL: f64 = 1e-8;
/// Our SVD vs nalgebra's on the same matrix.
const SVD_ORACLE_TOL: f64 = 1e-13;

const ESS_SPECTRUM_FINAL: f64 = 0.05;
const ESS_NORM_BAND: f64 = 0.1;

const PC_CHI_NORM: f64 = 1e-4;
const PC_FINAL: f64 = 0.1;

const DENSITY_TOL: f64 = 1e-8;

// ---- bookkeeping -------------------------------------------------------------

/// Collects failures and the worst value seen per measured quantity.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    worst: Vec<(String, f64)>,
}

impl Check {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// `value < limit`, remembering the largest value under `label`.
    fn below(&mut self, label: &str, value: f64, limit: f64, context: impl FnOnce() -> String) {
        match self.worst.iter_mut().find(|(l, _)| l == label) {
            Some((_, w)) => *w = w.max(value),
            None => self.worst.push((label.to_string(), value)),
        }
        self.require(value.is_finite() && value < limit, || {
            format!("{label} = {value:.3e} >= {limit:.0e} ({})", context())
        });
    }

    fn fail(&mut self, what: String) {
        self.failures.push(what);
    }

    fn within(&mut self, spent: Duration, budget: Duration) {
        self.require(spent < budget, || format!("took {spent:.1?}, budget {budget:?}"));
    }

    fn finish(self, spent: Duration) -> Outcome {
        let mut parts: Vec<String> = self.worst.iter().map(|(l, v)| format!("max {l} {v:.2e}")).collect();
        parts.push(format!("{:.2}s", spent.as_secs_f64()));
        if !self.failures.is_empty() {
            parts.push(format!("{} failure(s): {}", self.failures.len(), self.failures.iter().take(4).cloned().collect::<Vec<_>>().join("; ")));
        }
        Outcome {
            pass: self.failures.is_empty(),
            detail: parts.join(", "),
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn basis(u: &BlaschkeProduct) -> tto_lab::Result<ModelBasis> {
    build_basis(u, Resolution::Auto)
}

/// `z^n` for `n <= 32` and 20 random products of degree up to 32, `|a| <= 0.9`.
fn suite() -> Vec<(String, BlaschkeProduct)> {
    let mut out: Vec<(String, BlaschkeProduct)> = (1..=32)
        .map(|n| (format!("z^{n}"), BlaschkeProduct::monomial(n).expect("monomial")))
        .collect();
    for i in 0..20 {
        let degree = 1 + i * 31 / 19;
        let mut rng = random::rng(100 + i as u64);
        out.push((format!("random#{i} (n={degree})"), random::blaschke(&mut rng, degree, 0.9)));
    }
    out
}

fn default_scan(kind: ScenarioKind, symbol: &str) -> ScanReport {
    let s = Scenario::new(kind).with_symbol(symbol.parse().expect("symbol expression"));
    harness::run(&s).expect("scan runs")
}

fn last(values: &[Option<f64>]) -> f64 {
    values.last().copied().flatten().unwrap_or(f64::NAN)
}

/// Singular values by nalgebra, descending.
fn oracle_singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

// ---- criteria ----------------------------------------------------------------

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    let params = IdentityParams::default();
    for (name, u) in suite() {
        let b = match basis(&u) {
            Ok(b) => b,
            Err(e) => {
                c.fail(format!("{name}: {e}"));
                continue;
            }
        };
        let a = compressed_shift(&b).expect("shift").entries;
        let n = a.nrows();
        let mut pattern: f64 = 0.0;
        for j in 0..n {
            for k in j + 2..n {
                pattern = pattern.max(a[(j, k)].norm());
            }
        }
        c.below("hessenberg", pattern, HESSENBERG_TOL, || name.clone());
        for (id, label, limit) in [
            (IdentityName::Gram, "gram", GRAM_TOL),
            (IdentityName::Csym, "csym", CSYM_TOL),
            (IdentityName::Defect, "defect", DEFECT_TOL),
            (IdentityName::Telescoping, "telescoping", TELESCOPING_TOL),
            (IdentityName::ZeroSymbol, "zero-symbol", ZERO_SYMBOL_TOL),
        ] {
            match verify_identity(id, &b, &params) {
                Ok(r) => {
                    c.below(label, r.residual, limit, || name.clone());
                    c.require(r.pass, || format!("{name}: {label} report not passing"));
                }
                Err(e) => c.fail(format!("{name}: {label}: {e}")),
            }
        }
    }
    let spent = start.elapsed();
    c.within(spent, SUITE_BUDGET);
    c.finish(spent)
}

fn method_agreement() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    for i in 0..50u64 {
        let mut rng = random::rng(200 + i);
        let degree = 1 + (i as usize * 7) % 16;
        let (pos, neg) = ((i as usize) % 9, (i as usize * 5) % 9);
        let u = random::blaschke(&mut rng, degree, 0.9);
        let phi = Symbol::Trig(random::trig(&mut rng, pos, neg));
        let case = || format!("case {i}: n={degree}, d+={pos}, d-={neg}");
        let b = match basis(&u) {
            Ok(b) => b,
            Err(e) => {
                c.fail(format!("{}: {e}", case()));
                continue;
            }
        };
        let fc = truncated_toeplitz(&b, &phi, Method::FunctionalCalculus).expect("functional calculus");
        let q = truncated_toeplitz(&b, &phi, Method::Quadrature).expect("quadrature");
        c.below("entry gap", max_abs(&(fc.entries - q.entries)), AGREEMENT_TOL, case);
    }
    let spent = start.elapsed();
    c.within(spent, AGREEMENT_BUDGET);
    c.finish(spent)
}

fn spectrum_proxy() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    let mut checked = 0;
    for (name, u) in suite() {
        if min_separation(u.zeros()) < SPECTRUM_MIN_SEPARATION {
            continue;
        }
        checked += 1;
        let b = basis(&u).expect("suite bases resolve");
        let a = compressed_shift(&b).expect("shift");
        match eigenvalues(&a) {
            Ok(e) => c.below("matching distance", matching_distance(&e.eigenvalues, u.zeros()), SPECTRUM_TOL, || name.clone()),
            Err(e) => c.fail(format!("{name}: {e}")),
        }
    }
    // z^1 plus the 20 random products
    c.require(checked == 21, || format!("only {checked} separated members checked"));
    let spent = start.elapsed();
    c.finish(spent)
}

/// The `n`-th roots of unity, as the closed-form spectrum of `U_1` for `z^n`.
fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

fn clark_suite() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    for (i, (name, u)) in suite().into_iter().enumerate() {
        let n = u.degree();
        let b = basis(&u).expect("suite bases resolve");
        let shift = compressed_shift(&b).expect("shift").entries;
        let k0 = reproducing_kernel(&b, ZERO).expect("k0").coords;
        let mut rng = random::rng(300 + i as u64);
        for alpha in [ONE, random::unimodular(&mut rng)] {
            let case = || format!("{name}, alpha={alpha:.3}");
            let unitary = clark_unitary(&b, alpha).expect("clark unitary").entries;
            let id = CMatrix::identity(n, n);
            c.below("unitarity", (&unitary * unitary.adjoint() - id).norm(), UNITARITY_TOL, case);
            let rank = numerical_rank(&(&unitary - &shift), RANK_THRESHOLD).expect("svd");
            c.require(rank == 1, || format!("{}: rank(U - A_z) = {rank}", case()));
            let krylov = krylov_rank(&unitary, &k0, KRYLOV_TOL);
            c.require(krylov == n, || format!("{}: Krylov rank {krylov} of {n}", case()));
            let eig = match eigenvalues(&unitary) {
                Ok(e) => e.eigenvalues,
                Err(e) => {
                    c.fail(format!("{}: {e}", case()));
                    continue;
                }
            };
            let residual = eig
                .iter()
                .map(|&z| u.eval(z).map(|v| (v - alpha).norm()).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            c.below("|u(zeta) - alpha|", residual, CLARK_EIG_TOL, case);
            if name.starts_with("z^") && alpha == ONE {
                c.below("roots of unity", matching_distance(&eig, &roots_of_unity(n)), ROOTS_TOL, case);
            }
        }
    }
    let spent = start.elapsed();
    c.finish(spent)
}

fn normality_defect(m: &CMatrix) -> f64 {
    (m * m.adjoint() - m.adjoint() * m).norm()
}

fn clark_gap() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    for i in 0..20u64 {
        let mut rng = random::rng(500 + i);
        let degree = 1 + (i as usize * 11) % 24;
        let pos = (i as usize) % 4;
        let neg = ((i as usize) / 4 % 4).min(6 - pos);
        let u = random::blaschke(&mut rng, degree, 0.9);
        let phi = random::trig(&mut rng, pos, neg);
        let alpha = random::unimodular(&mut rng);
        let case = || format!("case {i}: n={degree}, d+={pos}, d-={neg}");
        let b = basis(&u).expect("random bases resolve");
        let gap = clark_functional_gap(&b, alpha, &phi).expect("gap").entries;
        let rank = numerical_rank(&gap, RANK_THRESHOLD).expect("svd");
        c.require(rank <= pos + neg, || format!("{}: rank {rank}", case()));
        let unitary = clark_unitary(&b, alpha).expect("clark").entries;
        c.below("normality", normality_defect(&functional_calculus(&unitary, &phi)), NORMALITY_TOL, case);
    }
    let spent = start.elapsed();
    c.finish(spent)
}

fn hankel() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    for i in 0..10u64 {
        let mut rng = random::rng(600 + i);
        let degree = 1 + (i as usize * 3) % 8;
        let degree = if i == 9 { 8 } else { degree };
        let u = random::blaschke(&mut rng, degree, 0.9);
        let phi = random::trig(&mut rng, (i as usize) % 5, (i as usize + 2) % 5);
        let psi = random::trig(&mut rng, (i as usize + 1) % 5, (i as usize * 3) % 5);
        let case = || format!("case {i}: n={degree}");
        let b = basis(&u).expect("random bases resolve");
        let n_f = hankel_auto_order(&u, &[&phi.conj(), &psi]);
        let (r1, r2) = match (
            hankel_semicommutator_residual(&b, &phi, &psi, n_f),
            hankel_semicommutator_residual(&b, &phi, &psi, 2 * n_f),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                c.fail(format!("{}: {e}", case()));
                continue;
            }
        };
        c.below("residual", r1, HANKEL_TOL, case);
        c.require(r2 <= r1, || format!("{}: residual at 2N_f {r2:.3e} > {r1:.3e}", case()));
    }
    let spent = start.elapsed();
    c.within(spent, HANKEL_BUDGET);
    c.finish(spent)
}

/// Closed-form A_phi for the default family members, against the quadrature
/// route where it resolves (degree 8) and against nalgebra's SVD everywhere.
fn compactness_oracle(c: &mut Check, report: &ScanReport, symbol: &TrigPolynomial) {
    let family = accumulation_family(ONE, 1.0 / 3.0, report.scenario.family.degrees().to_vec()).expect("family");
    for row in &report.rows {
        let u = family.member_of_degree(row.degree).expect("member");
        let closed = functional_calculus(&shift_matrix(&u), symbol);
        let ours = singular_values(&closed).expect("svd").singular_values;
        let theirs = oracle_singular_values(&closed);
        let gap = ours.iter().zip(&theirs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        c.below("svd oracle gap", gap, SVD_ORACLE_TOL, || format!("n={}", row.degree));
        let mid = theirs[row.degree.div_ceil(2) - 1];
        let reported = row.sigma_mid.unwrap_or(f64::NAN);
        c.below("sigma_mid vs oracle", (mid - reported).abs(), SVD_ORACLE_TOL, || format!("n={}", row.degree));
    }
    let u = family.member_of_degree(8).expect("member");
    let b = basis(&u).expect("degree-8 member resolves by quadrature");
    let quad = truncated_toeplitz(&b, &Symbol::Trig(symbol.clone()), Method::Quadrature).expect("quadrature");
    let quad_sv = oracle_singular_values(&quad.entries);
    let row = report.rows.iter().find(|r| r.degree == 8).expect("degree 8 row");
    let gap = quad_sv
        .iter()
        .zip(&row.singular_values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    c.below("quadrature oracle gap", gap, ORACLE_TOL, || "n=8".into());
}

fn compactness() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    let minus = default_scan(ScenarioKind::Compactness, "z-1");
    let mid = mid_of(&minus);
    c.require(mid.iter().all(Option::is_some), || "z-1: failed rows".into());
    c.require(is_strictly_decreasing(&mid), || format!("z-1: sigma_mid not strictly decreasing: {mid:?}"));
    c.below("z-1 final sigma_mid", last(&mid), COMPACT_FINAL, || "n=48".into());
    compactness_oracle(&mut c, &minus, &"z-1".parse::<Symbol>().unwrap().as_trig().unwrap().clone());

    let plus = default_scan(ScenarioKind::Compactness, "z+1");
    let mid = mid_of(&plus);
    let floor = mid.iter().map(|v| v.unwrap_or(f64::NAN)).fold(f64::INFINITY, f64::min);
    c.require(floor > NONCOMPACT_FLOOR, || format!("z+1: min sigma_mid {floor}"));
    compactness_oracle(&mut c, &plus, &"z+1".parse::<Symbol>().unwrap().as_trig().unwrap().clone());
    c.require(minus.pass && plus.pass, || "scan reports not passing".into());

    let spent = start.elapsed();
    c.within(spent, COMPACTNESS_BUDGET);
    let mut out = c.finish(spent);
    out.detail = format!("z+1 min sigma_mid {floor:.6}, {}", out.detail);
    out
}

fn mid_of(report: &ScanReport) -> Vec<Option<f64>> {
    report.column(|r| r.sigma_mid)
}

fn essential() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    let spectrum = default_scan(ScenarioKind::EssentialSpectrum, "z^2");
    let dist = spectrum.column(|r| r.eig_dist);
    c.require(dist.iter().all(Option::is_some), || "z^2: failed rows".into());
    c.require(is_decreasing(&dist), || format!("z^2: distance not decreasing: {dist:?}"));
    c.below("z^2 final distance", last(&dist), ESS_SPECTRUM_FINAL, || "n=48".into());
    // eig(A_{z^2}) = {a_k^2}; the nearest to 1 is the last zero, at 1 - a_n^2 = gap_n
    let family = accumulation_family(ONE, 1.0 / 3.0, spectrum.scenario.family.degrees().to_vec()).expect("family");
    for (row, d) in spectrum.rows.iter().zip(&dist) {
        let u = family.member_of_degree(row.degree).expect("member");
        let expected = u.zeros().iter().map(|a| (ONE - a * a).norm()).fold(f64::INFINITY, f64::min);
        c.below("distance vs closed form", (d.unwrap_or(f64::NAN) - expected).abs(), 1e-12, || format!("n={}", row.degree));
    }

    let norm = default_scan(ScenarioKind::EssentialNorm, "z+1");
    let target = (ONE + ONE).norm();
    let mid = last(&mid_of(&norm));
    c.require((mid - target).abs() <= ESS_NORM_BAND, || format!("z+1: sigma_mid {mid} not within 0.1 of {target}"));
    c.require(spectrum.pass && norm.pass, || "scan reports not passing".into());
    let spent = start.elapsed();
    let mut out = c.finish(spent);
    out.detail = format!("z+1 final sigma_mid {mid:.6}, {}", out.detail);
    out
}

fn pc_reduction() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    let chi = default_scan(ScenarioKind::PcReduction, "chi");
    c.require(chi.scenario.d_chi == 256, || "d_chi is not 256".into());
    for row in &chi.rows {
        c.below("||R_n|| for chi", row.sigma_1.unwrap_or(f64::NAN), PC_CHI_NORM, || format!("n={}", row.degree));
    }
    let mixed = default_scan(ScenarioKind::PcReduction, "chi+(z-1)");
    let mid = mid_of(&mixed);
    c.require(mid.iter().all(Option::is_some), || "chi+(z-1): failed rows".into());
    c.require(is_decreasing(&mid), || format!("chi+(z-1): sigma_mid not decreasing: {mid:?}"));
    c.below("chi+(z-1) final sigma_mid", last(&mid), PC_FINAL, || "n=48".into());
    // remainder is A_{z-1} = A_z - I exactly
    let family = accumulation_family(ONE, 1.0 / 3.0, mixed.scenario.family.degrees().to_vec()).expect("family");
    for (row, m) in mixed.rows.iter().zip(&mid) {
        let u = family.member_of_degree(row.degree).expect("member");
        let n = u.degree();
        let remainder = shift_matrix(&u) - CMatrix::identity(n, n);
        let expected = oracle_singular_values(&remainder)[n.div_ceil(2) - 1];
        c.below("sigma_mid vs A_z - I", (m.unwrap_or(f64::NAN) - expected).abs(), SVD_ORACLE_TOL, || format!("n={n}"));
    }
    c.require(chi.pass && mixed.pass, || "scan reports not passing".into());
    let spent = start.elapsed();
    c.finish(spent)
}

fn density() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    for i in 0..20u64 {
        let mut rng = random::rng(1000 + i);
        let degree = 1 + (i as usize * 5) % 16;
        let u = random::blaschke(&mut rng, degree, 0.9);
        let lambda = random::point_in_disk(&mut rng, 0.9);
        let b = basis(&u).expect("random bases resolve");
        let values = kernel_density_grid(&b, lambda).expect("density");
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        c.below("|mean - 1|", (mean - 1.0).abs(), DENSITY_TOL, || format!("case {i}, lambda={lambda:.3}"));
    }
    let spent = start.elapsed();
    c.finish(spent)
}

const DETERMINISM_CONFIGS: [&str; 3] = ["compactness-z-minus-1.json", "clark.json", "identity-suite.json"];

fn scan_once(config: &Path, out: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_tto-lab"))
        .env("TTO_LAB_OUT", out)
        .args(["scan", "--config"])
        .arg(config)
        .args(["--csv", "report.csv", "--json", "report.json"])
        .output()
        .map_err(|e| format!("spawn: {e}"))?;
    if !status.status.success() {
        return Err(format!("{} exited {:?}", config.display(), status.status.code()));
    }
    let read = |name: &str| fs::read(out.join(name)).map_err(|e| format!("{name}: {e}"));
    Ok((read("report.csv")?, read("report.json")?))
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let mut c = Check::default();
    let scenarios = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let scratch = std::env::temp_dir().join(format!("tto-lab-acceptance-{}", std::process::id()));
    for name in DETERMINISM_CONFIGS {
        let config = scenarios.join(name);
        let runs: Vec<_> = (0..2).map(|k| scan_once(&config, &scratch.join(format!("{name}-{k}")))).collect();
        match (&runs[0], &runs[1]) {
            (Ok(a), Ok(b)) => {
                c.require(a.0 == b.0, || format!("{name}: CSV differs"));
                c.require(a.1 == b.1, || format!("{name}: JSON differs"));
                c.require(!a.0.is_empty() && !a.1.is_empty(), || format!("{name}: empty output"));
            }
            (Err(e), _) | (_, Err(e)) => c.fail(e.clone()),
        }
        // in-process runs agree with each other as well
        let text = fs::read_to_string(&config).expect("scenario file");
        let s = Scenario::from_json(&text).expect("scenario parses");
        let (r1, r2) = (harness::run(&s).expect("scan"), harness::run(&s).expect("scan"));
        c.require(r1.csv_string() == r2.csv_string() && r1.to_json_string() == r2.to_json_string(), || {
            format!("{name}: in-process reports differ")
        });
    }
    let _ = fs::remove_dir_all(&scratch);
    let spent = start.elapsed();
    let mut out = c.finish(spent);
    out.detail = format!("{} configs x 2 runs, {}", DETERMINISM_CONFIGS.len(), out.detail);
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("identity suite", identity_suite),
        ("method agreement", method_agreement),
        ("spectrum of A_z", spectrum_proxy),
        ("Clark suite", clark_suite),
        ("Clark functional gap", clark_gap),
        ("Hankel semicommutator", hankel),
        ("compactness dichotomy", compactness),
        ("essential spectrum and norm", essential),
        ("pc reduction", pc_reduction),
        ("kernel density mean", density),
        ("scan determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let verdict = if outcome.pass { "pass" } else { "fail" };
        println!("criterion {:>2}: {verdict} - {name}: {}", k + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
