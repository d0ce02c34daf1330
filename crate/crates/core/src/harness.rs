//! Scenario runner: sweeps over nested Blaschke families, one report row per
//! member.
//!
//! Family operators are built on the closed-form route. Default families put
//! zeros within `3^-48` of the circle, far past what any grid resolves, while
//! the closed-form shift only needs the exact gaps `1 - |a|^2`. The identity
//! suite is the exception: it exercises the quadrature route on purpose and
//! marks members whose grid cannot converge as failed rows.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::{accumulation_family, make_blaschke, BlaschkeProduct, TruncationFamily};
use crate::modelspace::{build_basis, Resolution};
use crate::random;
use crate::spectral::{self, fraction_index, rank_of, verify_identity, IdentityName, IdentityParams, VerificationReport};
use crate::symbols::{chi_tail_l2, pc_reduction_coefficients, JumpSymbol, Symbol, TrigPolynomial};
use crate::tto::{clark_functional_gap_exact, functional_calculus, shift_matrix, CMatrix};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Nested operators must agree on their common block to this level.
pub const CONSISTENCY_TOL: f64 = 1e-10;
/// Roundoff allowance when checking that a sequence decreases.
pub const DECREASE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Compactness,
    EssentialSpectrum,
    EssentialNorm,
    ClarkComparison,
    PcReduction,
    IdentitySuite,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Compactness => "compactness",
            ScenarioKind::EssentialSpectrum => "essential-spectrum",
            ScenarioKind::EssentialNorm => "essential-norm",
            ScenarioKind::ClarkComparison => "clark-comparison",
            ScenarioKind::PcReduction => "pc-reduction",
            ScenarioKind::IdentitySuite => "identity-suite",
        }
    }

    /// Tolerance used when the scenario does not set one.
    pub fn default_tolerance(self) -> f64 {
        match self {
            ScenarioKind::Compactness => 0.05,
            ScenarioKind::EssentialSpectrum => 0.05,
            ScenarioKind::EssentialNorm => 0.1,
            ScenarioKind::ClarkComparison => 1e-8,
            ScenarioKind::PcReduction => 0.1,
            // each identity carries its own tolerance
            ScenarioKind::IdentitySuite => 1.0,
        }
    }
}

/// Random zeros in `|a| <= max_modulus`; members are prefixes of one draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFamily {
    pub degrees: Vec<usize>,
    #[serde(default = "default_max_modulus")]
    pub max_modulus: f64,
}

fn default_max_modulus() -> f64 {
    0.9
}

/// Which nested sequence of Blaschke products to sweep.
///
/// JSON: `{"xi", "rate", "degrees"}` for a boundary-accumulating family,
/// `{"monomial": [..]}` for `z^n`, `{"random": {"degrees", "max_modulus"}}`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Geometric(TruncationFamily),
    Monomial(Vec<usize>),
    Random(RandomFamily),
}

impl Default for FamilySpec {
    /// `xi = 1`, `r = 1/3`, degrees 8, 16, ..., 48.
    fn default() -> Self {
        FamilySpec::Geometric(
            accumulation_family(ONE, 1.0 / 3.0, (1..=6).map(|k| 8 * k).collect())
                .expect("default family is valid"),
        )
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            FamilySpec::Geometric(f) => f.serialize(s),
            FamilySpec::Monomial(d) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("monomial", d)?;
                m.end()
            }
            FamilySpec::Random(r) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("random", r)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let single = |key: &str| v.as_object().filter(|o| o.len() == 1).and_then(|o| o.get(key)).cloned();
        if let Some(m) = single("monomial") {
            serde_json::from_value(m).map(FamilySpec::Monomial).map_err(D::Error::custom)
        } else if let Some(r) = single("random") {
            serde_json::from_value(r).map(FamilySpec::Random).map_err(D::Error::custom)
        } else {
            serde_json::from_value(v).map(FamilySpec::Geometric).map_err(D::Error::custom)
        }
    }
}

impl FamilySpec {
    pub fn degrees(&self) -> &[usize] {
        match self {
            FamilySpec::Geometric(f) => f.degrees(),
            FamilySpec::Monomial(d) => d,
            FamilySpec::Random(r) => &r.degrees,
        }
    }

    /// Boundary accumulation point, when the family has one.
    pub fn accumulation_point(&self) -> Option<Complex64> {
        match self {
            FamilySpec::Geometric(f) => Some(f.xi()),
            _ => None,
        }
    }

    /// All members, in sweep order.
    pub fn members(&self, seed: u64) -> Result<Vec<BlaschkeProduct>> {
        check_degrees(self.degrees())?;
        match self {
            FamilySpec::Geometric(f) => f.members(),
            FamilySpec::Monomial(d) => d.iter().map(|&n| BlaschkeProduct::monomial(n)).collect(),
            FamilySpec::Random(r) => {
                if !(r.max_modulus > 0.0 && r.max_modulus < 1.0) {
                    return Err(Error::Scenario(format!(
                        "random family max_modulus must lie in (0, 1), got {}",
                        r.max_modulus
                    )));
                }
                let mut rng = random::rng(seed);
                let top = *r.degrees.last().expect("checked non-empty");
                let zeros = random::zeros(&mut rng, top, r.max_modulus, 1e-3);
                let full = make_blaschke(zeros, random::unimodular(&mut rng))?;
                r.degrees.iter().map(|&n| full.prefix(n)).collect()
            }
        }
    }
}

fn check_degrees(d: &[usize]) -> Result<()> {
    if d.is_empty() || d[0] == 0 || d.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadDegrees);
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

/// One experiment, read from a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: ScenarioKind,
    #[serde(default)]
    pub family: FamilySpec,
    /// Object form or a short expression such as `"z-1"` or `"chi+(z-1)"`.
    #[serde(default, with = "symbol_input", skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Symbol>,
    #[serde(default = "unit")]
    pub alpha: Complex64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    #[serde(default = "default_d_chi")]
    pub d_chi: usize,
    /// Grid size for the identity suite; automatic when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Wall times make reports non-reproducible, so they are off by default.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

fn unit() -> Complex64 {
    ONE
}

fn default_rank_tol() -> f64 {
    spectral::RANK_TOL
}

fn default_d_chi() -> usize {
    256
}

mod symbol_input {
    use super::Symbol;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        Text(String),
        Full(Symbol),
    }

    pub fn serialize<S: Serializer>(v: &Option<Symbol>, s: S) -> Result<S::Ok, S::Error> {
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Symbol>, D::Error> {
        match Option::<Input>::deserialize(d)? {
            None => Ok(None),
            Some(Input::Full(s)) => Ok(Some(s)),
            Some(Input::Text(t)) => t.parse().map(Some).map_err(serde::de::Error::custom),
        }
    }
}

impl Scenario {
    pub fn new(kind: ScenarioKind) -> Self {
        Scenario {
            kind,
            family: FamilySpec::default(),
            symbol: None,
            alpha: ONE,
            tolerance: None,
            rank_tol: default_rank_tol(),
            d_chi: default_d_chi(),
            quadrature: None,
            seed: 0,
            record_timing: false,
            output: OutputPaths::default(),
        }
    }

    pub fn with_symbol(mut self, symbol: Symbol) -> Self {
        self.symbol = Some(symbol);
        self
    }

    pub fn with_family(mut self, family: FamilySpec) -> Self {
        self.family = family;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| self.kind.default_tolerance())
    }

    pub fn validate(&self) -> Result<()> {
        check_degrees(self.family.degrees())?;
        for (name, v) in [("tolerance", self.tolerance()), ("rank_tol", self.rank_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Scenario(format!("{name} must be positive, got {v}")));
            }
        }
        if self.d_chi == 0 {
            return Err(Error::BadDegree);
        }
        Ok(())
    }

    fn require_kind(&self, kind: ScenarioKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Scenario(format!(
                "scenario kind is {}, expected {}",
                self.kind.as_str(),
                kind.as_str()
            )));
        }
        self.validate()
    }

    fn trig_symbol(&self) -> Result<&TrigPolynomial> {
        match &self.symbol {
            Some(Symbol::Trig(p)) => Ok(p),
            Some(Symbol::Jump(j)) if j.jumps.is_empty() => Ok(&j.background),
            Some(_) => Err(Error::Scenario(format!(
                "{} needs a trigonometric polynomial symbol",
                self.kind.as_str()
            ))),
            None => Err(Error::Scenario(format!("{} needs a symbol", self.kind.as_str()))),
        }
    }

    fn accumulation_point(&self) -> Result<Complex64> {
        self.family.accumulation_point().ok_or_else(|| {
            Error::Scenario(format!(
                "{} needs a family accumulating at a boundary point",
                self.kind.as_str()
            ))
        })
    }
}

/// How the mid-index singular values behaved over the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CompactConsistent,
    NonCompactConsistent,
    Inconclusive,
}

/// One family member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub degree: usize,
    pub sigma_1: Option<f64>,
    /// `sigma_{ceil(n/4)}`.
    pub sigma_q1: Option<f64>,
    /// `sigma_{ceil(n/2)}`.
    pub sigma_mid: Option<f64>,
    pub sigma_min: Option<f64>,
    /// Distance from the target value to the eigenvalue set.
    pub eig_dist: Option<f64>,
    pub rank: Option<usize>,
    /// Compression-consistency defect against the previous member; the
    /// normality defect for Clark comparisons; the worst identity residual
    /// for the identity suite.
    pub residual: Option<f64>,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eigenvalues: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<VerificationReport>,
}

impl ScanRow {
    fn empty(degree: usize) -> Self {
        ScanRow {
            degree,
            sigma_1: None,
            sigma_q1: None,
            sigma_mid: None,
            sigma_min: None,
            eig_dist: None,
            rank: None,
            residual: None,
            seconds: 0.0,
            failure: None,
            singular_values: Vec::new(),
            eigenvalues: Vec::new(),
            identities: Vec::new(),
        }
    }

    fn failed(degree: usize, e: &Error) -> Self {
        ScanRow {
            failure: Some(e.to_string()),
            ..ScanRow::empty(degree)
        }
    }

    fn set_singular_values(&mut self, sv: Vec<f64>, rank_tol: f64) {
        let n = sv.len();
        if n > 0 {
            self.sigma_1 = Some(sv[0]);
            self.sigma_q1 = Some(sv[fraction_index(n, 1, 4) - 1]);
            self.sigma_mid = Some(sv[fraction_index(n, 1, 2) - 1]);
            self.sigma_min = Some(sv[n - 1]);
        }
        self.rank = Some(rank_of(&sv, rank_tol));
        self.singular_values = sv;
    }
}

/// Thresholds and discretization parameters a report was produced under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub mid_index: String,
    pub tolerance: f64,
    pub rank_tol: f64,
    pub consistency_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_chi: Option<usize>,
    /// l2 norm of the discarded `chi` coefficients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_tail_l2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub scenario: Scenario,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// Point the eigenvalues are measured against, e.g. `phi(xi)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accumulation_point: Option<Complex64>,
    pub calibration: Calibration,
    pub rows: Vec<ScanRow>,
}

pub const CSV_HEADER: &str = "degree,sigma_1,sigma_q1,sigma_mid,sigma_min,eig_dist,rank,residual,seconds";

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ScanReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.degree,
                cell(r.sigma_1),
                cell(r.sigma_q1),
                cell(r.sigma_mid),
                cell(r.sigma_min),
                cell(r.eig_dist),
                cell(r.rank),
                cell(r.residual),
                r.seconds
            )?;
        }
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii csv")
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn column(&self, f: impl Fn(&ScanRow) -> Option<f64>) -> Vec<Option<f64>> {
        self.rows.iter().map(f).collect()
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failure.is_some()).count()
    }
}

/// Each value at most the previous one plus [`DECREASE_SLACK`]; missing
/// values break the chain.
pub fn is_decreasing(values: &[Option<f64>]) -> bool {
    values.iter().all(Option::is_some)
        && values.windows(2).all(|w| w[1].unwrap() <= w[0].unwrap() + DECREASE_SLACK)
}

/// Strict decrease, except that values already at roundoff level may tie.
pub fn is_strictly_decreasing(values: &[Option<f64>]) -> bool {
    values.iter().all(Option::is_some)
        && values.windows(2).all(|w| {
            let (a, b) = (w[0].unwrap(), w[1].unwrap());
            b < a || (a <= DECREASE_SLACK && b <= DECREASE_SLACK)
        })
}

fn last(values: &[Option<f64>]) -> Option<f64> {
    values.last().copied().flatten()
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, f64) {
    if on {
        let t = Instant::now();
        let out = f();
        (out, t.elapsed().as_secs_f64())
    } else {
        (f(), 0.0)
    }
}

fn nearest(target: Complex64, points: &[Complex64]) -> Option<f64> {
    points.iter().map(|p| (p - target).norm()).min_by(f64::total_cmp)
}

fn leading_block_defect(small: &CMatrix, large: &CMatrix) -> f64 {
    let m = small.nrows();
    let block = large.view((0, 0), (m, m));
    (small - block).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Per-member matrices for the family scans, computed in parallel; rows keep
/// sweep order. The residual column receives the compression defect.
fn matrix_sweep(
    s: &Scenario,
    target: Option<Complex64>,
    build: impl Fn(&BlaschkeProduct) -> Result<CMatrix> + Sync,
) -> Result<Vec<ScanRow>> {
    let members = s.family.members(s.seed)?;
    let results: Vec<(ScanRow, Option<CMatrix>)> = members
        .par_iter()
        .map(|u| {
            let (out, seconds) = timed(s.record_timing, || -> Result<(ScanRow, CMatrix)> {
                let m = build(u)?;
                let mut row = ScanRow::empty(u.degree());
                row.set_singular_values(spectral::singular_values(&m)?.singular_values, s.rank_tol);
                match spectral::eigenvalues(&m) {
                    Ok(e) => {
                        row.eig_dist = target.and_then(|t| nearest(t, &e.eigenvalues));
                        row.eigenvalues = e.eigenvalues;
                    }
                    Err(e) => row.failure = Some(e.to_string()),
                }
                Ok((row, m))
            });
            match out {
                Ok((mut row, m)) => {
                    row.seconds = seconds;
                    (row, Some(m))
                }
                Err(e) => (ScanRow::failed(u.degree(), &e), None),
            }
        })
        .collect();
    // first row has nothing to compare against; a failed row breaks the chain
    let mut rows = Vec::with_capacity(results.len());
    for (i, (row, m)) in results.iter().enumerate() {
        let mut row = row.clone();
        if let Some(m) = m {
            row.residual = match i.checked_sub(1).map(|p| &results[p].1) {
                None => Some(0.0),
                Some(Some(prev)) => Some(leading_block_defect(prev, m)),
                Some(None) => None,
            };
        }
        rows.push(row);
    }
    Ok(rows)
}

fn consistent(rows: &[ScanRow]) -> bool {
    rows.iter()
        .all(|r| r.failure.is_none() && r.residual.is_some_and(|x| x <= CONSISTENCY_TOL))
}

fn calibration(s: &Scenario) -> Calibration {
    Calibration {
        mid_index: "ceil(n/2)".into(),
        tolerance: s.tolerance(),
        rank_tol: s.rank_tol,
        consistency_tol: CONSISTENCY_TOL,
        d_chi: None,
        chi_tail_l2: None,
        rank_bound: None,
    }
}

/// `sigma_{ceil(n/2)}(A_phi)` along the family: decay means compact,
/// a floor near `|phi(xi)|` means not.
pub fn compactness_scan(s: &Scenario) -> Result<ScanReport> {
    s.require_kind(ScenarioKind::Compactness)?;
    let phi = s.trig_symbol()?;
    let xi = s.accumulation_point()?;
    let target = phi.eval_at(xi);
    let rows = matrix_sweep(s, Some(target), |u| Ok(functional_calculus(&shift_matrix(u), phi)))?;
    let mid: Vec<_> = rows.iter().map(|r| r.sigma_mid).collect();
    let tol = s.tolerance();
    let verdict = if is_strictly_decreasing(&mid) && last(&mid).is_some_and(|x| x < tol) {
        Verdict::CompactConsistent
    } else if mid.iter().all(|x| x.is_some_and(|x| x > target.norm() / 2.0)) && target.norm() > 0.0 {
        Verdict::NonCompactConsistent
    } else {
        Verdict::Inconclusive
    };
    // compact exactly when phi vanishes at the boundary spectrum
    let predicted = if target.norm() <= tol {
        Verdict::CompactConsistent
    } else {
        Verdict::NonCompactConsistent
    };
    Ok(ScanReport {
        pass: verdict == predicted && consistent(&rows),
        verdict: Some(verdict),
        target: Some(target),
        accumulation_point: Some(xi),
        calibration: calibration(s),
        scenario: s.clone(),
        rows,
    })
}

/// `dist(phi(xi), eig(A_phi))` along the family, for analytic `phi`.
pub fn essential_spectrum_scan(s: &Scenario) -> Result<ScanReport> {
    s.require_kind(ScenarioKind::EssentialSpectrum)?;
    let phi = s.trig_symbol()?;
    if !phi.is_analytic() {
        return Err(Error::Scenario("essential-spectrum needs an analytic symbol".into()));
    }
    let xi = s.accumulation_point()?;
    let target = phi.eval_at(xi);
    let rows = matrix_sweep(s, Some(target), |u| Ok(functional_calculus(&shift_matrix(u), phi)))?;
    let dist: Vec<_> = rows.iter().map(|r| r.eig_dist).collect();
    Ok(ScanReport {
        pass: is_decreasing(&dist) && last(&dist).is_some_and(|d| d < s.tolerance()) && consistent(&rows),
        verdict: None,
        target: Some(target),
        accumulation_point: Some(xi),
        calibration: calibration(s),
        scenario: s.clone(),
        rows,
    })
}

/// `sigma_{ceil(n/4)}` and `sigma_{ceil(n/2)}` against `|phi(xi)|`.
pub fn essential_norm_scan(s: &Scenario) -> Result<ScanReport> {
    s.require_kind(ScenarioKind::EssentialNorm)?;
    let phi = s.trig_symbol()?;
    let xi = s.accumulation_point()?;
    let target = phi.eval_at(xi);
    let rows = matrix_sweep(s, Some(target), |u| Ok(functional_calculus(&shift_matrix(u), phi)))?;
    let norm = target.norm();
    let tol = s.tolerance();
    let settled = rows.last().is_some_and(|r| {
        [r.sigma_q1, r.sigma_mid]
            .iter()
            .all(|x| x.is_some_and(|x| (x - norm).abs() <= tol))
    });
    Ok(ScanReport {
        pass: settled && consistent(&rows),
        verdict: None,
        target: Some(target),
        accumulation_point: Some(xi),
        calibration: calibration(s),
        scenario: s.clone(),
        rows,
    })
}

/// `D_n = phi(U_alpha) - A_phi`: its rank must stay within `d+ + d-` and
/// `phi(U_alpha)` must be normal.
pub fn clark_comparison(s: &Scenario) -> Result<ScanReport> {
    s.require_kind(ScenarioKind::ClarkComparison)?;
    let phi = s.trig_symbol()?.clone();
    let bound = phi.bandwidth();
    let members = s.family.members(s.seed)?;
    let alpha = s.alpha;
    let rows: Vec<ScanRow> = members
        .par_iter()
        .map(|u| {
            let (out, seconds) = timed(s.record_timing, || -> Result<ScanRow> {
                let (phi_u, gap) = clark_functional_gap_exact(u, alpha, &phi)?;
                let f = &phi_u.entries;
                let normality = (f * f.adjoint() - f.adjoint() * f).norm();
                let mut row = ScanRow::empty(u.degree());
                row.set_singular_values(spectral::singular_values(&gap)?.singular_values, s.rank_tol);
                row.residual = Some(normality);
                // eigenvalues of U_alpha solve u(zeta) = alpha
                let unitary = crate::tto::clark_unitary_exact(u, alpha)?;
                match spectral::eigenvalues(&unitary) {
                    Ok(e) => {
                        // left empty once zeros have rounded onto the circle
                        // and u can no longer be evaluated near them
                        row.eig_dist = e
                            .eigenvalues
                            .iter()
                            .map(|&z| u.eval(z).map(|v| (v - alpha).norm()))
                            .collect::<Result<Vec<_>>>()
                            .ok()
                            .map(|v| v.into_iter().fold(0.0, f64::max));
                        row.eigenvalues = e.eigenvalues;
                    }
                    Err(e) => row.failure = Some(e.to_string()),
                }
                Ok(row)
            });
            match out {
                Ok(mut row) => {
                    row.seconds = seconds;
                    row
                }
                Err(e) => ScanRow::failed(u.degree(), &e),
            }
        })
        .collect();
    let tol = s.tolerance();
    let pass = rows.iter().all(|r| {
        r.failure.is_none() && r.rank.is_some_and(|k| k <= bound) && r.residual.is_some_and(|x| x < tol)
    });
    Ok(ScanReport {
        pass,
        verdict: None,
        target: Some(alpha),
        accumulation_point: s.family.accumulation_point(),
        calibration: Calibration {
            rank_bound: Some(bound),
            ..calibration(s)
        },
        scenario: s.clone(),
        rows,
    })
}

/// `R_n = A_phi - alpha A_chi - beta I` for a single jump at 1, with the jump
/// parts entering as order-`d_chi` Fejér means.
pub fn pc_reduction_scan(s: &Scenario) -> Result<ScanReport> {
    s.require_kind(ScenarioKind::PcReduction)?;
    let phi = match &s.symbol {
        Some(Symbol::Jump(j)) => j.clone(),
        Some(Symbol::Trig(p)) => JumpSymbol::continuous(p.clone()),
        _ => return Err(Error::Scenario("pc-reduction needs a jump symbol".into())),
    };
    let xi = s.accumulation_point()?;
    if (xi - ONE).norm() > 1e-12 {
        return Err(Error::Scenario("pc-reduction needs a family accumulating at 1".into()));
    }
    let (alpha, beta, _) = pc_reduction_coefficients(&phi)?;
    let phi_s = phi.smoothed(s.d_chi)?;
    let chi_s = JumpSymbol::chi().smoothed(s.d_chi)?;
    let rows = matrix_sweep(s, Some(Complex64::new(0.0, 0.0)), |u| {
        let a = shift_matrix(u);
        let n = u.degree();
        Ok(functional_calculus(&a, &phi_s)
            - functional_calculus(&a, &chi_s) * alpha
            - CMatrix::identity(n, n) * beta)
    })?;
    let mid: Vec<_> = rows.iter().map(|r| r.sigma_mid).collect();
    Ok(ScanReport {
        pass: is_decreasing(&mid) && last(&mid).is_some_and(|x| x < s.tolerance()) && consistent(&rows),
        verdict: None,
        target: Some(Complex64::new(0.0, 0.0)),
        accumulation_point: Some(xi),
        calibration: Calibration {
            d_chi: Some(s.d_chi),
            chi_tail_l2: Some(chi_tail_l2(s.d_chi) * alpha.norm()),
            ..calibration(s)
        },
        scenario: s.clone(),
        rows,
    })
}

/// Every identity on every member, on the quadrature route.
pub fn identity_suite(s: &Scenario) -> Result<ScanReport> {
    s.require_kind(ScenarioKind::IdentitySuite)?;
    let members = s.family.members(s.seed)?;
    let resolution = s.quadrature.map_or(Resolution::Auto, Resolution::Points);
    let params = IdentityParams {
        seed: s.seed,
        phi: s.symbol.as_ref().and_then(|p| p.as_trig()).cloned(),
        alpha: Some(s.alpha),
        ..IdentityParams::default()
    };
    let rows: Vec<ScanRow> = members
        .par_iter()
        .map(|u| {
            let (out, seconds) = timed(s.record_timing, || -> Result<ScanRow> {
                let basis = build_basis(u, resolution)?;
                let reports = IdentityName::ALL
                    .iter()
                    .map(|&name| verify_identity(name, &basis, &params))
                    .collect::<Result<Vec<_>>>()?;
                let mut row = ScanRow::empty(u.degree());
                row.residual = Some(reports.iter().map(|r| r.residual).fold(0.0, f64::max));
                if let Some(bad) = reports.iter().find(|r| !r.pass) {
                    row.failure = Some(format!(
                        "{} residual {:e} above {:e}",
                        bad.identity, bad.residual, bad.tolerance
                    ));
                }
                row.identities = reports;
                Ok(row)
            });
            match out {
                Ok(mut row) => {
                    row.seconds = seconds;
                    row
                }
                Err(e) => ScanRow::failed(u.degree(), &e),
            }
        })
        .collect();
    Ok(ScanReport {
        pass: rows.iter().all(|r| r.failure.is_none()),
        verdict: None,
        target: None,
        accumulation_point: s.family.accumulation_point(),
        calibration: calibration(s),
        scenario: s.clone(),
        rows,
    })
}

/// Dispatches on the scenario kind.
pub fn run(s: &Scenario) -> Result<ScanReport> {
    match s.kind {
        ScenarioKind::Compactness => compactness_scan(s),
        ScenarioKind::EssentialSpectrum => essential_spectrum_scan(s),
        ScenarioKind::EssentialNorm => essential_norm_scan(s),
        ScenarioKind::ClarkComparison => clark_comparison(s),
        ScenarioKind::PcReduction => pc_reduction_scan(s),
        ScenarioKind::IdentitySuite => identity_suite(s),
    }
}
