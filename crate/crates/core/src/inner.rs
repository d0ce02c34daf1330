//! Finite Blaschke products, their spectra, and boundary-accumulating
//! truncation families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Zeros closer than this to the circle are rejected on user input.
pub const BOUNDARY_REJECT: f64 = 1e-12;
/// Zeros closer than this to the circle trigger a conditioning warning.
pub const BOUNDARY_WARN: f64 = 1e-6;
const PHASE_TOL: f64 = 1e-12;
const POLE_TOL: f64 = 1e-13;

/// A finite Blaschke product `phase * prod (z - a) / (1 - conj(a) z)`.
///
/// Every zero carries its boundary gap `1 - |a|^2`. For user-supplied zeros
/// the gap is computed from the zero; for truncation-family members it is
/// known in closed form, which keeps the closed-form operator entries exact
/// even when the zero itself rounds onto the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlaschke", into = "RawBlaschke")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    gaps: Vec<f64>,
    phase: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawBlaschke {
    zeros: Vec<Complex64>,
    #[serde(default = "unit_phase")]
    phase: Complex64,
}

fn unit_phase() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl TryFrom<RawBlaschke> for BlaschkeProduct {
    type Error = Error;
    fn try_from(raw: RawBlaschke) -> Result<Self> {
        make_blaschke(raw.zeros, raw.phase)
    }
}

impl From<BlaschkeProduct> for RawBlaschke {
    fn from(u: BlaschkeProduct) -> Self {
        RawBlaschke {
            zeros: u.zeros,
            phase: u.phase,
        }
    }
}

/// Validates and builds a Blaschke product; zeros keep their input order.
pub fn make_blaschke(zeros: Vec<Complex64>, phase: Complex64) -> Result<BlaschkeProduct> {
    if zeros.is_empty() {
        return Err(Error::EmptyProduct);
    }
    if (phase.norm() - 1.0).abs() > PHASE_TOL {
        return Err(Error::BadPhase(phase));
    }
    let mut gaps = Vec::with_capacity(zeros.len());
    for &a in &zeros {
        let m = a.norm();
        if !m.is_finite() || m >= 1.0 - BOUNDARY_REJECT {
            return Err(Error::ZeroOutsideDisk(a));
        }
        if m > 1.0 - BOUNDARY_WARN {
            log::warn!("zero {a} is within 1e-6 of the circle; expect poor conditioning");
        }
        gaps.push((1.0 - m) * (1.0 + m));
    }
    Ok(BlaschkeProduct { zeros, gaps, phase })
}

impl BlaschkeProduct {
    /// `z^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        make_blaschke(vec![Complex64::new(0.0, 0.0); n], unit_phase())
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// `1 - |a_k|^2` for every zero, in zero order.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// The product built from the first `m` zeros (same phase).
    pub fn prefix(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyProduct);
        }
        let m = m.min(self.degree());
        Ok(BlaschkeProduct {
            zeros: self.zeros[..m].to_vec(),
            gaps: self.gaps[..m].to_vec(),
            phase: self.phase,
        })
    }

    /// Same zeros in a different order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        BlaschkeProduct {
            zeros: order.iter().map(|&i| self.zeros[i]).collect(),
            gaps: order.iter().map(|&i| self.gaps[i]).collect(),
            phase: self.phase,
        }
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        for &a in &self.zeros {
            if (z * a.conj() - 1.0).norm() < POLE_TOL {
                return Err(Error::PoleHit(z));
            }
        }
        Ok(())
    }

    /// `u(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self
            .zeros
            .iter()
            .fold(self.phase, |acc, &a| acc * factor(a, z)))
    }

    /// `(u(z), u'(z))`, the derivative by the product rule over factors.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_pole(z)?;
        let n = self.degree();
        let values: Vec<Complex64> = self.zeros.iter().map(|&a| factor(a, z)).collect();
        // prefix[k] = prod_{j<k} b_j, suffix[k] = prod_{j>=k} b_j
        let mut prefix = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in 0..n {
            prefix[k + 1] = prefix[k] * values[k];
        }
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] * values[k];
        }
        let mut deriv = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let d = 1.0 - self.zeros[k].conj() * z;
            deriv += prefix[k] * (self.gaps[k] / (d * d)) * suffix[k + 1];
        }
        Ok((self.phase * prefix[n], self.phase * deriv))
    }

    /// Support of the zero multiset, in first-occurrence order.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for &a in &self.zeros {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    /// `sigma(u)` intersected with the circle: always empty for finite products.
    pub fn spectrum_on_circle(&self) -> Vec<Complex64> {
        Vec::new()
    }
}

/// Single Blaschke factor `(z - a) / (1 - conj(a) z)`.
#[inline]
pub fn factor(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - a.conj() * z)
}

/// Nested Blaschke products with zeros `(1 - r^j) xi`, `j = 1..degree`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct TruncationFamily {
    xi: Complex64,
    rate: f64,
    degrees: Vec<usize>,
    phase: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    xi: Complex64,
    rate: f64,
    degrees: Vec<usize>,
    #[serde(default = "unit_phase")]
    phase: Complex64,
}

impl TryFrom<RawFamily> for TruncationFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        accumulation_family_with_phase(raw.xi, raw.rate, raw.degrees, raw.phase)
    }
}

impl From<TruncationFamily> for RawFamily {
    fn from(f: TruncationFamily) -> Self {
        RawFamily {
            xi: f.xi,
            rate: f.rate,
            degrees: f.degrees,
            phase: f.phase,
        }
    }
}

/// Family accumulating at `xi` with geometric rate `rate`, unit phase.
pub fn accumulation_family(
    xi: Complex64,
    rate: f64,
    degrees: Vec<usize>,
) -> Result<TruncationFamily> {
    accumulation_family_with_phase(xi, rate, degrees, unit_phase())
}

pub fn accumulation_family_with_phase(
    xi: Complex64,
    rate: f64,
    degrees: Vec<usize>,
    phase: Complex64,
) -> Result<TruncationFamily> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::BadRate(rate));
    }
    if (xi.norm() - 1.0).abs() > PHASE_TOL {
        return Err(Error::BadPoint(xi));
    }
    if (phase.norm() - 1.0).abs() > PHASE_TOL {
        return Err(Error::BadPhase(phase));
    }
    if degrees.is_empty() || degrees[0] == 0 || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadDegrees);
    }
    Ok(TruncationFamily {
        xi,
        rate,
        degrees,
        phase,
    })
}

impl TruncationFamily {
    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    /// Largest member degree.
    pub fn max_degree(&self) -> usize {
        *self.degrees.last().expect("non-empty degrees")
    }

    /// Member of the given degree (need not be listed in `degrees`).
    ///
    /// Zeros past `j ~ 33` round onto `xi` in double precision; their gaps
    /// `r^j (2 - r^j)` stay exact, so closed-form constructions remain valid
    /// while grid evaluation near `xi` does not.
    pub fn member_of_degree(&self, degree: usize) -> Result<BlaschkeProduct> {
        if degree == 0 {
            return Err(Error::EmptyProduct);
        }
        let mut zeros = Vec::with_capacity(degree);
        let mut gaps = Vec::with_capacity(degree);
        let mut power = 1.0;
        for _ in 0..degree {
            power *= self.rate;
            zeros.push(self.xi * (1.0 - power));
            gaps.push(power * (2.0 - power));
        }
        if let Some(&g) = gaps.last() {
            if g < 2.0 * BOUNDARY_WARN {
                log::info!(
                    "family member of degree {degree} has zeros within {:e} of the circle",
                    g / 2.0
                );
            }
        }
        Ok(BlaschkeProduct {
            zeros,
            gaps,
            phase: self.phase,
        })
    }

    /// The `k`-th listed member.
    pub fn member(&self, k: usize) -> Result<BlaschkeProduct> {
        self.member_of_degree(self.degrees[k])
    }

    pub fn members(&self) -> Result<Vec<BlaschkeProduct>> {
        (0..self.degrees.len()).map(|k| self.member(k)).collect()
    }

    /// Union of all member zeros together with the accumulation point.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut out = self
            .member_of_degree(self.max_degree())
            .map(|u| u.spectrum())
            .unwrap_or_default();
        if !out.contains(&self.xi) {
            out.push(self.xi);
        }
        out
    }

    pub fn spectrum_on_circle(&self) -> Vec<Complex64> {
        vec![self.xi]
    }
}
