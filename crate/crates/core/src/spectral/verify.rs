//! Residual reports for the exact operator identities.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modelspace::{reproducing_kernel, ModelBasis};
use crate::random;
use crate::symbols::{Symbol, TrigPolynomial};
use crate::tto::{
    clark_unitary, compressed_shift, conjugation_matrix, hankel_auto_order,
    hankel_semicommutator_residual, quadrature_matrix, truncated_toeplitz, CMatrix, Method,
    Provenance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityName {
    /// `I - A_z A_z^* = k_0 (x) k_0`.
    Defect,
    /// `A_{z^m} A_{conj z^m} - I` as a telescoping sum.
    Telescoping,
    /// `A_{phi psi} - A_phi A_psi = (H_{conj phi})^* H_psi`.
    Hankel,
    /// `A_phi = 0` for `phi in u H^2 + conj(u H^2)`.
    ZeroSymbol,
    /// `M = J M^T conj(J)`.
    Csym,
    ClarkUnitarity,
    Gram,
}

impl IdentityName {
    pub const ALL: [IdentityName; 7] = [
        IdentityName::Defect,
        IdentityName::Telescoping,
        IdentityName::Hankel,
        IdentityName::ZeroSymbol,
        IdentityName::Csym,
        IdentityName::ClarkUnitarity,
        IdentityName::Gram,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::Defect => "defect",
            IdentityName::Telescoping => "telescoping",
            IdentityName::Hankel => "hankel",
            IdentityName::ZeroSymbol => "zero-symbol",
            IdentityName::Csym => "csym",
            IdentityName::ClarkUnitarity => "clark-unitarity",
            IdentityName::Gram => "gram",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            IdentityName::Defect => 1e-8,
            IdentityName::Telescoping => 1e-10,
            IdentityName::Hankel => 1e-6,
            IdentityName::ZeroSymbol => 1e-6,
            IdentityName::Csym => 1e-8,
            IdentityName::ClarkUnitarity => 1e-8,
            IdentityName::Gram => 1e-10,
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Optional operands; anything left unset is drawn from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdentityParams {
    /// Highest telescoping order.
    pub m: usize,
    pub phi: Option<TrigPolynomial>,
    pub psi: Option<TrigPolynomial>,
    pub alpha: Option<Complex64>,
    pub n_f: Option<usize>,
    pub seed: u64,
}

impl Default for IdentityParams {
    fn default() -> Self {
        IdentityParams {
            m: 5,
            phi: None,
            psi: None,
            alpha: None,
            n_f: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: IdentityName,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub operands: Vec<Provenance>,
}

fn report(identity: IdentityName, residual: f64, operands: Vec<Provenance>) -> VerificationReport {
    let tolerance = identity.tolerance();
    VerificationReport {
        identity,
        residual,
        tolerance,
        pass: residual.is_finite() && residual < tolerance,
        operands,
    }
}

fn quadrature_power(basis: &ModelBasis, n: i64) -> Result<CMatrix> {
    Ok(truncated_toeplitz(basis, &Symbol::Trig(TrigPolynomial::monomial(n)), Method::Quadrature)?.entries)
}

pub fn verify_identity(
    name: IdentityName,
    basis: &ModelBasis,
    params: &IdentityParams,
) -> Result<VerificationReport> {
    let n = basis.dimension();
    let id = CMatrix::identity(n, n);
    let mut rng = random::rng(params.seed);
    use Provenance::*;
    Ok(match name {
        IdentityName::Gram => {
            let g = basis.gram();
            let residual = crate::tto::max_abs(&(g - &id));
            report(name, residual, vec![Quadrature])
        }
        IdentityName::Defect => {
            let a = compressed_shift(basis)?.entries;
            let v = DVector::from_vec(reproducing_kernel(basis, Complex64::new(0.0, 0.0))?.coords);
            let residual = ((&id - &a * a.adjoint()) - &v * v.adjoint()).norm();
            report(name, residual, vec![Quadrature, Quadrature])
        }
        IdentityName::Telescoping => {
            let a = quadrature_power(basis, 1)?;
            let a_bar = quadrature_power(basis, -1)?;
            let inner = &a * &a_bar - &id;
            let mut worst: f64 = 0.0;
            for m in 1..=params.m.max(1) as i64 {
                let lhs = quadrature_power(basis, m)? * quadrature_power(basis, -m)? - &id;
                let mut rhs = CMatrix::zeros(n, n);
                for l in 0..m {
                    rhs += quadrature_power(basis, l)? * &inner * quadrature_power(basis, -l)?;
                }
                worst = worst.max((lhs - rhs).norm());
            }
            report(name, worst, vec![Quadrature, Quadrature])
        }
        IdentityName::Hankel => {
            let phi = params.phi.clone().unwrap_or_else(|| {
                TrigPolynomial::new([(1, Complex64::new(1.0, 0.0)), (-1, Complex64::new(1.0, 0.0))])
            });
            let psi = params.psi.clone().unwrap_or_else(|| TrigPolynomial::monomial(2));
            let n_f = params
                .n_f
                .unwrap_or_else(|| hankel_auto_order(basis.source(), &[&phi.conj(), &psi]));
            let residual = hankel_semicommutator_residual(basis, &phi, &psi, n_f)?;
            report(name, residual, vec![FunctionalCalculus, Quadrature])
        }
        IdentityName::ZeroSymbol => {
            let p = random::analytic(&mut rng, 8);
            let q = random::analytic(&mut rng, 8);
            let u = basis.source();
            let values: Vec<Complex64> = basis
                .grid()
                .into_iter()
                .map(|z| {
                    let uz = u.eval(z)?;
                    Ok(uz * p.eval_at(z) + (uz * q.eval_at(z)).conj())
                })
                .collect::<Result<_>>()?;
            let residual = quadrature_matrix(basis, &values)?.norm();
            report(name, residual, vec![Quadrature])
        }
        IdentityName::Csym => {
            let phi = params.phi.clone().unwrap_or_else(|| random::trig(&mut rng, 4, 4));
            let j = conjugation_matrix(basis)?;
            let m = truncated_toeplitz(basis, &Symbol::Trig(phi), Method::Quadrature)?.entries;
            let a = compressed_shift(basis)?.entries;
            let residual = j
                .symmetry_residual(&m)
                .max(j.symmetry_residual(&a))
                .max(j.invariant_defect());
            report(name, residual, vec![Quadrature, Quadrature])
        }
        IdentityName::ClarkUnitarity => {
            let alpha = params.alpha.unwrap_or_else(|| random::unimodular(&mut rng));
            let u = clark_unitary(basis, alpha)?.entries;
            let residual = (&u * u.adjoint() - &id).norm();
            report(name, residual, vec![Derived])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::{make_blaschke, BlaschkeProduct};
    use crate::modelspace::{build_basis, Resolution};

    #[test]
    fn names_round_trip() {
        for n in IdentityName::ALL {
            assert_eq!(n.as_str().parse::<IdentityName>().unwrap(), n);
        }
        assert_eq!(
            "nope".parse::<IdentityName>().unwrap_err(),
            Error::UnknownIdentity("nope".into())
        );
    }

    #[test]
    fn defect_on_z_squared_is_exact() {
        let b = build_basis(&BlaschkeProduct::monomial(2).unwrap(), Resolution::Auto).unwrap();
        let r = verify_identity(IdentityName::Defect, &b, &IdentityParams::default()).unwrap();
        assert!(r.pass && r.residual < 1e-10, "{r:?}");
    }

    #[test]
    fn defect_normalization_in_one_dimension() {
        // 1 - |a|^2 must equal ||k_0||^2 = 1 - |a|^2
        let a = Complex64::new(0.35, -0.6);
        let u = make_blaschke(vec![a], Complex64::new(1.0, 0.0)).unwrap();
        let b = build_basis(&u, Resolution::Auto).unwrap();
        let k0 = reproducing_kernel(&b, Complex64::new(0.0, 0.0)).unwrap();
        assert!(((1.0 - a.norm_sqr()) - k0.norm * k0.norm).abs() < 1e-14);
        let r = verify_identity(IdentityName::Defect, &b, &IdentityParams::default()).unwrap();
        assert!(r.residual < 1e-14);
    }

    #[test]
    fn report_serializes_to_contract() {
        let b = build_basis(&BlaschkeProduct::monomial(3).unwrap(), Resolution::Auto).unwrap();
        let r = verify_identity(IdentityName::Gram, &b, &IdentityParams::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["identity"], "gram");
        assert_eq!(v["tolerance"], 1e-10);
        assert_eq!(v["pass"], true);
        assert_eq!(v["operands"][0], "quadrature");
    }
}
