//! Dense matrices of truncated Toeplitz operators, the compressed shift,
//! the model-space conjugation, Clark unitaries and Hankel blocks, all in
//! the Takenaka–Malmquist basis.
//!
//! Two construction routes exist. The closed-form route needs only the zero
//! list: the compressed shift has explicit entries and polynomial symbols act
//! through functional calculus. The quadrature route integrates on the basis
//! grid and accepts any symbol. Each route is the other's check.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::BlaschkeProduct;
use crate::modelspace::{basis_values, circle_grid, reproducing_kernel, ModelBasis, MAX_POINTS};
use crate::symbols::{Symbol, TrigPolynomial};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// How a matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FunctionalCalculus,
    Quadrature,
    Derived,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::FunctionalCalculus => "functional-calculus",
            Provenance::Quadrature => "quadrature",
            Provenance::Derived => "derived",
        }
    }
}

/// Construction method requested from [`truncated_toeplitz`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FunctionalCalculus,
    Quadrature,
}

/// Identifies the basis a matrix is expressed in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisTag {
    pub zeros: Vec<Complex64>,
    pub phase: Complex64,
    pub quadrature_points: Option<usize>,
}

impl BasisTag {
    pub fn of(u: &BlaschkeProduct, quadrature_points: Option<usize>) -> Self {
        BasisTag {
            zeros: u.zeros().to_vec(),
            phase: u.phase(),
            quadrature_points,
        }
    }

    fn of_basis(basis: &ModelBasis) -> Self {
        Self::of(basis.source(), Some(basis.points()))
    }
}

/// Dense operator matrix tagged with its basis and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub basis: BasisTag,
    pub provenance: Provenance,
}

#[derive(Serialize)]
struct Envelope<'a> {
    basis: &'a BasisTag,
    provenance: Provenance,
    entries: Vec<Vec<Complex64>>,
}

impl OperatorMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            basis: self.basis.clone(),
            provenance: Provenance::Derived,
        }
    }

    /// Same basis, new entries.
    pub fn derive(&self, entries: CMatrix) -> Self {
        OperatorMatrix {
            entries,
            basis: self.basis.clone(),
            provenance: Provenance::Derived,
        }
    }

    /// `row,col,re,im` with 0-based indices.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "row,col,re,im")?;
        for i in 0..self.entries.nrows() {
            for j in 0..self.entries.ncols() {
                let z = self.entries[(i, j)];
                writeln!(w, "{},{},{},{}", i, j, z.re, z.im)?;
            }
        }
        Ok(())
    }

    /// JSON envelope `{basis, provenance, entries}` with row-major entries.
    pub fn to_json(&self) -> serde_json::Value {
        let entries = (0..self.entries.nrows())
            .map(|i| (0..self.entries.ncols()).map(|j| self.entries[(i, j)]).collect())
            .collect();
        serde_json::to_value(Envelope {
            basis: &self.basis,
            provenance: self.provenance,
            entries,
        })
        .expect("matrix envelope serializes")
    }
}

/// Closed-form compressed shift: `a_k` on the diagonal,
/// `sqrt(g_j g_k) prod_{k<l<j} (-conj a_l)` below it, zero above.
pub fn shift_matrix(u: &BlaschkeProduct) -> CMatrix {
    let n = u.degree();
    let a = u.zeros();
    let s: Vec<f64> = u.gaps().iter().map(|g| g.sqrt()).collect();
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = a[k];
        let mut chain = ONE;
        for j in k + 1..n {
            m[(j, k)] = chain * (s[j] * s[k]);
            chain *= -a[j].conj();
        }
    }
    m
}

/// Coordinates of `k_0`: `conj(e_k(0)) = sqrt(g_k) prod_{l<k} (-conj a_l)`.
pub fn kernel_origin_coords(u: &BlaschkeProduct) -> DVector<Complex64> {
    let mut out = Vec::with_capacity(u.degree());
    let mut chain = ONE;
    for (&a, &g) in u.zeros().iter().zip(u.gaps()) {
        out.push(chain * g.sqrt());
        chain *= -a.conj();
    }
    DVector::from_vec(out)
}

/// Coordinates of `C k_0`: `<C k_0, e_k> = phase sqrt(g_k) prod_{l>k} (-a_l)`.
pub fn conjugate_kernel_origin_coords(u: &BlaschkeProduct) -> DVector<Complex64> {
    let n = u.degree();
    let mut out = vec![ZERO; n];
    let mut chain = u.phase();
    for k in (0..n).rev() {
        out[k] = chain * u.gaps()[k].sqrt();
        chain *= -u.zeros()[k];
    }
    DVector::from_vec(out)
}

/// `u(0)` from the zero list; exact for family members.
pub fn value_at_origin(u: &BlaschkeProduct) -> Complex64 {
    u.zeros().iter().fold(u.phase(), |acc, a| acc * -a)
}

/// `c_0 I + sum c_n A^n + sum c_{-n} (A^*)^n`.
pub fn functional_calculus(a: &CMatrix, p: &TrigPolynomial) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::identity(n, n) * p.coeff(0);
    let top = p.degree_pos().max(p.degree_neg());
    let mut power = CMatrix::identity(n, n);
    for k in 1..=top {
        power = &power * a;
        let plus = p.coeff(k as i64);
        let minus = p.coeff(-(k as i64));
        if plus != ZERO {
            out += &power * plus;
        }
        if minus != ZERO {
            out += power.adjoint() * minus;
        }
    }
    out
}

/// `A_phi` for a polynomial symbol on the closed-form route.
pub fn tto_functional(u: &BlaschkeProduct, p: &TrigPolynomial) -> OperatorMatrix {
    OperatorMatrix {
        entries: functional_calculus(&shift_matrix(u), p),
        basis: BasisTag::of(u, None),
        provenance: Provenance::FunctionalCalculus,
    }
}

/// `M_{jk} = (1/N) sum phi e_k conj(e_j)` for grid values of `phi`.
pub fn quadrature_matrix(basis: &ModelBasis, phi: &[Complex64]) -> Result<CMatrix> {
    let points = basis.points();
    if phi.len() != points {
        return Err(Error::GridMismatch(phi.len(), points));
    }
    let n = basis.dimension();
    let weighted: Vec<Vec<Complex64>> = (0..n)
        .map(|k| basis.values(k).iter().zip(phi).map(|(e, f)| e * f).collect())
        .collect();
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        let ej = basis.values(j);
        for k in 0..n {
            let s: Complex64 = weighted[k].iter().zip(ej).map(|(x, y)| x * y.conj()).sum();
            m[(j, k)] = s / points as f64;
        }
    }
    Ok(m)
}

/// Compressed shift by quadrature, `(A_z)_{jk} = <z e_k, e_j>`.
pub fn compressed_shift(basis: &ModelBasis) -> Result<OperatorMatrix> {
    Ok(OperatorMatrix {
        entries: quadrature_matrix(basis, &basis.grid())?,
        basis: BasisTag::of_basis(basis),
        provenance: Provenance::Quadrature,
    })
}

/// `A_phi^u` by the requested route.
pub fn truncated_toeplitz(basis: &ModelBasis, phi: &Symbol, method: Method) -> Result<OperatorMatrix> {
    match method {
        Method::FunctionalCalculus => {
            let p = phi.as_trig().ok_or(Error::MethodMismatch)?;
            let mut m = tto_functional(basis.source(), p);
            m.basis = BasisTag::of_basis(basis);
            Ok(m)
        }
        Method::Quadrature => Ok(OperatorMatrix {
            entries: quadrature_matrix(basis, &phi.sample(basis.points())?)?,
            basis: BasisTag::of_basis(basis),
            provenance: Provenance::Quadrature,
        }),
    }
}

/// Matrix of the conjugation `Cf = u conj(z f)`: `C x = J conj(x)` in coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationMatrix {
    pub j: CMatrix,
}

impl ConjugationMatrix {
    /// Coordinates of `C f` for coordinates `x` of `f`.
    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        &self.j * x.map(|z| z.conj())
    }

    /// `max(|J conj(J) - I|, |J - J^T|, |J J^* - I|)` in max-entry norm.
    pub fn invariant_defect(&self) -> f64 {
        let n = self.j.nrows();
        let id = CMatrix::identity(n, n);
        let inv = max_abs(&(&self.j * self.j.map(|z| z.conj()) - &id));
        let sym = max_abs(&(&self.j - self.j.transpose()));
        let uni = max_abs(&(&self.j * self.j.adjoint() - &id));
        inv.max(sym).max(uni)
    }

    /// `||M - J M^T conj(J)||_F`, zero for complex symmetric `M`.
    pub fn symmetry_residual(&self, m: &CMatrix) -> f64 {
        (m - &self.j * m.transpose() * self.j.map(|z| z.conj())).norm()
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `J_{jk} = <C e_k, e_j>` on the basis grid.
pub fn conjugation_matrix(basis: &ModelBasis) -> Result<ConjugationMatrix> {
    let u = basis.source();
    let grid = basis.grid();
    let n = basis.dimension();
    let u_vals: Vec<Complex64> = grid.iter().map(|&z| u.eval(z)).collect::<Result<_>>()?;
    let mut j = CMatrix::zeros(n, n);
    for k in 0..n {
        let ce: Vec<Complex64> = basis
            .values(k)
            .iter()
            .zip(&grid)
            .zip(&u_vals)
            .map(|((e, z), uz)| uz * (z * e).conj())
            .collect();
        for (row, c) in basis.project(&ce)?.into_iter().enumerate() {
            j[(row, k)] = c;
        }
    }
    Ok(ConjugationMatrix { j })
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::BadAlpha(alpha));
    }
    Ok(())
}

fn clark_from_parts(
    shift: &CMatrix,
    k0: &DVector<Complex64>,
    ck0: &DVector<Complex64>,
    u0: Complex64,
    alpha: Complex64,
) -> Result<CMatrix> {
    check_alpha(alpha)?;
    let denom = 1.0 - u0.conj() * alpha;
    assert!(denom.norm() > 0.0, "|u(0)| < 1 keeps the Clark denominator nonzero");
    Ok(shift + k0 * ck0.adjoint() * (alpha / denom))
}

/// Clark unitary `A_z + alpha / (1 - conj(u(0)) alpha) * k_0 (x) C k_0` on the
/// quadrature route: shift, kernel and conjugation all come from the grid.
pub fn clark_unitary(basis: &ModelBasis, alpha: Complex64) -> Result<OperatorMatrix> {
    check_alpha(alpha)?;
    let shift = compressed_shift(basis)?;
    let k0 = DVector::from_vec(reproducing_kernel(basis, ZERO)?.coords);
    let ck0 = conjugation_matrix(basis)?.apply(&k0);
    let u0 = basis.source().eval(ZERO)?;
    Ok(shift.derive(clark_from_parts(&shift.entries, &k0, &ck0, u0, alpha)?))
}

/// Clark unitary on the closed-form route.
pub fn clark_unitary_exact(u: &BlaschkeProduct, alpha: Complex64) -> Result<OperatorMatrix> {
    let entries = clark_from_parts(
        &shift_matrix(u),
        &kernel_origin_coords(u),
        &conjugate_kernel_origin_coords(u),
        value_at_origin(u),
        alpha,
    )?;
    Ok(OperatorMatrix {
        entries,
        basis: BasisTag::of(u, None),
        provenance: Provenance::Derived,
    })
}

/// `phi(U_alpha) - A_phi` on the quadrature route for `U` and the
/// functional-calculus route for `A_phi`.
pub fn clark_functional_gap(
    basis: &ModelBasis,
    alpha: Complex64,
    phi: &TrigPolynomial,
) -> Result<OperatorMatrix> {
    let u = clark_unitary(basis, alpha)?;
    let a = truncated_toeplitz(basis, &Symbol::Trig(phi.clone()), Method::FunctionalCalculus)?;
    Ok(u.derive(functional_calculus(&u.entries, phi) - a.entries))
}

/// Closed-form counterpart of [`clark_functional_gap`]; returns
/// `(phi(U), D)` so callers can inspect normality of `phi(U)`.
pub fn clark_functional_gap_exact(
    u: &BlaschkeProduct,
    alpha: Complex64,
    phi: &TrigPolynomial,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let unitary = clark_unitary_exact(u, alpha)?;
    let phi_u = functional_calculus(&unitary.entries, phi);
    let gap = &phi_u - functional_calculus(&shift_matrix(u), phi);
    Ok((unitary.derive(phi_u), unitary.derive(gap)))
}

/// `H_phi = (I - P_u) M_phi` on `K_u`, rows indexed by Fourier modes
/// `m = -n_f..=n_f` of `(I - P_u) L^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelBlock {
    pub matrix: CMatrix,
    pub n_f: usize,
}

impl HankelBlock {
    /// Row index of Fourier mode `m`.
    pub fn row(&self, m: i64) -> usize {
        (m + self.n_f as i64) as usize
    }
}

/// Smallest admissible truncation order.
pub fn hankel_min_order(u: &BlaschkeProduct, phi: &TrigPolynomial) -> usize {
    phi.bandwidth() + 4 * u.degree()
}

/// Truncation order whose discarded tail is about `1e-4` of the leading
/// modes (`rho^{n_f} <= 1e-4` for the largest zero modulus `rho`), so the
/// semicommutator residual sits near `1e-8`, never below the minimum order.
pub fn hankel_auto_order(u: &BlaschkeProduct, phis: &[&TrigPolynomial]) -> usize {
    let minimum = phis.iter().map(|p| hankel_min_order(u, p)).max().unwrap_or(0);
    let rho = u.zeros().iter().map(|a| a.norm()).fold(0.0, f64::max);
    let decay = if rho > 0.0 {
        ((1e-4f64).ln() / rho.ln()).ceil() as usize
    } else {
        0
    };
    let bandwidth = phis.iter().map(|p| p.bandwidth()).max().unwrap_or(0);
    minimum.max(decay + bandwidth + u.degree())
}

pub fn hankel_operator(basis: &ModelBasis, phi: &TrigPolynomial, n_f: usize) -> Result<HankelBlock> {
    let u = basis.source();
    let minimum = hankel_min_order(u, phi);
    if n_f < minimum {
        return Err(Error::TruncationTooSmall {
            requested: n_f,
            minimum,
        });
    }
    let n = u.degree();
    let points = basis.points().max(4 * (n_f + 1)).next_power_of_two();
    if points > MAX_POINTS {
        return Err(Error::QuadratureStall {
            points,
            defect: f64::INFINITY,
        });
    }
    let grid = circle_grid(points);
    let a_phi = functional_calculus(&shift_matrix(u), phi);
    let mut residual = vec![vec![ZERO; points]; n];
    for (t, &z) in grid.iter().enumerate() {
        let e = basis_values(u, z)?;
        let f = phi.eval_at(z);
        for k in 0..n {
            let proj: Complex64 = (0..n).map(|j| a_phi[(j, k)] * e[j]).sum();
            residual[k][t] = f * e[k] - proj;
        }
    }
    let rows = 2 * n_f + 1;
    let mut matrix = CMatrix::zeros(rows, n);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(points);
    for (k, column) in residual.iter_mut().enumerate() {
        fft.process(column);
        for r in 0..rows {
            let m = r as i64 - n_f as i64;
            matrix[(r, k)] = column[m.rem_euclid(points as i64) as usize] / points as f64;
        }
    }
    Ok(HankelBlock { matrix, n_f })
}

/// `A_{phi psi} - A_phi A_psi - (H_{conj phi})^* H_psi` and the relative
/// residual against `||A_{phi psi}|| + ||A_phi A_psi||`.
pub fn hankel_semicommutator_residual(
    basis: &ModelBasis,
    phi: &TrigPolynomial,
    psi: &TrigPolynomial,
    n_f: usize,
) -> Result<f64> {
    let u = basis.source();
    let a = shift_matrix(u);
    let a_prod = functional_calculus(&a, &phi.mul(psi));
    let semi = functional_calculus(&a, phi) * functional_calculus(&a, psi);
    let h_phi_bar = hankel_operator(basis, &phi.conj(), n_f)?;
    let h_psi = hankel_operator(basis, psi, n_f)?;
    let lhs = &a_prod - &semi;
    let rhs = h_phi_bar.matrix.adjoint() * h_psi.matrix;
    let scale = a_prod.norm() + semi.norm();
    let diff = (lhs - rhs).norm();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}
