//! Orthonormal Takenaka–Malmquist basis of the model space, reproducing
//! kernels, the normalized kernel density, and the circle quadrature that
//! every other module integrates with.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inner::{factor, BlaschkeProduct};

/// Required Gram accuracy of a basis.
pub const GRAM_TOL: f64 = 1e-10;
/// Hard cap on adaptive quadrature.
pub const MAX_POINTS: usize = 1 << 20;
const MIN_AUTO_POINTS: usize = 1024;

/// Quadrature resolution requested from [`build_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Auto,
    Points(usize),
}

/// `e^{i t_j}` with `t_j = 2 pi j / n`.
pub fn circle_grid(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Trapezoid inner product `(1/N) sum f(t_j) conj(g(t_j))`.
pub fn circle_inner_product(f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
    if f.len() != g.len() {
        return Err(Error::GridMismatch(f.len(), g.len()));
    }
    Ok(dot(f, g))
}

#[inline]
pub(crate) fn dot(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let s: Complex64 = f.iter().zip(g).map(|(a, b)| a * b.conj()).sum();
    s / f.len() as f64
}

/// Values `e_1(z), ..., e_n(z)` of the basis induced by the zero order of `u`.
pub fn basis_values(u: &BlaschkeProduct, z: Complex64) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(u.degree());
    let mut prefix = Complex64::new(1.0, 0.0);
    for (&a, &g) in u.zeros().iter().zip(u.gaps()) {
        let d = 1.0 - a.conj() * z;
        if d.norm() < 1e-13 {
            return Err(Error::PoleHit(z));
        }
        out.push(prefix * (g.sqrt() / d));
        prefix *= factor(a, z);
    }
    Ok(out)
}

/// Orthonormal basis of `K_u` tabulated on a uniform circle grid.
#[derive(Debug, Clone)]
pub struct ModelBasis {
    source: BlaschkeProduct,
    points: usize,
    // row k holds e_k on the grid
    table: Vec<Vec<Complex64>>,
    gram_defect: f64,
}

/// Builds the basis, doubling the grid under [`Resolution::Auto`] until the
/// Gram defect drops below [`GRAM_TOL`].
pub fn build_basis(u: &BlaschkeProduct, resolution: Resolution) -> Result<ModelBasis> {
    let n = u.degree();
    match resolution {
        Resolution::Points(points) => {
            if !points.is_power_of_two() || points < 4 * n {
                return Err(Error::BadQuadratureSize(points));
            }
            let basis = ModelBasis::tabulate(u, points)?;
            if basis.gram_defect >= GRAM_TOL {
                return Err(Error::QuadratureStall {
                    points,
                    defect: basis.gram_defect,
                });
            }
            Ok(basis)
        }
        Resolution::Auto => {
            let mut points = MIN_AUTO_POINTS.max(16 * n).next_power_of_two();
            // Trapezoid error on these rational integrands scales like rho^N with
            // rho the largest zero modulus; grids with rho^N > 1e-7 cannot pass,
            // so they are skipped without being tabulated.
            let max_gap_ratio = u
                .gaps()
                .iter()
                .map(|&g| -0.5 * (1.0 - g).ln())
                .fold(f64::INFINITY, f64::min);
            if max_gap_ratio.is_finite() && max_gap_ratio > 0.0 {
                let needed = 16.0 / max_gap_ratio;
                if needed > MAX_POINTS as f64 {
                    return Err(Error::QuadratureStall {
                        points: MAX_POINTS,
                        defect: f64::INFINITY,
                    });
                }
                while (points as f64) < needed {
                    points *= 2;
                }
            }
            loop {
                let basis = ModelBasis::tabulate(u, points)?;
                if basis.gram_defect < GRAM_TOL {
                    return Ok(basis);
                }
                if points >= MAX_POINTS {
                    return Err(Error::QuadratureStall {
                        points,
                        defect: basis.gram_defect,
                    });
                }
                points *= 2;
            }
        }
    }
}

impl ModelBasis {
    fn tabulate(u: &BlaschkeProduct, points: usize) -> Result<Self> {
        let n = u.degree();
        let mut table = vec![Vec::with_capacity(points); n];
        for z in circle_grid(points) {
            for (row, v) in table.iter_mut().zip(basis_values(u, z)?) {
                row.push(v);
            }
        }
        let mut basis = ModelBasis {
            source: u.clone(),
            points,
            table,
            gram_defect: 0.0,
        };
        basis.gram_defect = basis.gram_defect_now();
        Ok(basis)
    }

    fn gram_defect_now(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dimension() {
            for k in 0..=j {
                let g = dot(&self.table[k], &self.table[j]);
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    pub fn source(&self) -> &BlaschkeProduct {
        &self.source
    }

    pub fn dimension(&self) -> usize {
        self.source.degree()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Grid values of `e_k` (0-based).
    pub fn values(&self, k: usize) -> &[Complex64] {
        &self.table[k]
    }

    pub fn grid(&self) -> Vec<Complex64> {
        circle_grid(self.points)
    }

    /// Max-entry defect `|G - I|` recorded at construction.
    pub fn gram_defect(&self) -> f64 {
        self.gram_defect
    }

    /// Full Gram matrix `G_{jk} = <e_k, e_j>`.
    pub fn gram(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.dimension();
        nalgebra::DMatrix::from_fn(n, n, |j, k| dot(&self.table[k], &self.table[j]))
    }

    /// Direct evaluation of every basis function at `z`.
    pub fn eval(&self, z: Complex64) -> Result<Vec<Complex64>> {
        basis_values(&self.source, z)
    }

    /// Coordinates `<f, e_k>` of grid values `f`.
    pub fn project(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.points {
            return Err(Error::GridMismatch(f.len(), self.points));
        }
        Ok(self.table.iter().map(|e| dot(f, e)).collect())
    }

    /// Grid values of `sum_k c_k e_k`.
    pub fn synthesize(&self, coords: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.points];
        for (c, e) in coords.iter().zip(&self.table) {
            for (o, v) in out.iter_mut().zip(e) {
                *o += c * v;
            }
        }
        out
    }

    /// CSV rows `k,j,t_j,re,im` for every basis function and grid point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,j,t_j,re,im")?;
        for (k, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let t = 2.0 * PI * j as f64 / self.points as f64;
                writeln!(w, "{},{},{},{},{}", k + 1, j, t, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// Reproducing kernel `k_lambda` as grid values plus basis coordinates.
#[derive(Debug, Clone)]
pub struct KernelValue {
    pub base: Complex64,
    pub values: Vec<Complex64>,
    /// Coordinates obtained by projecting the grid values.
    pub coords: Vec<Complex64>,
    pub norm: f64,
}

/// `k_lambda(z) = (1 - conj(u(lambda)) u(z)) / (1 - conj(lambda) z)`.
pub fn reproducing_kernel(basis: &ModelBasis, lambda: Complex64) -> Result<KernelValue> {
    if lambda.norm() > 1.0 + 1e-12 {
        return Err(Error::BasePointOutside(lambda));
    }
    let u = basis.source();
    let u_lambda = u.eval(lambda)?;
    let at_lambda = basis.eval(lambda)?;
    let values: Vec<Complex64> = basis
        .grid()
        .into_iter()
        .enumerate()
        .map(|(j, z)| {
            let d = 1.0 - lambda.conj() * z;
            if d.norm() < 1e-6 {
                // removable singularity on the circle: use the expansion
                at_lambda
                    .iter()
                    .enumerate()
                    .map(|(k, e)| e.conj() * basis.table[k][j])
                    .sum()
            } else {
                let uz = u.eval(z).expect("finite Blaschke products are analytic on the circle");
                (1.0 - u_lambda.conj() * uz) / d
            }
        })
        .collect();
    let coords = basis.project(&values)?;
    let norm = dot(&values, &values).re.sqrt();
    Ok(KernelValue {
        base: lambda,
        values,
        coords,
        norm,
    })
}

/// `(conj(e_k(lambda)))_k`, the kernel coordinates by direct evaluation.
pub fn kernel_coordinates(u: &BlaschkeProduct, lambda: Complex64) -> Result<Vec<Complex64>> {
    Ok(basis_values(u, lambda)?.into_iter().map(|e| e.conj()).collect())
}

fn density_scale(u: &BlaschkeProduct, lambda: Complex64) -> Result<(f64, Complex64)> {
    if lambda.norm() >= 1.0 - 1e-12 {
        return Err(Error::BasePointOnCircle(lambda));
    }
    let u_lambda = u.eval(lambda)?;
    let scale = (1.0 - lambda.norm_sqr()) / (1.0 - u_lambda.norm_sqr());
    Ok((scale, u_lambda))
}

/// Normalized kernel density
/// `F_lambda(e^{it}) = (1 - |lambda|^2) / (1 - |u(lambda)|^2) * |k_lambda(e^{it})|^2`.
pub fn kernel_density(basis: &ModelBasis, lambda: Complex64, t: f64) -> Result<f64> {
    let u = basis.source();
    let (scale, u_lambda) = density_scale(u, lambda)?;
    let z = Complex64::from_polar(1.0, t);
    let k = (1.0 - u_lambda.conj() * u.eval(z)?) / (1.0 - lambda.conj() * z);
    Ok(scale * k.norm_sqr())
}

/// `F_lambda` on the basis grid.
pub fn kernel_density_grid(basis: &ModelBasis, lambda: Complex64) -> Result<Vec<f64>> {
    let u = basis.source();
    let (scale, u_lambda) = density_scale(u, lambda)?;
    basis
        .grid()
        .into_iter()
        .map(|z| {
            let k = (1.0 - u_lambda.conj() * u.eval(z)?) / (1.0 - lambda.conj() * z);
            Ok(scale * k.norm_sqr())
        })
        .collect()
}

/// `(||k_zeta||^2 by quadrature, |u'(zeta)| by evaluation)` for `|zeta| = 1`.
pub fn boundary_kernel_norm_check(basis: &ModelBasis, zeta: Complex64) -> Result<(f64, f64)> {
    let k = reproducing_kernel(basis, zeta)?;
    let (_, du) = basis.source().eval_with_derivative(zeta)?;
    Ok((k.norm * k.norm, du.norm()))
}
