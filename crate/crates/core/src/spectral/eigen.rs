//! Complex Schur decomposition by Householder reduction to Hessenberg form
//! followed by single-shift QR sweeps with Wilkinson shifts.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `A = Q T Q^*` with `T` upper triangular.
pub(crate) struct Schur {
    pub t: DMatrix<Complex64>,
    pub q: DMatrix<Complex64>,
}

/// Eigenvalues with unit eigenvectors (columns of `vectors`).
pub(crate) struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: DMatrix<Complex64>,
}

fn is_lower_triangular(a: &DMatrix<Complex64>) -> bool {
    let n = a.nrows();
    (0..n).all(|j| (j + 1..n).all(|i| a[(j, i)] == ZERO))
}

fn is_upper_triangular(a: &DMatrix<Complex64>) -> bool {
    let n = a.nrows();
    (0..n).all(|j| (j + 1..n).all(|i| a[(i, j)] == ZERO))
}

/// Reverses row and column order; maps lower triangular to upper triangular.
fn flip(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |i, j| a[(n - 1 - i, n - 1 - j)])
}

pub(crate) fn eigen(a: &DMatrix<Complex64>) -> Result<Eigen> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    // An exactly lower-triangular input is flipped so that the reduction sees
    // an upper-triangular matrix and deflates without rounding.
    let flipped = n > 1 && is_lower_triangular(a) && !is_upper_triangular(a);
    let work = if flipped { flip(a) } else { a.clone() };
    let Schur { t, q } = schur(&work)?;
    let y = triangular_eigenvectors(&t);
    let mut vectors = &q * y;
    if flipped {
        vectors = DMatrix::from_fn(n, n, |i, j| vectors[(n - 1 - i, j)]);
    }
    for mut col in vectors.column_iter_mut() {
        let nrm = col.norm();
        if nrm > 0.0 {
            col /= Complex64::new(nrm, 0.0);
        }
    }
    Ok(Eigen {
        values: (0..n).map(|i| t[(i, i)]).collect(),
        vectors,
    })
}

/// Givens pair `(c, s)` with `[c s; -conj(s) c] [x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, ONE);
    }
    let rho = ax.hypot(y.norm());
    (ax / rho, (x / ax) * y.conj() / rho)
}

fn rotate_rows(h: &mut DMatrix<Complex64>, k: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    for j in cols {
        let a = h[(k, j)];
        let b = h[(k + 1, j)];
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols(h: &mut DMatrix<Complex64>, k: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
    for i in rows {
        let a = h[(i, k)];
        let b = h[(i, k + 1)];
        h[(i, k)] = a * c + b * s.conj();
        h[(i, k + 1)] = -a * s + b * c;
    }
}

fn hessenberg(a: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = DMatrix::<Complex64>::identity(n, n);
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let alpha = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        // v = x + phase * alpha * e1, H = I - 2 v v^* / (v^* v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;
        // left: rows k+1.., all columns
        for j in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            let s = s * beta;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s;
            }
        }
        // right: columns k+1.., all rows
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: Complex64 = v.iter().enumerate().map(|(j, vj)| m[(i, k + 1 + j)] * vj).sum();
                let s = s * beta;
                for (j, vj) in v.iter().enumerate() {
                    m[(i, k + 1 + j)] -= s * vj.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block nearer its corner.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

pub(crate) fn schur(a: &DMatrix<Complex64>) -> Result<Schur> {
    let n = a.nrows();
    let (mut h, mut q) = hessenberg(a);
    let cap = 30 * n.max(1);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        // locate the active block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= cap {
            return Err(Error::NoConvergence {
                iterations: total,
                partial: (0..n).map(|i| h[(i, i)]).collect(),
            });
        }
        total += 1;
        since_deflation += 1;
        let mu = if since_deflation.is_multiple_of(11) {
            // exceptional shift
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let first = if k > lo { k - 1 } else { lo };
            rotate_rows(&mut h, k, c, s, first..n);
            let last = (k + 3).min(hi + 1);
            rotate_cols(&mut h, k, c, s, 0..last);
            rotate_cols(&mut q, k, c, s, 0..n);
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { t: h, q })
}

/// Eigenvectors of an upper-triangular matrix by back substitution.
fn triangular_eigenvectors(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = t.nrows();
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let small = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for j in (0..k).rev() {
            let s: Complex64 = (j + 1..=k).map(|l| t[(j, l)] * y[(l, k)]).sum();
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[(j, k)] = -s / d;
        }
        // rescale to avoid overflow on ill-conditioned columns
        let m = (0..=k).map(|j| y[(j, k)].norm()).fold(0.0, f64::max);
        if m > 1e100 {
            for j in 0..=k {
                y[(j, k)] /= m;
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn schur_reconstructs_random_matrix() {
        let n = 9;
        let a = DMatrix::from_fn(n, n, |i, j| {
            c(((i * 7 + j * 3) % 11) as f64 - 5.0, ((i * 5 + j * 2) % 7) as f64 - 3.0)
        });
        let Schur { t, q } = schur(&a).unwrap();
        let back = &q * &t * q.adjoint();
        assert!((back - &a).norm() < 1e-12 * a.norm());
        assert!((q.adjoint() * &q - DMatrix::identity(n, n)).norm() < 1e-13);
        for j in 0..n {
            for i in j + 1..n {
                assert_eq!(t[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn nilpotent_lower_shift_has_exact_zero_spectrum() {
        let mut a = DMatrix::<Complex64>::zeros(3, 3);
        a[(1, 0)] = ONE;
        a[(2, 1)] = ONE;
        let e = eigen(&a).unwrap();
        assert!(e.values.iter().all(|v| *v == ZERO));
    }

    #[test]
    fn givens_annihilates() {
        for (x, y) in [(c(1.0, 2.0), c(-0.5, 0.3)), (ZERO, c(2.0, 1.0)), (c(3.0, 0.0), ZERO)] {
            let (cs, s) = givens(x, y);
            let r2 = -s.conj() * x + y * cs;
            assert!(r2.norm() < 1e-15);
            assert!((cs * cs + s.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }
}
