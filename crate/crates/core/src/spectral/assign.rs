//! Minimum-cost perfect matching (Hungarian method, potentials form).

use num_complex::Complex64;

/// Optimal pairing of `a` with `b` under `|a_i - b_j|`; returns the
/// permutation `p` with `a[i] <-> b[p[i]]`.
pub fn match_points(a: &[Complex64], b: &[Complex64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len(), "matching needs equal multiset sizes");
    let n = a.len();
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();
    // 1-based arrays as in the classic formulation
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0usize; n];
    for j in 1..=n {
        if p[j] != 0 {
            out[p[j] - 1] = j - 1;
        }
    }
    out
}

/// Largest pairwise distance under the optimal matching.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let p = match_points(a, b);
    p.iter()
        .enumerate()
        .map(|(i, &j)| (a[i] - b[j]).norm())
        .fold(0.0, f64::max)
}

/// Smallest distance between distinct entries (infinite for fewer than two).
pub fn min_separation(a: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            best = best.min((a[i] - a[j]).norm());
        }
    }
    best
}
