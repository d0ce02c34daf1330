//! Seeded generators for test inputs.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::inner::{make_blaschke, BlaschkeProduct};
use crate::symbols::TrigPolynomial;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the disk of radius `radius`.
pub fn point_in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>())
}

/// Zeros uniform in `|a| <= max_modulus`, pairwise at least `min_separation` apart.
pub fn zeros<R: Rng>(rng: &mut R, degree: usize, max_modulus: f64, min_separation: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(degree);
    while out.len() < degree {
        let a = point_in_disk(rng, max_modulus);
        if out.iter().all(|b| (a - b).norm() >= min_separation) {
            out.push(a);
        }
    }
    out
}

/// Random Blaschke product with random phase.
pub fn blaschke<R: Rng>(rng: &mut R, degree: usize, max_modulus: f64) -> BlaschkeProduct {
    let z = zeros(rng, degree, max_modulus, 1e-3);
    make_blaschke(z, unimodular(rng)).expect("zeros drawn inside the disk")
}

fn coefficient<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Trig polynomial with every coefficient in `-neg..=pos` drawn from the unit square.
pub fn trig<R: Rng>(rng: &mut R, pos: usize, neg: usize) -> TrigPolynomial {
    TrigPolynomial::new((-(neg as i64)..=pos as i64).map(|n| (n, coefficient(rng))))
}

/// Analytic polynomial of degree `degree`.
pub fn analytic<R: Rng>(rng: &mut R, degree: usize) -> TrigPolynomial {
    trig(rng, degree, 0)
}
