//! Seeded random matrices and states. Every generator takes an explicit
//! RNG so results are reproducible from a recorded seed.

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{svd, CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian `(x + iy)/√2`.
pub fn complex_gaussian<R: Rng + ?Sized>(r: &mut R) -> C64 {
    let x: f64 = r.sample(StandardNormal);
    let y: f64 = r.sample(StandardNormal);
    C64::new(x, y) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(r: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(r))
}

/// Gaussian Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(r: &mut R, n: usize) -> CMatrix {
    random_matrix(r, n, n).hermitian_part()
}

/// Gaussian Hermitian matrix rescaled to unit spectral norm.
pub fn random_hermitian_unit_norm<R: Rng + ?Sized>(r: &mut R, n: usize) -> CMatrix {
    let h = random_hermitian(r, n);
    let s = svd(&h, 0.0).singular_values.first().copied().unwrap_or(0.0);
    if s == 0.0 {
        h
    } else {
        h.scale_real(1.0 / s)
    }
}

/// Haar-ish unitary from the polar factor of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(r: &mut R, n: usize) -> CMatrix {
    let g = random_matrix(r, n, n);
    let s = svd(&g, 0.0);
    let mut u = CMatrix::zeros(n, n);
    for (l, v) in s.left.iter().zip(&s.right) {
        u = &u + &l.outer(v);
    }
    u
}

/// Normalized Gaussian vector.
pub fn random_state<R: Rng + ?Sized>(r: &mut R, dim: usize) -> CVector {
    let v = CVector::from((0..dim).map(|_| complex_gaussian(r)).collect::<Vec<_>>());
    v.normalized().unwrap_or_else(|| CVector::basis(dim, 0))
}

/// Normalized Gaussian coefficient vector supported on `support` (length
/// `dim`, zeros elsewhere).
pub fn random_supported<R: Rng + ?Sized>(r: &mut R, dim: usize, support: &[usize]) -> Vec<C64> {
    let mut c = alloc::vec![C64::new(0.0, 0.0); dim];
    for &i in support {
        c[i] = complex_gaussian(r);
    }
    let n = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in &mut c {
            *z /= n;
        }
    }
    c
}

/// Random probability vector of length `n` drawn as the spectrum of a
/// random density matrix `G G† / tr(G G†)`.
pub fn random_spectrum<R: Rng + ?Sized>(r: &mut R, n: usize) -> Vec<f64> {
    let g = random_matrix(r, n, n);
    let s = svd(&g, 0.0);
    let mut p: Vec<f64> = s.singular_values.iter().map(|x| x * x).collect();
    p.resize(n, 0.0);
    let total: f64 = p.iter().sum();
    p.iter().map(|x| x / total).collect()
}
