//! Dense complex linear algebra: tensor products, partial traces, Hermitian
//! eigenproblems, propagators, and the state/operator Schmidt decompositions.

mod eigen;
mod matrix;
mod schmidt;
mod svd;

use alloc::format;

pub use eigen::{eig_hermitian, propagator, EigenSystem};
pub use matrix::{content_hash, CMatrix, CVector};
pub use schmidt::{operator_schmidt_decompose, schmidt_decompose, OperatorSchmidtTerm, SchmidtDecomposition};
pub use svd::{svd, Svd};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;

/// Largest total Hilbert-space dimension any operation will build.
pub const MAX_DIMENSION: usize = 4096;

/// Relative Hermiticity tolerance: `max|M - M†| ≤ 1e-12 · max|M|`.
pub const HERMITIAN_REL_TOL: f64 = 1e-12;

/// Relative cutoff below which singular values count as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Which tensor factor of `H_A ⊗ H_B` to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Kronecker product, `(A⊗B)[i·rB + k, j·cB + l] = A[i,j]·B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows.max(cols) > MAX_DIMENSION {
        return Err(Error::Capacity { what: "tensor product dimension", requested: rows.max(cols), limit: MAX_DIMENSION });
    }
    let (rb, cb) = (b.rows(), b.cols());
    Ok(CMatrix::from_fn(rows, cols, |r, c| a[(r / rb, c / cb)] * b[(r % rb, c % cb)]))
}

/// Partial trace of an operator on `H_A ⊗ H_B`, keeping `keep`.
pub fn partial_trace(rho: &CMatrix, dim_a: usize, dim_b: usize, keep: Side) -> Result<CMatrix> {
    let d = dim_a * dim_b;
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::Shape(format!(
            "partial trace over {dim_a}x{dim_b} needs a {d}x{d} operator, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(match keep {
        Side::B => CMatrix::from_fn(dim_b, dim_b, |k, l| (0..dim_a).map(|i| rho[(i * dim_b + k, i * dim_b + l)]).sum()),
        Side::A => CMatrix::from_fn(dim_a, dim_a, |i, j| (0..dim_b).map(|k| rho[(i * dim_b + k, j * dim_b + k)]).sum()),
    })
}

/// Reduced density matrix of the pure state `|χ⟩⟨χ|` without forming the
/// full projector.
pub fn reduced_density(chi: &CVector, dim_a: usize, dim_b: usize, keep: Side) -> Result<CMatrix> {
    if chi.dim() != dim_a * dim_b {
        return Err(Error::Shape(format!("state of dimension {} is not {dim_a}x{dim_b}", chi.dim())));
    }
    Ok(match keep {
        Side::A => CMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| chi[i * dim_b + k] * chi[j * dim_b + k].conj()).sum()
        }),
        Side::B => CMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|i| chi[i * dim_b + k] * chi[i * dim_b + l].conj()).sum()
        }),
    })
}

/// `tr_A |u⟩⟨v|`, an operator on `H_B`.
pub fn partial_trace_outer(u: &CVector, v: &CVector, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_b, dim_b, |k, l| (0..dim_a).map(|i| u[i * dim_b + k] * v[i * dim_b + l].conj()).sum())
}

/// Orthogonal projector onto the span of an orthonormal list.
pub fn projector(basis: &[CVector], dim: usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    for v in basis {
        p = &p + &v.outer(v);
    }
    p
}

/// `max_ij |⟨v_i|v_j⟩ - δ_ij|`.
pub fn orthonormality_defect(basis: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let d = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dot(b) - C64::new(d, 0.0)).norm());
        }
    }
    worst
}

/// Trace norm distance `½ ‖ρ - σ‖₁` of two Hermitian matrices.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    let diff = (rho - sigma).hermitian_part();
    Ok(0.5 * eig_hermitian(&diff)?.eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_matrix, random_state, rng};
    use alloc::vec::Vec;

    fn sz() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), CMatrix::identity(4));
        assert_eq!(kron(&sz(), &i2).unwrap(), CMatrix::diag_real(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_index_formula() {
        let mut r = rng(2);
        let a = random_matrix(&mut r, 2, 2);
        let b = random_matrix(&mut r, 3, 3);
        let k = kron(&a, &b).unwrap();
        // ((1,2),(0,1)) -> row 1*3+2, col 0*3+1
        assert_eq!(k[(5, 1)], a[(1, 0)] * b[(2, 1)]);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k[(i * 3 + p, j * 3 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_capacity() {
        let a = CMatrix::identity(65);
        let err = kron(&a, &a).unwrap_err();
        assert!(matches!(err, Error::Capacity { limit: MAX_DIMENSION, .. }));
    }

    #[test]
    fn kron_associative_on_integers() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, -1.0]]);
        let b = CMatrix::from_real_rows(&[&[0.0, 5.0], &[-2.0, 1.0]]);
        let c = CMatrix::from_real_rows(&[&[4.0, 1.0, 0.0]]);
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let psi = CVector::from_real(&[0.6, 0.8]);
        let phi = CVector::from_real(&[0.0, 1.0]);
        let chi = psi.kron(&phi);
        let rho = chi.outer(&chi);
        let rb = partial_trace(&rho, 2, 2, Side::B).unwrap();
        assert!(rb.max_abs_diff(&phi.outer(&phi)) < 1e-15);

        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = CVector::from_real(&[h, 0.0, 0.0, h]);
        let rb = partial_trace(&bell.outer(&bell), 2, 2, Side::B).unwrap();
        assert!(rb.max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_matches_index_sum_oracle() {
        let mut r = rng(4);
        let chi = random_state(&mut r, 6);
        let rho = chi.outer(&chi);
        let (da, db) = (2, 3);
        let rb = partial_trace(&rho, da, db, Side::B).unwrap();
        let ra = partial_trace(&rho, da, db, Side::A).unwrap();
        for k in 0..db {
            for l in 0..db {
                let mut s = C64::new(0.0, 0.0);
                for i in 0..da {
                    s += chi[i * db + k] * chi[i * db + l].conj();
                }
                assert!((rb[(k, l)] - s).norm() < 1e-12);
            }
        }
        for i in 0..da {
            for j in 0..da {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..db {
                    s += chi[i * db + k] * chi[j * db + k].conj();
                }
                assert!((ra[(i, j)] - s).norm() < 1e-12);
            }
        }
        assert!(rb.max_abs_diff(&reduced_density(&chi, da, db, Side::B).unwrap()) < 1e-15);
        assert!(ra.max_abs_diff(&reduced_density(&chi, da, db, Side::A).unwrap()) < 1e-15);
        // Tracing out both sides leaves the full trace.
        let full = partial_trace(&ra.clone(), 1, da, Side::A).unwrap();
        assert!((full[(0, 0)] - rho.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_shape_error() {
        let err = partial_trace(&CMatrix::identity(5), 2, 3, Side::A).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn partial_trace_preserves_positivity() {
        let mut r = rng(9);
        let states: Vec<CVector> = (0..3).map(|_| random_state(&mut r, 12)).collect();
        let mut rho = CMatrix::zeros(12, 12);
        for (w, s) in [0.5, 0.3, 0.2].iter().zip(&states) {
            rho = &rho + &s.outer(s).scale_real(*w);
        }
        for keep in [Side::A, Side::B] {
            let red = partial_trace(&rho, 3, 4, keep).unwrap();
            assert!((red.trace().re - 1.0).abs() < 1e-12);
            assert!(red.hermiticity_residual() < 1e-14);
            let es = eig_hermitian(&red).unwrap();
            assert!(es.eigenvalues().iter().all(|&l| l >= -1e-12));
        }
    }

    #[test]
    fn trace_distance_basics() {
        let a = CVector::from_real(&[1.0, 0.0]);
        let b = CVector::from_real(&[0.0, 1.0]);
        let d = trace_distance(&a.outer(&a), &b.outer(&b)).unwrap();
        assert!((d - 1.0).abs() < 1e-14);
        let h = random_hermitian(&mut rng(1), 3);
        assert!(trace_distance(&h, &h).unwrap() < 1e-14);
    }
}
