// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;


use super::matrix::content_hash;
use super::{CMatrix, CVector, C64, HERMITIAN_REL_TOL};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    /// Eigenvectors stored as columns.
    vectors: CMatrix,
    source_hash: u64,
    basis_hash: u64,
}

impl EigenSystem {
    /// Assembles an eigensystem from explicit eigenpairs of `source`, in the
    /// given (not necessarily ascending) order. Validates the residuals and
    /// orthonormality at the documented tolerances.
    pub fn from_pairs(source: &CMatrix, eigenvalues: Vec<f64>, vectors: Vec<CVector>) -> Result<Self> {
        if eigenvalues.len() != vectors.len() || vectors.len() != source.rows() || !source.is_square() {
            return Err(Error::Shape(format!(
                "{} eigenvalues and {} vectors for a {}x{} matrix",
                eigenvalues.len(),
                vectors.len(),
                source.rows(),
                source.cols()
            )));
        }
        let es = EigenSystem::assemble(eigenvalues, CMatrix::from_columns(&vectors), source);
        let scale = source.max_abs().max(1.0);
        let res = es.max_residual(source);
        if res > 1e-10 * scale {
            return Err(Error::Validation(format!("eigenpair residual {res:e} too large")));
        }
        let ortho = es.orthonormality_defect();
        if ortho > 1e-10 {
            return Err(Error::Validation(format!("eigenvectors not orthonormal (defect {ortho:e})")));
        }
        Ok(es)
    }

    fn assemble(eigenvalues: Vec<f64>, vectors: CMatrix, source: &CMatrix) -> Self {
        let source_hash = content_hash(source);
        let basis_hash = content_hash(&vectors) ^ source_hash.rotate_left(29);
        EigenSystem { eigenvalues, vectors, source_hash, basis_hash }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Matrix whose columns are the eigenvectors.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i)
    }

    /// Content hash of the matrix this system was computed from.
    pub fn source_hash(&self) -> u64 {
        self.source_hash
    }

    /// Hash of the source matrix together with the eigenvector matrix, so
    /// two eigensystems of the same operator with different orderings or
    /// phases differ.
    pub fn basis_hash(&self) -> u64 {
        self.basis_hash
    }

    /// `max_i ‖H|λ_i⟩ - λ_i|λ_i⟩‖`.
    pub fn max_residual(&self, h: &CMatrix) -> f64 {
        (0..self.dim())
            .map(|i| {
                let v = self.vector(i);
                let hv = h.mul_vec(&v);
                (&hv - &v.scale(C64::new(self.eigenvalues[i], 0.0))).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max_ij |⟨λ_i|λ_j⟩ - δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = &self.vectors.adjoint() * &self.vectors;
        gram.max_abs_diff(&CMatrix::identity(self.dim()))
    }

    /// `c_i = ⟨λ_i|v⟩`.
    pub fn coefficients(&self, v: &CVector) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|r| self.vectors[(r, i)].conj() * v[r]).sum())
            .collect()
    }

    /// `Σ_i c_i |λ_i⟩`.
    pub fn combine(&self, coefficients: &[C64]) -> CVector {
        assert_eq!(coefficients.len(), self.dim(), "coefficient count mismatch");
        let n = self.dim();
        CVector::from(
            (0..n)
                .map(|r| (0..n).map(|i| self.vectors[(r, i)] * coefficients[i]).sum())
                .collect::<Vec<C64>>(),
        )
    }

    /// `e^{-iHt}|v⟩` via the eigen-expansion.
    pub fn evolve(&self, v: &CVector, t: f64) -> CVector {
        let c = self.coefficients(v);
        let phased: Vec<C64> = c
            .iter()
            .zip(&self.eigenvalues)
            .map(|(ci, &l)| ci * C64::from_polar(1.0, -l * t))
            .collect();
        self.combine(&phased)
    }

    /// `V · diag(f(λ_i)) · V†`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * fl[k] * self.vectors[(j, k)].conj()).sum()
        })
    }

    /// `exp(-iHt)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.spectral_map(|l| C64::from_polar(1.0, -l * t))
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues are returned in ascending order.
pub fn eig_hermitian(h: &CMatrix) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::Shape(format!("eigenproblem needs a square matrix, got {}x{}", h.rows(), h.cols())));
    }
    if !h.is_finite() {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let herm = h.hermiticity_residual();
    if herm > HERMITIAN_REL_TOL * h.max_abs() {
        return Err(Error::Validation(format!("matrix is not Hermitian: max|H - H†| = {herm:e}")));
    }
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale * (n as f64) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenSystem::assemble(eigenvalues, vectors, h))
}

/// One Jacobi rotation annihilating `a[p][q]`. The unitary is
/// `J = P·R` with `P` a phase on column `q` that makes the pivot real and
/// `R` the classic real rotation.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let e = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();

    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * e.conj() * s;
        a[(k, q)] = akp * s + akq * e.conj() * c;
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * e * s;
        a[(q, k)] = apk * s + aqk * e * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * e.conj() * s;
        v[(k, q)] = vkp * s + vkq * e.conj() * c;
    }
}

/// `exp(-iHt)` for Hermitian `H`.
pub fn propagator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    Ok(eig_hermitian(h)?.propagator(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, rng};

    fn sigma_z() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn sigma_z_spectrum() {
        let es = eig_hermitian(&sigma_z()).unwrap();
        assert_eq!(es.eigenvalues(), &[-1.0, 1.0]);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let es = eig_hermitian(&CMatrix::zeros(4, 4)).unwrap();
        assert!(es.eigenvalues().iter().all(|&l| l == 0.0));
        assert!(es.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = sigma_z();
        m[(0, 1)] = C64::new(0.5, 0.0);
        let err = eig_hermitian(&m).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn random_hermitian_residuals() {
        let mut r = rng(11);
        for n in [1, 2, 3, 5, 8, 16, 33] {
            let h = random_hermitian(&mut r, n);
            let es = eig_hermitian(&h).unwrap();
            let norm = h.frobenius_norm();
            assert!(es.max_residual(&h) <= 1e-10 * norm, "n={n}");
            assert!(es.orthonormality_defect() <= 1e-10, "n={n}");
            assert!(es.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Unitary conjugate of diag(1,1,1,-2) keeps the degeneracy.
        let mut r = rng(3);
        let u = crate::random::random_unitary(&mut r, 4);
        let d = CMatrix::diag_real(&[1.0, 1.0, 1.0, -2.0]);
        let h = &(&u * &d) * &u.adjoint();
        let h = h.hermitian_part();
        let es = eig_hermitian(&h).unwrap();
        let expect = [-2.0, 1.0, 1.0, 1.0];
        for (a, b) in es.eigenvalues().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(es.max_residual(&h) < 1e-12);
    }

    #[test]
    fn propagator_sigma_z_quarter_period() {
        let u = propagator(&sigma_z(), core::f64::consts::FRAC_PI_2).unwrap();
        let expect = CMatrix::from_rows(&[
            &[C64::from_polar(1.0, -core::f64::consts::FRAC_PI_2), C64::new(0.0, 0.0)],
            &[C64::new(0.0, 0.0), C64::from_polar(1.0, core::f64::consts::FRAC_PI_2)],
        ]);
        assert!(u.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let h = random_hermitian(&mut rng(5), 6);
        let u = propagator(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(6)) < 1e-13);
    }
}
