use alloc::format;
use alloc::vec::Vec;


use super::{svd, CMatrix, CVector, C64, RANK_CUTOFF};
use crate::error::{Error, Result};

/// `|χ⟩ = Σ_l √p_l |φ_l⟩_A ⊗ |ψ_l⟩_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDecomposition {
    /// `√p_l`, descending as returned by [`schmidt_decompose`].
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// `p_l = coefficient²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> CVector {
        let dim = self.left.first().map_or(0, |v| v.dim()) * self.right.first().map_or(0, |v| v.dim());
        let mut out = CVector::zeros(dim);
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            out.axpy(C64::new(*c, 0.0), &l.kron(r));
        }
        out
    }

    /// Coefficients padded with zeros to `n` entries.
    pub fn padded_coefficients(&self, n: usize) -> Vec<f64> {
        let mut c = self.coefficients.clone();
        c.resize(n.max(c.len()), 0.0);
        c
    }
}

/// Schmidt decomposition of a bipartite pure state via the SVD of its
/// `dim_a × dim_b` coefficient matrix.
pub fn schmidt_decompose(chi: &CVector, dim_a: usize, dim_b: usize) -> Result<SchmidtDecomposition> {
    if chi.dim() != dim_a * dim_b {
        return Err(Error::Shape(format!("state of dimension {} is not {dim_a}x{dim_b}", chi.dim())));
    }
    if chi.norm() == 0.0 {
        return Err(Error::Validation("cannot Schmidt-decompose the zero vector".into()));
    }
    let m = CMatrix::from_fn(dim_a, dim_b, |i, k| chi[i * dim_b + k]);
    let s = svd(&m, RANK_CUTOFF);
    // M = Σ σ u v†, so the B-side vectors are the conjugated right vectors.
    Ok(SchmidtDecomposition {
        coefficients: s.singular_values,
        left: s.left,
        right: s.right.iter().map(CVector::conj).collect(),
    })
}

/// One term `weight · S ⊗ E` of an operator Schmidt decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSchmidtTerm {
    pub weight: f64,
    /// Hermitian, Hilbert-Schmidt normalized operator on A.
    pub system: CMatrix,
    /// Hermitian, Hilbert-Schmidt normalized operator on B.
    pub environment: CMatrix,
}

/// Sparse Hermitian orthonormal basis element of `d×d` matrices:
/// entries `(row, col, value)`.
type BasisElement = Vec<(usize, usize, C64)>;

/// Orthonormal (Hilbert-Schmidt) basis of Hermitian `d×d` matrices: the
/// diagonal units followed by symmetric and antisymmetric off-diagonal pairs.
fn hermitian_basis(d: usize) -> Vec<BasisElement> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        out.push(alloc::vec![(j, j, C64::new(1.0, 0.0))]);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            out.push(alloc::vec![(j, k, C64::new(h, 0.0)), (k, j, C64::new(h, 0.0))]);
            out.push(alloc::vec![(j, k, C64::new(0.0, -h)), (k, j, C64::new(0.0, h))]);
        }
    }
    out
}

fn dense(element: &BasisElement, d: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for &(r, c, v) in element {
        m[(r, c)] = v;
    }
    m
}

/// Operator Schmidt decomposition `H_I = Σ_α w_α S_α ⊗ E_α`.
///
/// `H_I` is reshuffled into the real coefficient matrix
/// `C_ab = tr((G_a ⊗ F_b) H_I)` over Hermitian orthonormal bases of each
/// factor, then decomposed by a real SVD, so every `S_α`, `E_α` is
/// Hermitian. Terms with weight at or below `1e-12 · w_max` are dropped.
pub fn operator_schmidt_decompose(h_i: &CMatrix, dim_a: usize, dim_b: usize) -> Result<Vec<OperatorSchmidtTerm>> {
    let d = dim_a * dim_b;
    if h_i.rows() != d || h_i.cols() != d {
        return Err(Error::Shape(format!(
            "operator on {dim_a}x{dim_b} must be {d}x{d}, got {}x{}",
            h_i.rows(),
            h_i.cols()
        )));
    }
    let herm = h_i.hermiticity_residual();
    if herm > super::HERMITIAN_REL_TOL * h_i.max_abs() {
        return Err(Error::Validation(format!("interaction is not Hermitian: max|H - H†| = {herm:e}")));
    }
    let ga = hermitian_basis(dim_a);
    let gb = hermitian_basis(dim_b);
    // tr((G⊗F) H) = Σ G[i,j] F[k,l] H[(j,l),(i,k)]
    let coeff = CMatrix::from_fn(ga.len(), gb.len(), |a, b| {
        let mut s = C64::new(0.0, 0.0);
        for &(i, j, g) in &ga[a] {
            for &(k, l, f) in &gb[b] {
                s += g * f * h_i[(j * dim_b + l, i * dim_b + k)];
            }
        }
        C64::new(s.re, 0.0)
    });
    let dec = svd(&coeff, RANK_CUTOFF);
    let dense_a: Vec<CMatrix> = ga.iter().map(|e| dense(e, dim_a)).collect();
    let dense_b: Vec<CMatrix> = gb.iter().map(|e| dense(e, dim_b)).collect();
    let combine = |weights: &CVector, basis: &[CMatrix], dim: usize| {
        let mut m = CMatrix::zeros(dim, dim);
        for (w, g) in weights.iter().zip(basis) {
            if w.re != 0.0 {
                m = &m + &g.scale_real(w.re);
            }
        }
        m
    };
    Ok(dec
        .singular_values
        .iter()
        .zip(dec.left.iter().zip(&dec.right))
        .filter(|(w, _)| **w > 0.0)
        .map(|(&weight, (u, v))| OperatorSchmidtTerm {
            weight,
            system: combine(u, &dense_a, dim_a),
            environment: combine(v, &dense_b, dim_b),
        })
        .collect())
}
