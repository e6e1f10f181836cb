use alloc::format;
use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use super::resonance::{cluster_ranges, default_cluster_tol, tuple_count};
use crate::error::{Error, Result};
use crate::model::BipartiteDims;
use crate::numerics::{partial_trace_outer, CMatrix, EigenSystem, C64};

/// Coefficients with modulus at or below this are treated as exactly zero.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Residual of one nonresonant class.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassResidual {
    pub order: usize,
    /// Mean signed eigenvalue sum of the class members that contribute.
    pub delta: f64,
    /// `|Σ_class Π c_{i_s} Π c*_{j_s} tr_B(Π M_{i_s j_s})|`.
    pub magnitude: f64,
    /// Number of contributing tuples (those inside the support).
    pub tuples: usize,
}

/// Precomputed `M_ij = tr_A |λ_i⟩⟨λ_j|` for one eigensystem, reused across
/// coefficient vectors and orders.
#[derive(Clone, Debug)]
pub struct AlgebraicChecker<'a> {
    es: &'a EigenSystem,
    dim_b: usize,
    cluster_tol: f64,
    m: Vec<CMatrix>,
}

impl<'a> AlgebraicChecker<'a> {
    /// `cluster_tol = None` selects [`default_cluster_tol`].
    pub fn new(es: &'a EigenSystem, dims: BipartiteDims, cluster_tol: Option<f64>) -> Result<Self> {
        let d = es.dim();
        if d != dims.total() {
            return Err(Error::Shape(format!("eigensystem of dimension {d} for a {}-dimensional space", dims.total())));
        }
        let cluster_tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(es.eigenvalues()));
        if !(cluster_tol >= 0.0 && cluster_tol.is_finite()) {
            return Err(Error::Argument("cluster tolerance must be finite and nonnegative".into()));
        }
        let vectors: Vec<_> = (0..d).map(|i| es.vector(i)).collect();
        let mut m = Vec::with_capacity(d * d);
        for u in &vectors {
            for v in &vectors {
                m.push(partial_trace_outer(u, v, dims.dim_a(), dims.dim_b()));
            }
        }
        Ok(AlgebraicChecker { es, dim_b: dims.dim_b(), cluster_tol, m })
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        self.es
    }

    fn mat(&self, i: usize, j: usize) -> &CMatrix {
        &self.m[i * self.es.dim() + j]
    }

    /// Residuals of every nonresonant class of order `k` that has at least
    /// one tuple inside the support of `c`. Classes outside the support
    /// contribute zero and are omitted.
    pub fn residuals(&self, c: &[C64], k: usize) -> Result<Vec<ClassResidual>> {
        let d = self.es.dim();
        if c.len() != d {
            return Err(Error::Shape(format!("{} coefficients for {d} eigenvectors", c.len())));
        }
        if k == 0 {
            return Err(Error::Argument("order must be at least 1".into()));
        }
        let support: Vec<usize> = (0..d).filter(|&i| c[i].norm() > SUPPORT_CUTOFF).collect();
        if support.is_empty() {
            return Err(Error::Validation("coefficient vector is zero".into()));
        }
        let total = tuple_count(support.len(), k)?;
        let mut terms: Vec<(f64, C64)> = Vec::with_capacity(total);
        let lambda = self.es.eigenvalues();
        let identity = CMatrix::identity(self.dim_b);
        self.walk(&support, c, lambda, k, &identity, C64::new(1.0, 0.0), 0.0, &mut terms);

        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let tol = self.cluster_tol;
        Ok(cluster_ranges(&terms, tol)
            .into_iter()
            .filter_map(|(s, e)| {
                let slice = &terms[s..e];
                if slice.iter().any(|t| t.0.abs() <= tol) {
                    return None;
                }
                let sum: C64 = slice.iter().map(|t| t.1).sum();
                Some(ClassResidual {
                    order: k,
                    delta: slice.iter().map(|t| t.0).sum::<f64>() / slice.len() as f64,
                    magnitude: sum.norm(),
                    tuples: slice.len(),
                })
            })
            .collect())
    }

    /// Depth-first enumeration of `(i_s, j_s)` pairs with running operator
    /// product, coefficient product and delta. The last pair only needs
    /// `tr(P M) = Σ P_ab M_ba`.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        support: &[usize],
        c: &[C64],
        lambda: &[f64],
        remaining: usize,
        product: &CMatrix,
        coef: C64,
        delta: f64,
        out: &mut Vec<(f64, C64)>,
    ) {
        let n = self.dim_b;
        for &i in support {
            for &j in support {
                let w = coef * c[i] * c[j].conj();
                let dl = delta + lambda[i] - lambda[j];
                let m = self.mat(i, j);
                if remaining == 1 {
                    let mut tr = C64::new(0.0, 0.0);
                    for a in 0..n {
                        for b in 0..n {
                            tr += product[(a, b)] * m[(b, a)];
                        }
                    }
                    out.push((dl, w * tr));
                } else {
                    let next = product * m;
                    self.walk(support, c, lambda, remaining - 1, &next, w, dl, out);
                }
            }
        }
    }

    /// Largest class residual over orders `1..=k_max`.
    pub fn max_residual(&self, c: &[C64], k_max: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for k in 1..=k_max {
            for r in self.residuals(c, k)? {
                worst = worst.max(r.magnitude);
            }
        }
        Ok(worst)
    }
}

/// One-shot form of [`AlgebraicChecker::residuals`].
pub fn gife_algebraic_residuals(
    es: &EigenSystem,
    dims: BipartiteDims,
    c: &[C64],
    k: usize,
    cluster_tol: Option<f64>,
) -> Result<Vec<ClassResidual>> {
    AlgebraicChecker::new(es, dims, cluster_tol)?.residuals(c, k)
}
