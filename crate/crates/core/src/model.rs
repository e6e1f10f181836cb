//! Bipartite system description, assembly of the total Hamiltonian
//! `H = H_A ⊗ I_B + I_A ⊗ H_B + H_I`, and eigenbasis expansions.

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::numerics::{kron, CMatrix, CVector, EigenSystem, C64, HERMITIAN_REL_TOL, MAX_DIMENSION};

/// Norm window for vectors flagged as states.
pub const STATE_NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteDims {
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            return Err(Error::Argument(format!("subsystem dimensions must be at least 2, got {dim_a}x{dim_b}")));
        }
        let total = dim_a.saturating_mul(dim_b);
        if total > MAX_DIMENSION {
            return Err(Error::Capacity { what: "total Hilbert-space dimension", requested: total, limit: MAX_DIMENSION });
        }
        Ok(BipartiteDims { dim_a, dim_b })
    }

    #[inline]
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    #[inline]
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// `min(dim_a, dim_b)`, the maximal Schmidt rank.
    #[inline]
    pub fn schmidt_rank_bound(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }
}

/// The triple `(H_A, H_B, H_I)`.
///
/// Fields are public so that malformed inputs can be represented and
/// reported by [`validate`]; [`BipartiteHamiltonian::new`] is the checked
/// constructor.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteHamiltonian {
    pub dims: BipartiteDims,
    pub h_a: CMatrix,
    pub h_b: CMatrix,
    pub h_i: CMatrix,
}

impl BipartiteHamiltonian {
    pub fn new(dims: BipartiteDims, h_a: CMatrix, h_b: CMatrix, h_i: CMatrix) -> Result<Self> {
        let h = BipartiteHamiltonian { dims, h_a, h_b, h_i };
        let report = validate(&h);
        if !report.passed() {
            return Err(Error::Validation(report.issues.join("; ")));
        }
        Ok(h)
    }

    /// Non-interacting Hamiltonian `H_A ⊗ I + I ⊗ H_B`.
    pub fn free(dims: BipartiteDims, h_a: CMatrix, h_b: CMatrix) -> Result<Self> {
        let n = dims.total();
        Self::new(dims, h_a, h_b, CMatrix::zeros(n, n))
    }

    /// `H_0 = H_A ⊗ I_B + I_A ⊗ H_B`.
    pub fn free_part(&self) -> Result<CMatrix> {
        self.check_shapes()?;
        local_sum(&self.h_a, &self.h_b)
    }

    fn check_shapes(&self) -> Result<()> {
        let (da, db, n) = (self.dims.dim_a(), self.dims.dim_b(), self.dims.total());
        let ok = |m: &CMatrix, d: usize| m.rows() == d && m.cols() == d;
        if !ok(&self.h_a, da) || !ok(&self.h_b, db) || !ok(&self.h_i, n) {
            return Err(Error::Shape(format!(
                "parts {}x{}, {}x{}, {}x{} do not fit dims {da}x{db}",
                self.h_a.rows(),
                self.h_a.cols(),
                self.h_b.rows(),
                self.h_b.cols(),
                self.h_i.rows(),
                self.h_i.cols()
            )));
        }
        Ok(())
    }
}

/// `A ⊗ I + I ⊗ B`.
pub fn local_sum(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let left = kron(a, &CMatrix::identity(b.rows()))?;
    let right = kron(&CMatrix::identity(a.rows()), b)?;
    Ok(&left + &right)
}

/// `H = H_A ⊗ I_B + I_A ⊗ H_B + H_I`.
pub fn assemble_total(h: &BipartiteHamiltonian) -> Result<CMatrix> {
    let free = h.free_part()?;
    Ok(&free + &h.h_i)
}

/// Per-part diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct PartCheck {
    pub name: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub expected_dim: usize,
    pub shape_ok: bool,
    pub finite: bool,
    /// `max|M - M†|`.
    pub hermiticity_residual: f64,
    pub hermitian: bool,
    pub frobenius_norm: f64,
    pub max_abs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub parts: Vec<PartCheck>,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Reports dimensions, Hermiticity residuals and norms of each part; never
/// fails, failures are listed in `issues`.
pub fn validate(h: &BipartiteHamiltonian) -> ValidationReport {
    let (da, db) = (h.dims.dim_a(), h.dims.dim_b());
    let mut issues = Vec::new();
    let parts: Vec<PartCheck> = [("HA", &h.h_a, da), ("HB", &h.h_b, db), ("HI", &h.h_i, da * db)]
        .into_iter()
        .map(|(name, m, d)| {
            let shape_ok = m.rows() == d && m.cols() == d;
            let finite = m.is_finite();
            let herm = m.hermiticity_residual();
            let hermitian = shape_ok && herm <= HERMITIAN_REL_TOL * m.max_abs();
            if !shape_ok {
                issues.push(format!("{name} is {}x{}, expected {d}x{d}", m.rows(), m.cols()));
            } else if !finite {
                issues.push(format!("{name} has non-finite entries"));
            } else if !hermitian {
                issues.push(format!("{name} is not Hermitian (max|M - M†| = {herm:e})"));
            }
            PartCheck {
                name,
                rows: m.rows(),
                cols: m.cols(),
                expected_dim: d,
                shape_ok,
                finite,
                hermiticity_residual: herm,
                hermitian,
                frobenius_norm: m.frobenius_norm(),
                max_abs: m.max_abs(),
            }
        })
        .collect();
    ValidationReport { dim_a: da, dim_b: db, parts, issues }
}

/// Eigen-coefficients cached together with the hash of the Hamiltonian
/// whose eigenbasis they refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenExpansion {
    pub basis_hash: u64,
    pub coefficients: Vec<C64>,
}

/// Normalized pure state on `H_A ⊗ H_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    amplitudes: CVector,
    eigen: Option<EigenExpansion>,
}

impl PureState {
    /// Validates dimension, finiteness and unit norm (within 1e-10).
    pub fn new(dims: BipartiteDims, amplitudes: CVector) -> Result<Self> {
        if amplitudes.dim() != dims.total() {
            return Err(Error::Shape(format!(
                "state has {} amplitudes, expected {}",
                amplitudes.dim(),
                dims.total()
            )));
        }
        if !amplitudes.is_finite() {
            return Err(Error::Validation("state has non-finite amplitudes".into()));
        }
        let n = amplitudes.norm();
        if (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::Validation(format!("state norm {n} is not 1")));
        }
        Ok(PureState { dims, amplitudes, eigen: None })
    }

    /// Normalizes `amplitudes` first; the zero vector is rejected.
    pub fn normalized(dims: BipartiteDims, amplitudes: CVector) -> Result<Self> {
        let v = amplitudes.normalized().ok_or_else(|| Error::Validation("zero state vector".into()))?;
        Self::new(dims, v)
    }

    /// `|φ⟩_A ⊗ |ψ⟩_B`, each factor normalized.
    pub fn product(dims: BipartiteDims, a: &CVector, b: &CVector) -> Result<Self> {
        if a.dim() != dims.dim_a() || b.dim() != dims.dim_b() {
            return Err(Error::Shape(format!(
                "product factors {}x{} do not match dims {}x{}",
                a.dim(),
                b.dim(),
                dims.dim_a(),
                dims.dim_b()
            )));
        }
        let a = a.normalized().ok_or_else(|| Error::Validation("zero factor on A".into()))?;
        let b = b.normalized().ok_or_else(|| Error::Validation("zero factor on B".into()))?;
        Self::new(dims, a.kron(&b))
    }

    /// `Σ_i c_i |λ_i⟩`, normalizing `c`; the coefficients are cached.
    pub fn from_eigen_coefficients(dims: BipartiteDims, es: &EigenSystem, c: &[C64]) -> Result<Self> {
        if c.len() != es.dim() || es.dim() != dims.total() {
            return Err(Error::Shape(format!("{} coefficients for an eigensystem of size {}", c.len(), es.dim())));
        }
        let n = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Validation("eigen-coefficients must be finite and not all zero".into()));
        }
        let c: Vec<C64> = c.iter().map(|z| z / n).collect();
        let mut s = Self::normalized(dims, es.combine(&c))?;
        s.eigen = Some(EigenExpansion { basis_hash: es.basis_hash(), coefficients: c });
        Ok(s)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Cached coefficients, only if they refer to `es`.
    pub fn cached_coefficients(&self, es: &EigenSystem) -> Option<&[C64]> {
        self.eigen
            .as_ref()
            .filter(|e| e.basis_hash == es.basis_hash())
            .map(|e| e.coefficients.as_slice())
    }

    /// Returns a copy with the expansion in `es` cached.
    pub fn with_expansion(mut self, es: &EigenSystem) -> Result<Self> {
        let c = expand_in_eigenbasis(&self, es)?;
        self.eigen = Some(EigenExpansion { basis_hash: es.basis_hash(), coefficients: c });
        Ok(self)
    }

    /// Coefficients in `es`, from the cache when it matches.
    pub fn coefficients_in(&self, es: &EigenSystem) -> Result<Vec<C64>> {
        match self.cached_coefficients(es) {
            Some(c) => Ok(c.to_vec()),
            None => expand_in_eigenbasis(self, es),
        }
    }
}

/// `c_i = ⟨λ_i|χ⟩`.
pub fn expand_in_eigenbasis(chi: &PureState, es: &EigenSystem) -> Result<Vec<C64>> {
    if es.dim() != chi.amplitudes.dim() {
        return Err(Error::Shape(format!(
            "state of dimension {} against an eigensystem of size {}",
            chi.amplitudes.dim(),
            es.dim()
        )));
    }
    Ok(es.coefficients(&chi.amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_hermitian;
    use crate::random::{random_hermitian, random_state, rng};

    fn sz() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }

    fn dims22() -> BipartiteDims {
        BipartiteDims::new(2, 2).unwrap()
    }

    #[test]
    fn dims_bounds() {
        assert!(BipartiteDims::new(1, 4).is_err());
        assert!(matches!(BipartiteDims::new(64, 65), Err(Error::Capacity { .. })));
        assert_eq!(BipartiteDims::new(64, 64).unwrap().total(), 4096);
    }

    #[test]
    fn free_sigma_z_pair() {
        let h = BipartiteHamiltonian::free(dims22(), sz(), sz()).unwrap();
        assert_eq!(assemble_total(&h).unwrap(), CMatrix::diag_real(&[2.0, 0.0, 0.0, -2.0]));
        let zero = BipartiteHamiltonian::free(dims22(), CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(assemble_total(&zero).unwrap(), CMatrix::zeros(4, 4));
    }

    #[test]
    fn free_spectrum_is_minkowski_sum() {
        let mut r = rng(21);
        let dims = BipartiteDims::new(3, 4).unwrap();
        let ha = random_hermitian(&mut r, 3);
        let hb = random_hermitian(&mut r, 4);
        let la = eig_hermitian(&ha).unwrap();
        let lb = eig_hermitian(&hb).unwrap();
        let mut sums: Vec<f64> =
            la.eigenvalues().iter().flat_map(|a| lb.eigenvalues().iter().map(move |b| a + b)).collect();
        sums.sort_by(f64::total_cmp);
        let h = BipartiteHamiltonian::free(dims, ha, hb).unwrap();
        let es = eig_hermitian(&assemble_total(&h).unwrap()).unwrap();
        for (x, y) in es.eigenvalues().iter().zip(&sums) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn assemble_is_linear() {
        let mut r = rng(2);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let mk = |r: &mut _| {
            BipartiteHamiltonian::new(dims, random_hermitian(r, 2), random_hermitian(r, 3), random_hermitian(r, 6)).unwrap()
        };
        let (h1, h2) = (mk(&mut r), mk(&mut r));
        let sum = BipartiteHamiltonian::new(dims, &h1.h_a + &h2.h_a, &h1.h_b + &h2.h_b, &h1.h_i + &h2.h_i).unwrap();
        let lhs = assemble_total(&sum).unwrap();
        let rhs = &assemble_total(&h1).unwrap() + &assemble_total(&h2).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn validation_flags() {
        let ok = BipartiteHamiltonian::free(dims22(), sz(), sz()).unwrap();
        assert!(validate(&ok).passed());

        let mut bad = ok.clone();
        bad.h_a[(0, 1)] = C64::new(1e-3, 0.0);
        let rep = validate(&bad);
        assert!(!rep.passed());
        assert!(!rep.parts[0].hermitian);
        assert!(rep.parts[0].hermiticity_residual >= 1e-3);

        let mut bad = ok.clone();
        bad.h_i = CMatrix::zeros(3, 3);
        let rep = validate(&bad);
        assert!(!rep.parts[2].shape_ok);
        assert!(rep.issues.iter().any(|s| s.contains("HI")));
        assert!(matches!(assemble_total(&bad), Err(Error::Shape(_))));
    }

    #[test]
    fn expansion_examples() {
        let mut r = rng(7);
        let h = random_hermitian(&mut r, 4);
        let es = eig_hermitian(&h).unwrap();
        let s = PureState::new(dims22(), es.vector(2)).unwrap();
        let c = expand_in_eigenbasis(&s, &es).unwrap();
        for (i, ci) in c.iter().enumerate() {
            let expect = if i == 2 { 1.0 } else { 0.0 };
            assert!((ci - C64::new(expect, 0.0)).norm() < 1e-12);
        }
        let h2 = core::f64::consts::FRAC_1_SQRT_2;
        let v = &es.vector(1).scale(C64::new(h2, 0.0)) + &es.vector(3).scale(C64::new(h2, 0.0));
        let c = expand_in_eigenbasis(&PureState::new(dims22(), v).unwrap(), &es).unwrap();
        assert!((c[1].re - h2).abs() < 1e-12 && (c[3].re - h2).abs() < 1e-12);
        assert!(c[0].norm() < 1e-12 && c[2].norm() < 1e-12);

        let chi = PureState::new(dims22(), random_state(&mut r, 4)).unwrap();
        let c = expand_in_eigenbasis(&chi, &es).unwrap();
        assert!((c.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(es.combine(&c).max_abs_diff(chi.amplitudes()) < 1e-12);
    }

    #[test]
    fn cache_keyed_by_hamiltonian() {
        let mut r = rng(70);
        let es1 = eig_hermitian(&random_hermitian(&mut r, 4)).unwrap();
        let es2 = eig_hermitian(&random_hermitian(&mut r, 4)).unwrap();
        let chi = PureState::new(dims22(), random_state(&mut r, 4)).unwrap().with_expansion(&es1).unwrap();
        assert!(chi.cached_coefficients(&es1).is_some());
        assert!(chi.cached_coefficients(&es2).is_none());
        let fresh = chi.coefficients_in(&es2).unwrap();
        assert!(es2.combine(&fresh).max_abs_diff(chi.amplitudes()) < 1e-12);
    }

    #[test]
    fn state_validation() {
        assert!(PureState::new(dims22(), CVector::from_real(&[1.0, 1.0, 0.0, 0.0])).is_err());
        assert!(PureState::new(dims22(), CVector::from_real(&[1.0, 0.0, 0.0])).is_err());
        assert!(PureState::normalized(dims22(), CVector::zeros(4)).is_err());
        let mut v = CVector::basis(4, 0);
        v[1] = C64::new(f64::NAN, 0.0);
        assert!(PureState::new(dims22(), v).is_err());
    }
}
