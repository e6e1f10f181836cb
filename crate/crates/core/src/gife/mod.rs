//! GIFE detection: the trace-power test, the eigenbasis recipe with
//! resonance classes, support search, spectrum recovery from power sums and
//! effective local evolutions.
//!
//! A pure state is GIFE iff `tr(ρ_B(t)^k)` is constant for
//! `k = 1..min(dim_a, dim_b)`. Expanding `χ = Σ c_i |λ_i⟩` in the
//! eigenbasis of `H` gives
//! `tr ρ_B(t)^k = Σ Π c_{i_s} c*_{j_s} e^{-iδt} tr_B(Π M_{i_s j_s})` with
//! `M_ij = tr_A |λ_i⟩⟨λ_j|` and `δ = Σ λ_{i_s} - Σ λ_{j_s}`, so constancy
//! means the sum over every class of equal nonzero `δ` vanishes.

mod algebraic;
mod effective;
mod newton_girard;
mod resonance;
mod search;

use alloc::vec::Vec;

pub use algebraic::{gife_algebraic_residuals, AlgebraicChecker, ClassResidual, SUPPORT_CUTOFF};
pub use effective::{gife_residual, reconstruct_effective_evolution, EffectiveFactorization, FittedGenerators};
pub use newton_girard::{elementary_symmetric, power_sums_to_spectrum, real_roots, NORMALIZATION_TOL, SPECTRUM_TOL};
pub use resonance::{default_cluster_tol, resonance_classes, ResonanceClass, TUPLE_BUDGET};
pub use search::{find_gife_supports, SupportPattern, SupportSearch, DEFAULT_TRIALS, MAX_SEARCH_DIMENSION};

use crate::detect::ife_algebraic_check;
use crate::dynamics::{functional_trajectories_with, Evolution, TimeGrid};
use crate::error::{Error, Result};
use crate::model::{assemble_total, BipartiteHamiltonian, PureState};

#[derive(Clone, Debug, PartialEq)]
pub struct GifeVerdict {
    pub is_gife: bool,
    /// GIFE and not IFE by [`ife_algebraic_check`].
    pub is_proper_gife: bool,
    /// Peak-to-peak variation of `tr ρ_B^k`, index `k - 1`.
    pub max_drift: Vec<f64>,
    /// Nonresonant class residuals for orders `1..=k_max`; empty until
    /// [`GifeVerdict::with_algebraic`] is applied.
    pub algebraic_residuals: Vec<ClassResidual>,
    /// Verdict of the algebraic recipe, when it was evaluated.
    pub algebraic_is_gife: Option<bool>,
    pub tolerance: f64,
}

impl GifeVerdict {
    pub fn max_drift(&self) -> f64 {
        self.max_drift.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_algebraic_residual(&self) -> f64 {
        self.algebraic_residuals.iter().map(|r| r.magnitude).fold(0.0, f64::max)
    }

    /// Attaches algebraic residuals for orders `1..=k_max`.
    pub fn with_algebraic(mut self, checker: &AlgebraicChecker<'_>, chi: &PureState, k_max: usize) -> Result<Self> {
        let c = chi.coefficients_in(checker.eigensystem())?;
        let mut all = Vec::new();
        for k in 1..=k_max {
            all.extend(checker.residuals(&c, k)?);
        }
        self.algebraic_is_gife = Some(all.iter().all(|r| r.magnitude <= self.tolerance));
        self.algebraic_residuals = all;
        Ok(self)
    }

    /// The dynamic and algebraic verdicts differ.
    pub fn disagreement(&self) -> bool {
        self.algebraic_is_gife.is_some_and(|a| a != self.is_gife)
    }
}

/// Trace-power GIFE test over `k = 1..min(dim_a, dim_b)`.
pub fn gife_dynamic_check(h: &BipartiteHamiltonian, chi: &PureState, grid: &TimeGrid, tol: f64) -> Result<GifeVerdict> {
    let ev = Evolution::new(&assemble_total(h)?)?;
    gife_dynamic_check_with(h, &ev, chi, grid, tol)
}

/// As [`gife_dynamic_check`] with a precomputed evolution.
pub fn gife_dynamic_check_with(
    h: &BipartiteHamiltonian,
    ev: &Evolution,
    chi: &PureState,
    grid: &TimeGrid,
    tol: f64,
) -> Result<GifeVerdict> {
    if h.dims != chi.dims() {
        return Err(Error::Shape("state and Hamiltonian dimensions differ".into()));
    }
    let n = h.dims.schmidt_rank_bound();
    let drifts: Vec<f64> = functional_trajectories_with(ev, chi, grid, n)?.iter().map(|f| f.drift()).collect();
    let is_gife = drifts.iter().all(|&d| d <= tol);
    let is_proper_gife = is_gife && !ife_algebraic_check(h, chi, tol)?.is_ife;
    Ok(GifeVerdict {
        is_gife,
        is_proper_gife,
        max_drift: drifts,
        algebraic_residuals: Vec::new(),
        algebraic_is_gife: None,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BipartiteDims;
    use crate::numerics::{eig_hermitian, kron, CMatrix, C64};
    use crate::random::{random_hermitian, rng};

    fn xy() -> BipartiteHamiltonian {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let sm = CMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let sp = sm.adjoint();
        let hi = (&kron(&sm, &sp).unwrap() + &kron(&sp, &sm).unwrap()).scale_real(0.3);
        BipartiteHamiltonian::new(dims, CMatrix::diag_real(&[1.0, -1.0]), CMatrix::diag_real(&[0.7, -0.7]), hi).unwrap()
    }

    #[test]
    fn eigenstates_are_gife() {
        let h = random_hermitian(&mut rng(1), 6);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let ham = BipartiteHamiltonian::new(dims, CMatrix::zeros(2, 2), CMatrix::zeros(3, 3), h.clone()).unwrap();
        let es = eig_hermitian(&h).unwrap();
        for i in 0..6 {
            let chi = PureState::new(dims, es.vector(i)).unwrap();
            let v = gife_dynamic_check(&ham, &chi, &TimeGrid::default(), 1e-8).unwrap();
            assert!(v.is_gife && v.max_drift() < 1e-10);
        }
    }

    #[test]
    fn example_families_dynamic_and_algebraic() {
        let h = xy();
        let es = eig_hermitian(&assemble_total(&h).unwrap()).unwrap();
        let checker = AlgebraicChecker::new(&es, h.dims, None).unwrap();
        let s = 0.5f64.sqrt();
        let z = C64::new(0.0, 0.0);
        // Ascending order (-1.7, -r, r, 1.7): {-1.7, +r} is a proper GIFE pair.
        let c = [C64::new(s, 0.0), z, C64::new(s, 0.0), z];
        let chi = PureState::from_eigen_coefficients(h.dims, &es, &c).unwrap();
        let v = gife_dynamic_check(&h, &chi, &TimeGrid::default(), 1e-8).unwrap().with_algebraic(&checker, &chi, 2).unwrap();
        assert!(v.is_gife && v.is_proper_gife && !v.disagreement());
        assert!(v.max_algebraic_residual() < 1e-12);
        // Uniform coefficients are not GIFE.
        let c = [C64::new(0.5, 0.0); 4];
        let chi = PureState::from_eigen_coefficients(h.dims, &es, &c).unwrap();
        let v = gife_dynamic_check(&h, &chi, &TimeGrid::default(), 1e-8).unwrap().with_algebraic(&checker, &chi, 2).unwrap();
        assert!(!v.is_gife && !v.is_proper_gife && !v.disagreement());
        assert!(v.max_drift[1] > 1e-3);
    }
}
