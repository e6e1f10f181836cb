use alloc::format;
use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{schmidt_trajectory_with, Evolution, TimeGrid};
use crate::error::{Error, Result};
use crate::model::{assemble_total, local_sum, BipartiteHamiltonian, PureState};
use crate::numerics::{eig_hermitian, kron, CMatrix, CVector, C64};

/// Generators fitted at one interior sample by `H = i (dU/dt) U†`.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedGenerators {
    pub t: f64,
    pub h_a: CMatrix,
    pub h_b: CMatrix,
    pub hermiticity_residual_a: f64,
    pub hermiticity_residual_b: f64,
}

/// `χ(t) ≈ U_A^eff(t) ⊗ U_B^eff(t) χ(0)` on every grid sample.
///
/// Each unitary maps the tracked Schmidt frame at `t = 0` to the frame at
/// `t` and is completed on the orthogonal complement by Gram-Schmidt over
/// the standard basis vectors. The B side is phase-aligned so that
/// `⟨ψ_l(0)|U_B^eff(t)|ψ_l(0)⟩ ≥ 0`; the A side carries the channel phase.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveFactorization {
    pub times: Vec<f64>,
    pub u_a: Vec<CMatrix>,
    pub u_b: Vec<CMatrix>,
    /// `|⟨U_A^eff ⊗ U_B^eff χ | U(t)χ⟩|`.
    pub fidelity: Vec<f64>,
    pub generators: Option<Vec<FittedGenerators>>,
    /// Largest `‖U†U - I‖_max` over all samples and both sides.
    pub unitarity_defect: f64,
    /// Schmidt coefficients were (nearly) degenerate somewhere on the grid,
    /// so frame tracking was ambiguous.
    pub degenerate_tracking: bool,
}

impl EffectiveFactorization {
    pub fn min_fidelity(&self) -> f64 {
        self.fidelity.iter().cloned().fold(1.0, f64::min)
    }
}

/// Orthonormal basis of `C^dim` whose first vectors are `frame`.
fn complete(frame: &[CVector], dim: usize) -> Vec<CVector> {
    let mut out: Vec<CVector> = frame.to_vec();
    for e in 0..dim {
        if out.len() == dim {
            break;
        }
        let mut v = CVector::basis(dim, e);
        for _ in 0..2 {
            for q in &out {
                let p = q.dot(&v);
                v.axpy(-p, q);
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            out.push(v.scale(C64::new(1.0 / n, 0.0)));
        }
    }
    out
}

/// `Σ_l |to_l⟩⟨from_l|` over two complete orthonormal bases.
fn frame_map(from: &[CVector], to: &[CVector]) -> CMatrix {
    let dim = from[0].dim();
    let mut u = CMatrix::zeros(dim, dim);
    for (f, t) in from.iter().zip(to) {
        u = &u + &t.outer(f);
    }
    u
}

fn unitarity_defect(u: &CMatrix) -> f64 {
    (&u.adjoint() * u).max_abs_diff(&CMatrix::identity(u.rows()))
}

/// Reconstructs local effective unitaries from the Schmidt trajectory.
///
/// Fails with a reconstruction error when the Schmidt rank changes along
/// the grid or the fidelity drops below `1 - tol`.
pub fn reconstruct_effective_evolution(
    h: &BipartiteHamiltonian,
    chi: &PureState,
    grid: &TimeGrid,
    tol: f64,
    fit_generators: bool,
) -> Result<EffectiveFactorization> {
    if h.dims != chi.dims() {
        return Err(Error::Shape("state and Hamiltonian dimensions differ".into()));
    }
    let (da, db) = (h.dims.dim_a(), h.dims.dim_b());
    let ev = Evolution::new(&assemble_total(h)?)?;
    let traj = schmidt_trajectory_with(&ev, chi, grid)?;
    let states = ev.trajectory(chi.amplitudes(), grid)?;

    let first = &traj.samples[0];
    let rank = first.rank();
    let basis_a0 = complete(&first.left, da);
    let basis_b0 = complete(&first.right, db);

    let mut u_a = Vec::with_capacity(grid.len());
    let mut u_b = Vec::with_capacity(grid.len());
    let mut fidelity = Vec::with_capacity(grid.len());
    let mut defect: f64 = 0.0;
    for (idx, (dec, state)) in traj.samples.iter().zip(&states).enumerate() {
        if dec.rank() != rank {
            return Err(Error::Reconstruction(format!(
                "Schmidt rank changes from {rank} to {} at t = {}",
                dec.rank(),
                grid.samples()[idx]
            )));
        }
        let mut left = Vec::with_capacity(rank);
        let mut right = Vec::with_capacity(rank);
        for l in 0..rank {
            let ov = first.right[l].dot(&dec.right[l]);
            let phase = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { C64::new(1.0, 0.0) };
            right.push(dec.right[l].scale(phase));
            left.push(dec.left[l].scale(phase.conj()));
        }
        let ua = frame_map(&basis_a0, &complete(&left, da));
        let ub = frame_map(&basis_b0, &complete(&right, db));
        defect = defect.max(unitarity_defect(&ua)).max(unitarity_defect(&ub));
        let predicted = kron(&ua, &ub)?.mul_vec(chi.amplitudes());
        fidelity.push(predicted.dot(state).norm());
        u_a.push(ua);
        u_b.push(ub);
    }

    let worst = fidelity.iter().cloned().fold(1.0, f64::min);
    if worst < 1.0 - tol {
        return Err(Error::Reconstruction(format!("factorization fidelity {worst} is below 1 - {tol:e}")));
    }

    let generators = fit_generators.then(|| {
        let t = grid.samples();
        (1..t.len().saturating_sub(1))
            .map(|i| {
                let dt = t[i + 1] - t[i - 1];
                let fit = |u: &[CMatrix]| {
                    let du = (&u[i + 1] - &u[i - 1]).scale_real(1.0 / dt);
                    (&du * &u[i].adjoint()).scale(C64::new(0.0, 1.0))
                };
                let h_a = fit(&u_a);
                let h_b = fit(&u_b);
                FittedGenerators {
                    t: t[i],
                    hermiticity_residual_a: h_a.hermiticity_residual(),
                    hermiticity_residual_b: h_b.hermiticity_residual(),
                    h_a,
                    h_b,
                }
            })
            .collect()
    });

    Ok(EffectiveFactorization {
        times: grid.samples().to_vec(),
        u_a,
        u_b,
        fidelity,
        generators,
        unitarity_defect: defect,
        degenerate_tracking: traj.degenerate_tracking,
    })
}

/// Certifies a candidate pair of effective Hamiltonians.
///
/// With `W = H - H_A^eff ⊗ I - I ⊗ H_B^eff` and
/// `U^eff(t) = e^{-i(H_A^eff ⊗ I + I ⊗ H_B^eff)t}`, returns
/// `max_t ‖(W - a) U^eff(t) χ‖` where `a = Re⟨χ|W|χ⟩`. A constant shift of
/// the effective interaction only contributes a global phase, so it is
/// removed before taking the norm. The value vanishes iff
/// `U(t)χ = e^{-iat} U_A^eff(t) ⊗ U_B^eff(t) χ` for all `t`.
pub fn gife_residual(
    h: &BipartiteHamiltonian,
    h_a_eff: &CMatrix,
    h_b_eff: &CMatrix,
    chi: &PureState,
    grid: &TimeGrid,
) -> Result<f64> {
    let (da, db) = (h.dims.dim_a(), h.dims.dim_b());
    if h_a_eff.rows() != da || h_a_eff.cols() != da || h_b_eff.rows() != db || h_b_eff.cols() != db {
        return Err(Error::Shape(format!(
            "effective Hamiltonians must be {da}x{da} and {db}x{db}, got {}x{} and {}x{}",
            h_a_eff.rows(),
            h_a_eff.cols(),
            h_b_eff.rows(),
            h_b_eff.cols()
        )));
    }
    if h.dims != chi.dims() {
        return Err(Error::Shape("state and Hamiltonian dimensions differ".into()));
    }
    let h_eff = local_sum(h_a_eff, h_b_eff)?;
    let w = &assemble_total(h)? - &h_eff;
    let es = eig_hermitian(&h_eff)?;
    let v = chi.amplitudes();
    let a = v.dot(&w.mul_vec(v)).re;
    let mut worst: f64 = 0.0;
    for &t in grid.samples() {
        let psi = es.evolve(v, t);
        let mut r = w.mul_vec(&psi);
        r.axpy(C64::new(-a, 0.0), &psi);
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BipartiteDims;
    use crate::numerics::propagator;
    use crate::random::{random_hermitian, random_state, rng};

    fn sz() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn free_evolution_is_its_own_certificate() {
        let mut r = rng(1);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let h = BipartiteHamiltonian::free(dims, random_hermitian(&mut r, 2), random_hermitian(&mut r, 3)).unwrap();
        let chi = PureState::new(dims, random_state(&mut r, 6)).unwrap();
        let grid = TimeGrid::default();
        assert!(gife_residual(&h, &h.h_a, &h.h_b, &chi, &grid).unwrap() < 1e-12);
        // A scalar offset on one side is a global phase.
        let shifted = &h.h_a + &CMatrix::identity(2).scale_real(0.8);
        assert!(gife_residual(&h, &shifted, &h.h_b, &chi, &grid).unwrap() < 1e-12);
        assert!(gife_residual(&h, &sz(), &h.h_b, &chi, &grid).unwrap() > 1e-3);
    }

    #[test]
    fn product_state_reconstructs_free_unitaries() {
        let mut r = rng(2);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let h = BipartiteHamiltonian::free(dims, random_hermitian(&mut r, 2), random_hermitian(&mut r, 3)).unwrap();
        let (a, b) = (random_state(&mut r, 2), random_state(&mut r, 3));
        let chi = PureState::product(dims, &a, &b).unwrap();
        let grid = TimeGrid::uniform(5.0, 51).unwrap();
        let f = reconstruct_effective_evolution(&h, &chi, &grid, 1e-10, true).unwrap();
        assert!(f.min_fidelity() > 1.0 - 1e-12);
        assert!(f.unitarity_defect < 1e-10);
        for (i, &t) in grid.samples().iter().enumerate() {
            // On the relevant cyclic vectors, up to a global phase.
            let ea = propagator(&h.h_a, t).unwrap().mul_vec(&a);
            let eb = propagator(&h.h_b, t).unwrap().mul_vec(&b);
            assert!((f.u_a[i].mul_vec(&a).dot(&ea).norm() - 1.0).abs() < 1e-10);
            assert!((f.u_b[i].mul_vec(&b).dot(&eb).norm() - 1.0).abs() < 1e-10);
            let ob = b.dot(&f.u_b[i].mul_vec(&b));
            assert!(ob.re >= 0.0 && ob.im.abs() < 1e-12);
        }
        assert_eq!(f.generators.as_ref().unwrap().len(), 49);
    }

    #[test]
    fn entangling_dynamics_fails_reconstruction() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mut r = rng(3);
        let h = BipartiteHamiltonian::new(dims, sz(), sz(), random_hermitian(&mut r, 4)).unwrap();
        let chi = PureState::product(dims, &CVector::basis(2, 0), &CVector::basis(2, 1)).unwrap();
        let err = reconstruct_effective_evolution(&h, &chi, &TimeGrid::default(), 1e-8, false).unwrap_err();
        assert!(matches!(err, Error::Reconstruction(_)));
    }

    #[test]
    fn shape_mismatch() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let h = BipartiteHamiltonian::free(dims, sz(), sz()).unwrap();
        let chi = PureState::new(dims, CVector::basis(4, 0)).unwrap();
        assert!(matches!(
            gife_residual(&h, &CMatrix::identity(3), &sz(), &chi, &TimeGrid::default()),
            Err(Error::Shape(_))
        ));
    }
}
