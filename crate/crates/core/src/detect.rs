//! IFE and DFS detection.
//!
//! A state `χ` is IFE when `U(t)χ = e^{-iat} U_0(t)χ` for all `t`. The
//! algebraic test works on the `H_0`-cyclic (Krylov) subspace of `χ`; the
//! dynamic test compares the two evolutions on a time grid.

use alloc::format;
use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::{Evolution, TimeGrid};
use crate::error::{Error, Result};
use crate::model::{assemble_total, BipartiteHamiltonian, PureState};
use crate::numerics::{kron, operator_schmidt_decompose, orthonormality_defect, projector, CMatrix, CVector, C64};

/// Relative cutoff below which a new Krylov direction counts as linearly
/// dependent on its predecessors.
pub const KRYLOV_CUTOFF: f64 = 1e-12;

/// Largest orthonormality defect accepted for a subspace basis.
pub const BASIS_ORTHONORMALITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct IfeVerdict {
    pub is_ife: bool,
    /// Angular frequency `a` of the global phase `e^{-iat}`.
    pub phase: f64,
    /// `|Im⟨χ|H_I|χ⟩|`.
    pub phase_imaginary: f64,
    /// `‖(H_I - a)q_n‖` over an orthonormal basis `q_0, q_1, …` of the
    /// nested Krylov spaces `span{χ, H_0χ, …, H_0^n χ}`. Empty for the
    /// dynamic check.
    pub krylov_residuals: Vec<f64>,
    /// `max_t 1 - |⟨U_0(t)χ|U(t)χ⟩|`, present for the dynamic check.
    pub dynamic_fidelity_deficit: Option<f64>,
    pub tolerance: f64,
}

impl IfeVerdict {
    pub fn max_krylov_residual(&self) -> f64 {
        self.krylov_residuals.iter().cloned().fold(0.0, f64::max)
    }
}

fn check_state_dims(h: &BipartiteHamiltonian, chi: &PureState) -> Result<()> {
    if h.dims != chi.dims() {
        return Err(Error::Shape(format!(
            "state on {}x{} for a Hamiltonian on {}x{}",
            chi.dims().dim_a(),
            chi.dims().dim_b(),
            h.dims.dim_a(),
            h.dims.dim_b()
        )));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Argument(format!("tolerance must be positive and finite, got {tol}")));
    }
    Ok(())
}

/// Algebraic IFE test.
///
/// If `U(t)χ = e^{-iat}U_0(t)χ`, then differentiating `n` times at `t = 0`
/// gives `(H_0 + H_I)^n χ = (H_0 + a)^n χ`, and by induction
/// `H_I H_0^n χ = a H_0^n χ` for every `n`. In particular `H_I χ = aχ`, so
/// `a = ⟨χ|H_I|χ⟩`. Conversely, if `H_I = a` on the `H_0`-invariant cyclic
/// space of `χ`, then `H = H_0 + a` there and the two evolutions agree up to
/// the phase.
pub fn ife_algebraic_check(h: &BipartiteHamiltonian, chi: &PureState, tol: f64) -> Result<IfeVerdict> {
    check_state_dims(h, chi)?;
    check_tol(tol)?;
    let h0 = h.free_part()?;
    let v = chi.amplitudes();
    let a_full = v.dot(&h.h_i.mul_vec(v));
    let a = a_full.re;
    let shift = |q: &CVector| {
        let mut w = h.h_i.mul_vec(q);
        w.axpy(C64::new(-a, 0.0), q);
        w.norm()
    };

    let d = h.dims.total();
    let mut basis: Vec<CVector> = alloc::vec![v.clone()];
    let mut residuals = alloc::vec![shift(v)];
    while basis.len() < d {
        let last = basis.last().expect("nonempty");
        let mut w = h0.mul_vec(last);
        let scale = w.norm();
        if scale == 0.0 {
            break;
        }
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&w);
                w.axpy(-proj, q);
            }
        }
        let n = w.norm();
        if n <= KRYLOV_CUTOFF * scale {
            break;
        }
        let q = w.scale(C64::new(1.0 / n, 0.0));
        residuals.push(shift(&q));
        basis.push(q);
    }

    let is_ife = a_full.im.abs() <= tol && residuals.iter().all(|&r| r <= tol);
    Ok(IfeVerdict {
        is_ife,
        phase: a,
        phase_imaginary: a_full.im.abs(),
        krylov_residuals: residuals,
        dynamic_fidelity_deficit: None,
        tolerance: tol,
    })
}

/// Dynamic IFE test: the worst fidelity deficit between full and free
/// evolution over the grid. The global phase drops out of the modulus.
pub fn ife_dynamic_check(h: &BipartiteHamiltonian, chi: &PureState, grid: &TimeGrid, tol: f64) -> Result<IfeVerdict> {
    check_state_dims(h, chi)?;
    check_tol(tol)?;
    let full = Evolution::new(&assemble_total(h)?)?;
    let free = Evolution::new(&h.free_part()?)?;
    ife_dynamic_check_with(h, &full, &free, chi, grid, tol)
}

/// As [`ife_dynamic_check`] with precomputed full and free evolutions.
pub fn ife_dynamic_check_with(
    h: &BipartiteHamiltonian,
    full: &Evolution,
    free: &Evolution,
    chi: &PureState,
    grid: &TimeGrid,
    tol: f64,
) -> Result<IfeVerdict> {
    check_state_dims(h, chi)?;
    let v = chi.amplitudes();
    let a_full = v.dot(&h.h_i.mul_vec(v));
    let with = full.trajectory(v, grid)?;
    let without = free.trajectory(v, grid)?;
    let deficit = with
        .iter()
        .zip(&without)
        .map(|(x, y)| 1.0 - y.dot(x).norm())
        .fold(0.0, f64::max);
    Ok(IfeVerdict {
        is_ife: deficit <= tol,
        phase: a_full.re,
        phase_imaginary: a_full.im.abs(),
        krylov_residuals: Vec::new(),
        dynamic_fidelity_deficit: Some(deficit),
        tolerance: tol,
    })
}

/// Zanardi-condition diagnostics for one operator Schmidt term
/// `w_α S_α ⊗ E_α` of the interaction.
#[derive(Clone, Debug, PartialEq)]
pub struct DfsTermResidual {
    pub weight: f64,
    /// `c_α` with `Π S_α Π ≈ c_α Π`.
    pub scalar: f64,
    /// `|Im c_α|`; zero up to rounding since `S_α` is Hermitian.
    pub scalar_imaginary: f64,
    /// `w_α ‖Π S_α Π - c_α Π‖_F`.
    pub scalar_defect: f64,
    /// `w_α ‖(I - Π) S_α Π‖_F`.
    pub leakage: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DfsVerdict {
    pub is_dfs: bool,
    /// `c_α` per operator Schmidt term, in decomposition order.
    pub scalars: Vec<f64>,
    pub terms: Vec<DfsTermResidual>,
    /// `‖(I - Π) H_A Π‖_F`.
    pub system_leakage: f64,
    /// `H_B + Σ_α w_α c_α E_α`, set when the subspace is a DFS.
    pub effective_env_hamiltonian: Option<CMatrix>,
    pub tolerance: f64,
}

impl DfsVerdict {
    /// All residuals in a flat list: per term the scalar defect, leakage
    /// and imaginary part of `c_α`, then the `H_A` leakage.
    pub fn residuals(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|t| [t.scalar_defect, t.leakage, t.scalar_imaginary])
            .collect();
        out.push(self.system_leakage);
        out
    }
}

fn validate_basis(basis: &[CVector], dim: usize, side: &str) -> Result<()> {
    if basis.is_empty() {
        return Err(Error::Validation(format!("{side} subspace basis is empty")));
    }
    if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
        return Err(Error::Shape(format!("{side} basis vector of dimension {}, expected {dim}", v.dim())));
    }
    let defect = orthonormality_defect(basis);
    if defect > BASIS_ORTHONORMALITY_TOL {
        return Err(Error::Validation(format!("{side} subspace basis is not orthonormal (defect {defect:e})")));
    }
    Ok(())
}

/// `(‖Π X Π - cΠ‖_F, ‖(I - Π) X Π‖_F, c)` with `c = tr(ΠX)/rank Π`.
fn scalar_on_subspace(x: &CMatrix, p: &CMatrix, rank: usize) -> (f64, f64, C64) {
    let xp = x * p;
    let pxp = p * &xp;
    let c = pxp.trace() / rank as f64;
    let defect = (&pxp - &p.scale(c)).frobenius_norm();
    let leakage = (&xp - &pxp).frobenius_norm();
    (defect, leakage, c)
}

/// Certifies `span(basis) ⊂ H_A` as a decoherence-free subspace: every
/// system factor `S_α` of the interaction acts as a real scalar `c_α` on it
/// and it is invariant under `H_A`.
pub fn dfs_check(h: &BipartiteHamiltonian, basis: &[CVector], tol: f64) -> Result<DfsVerdict> {
    check_tol(tol)?;
    let (da, db) = (h.dims.dim_a(), h.dims.dim_b());
    validate_basis(basis, da, "system")?;
    let p = projector(basis, da);
    let rank = basis.len();
    let decomposition = operator_schmidt_decompose(&h.h_i, da, db)?;

    let mut terms = Vec::with_capacity(decomposition.len());
    for term in &decomposition {
        let (defect, leakage, c) = scalar_on_subspace(&term.system, &p, rank);
        terms.push(DfsTermResidual {
            weight: term.weight,
            scalar: c.re,
            scalar_imaginary: c.im.abs(),
            scalar_defect: term.weight * defect,
            leakage: term.weight * leakage,
        });
    }
    let hp = &h.h_a * &p;
    let system_leakage = (&hp - &(&p * &hp)).frobenius_norm();

    let is_dfs = system_leakage <= tol
        && terms.iter().all(|t| t.scalar_defect <= tol && t.leakage <= tol && t.scalar_imaginary <= tol);
    let effective_env_hamiltonian = is_dfs.then(|| {
        decomposition.iter().zip(&terms).fold(h.h_b.clone(), |acc, (term, r)| {
            &acc + &term.environment.scale_real(term.weight * r.scalar)
        })
    });
    Ok(DfsVerdict {
        is_dfs,
        scalars: terms.iter().map(|t| t.scalar).collect(),
        terms,
        system_leakage,
        effective_env_hamiltonian,
        tolerance: tol,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BridgeVerdict {
    pub dfs: DfsVerdict,
    /// `‖(I - P) H_B P‖_F` for the projector `P` onto the environment
    /// subspace.
    pub env_leakage: f64,
    /// With `V = H_E^eff - H_B`: `‖(I - P) V P‖_F + ‖P V P - bP‖_F`.
    pub env_shift_defect: f64,
    /// The scalar `b` by which `H_E^eff` exceeds `H_B` on the environment
    /// subspace; the IFE phase of every product state.
    pub env_shift: f64,
    /// Aggregate over all basis products: IFE iff the environment condition
    /// holds and every product passes with the common phase. Krylov
    /// residuals are the per-order maxima.
    pub aggregate: IfeVerdict,
    /// `ife_algebraic_check` on each `b_i ⊗ e_j`, row-major in `(i, j)`.
    pub products: Vec<IfeVerdict>,
}

/// Lifts a DFS to an IFE subspace `C_DFS ⊗ C_E`.
///
/// The environment condition is `e^{-iH_E^eff t} = e^{-iat} e^{-iH_B t}` on
/// `C_E`, which holds iff `C_E` is invariant under `H_B` and `H_E^eff - H_B`
/// acts on it as the scalar `a`.
pub fn dfs_to_ife_bridge(
    h: &BipartiteHamiltonian,
    dfs_basis: &[CVector],
    env_basis: &[CVector],
    tol: f64,
) -> Result<BridgeVerdict> {
    let dfs = dfs_check(h, dfs_basis, tol)?;
    let h_eff = dfs
        .effective_env_hamiltonian
        .clone()
        .ok_or_else(|| Error::Validation("system subspace is not decoherence-free".into()))?;
    let db = h.dims.dim_b();
    validate_basis(env_basis, db, "environment")?;
    let p = projector(env_basis, db);
    let hp = &h.h_b * &p;
    let env_leakage = (&hp - &(&p * &hp)).frobenius_norm();
    let v = &h_eff - &h.h_b;
    let (defect, leakage, b) = scalar_on_subspace(&v, &p, env_basis.len());
    let env_shift_defect = defect + leakage + b.im.abs();
    let env_ok = env_leakage <= tol && env_shift_defect <= tol;

    let mut products = Vec::with_capacity(dfs_basis.len() * env_basis.len());
    for s in dfs_basis {
        for e in env_basis {
            let chi = PureState::new(h.dims, s.kron(e))?;
            products.push(ife_algebraic_check(h, &chi, tol)?);
        }
    }
    let orders = products.iter().map(|v| v.krylov_residuals.len()).max().unwrap_or(0);
    let krylov_residuals = (0..orders)
        .map(|n| products.iter().filter_map(|v| v.krylov_residuals.get(n)).cloned().fold(0.0, f64::max))
        .collect();
    // ⟨s⊗e|H_I|s⊗e⟩ = ⟨e|H_E^eff - H_B|e⟩, which is b when the environment
    // condition holds. A common phase keeps superpositions IFE.
    let phase = products.first().map_or(0.0, |v| v.phase);
    let phases_agree = products.iter().all(|v| (v.phase - phase).abs() <= tol);
    let is_ife = env_ok && phases_agree && products.iter().all(|v| v.is_ife);
    let aggregate = IfeVerdict {
        is_ife,
        phase,
        phase_imaginary: products.iter().map(|v| v.phase_imaginary).fold(0.0, f64::max),
        krylov_residuals,
        dynamic_fidelity_deficit: None,
        tolerance: tol,
    };
    Ok(BridgeVerdict { dfs, env_leakage, env_shift_defect, env_shift: b.re, aggregate, products })
}

/// `(⟨s| ⊗ I) X (|s⟩ ⊗ I)`, the environment operator seen by a fixed system
/// state.
pub fn env_block(x: &CMatrix, s: &CVector, dim_b: usize) -> Result<CMatrix> {
    let bra = kron(&CMatrix::from_columns(core::slice::from_ref(s)).adjoint(), &CMatrix::identity(dim_b))?;
    Ok(&(&bra * x) * &bra.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BipartiteDims;
    use crate::numerics::eig_hermitian;
    use crate::random::{random_hermitian, random_state, random_unitary, rng};

    fn sz() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }

    fn sm() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
    }

    fn xy(wa: f64, wb: f64, g: f64) -> BipartiteHamiltonian {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let sp = sm().adjoint();
        let hi = (&kron(&sm(), &sp).unwrap() + &kron(&sp, &sm()).unwrap()).scale_real(g);
        BipartiteHamiltonian::new(dims, sz().scale_real(wa), sz().scale_real(wb), hi).unwrap()
    }

    fn ket(dims: BipartiteDims, amps: &[f64]) -> PureState {
        PureState::normalized(dims, CVector::from_real(amps)).unwrap()
    }

    #[test]
    fn no_interaction_is_always_ife() {
        let mut r = rng(1);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let h = BipartiteHamiltonian::free(dims, random_hermitian(&mut r, 2), random_hermitian(&mut r, 3)).unwrap();
        let chi = PureState::new(dims, random_state(&mut r, 6)).unwrap();
        let v = ife_algebraic_check(&h, &chi, 1e-8).unwrap();
        assert!(v.is_ife && v.phase == 0.0);
        let v = ife_dynamic_check(&h, &chi, &TimeGrid::default(), 1e-8).unwrap();
        assert!(v.is_ife && v.dynamic_fidelity_deficit.unwrap() < 1e-12);
    }

    #[test]
    fn aligned_spins_are_ife_with_zero_phase() {
        let h = xy(1.0, 0.7, 0.3);
        let chi = ket(h.dims, &[0.6, 0.0, 0.0, 0.8]);
        let v = ife_algebraic_check(&h, &chi, 1e-8).unwrap();
        assert!(v.is_ife);
        assert!(v.phase.abs() < 1e-15);
        assert!(v.max_krylov_residual() < 1e-12);
        let d = ife_dynamic_check(&h, &chi, &TimeGrid::default(), 1e-8).unwrap();
        assert!(d.is_ife && d.dynamic_fidelity_deficit.unwrap() < 1e-10);
    }

    #[test]
    fn flip_flop_sector_is_not_ife() {
        let h = xy(1.0, 0.7, 0.3);
        let es = eig_hermitian(&assemble_total(&h).unwrap()).unwrap();
        // Ascending order puts -1.7 first and +√0.18 third.
        let h2 = 0.5f64.sqrt();
        let chi = PureState::from_eigen_coefficients(h.dims, &es, &[C64::new(h2, 0.0), C64::new(0.0, 0.0), C64::new(h2, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let v = ife_algebraic_check(&h, &chi, 1e-8).unwrap();
        assert!(!v.is_ife && v.max_krylov_residual() > 1e-3);
        let d = ife_dynamic_check(&h, &chi, &TimeGrid::default(), 1e-8).unwrap();
        assert!(!d.is_ife && d.dynamic_fidelity_deficit.unwrap() > 1e-3);
    }

    #[test]
    fn scalar_interaction_gives_phase() {
        // H_I = 0.4·I acts as a global phase on every state.
        let dims = BipartiteDims::new(2, 2).unwrap();
        let h = BipartiteHamiltonian::new(dims, sz(), sz().scale_real(0.3), CMatrix::identity(4).scale_real(0.4)).unwrap();
        let chi = PureState::new(dims, random_state(&mut rng(3), 4)).unwrap();
        let v = ife_algebraic_check(&h, &chi, 1e-8).unwrap();
        assert!(v.is_ife && (v.phase - 0.4).abs() < 1e-14);
        assert!(ife_dynamic_check(&h, &chi, &TimeGrid::default(), 1e-8).unwrap().is_ife);
    }

    #[test]
    fn krylov_stops_at_cyclic_dimension() {
        let h = xy(1.0, 0.7, 0.0);
        // |++⟩ is an eigenvector of H_0: the cyclic space is one-dimensional.
        let v = ife_algebraic_check(&h, &ket(h.dims, &[1.0, 0.0, 0.0, 0.0]), 1e-8).unwrap();
        assert_eq!(v.krylov_residuals.len(), 1);
        // Superposition of three distinct H_0 eigenvalues.
        let v = ife_algebraic_check(&h, &ket(h.dims, &[1.0, 1.0, 1.0, 0.0]), 1e-8).unwrap();
        assert_eq!(v.krylov_residuals.len(), 3);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let h = xy(1.0, 0.7, 0.3);
        let chi = PureState::new(BipartiteDims::new(2, 3).unwrap(), CVector::basis(6, 0)).unwrap();
        assert!(matches!(ife_algebraic_check(&h, &chi, 1e-8), Err(Error::Shape(_))));
        assert!(ife_algebraic_check(&h, &ket(h.dims, &[1.0, 0.0, 0.0, 0.0]), 0.0).is_err());
    }

    fn spin_boson_like(g: f64) -> BipartiteHamiltonian {
        // Two spins on A (dim 4), one mode with 3 levels on B.
        let dims = BipartiteDims::new(4, 3).unwrap();
        let i2 = CMatrix::identity(2);
        let jz = &kron(&sz(), &i2).unwrap() + &kron(&i2, &sz()).unwrap();
        let a = CMatrix::from_fn(3, 3, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) });
        let x = &a + &a.adjoint();
        let n = &a.adjoint() * &a;
        BipartiteHamiltonian::new(dims, jz.clone(), n.scale_real(0.9), kron(&jz, &x.scale_real(g)).unwrap()).unwrap()
    }

    #[test]
    fn jz_eigenspaces_are_dfs() {
        let h = spin_boson_like(0.2);
        let b = |i| CVector::basis(4, i);
        for (space, m) in [(alloc::vec![b(0)], 2.0), (alloc::vec![b(1), b(2)], 0.0), (alloc::vec![b(3)], -2.0)] {
            let v = dfs_check(&h, &space, 1e-8).unwrap();
            assert!(v.is_dfs, "m = {m}");
            // Oracle: H_E^eff = ⟨s|H - H_A⊗I|s⟩ for any s in the subspace.
            let block = env_block(&(&assemble_total(&h).unwrap() - &kron(&h.h_a, &CMatrix::identity(3)).unwrap()), &space[0], 3).unwrap();
            assert!(v.effective_env_hamiltonian.unwrap().max_abs_diff(&block) < 1e-12);
        }
        // Mixing two sectors breaks it.
        let mixed = [CVector::from_real(&[1.0, 1.0, 0.0, 0.0]).normalized().unwrap()];
        assert!(!dfs_check(&h, &mixed, 1e-8).unwrap().is_dfs);
    }

    #[test]
    fn dfs_is_basis_independent() {
        let h = spin_boson_like(0.2);
        let u = random_unitary(&mut rng(4), 2);
        let rotated: Vec<CVector> = (0..2)
            .map(|j| {
                let mut v = CVector::zeros(4);
                v[1] = u[(0, j)];
                v[2] = u[(1, j)];
                v
            })
            .collect();
        let a = dfs_check(&h, &[CVector::basis(4, 1), CVector::basis(4, 2)], 1e-8).unwrap();
        let b = dfs_check(&h, &rotated, 1e-8).unwrap();
        assert!(a.is_dfs && b.is_dfs);
        assert!(a.effective_env_hamiltonian.unwrap().max_abs_diff(&b.effective_env_hamiltonian.unwrap()) < 1e-12);
    }

    #[test]
    fn xy_single_level_is_not_dfs() {
        let h = xy(1.0, 0.7, 0.3);
        let v = dfs_check(&h, &[CVector::basis(2, 0)], 1e-8).unwrap();
        assert!(!v.is_dfs && v.effective_env_hamiltonian.is_none());
        assert!(v.terms.iter().any(|t| t.leakage > 0.1));
    }

    #[test]
    fn free_hamiltonian_dfs_has_bare_environment() {
        let mut r = rng(6);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let h = BipartiteHamiltonian::free(dims, sz(), random_hermitian(&mut r, 3)).unwrap();
        let v = dfs_check(&h, &[CVector::basis(2, 1)], 1e-8).unwrap();
        assert!(v.is_dfs && v.scalars.is_empty());
        assert_eq!(v.effective_env_hamiltonian.unwrap(), h.h_b);
        // Not H_A-invariant.
        let plus = CVector::from_real(&[1.0, 1.0]).normalized().unwrap();
        assert!(!dfs_check(&h, &[plus], 1e-8).unwrap().is_dfs);
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let h = xy(1.0, 0.7, 0.3);
        let bad = [CVector::basis(2, 0), CVector::from_real(&[1.0, 1.0]).normalized().unwrap()];
        assert!(matches!(dfs_check(&h, &bad, 1e-8), Err(Error::Validation(_))));
    }

    #[test]
    fn bridge_distinguishes_m_sectors() {
        let h = spin_boson_like(0.2);
        let fock: Vec<CVector> = (0..3).map(|n| CVector::basis(3, n)).collect();
        let zero = dfs_to_ife_bridge(&h, &[CVector::basis(4, 1), CVector::basis(4, 2)], &fock, 1e-8).unwrap();
        assert!(zero.aggregate.is_ife && zero.products.len() == 6);
        let up = dfs_to_ife_bridge(&h, &[CVector::basis(4, 0)], &fock[..1], 1e-8).unwrap();
        assert!(up.dfs.is_dfs && !up.aggregate.is_ife && up.env_shift_defect > 0.1);
    }

    #[test]
    fn bridge_with_global_shift_covers_everything() {
        // H_I = S ⊗ I with S|0⟩ = 0.5|0⟩: the environment shift is 0.5·I.
        let dims = BipartiteDims::new(2, 3).unwrap();
        let s = CMatrix::diag_real(&[0.5, -1.0]);
        let hb = random_hermitian(&mut rng(9), 3);
        let h = BipartiteHamiltonian::new(dims, sz(), hb, kron(&s, &CMatrix::identity(3)).unwrap()).unwrap();
        let env: Vec<CVector> = (0..3).map(|n| CVector::basis(3, n)).collect();
        let v = dfs_to_ife_bridge(&h, &[CVector::basis(2, 0)], &env, 1e-8).unwrap();
        assert!(v.aggregate.is_ife);
        assert!((v.env_shift - 0.5).abs() < 1e-12 && (v.aggregate.phase - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bridge_requires_dfs() {
        let h = xy(1.0, 0.7, 0.3);
        assert!(dfs_to_ife_bridge(&h, &[CVector::basis(2, 0)], &[CVector::basis(2, 0)], 1e-8).is_err());
    }
}
