use alloc::format;
use alloc::vec::Vec;

use super::{check_finite, FamilyInstance, FamilyMetadata};
use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::model::{BipartiteDims, BipartiteHamiltonian, PureState};
use crate::numerics::{eig_hermitian, kron, CMatrix, CVector, EigenSystem, C64, HERMITIAN_REL_TOL};

#[derive(Clone, Debug)]
pub struct PureDephasingMetadata {
    pub epsilon: Vec<f64>,
    /// `B_k`.
    pub couplings: Vec<CMatrix>,
    /// `Z_k = ε_k I + H_B + B_k`, so that `H = Σ_k P_k ⊗ Z_k`.
    pub z_operators: Vec<CMatrix>,
}

fn is_scalar(m: &CMatrix) -> bool {
    let n = m.rows();
    let mean = m.trace() / n as f64;
    (m - &CMatrix::identity(n).scale(mean)).max_abs() <= 1e-12 * m.max_abs().max(1.0)
}

/// `H = Σ_k P_k ⊗ (ε_k I + H_B + B_k)` with `P_k` the computational-basis
/// projectors of A: `H_A = Σ ε_k P_k`, `H_I = Σ P_k ⊗ B_k`.
///
/// Every `|k⟩ ⊗ |j⟩` is listed as GIFE; it is also IFE when `B_k` is a
/// multiple of the identity.
pub fn pure_dephasing(epsilon: &[f64], h_b: CMatrix, couplings: Vec<CMatrix>) -> Result<FamilyInstance> {
    let dim_a = epsilon.len();
    if couplings.len() != dim_a {
        return Err(Error::Shape(format!("{} couplings for {dim_a} levels", couplings.len())));
    }
    check_finite(epsilon, "level energies")?;
    let dim_b = h_b.rows();
    if let Some(b) = couplings.iter().find(|b| b.rows() != dim_b || b.cols() != dim_b) {
        return Err(Error::Shape(format!("coupling of shape {}x{}, expected {dim_b}x{dim_b}", b.rows(), b.cols())));
    }
    for (k, b) in couplings.iter().enumerate() {
        if !b.is_finite() || !b.is_hermitian(HERMITIAN_REL_TOL) {
            return Err(Error::Validation(format!("coupling B_{k} is not a finite Hermitian matrix")));
        }
    }
    let dims = BipartiteDims::new(dim_a, dim_b)?;
    let mut h_i = CMatrix::zeros(dims.total(), dims.total());
    for (k, b) in couplings.iter().enumerate() {
        let p = CMatrix::from_fn(dim_a, dim_a, |r, c| C64::new(if r == k && c == k { 1.0 } else { 0.0 }, 0.0));
        h_i = &h_i + &kron(&p, b)?;
    }
    let hamiltonian = BipartiteHamiltonian::new(dims, CMatrix::diag_real(epsilon), h_b.clone(), h_i)?;

    let z_operators: Vec<CMatrix> = epsilon
        .iter()
        .zip(&couplings)
        .map(|(&e, b)| &(&h_b + b) + &CMatrix::identity(dim_b).scale_real(e))
        .collect();
    let mut known_gife_states = Vec::new();
    let mut known_ife_states = Vec::new();
    for (k, b) in couplings.iter().enumerate() {
        for j in 0..dim_b {
            let s = PureState::product(dims, &CVector::basis(dim_a, k), &CVector::basis(dim_b, j))?;
            if is_scalar(b) {
                known_ife_states.push(s.clone());
            }
            known_gife_states.push(s);
        }
    }

    Ok(FamilyInstance {
        hamiltonian,
        known_dfs_bases: (0..dim_a).map(|k| alloc::vec![CVector::basis(dim_a, k)]).collect(),
        known_gife_states,
        known_ife_states,
        metadata: FamilyMetadata::PureDephasing(PureDephasingMetadata {
            epsilon: epsilon.to_vec(),
            couplings,
            z_operators,
        }),
    })
}

impl PureDephasingMetadata {
    pub fn from_instance(instance: &FamilyInstance) -> Option<&Self> {
        match &instance.metadata {
            FamilyMetadata::PureDephasing(m) => Some(m),
            _ => None,
        }
    }
}

fn validate_density(rho: &CMatrix, dim: usize) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::Shape(format!("density matrix must be {dim}x{dim}")));
    }
    if !rho.is_finite() || !rho.is_hermitian(1e-10) {
        return Err(Error::Validation("density matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::Validation(format!("density matrix has trace {tr}")));
    }
    let lowest = eig_hermitian(rho)?.eigenvalues()[0];
    if lowest < -1e-10 {
        return Err(Error::Validation(format!("density matrix has negative eigenvalue {lowest}")));
    }
    Ok(())
}

/// Decoherence factors `c_kl(t) = tr(e^{-iZ_k t} ρ_B e^{iZ_l t})` on each
/// grid sample, so that `ρ_A(t) = Σ_kl c_kl(t) P_k ρ_A(0) P_l` in the
/// interaction picture of nothing: the `ε_k` and `H_B` phases are included.
pub fn dephasing_coefficients(instance: &FamilyInstance, rho_b: &CMatrix, grid: &TimeGrid) -> Result<Vec<CMatrix>> {
    let meta = PureDephasingMetadata::from_instance(instance)
        .ok_or_else(|| Error::Usage(format!("dephasing coefficients need a pure-dephasing instance, got {}", instance.metadata.name())))?;
    let dim_b = instance.hamiltonian.dims.dim_b();
    validate_density(rho_b, dim_b)?;
    let systems: Vec<EigenSystem> = meta.z_operators.iter().map(eig_hermitian).collect::<Result<_>>()?;
    let n = systems.len();
    Ok(grid
        .samples()
        .iter()
        .map(|&t| {
            let u: Vec<CMatrix> = systems.iter().map(|es| es.propagator(t)).collect();
            let evolved: Vec<CMatrix> = u.iter().map(|uk| uk * rho_b).collect();
            CMatrix::from_fn(n, n, |k, l| (&evolved[k] * &u[l].adjoint()).trace())
        })
        .collect())
}

/// `Σ_kl c_kl P_k ρ_A P_l`, the elementwise product `c ∘ ρ_A`.
pub fn apply_dephasing(c: &CMatrix, rho_a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(rho_a.rows(), rho_a.cols(), |k, l| c[(k, l)] * rho_a[(k, l)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::annihilation;
    use crate::model::assemble_total;
    use crate::numerics::{partial_trace, trace_distance, Side};

    fn reference() -> FamilyInstance {
        let a = annihilation(3);
        let x = &a + &a.adjoint();
        let h_b = (&a.adjoint() * &a).scale_real(0.9);
        pure_dephasing(&[0.5, -0.5], h_b, alloc::vec![x.scale_real(0.2), x.scale_real(-0.2)]).unwrap()
    }

    #[test]
    fn layout_and_known_states() {
        let f = reference();
        assert_eq!(f.known_gife_states.len(), 6);
        assert!(f.known_ife_states.is_empty());
        assert_eq!(f.known_dfs_bases.len(), 2);
        let meta = PureDephasingMetadata::from_instance(&f).unwrap();
        // H = Σ P_k ⊗ Z_k.
        let mut h = CMatrix::zeros(6, 6);
        for (k, z) in meta.z_operators.iter().enumerate() {
            let p = CMatrix::diag_real(&[if k == 0 { 1.0 } else { 0.0 }, if k == 1 { 1.0 } else { 0.0 }]);
            h = &h + &kron(&p, z).unwrap();
        }
        assert!(h.max_abs_diff(&assemble_total(&f.hamiltonian).unwrap()) < 1e-15);
    }

    #[test]
    fn zero_coupling_is_ife() {
        let f = pure_dephasing(&[0.5, -0.5], CMatrix::diag_real(&[0.0, 1.0]), alloc::vec![CMatrix::zeros(2, 2); 2]).unwrap();
        assert_eq!(f.known_ife_states.len(), 4);
    }

    #[test]
    fn coefficients_match_full_evolution() {
        let f = reference();
        let rho_b = CVector::basis(3, 0).outer(&CVector::basis(3, 0));
        let grid = TimeGrid::new(alloc::vec![0.0, 0.4, 1.0, 2.5]).unwrap();
        let cs = dephasing_coefficients(&f, &rho_b, &grid).unwrap();
        for c in &cs {
            assert!((c[(0, 0)].re - 1.0).abs() < 1e-12 && (c[(1, 1)].re - 1.0).abs() < 1e-12);
        }
        assert!(cs[0].max_abs_diff(&CMatrix::from_fn(2, 2, |_, _| C64::new(1.0, 0.0))) < 1e-15);
        let phi = CVector::from_real(&[0.6, 0.8]);
        let rho_a = phi.outer(&phi);
        let chi = phi.kron(&CVector::basis(3, 0));
        let es = eig_hermitian(&assemble_total(&f.hamiltonian).unwrap()).unwrap();
        for (c, &t) in cs.iter().zip(grid.samples()) {
            let v = es.evolve(&chi, t);
            let exact = partial_trace(&v.outer(&v), 2, 3, Side::A).unwrap();
            assert!(trace_distance(&apply_dephasing(c, &rho_a), &exact).unwrap() < 1e-10);
        }
    }

    #[test]
    fn equal_z_operators_do_not_dephase() {
        let h_b = CMatrix::diag_real(&[0.0, 1.0]);
        let f = pure_dephasing(&[0.0, 0.0], h_b, alloc::vec![CMatrix::zeros(2, 2); 2]).unwrap();
        let rho_b = CMatrix::identity(2).scale_real(0.5);
        for c in dephasing_coefficients(&f, &rho_b, &TimeGrid::uniform(5.0, 11).unwrap()).unwrap() {
            assert!(c.max_abs_diff(&CMatrix::from_fn(2, 2, |_, _| C64::new(1.0, 0.0))) < 1e-12);
        }
    }

    #[test]
    fn errors() {
        assert!(pure_dephasing(&[0.0, 1.0], CMatrix::identity(2), alloc::vec![CMatrix::zeros(2, 2)]).is_err());
        let non_herm = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(pure_dephasing(&[0.0, 1.0], CMatrix::identity(2), alloc::vec![non_herm, CMatrix::zeros(2, 2)]).is_err());
        let f = reference();
        assert!(dephasing_coefficients(&f, &CMatrix::identity(3), &TimeGrid::default()).is_err());
        let other = crate::families::two_qubit_xy(1.0, 0.7, 0.3).unwrap();
        assert!(matches!(
            dephasing_coefficients(&other, &CMatrix::identity(2).scale_real(0.5), &TimeGrid::default()),
            Err(Error::Usage(_))
        ));
    }
}
