//! Generators for concrete Hamiltonian classes with known IFE, DFS and GIFE
//! structure, used as test oracles and CLI scenarios.

mod dephasing;
mod projector;
mod spin_boson;
mod two_qubit;

use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

pub use dephasing::{apply_dephasing, dephasing_coefficients, pure_dephasing, PureDephasingMetadata};
pub use projector::{
    projector_family, random_projector_family, IfeBlock, ProjectorFamilyMetadata, ProjectorFamilyParams,
};
pub use spin_boson::{spin_boson_dephasing, JzSector, SpinBosonMetadata};
pub use two_qubit::{two_qubit_xy, KnownSupport, TwoQubitXyMetadata};

use crate::error::{Error, Result};
use crate::model::{BipartiteHamiltonian, PureState};
use crate::numerics::{kron, CMatrix, CVector, C64};

#[derive(Clone, Debug)]
pub enum FamilyMetadata {
    TwoQubitXy(TwoQubitXyMetadata),
    SpinBoson(SpinBosonMetadata),
    PureDephasing(PureDephasingMetadata),
    Projector(ProjectorFamilyMetadata),
}

impl FamilyMetadata {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyMetadata::TwoQubitXy(_) => "two-qubit-xy",
            FamilyMetadata::SpinBoson(_) => "spin-boson",
            FamilyMetadata::PureDephasing(_) => "pure-dephasing",
            FamilyMetadata::Projector(_) => "projector",
        }
    }
}

/// A Hamiltonian together with subspaces and states whose behaviour is
/// known in closed form. Every IFE state is also listed as a GIFE state.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub hamiltonian: BipartiteHamiltonian,
    /// Orthonormal bases of subsystem-A subspaces that are decoherence-free.
    pub known_dfs_bases: Vec<Vec<CVector>>,
    pub known_gife_states: Vec<PureState>,
    pub known_ife_states: Vec<PureState>,
    pub metadata: FamilyMetadata,
}

pub fn sigma_z() -> CMatrix {
    CMatrix::diag_real(&[1.0, -1.0])
}

/// `σ₋ = |−⟩⟨+|` with `|+⟩` the first basis vector.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]])
}

pub fn sigma_plus() -> CMatrix {
    sigma_minus().adjoint()
}

/// Truncated annihilation operator on `d` Fock levels,
/// `a|n⟩ = √n |n-1⟩`; `a†|d-1⟩` is cut off.
pub fn annihilation(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

/// `op` acting on factor `site` of `sites` identical factors of dimension
/// `local`, with site 0 the most significant.
pub fn embed(op: &CMatrix, site: usize, sites: usize, local: usize) -> Result<CMatrix> {
    if site >= sites {
        return Err(Error::Argument(alloc::format!("site {site} out of range for {sites} sites")));
    }
    let mut out = CMatrix::identity(1);
    for s in 0..sites {
        let factor = if s == site { op.clone() } else { CMatrix::identity(local) };
        out = kron(&out, &factor)?;
    }
    Ok(out)
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument(alloc::format!("{what} must be finite")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_operator_commutator() {
        let a = annihilation(4);
        let comm = a.commutator(&a.adjoint());
        // [a, a†] = I except on the cut-off level.
        for n in 0..3 {
            assert!((comm[(n, n)].re - 1.0).abs() < 1e-14);
        }
        assert!((comm[(3, 3)].re + 3.0).abs() < 1e-14);
        let num = &a.adjoint() * &a;
        assert!(num.max_abs_diff(&CMatrix::diag_real(&[0.0, 1.0, 2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn embedding_places_factor() {
        let z1 = embed(&sigma_z(), 1, 2, 2).unwrap();
        assert_eq!(z1, CMatrix::diag_real(&[1.0, -1.0, 1.0, -1.0]));
        assert!(embed(&sigma_z(), 2, 2, 2).is_err());
        let flip = &sigma_minus() * &sigma_plus();
        assert_eq!(flip, CMatrix::diag_real(&[0.0, 1.0]));
    }
}
