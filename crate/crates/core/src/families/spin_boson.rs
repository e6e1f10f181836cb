use alloc::format;
use alloc::vec::Vec;

use super::{annihilation, check_finite, embed, sigma_z, FamilyInstance, FamilyMetadata};
use crate::error::{Error, Result};
use crate::model::{BipartiteDims, BipartiteHamiltonian, PureState};
use crate::numerics::{kron, CMatrix, CVector, MAX_DIMENSION};

/// Eigenspace of `J_z = Σ_k σ_z^(k)` with eigenvalue `m`.
#[derive(Clone, Debug)]
pub struct JzSector {
    pub m: i32,
    /// Computational basis states of the spins with `Σ σ_z = m`.
    pub basis: Vec<CVector>,
    /// The sector times any environment state is IFE (`m = 0` or no
    /// coupling).
    pub interaction_free: bool,
    /// `H_B + m Σ_j g_j (a_j + a_j†)`.
    pub effective_env_hamiltonian: CMatrix,
}

#[derive(Clone, Debug)]
pub struct SpinBosonMetadata {
    pub spin_frequencies: Vec<f64>,
    pub mode_frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
    pub fock_cutoff: usize,
    pub sectors: Vec<JzSector>,
}

/// `N` spins coupled collectively to bosonic modes:
/// `H_A = Σ Ω_k σ_z^(k)`, `H_B = Σ ω_j a_j†a_j`,
/// `H_I = J_z ⊗ Σ_j g_j (a_j + a_j†)` on `d` Fock levels per mode.
///
/// Known states are sector basis states times Fock states with occupation
/// at most `d - 2`, plus one in-sector superposition per sector.
pub fn spin_boson_dephasing(
    spins: usize,
    spin_frequencies: &[f64],
    mode_frequencies: &[f64],
    couplings: &[f64],
    fock_cutoff: usize,
) -> Result<FamilyInstance> {
    if spins == 0 || spin_frequencies.len() != spins {
        return Err(Error::Argument(format!(
            "need one frequency per spin: {spins} spins, {} frequencies",
            spin_frequencies.len()
        )));
    }
    if mode_frequencies.is_empty() || couplings.len() != mode_frequencies.len() {
        return Err(Error::Argument(format!(
            "need at least one mode and one coupling per mode: {} modes, {} couplings",
            mode_frequencies.len(),
            couplings.len()
        )));
    }
    if fock_cutoff < 2 {
        return Err(Error::Argument(format!("Fock cutoff must be at least 2, got {fock_cutoff}")));
    }
    check_finite(spin_frequencies, "spin frequencies")?;
    check_finite(mode_frequencies, "mode frequencies")?;
    check_finite(couplings, "couplings")?;
    let modes = mode_frequencies.len();
    let dim_a = 1usize.checked_shl(spins as u32).filter(|&d| d <= MAX_DIMENSION);
    let dim_b = (0..modes).try_fold(1usize, |acc, _| acc.checked_mul(fock_cutoff).filter(|&d| d <= MAX_DIMENSION));
    let (dim_a, dim_b) = match (dim_a, dim_b) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Capacity { what: "spin-boson dimension", requested: usize::MAX, limit: MAX_DIMENSION });
        }
    };
    let dims = BipartiteDims::new(dim_a, dim_b)?;

    let mut h_a = CMatrix::zeros(dim_a, dim_a);
    let mut jz = CMatrix::zeros(dim_a, dim_a);
    for (k, &w) in spin_frequencies.iter().enumerate() {
        let z = embed(&sigma_z(), k, spins, 2)?;
        h_a = &h_a + &z.scale_real(w);
        jz = &jz + &z;
    }
    let a = annihilation(fock_cutoff);
    let number = &a.adjoint() * &a;
    let position = &a + &a.adjoint();
    let mut h_b = CMatrix::zeros(dim_b, dim_b);
    let mut field = CMatrix::zeros(dim_b, dim_b);
    for j in 0..modes {
        h_b = &h_b + &embed(&number, j, modes, fock_cutoff)?.scale_real(mode_frequencies[j]);
        field = &field + &embed(&position, j, modes, fock_cutoff)?.scale_real(couplings[j]);
    }
    let hamiltonian = BipartiteHamiltonian::new(dims, h_a, h_b.clone(), kron(&jz, &field)?)?;

    let uncoupled = couplings.iter().all(|&g| g == 0.0);
    let sectors: Vec<JzSector> = (0..=spins)
        .map(|ups| {
            let m = 2 * ups as i32 - spins as i32;
            // Spin k is up (|+⟩, index bit 0) when bit (spins-1-k) is clear.
            let basis = (0..dim_a)
                .filter(|&i| spins as u32 - i.count_ones() == ups as u32)
                .map(|i| CVector::basis(dim_a, i))
                .collect();
            JzSector {
                m,
                basis,
                interaction_free: m == 0 || uncoupled,
                effective_env_hamiltonian: &h_b + &field.scale_real(f64::from(m)),
            }
        })
        .rev()
        .collect();

    // Fock product states with every occupation ≤ d - 2.
    let low_fock: Vec<usize> = (0..dim_b)
        .filter(|&idx| {
            let mut rest = idx;
            (0..modes).all(|_| {
                let n = rest % fock_cutoff;
                rest /= fock_cutoff;
                n + 2 <= fock_cutoff
            })
        })
        .collect();
    let mut known_gife_states = Vec::new();
    let mut known_ife_states = Vec::new();
    for sector in &sectors {
        let mut states = Vec::new();
        for s in &sector.basis {
            for &f in &low_fock {
                states.push(PureState::product(dims, s, &CVector::basis(dim_b, f))?);
            }
        }
        if sector.basis.len() > 1 {
            let mut sup = CVector::zeros(dim_a);
            for s in &sector.basis {
                sup = &sup + s;
            }
            states.push(PureState::product(dims, &sup, &CVector::basis(dim_b, low_fock[0]))?);
        }
        if sector.interaction_free {
            known_ife_states.extend(states.iter().cloned());
        }
        known_gife_states.extend(states);
    }

    Ok(FamilyInstance {
        hamiltonian,
        known_dfs_bases: sectors.iter().map(|s| s.basis.clone()).collect(),
        known_gife_states,
        known_ife_states,
        metadata: FamilyMetadata::SpinBoson(SpinBosonMetadata {
            spin_frequencies: spin_frequencies.to_vec(),
            mode_frequencies: mode_frequencies.to_vec(),
            couplings: couplings.to_vec(),
            fock_cutoff,
            sectors,
        }),
    })
}

impl SpinBosonMetadata {
    pub fn from_instance(instance: &FamilyInstance) -> Option<&Self> {
        match &instance.metadata {
            FamilyMetadata::SpinBoson(m) => Some(m),
            _ => None,
        }
    }
}
