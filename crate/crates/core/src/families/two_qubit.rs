use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use super::{check_finite, sigma_minus, sigma_plus, sigma_z, FamilyInstance, FamilyMetadata};
use crate::error::Result;
use crate::model::{assemble_total, BipartiteDims, BipartiteHamiltonian, PureState};
use crate::numerics::{kron, CVector, EigenSystem, C64};

/// A coefficient support (0-based, in the labelling of
/// [`TwoQubitXyMetadata::eigenvalues`]) on which every state is GIFE.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownSupport {
    pub support: Vec<usize>,
    /// Every state on the support is IFE.
    pub ife: bool,
}

#[derive(Clone, Debug)]
pub struct TwoQubitXyMetadata {
    pub omega_a: f64,
    pub omega_b: f64,
    pub gamma: f64,
    /// `λ₁ = ω_A + ω_B`, `λ₂ = -λ₁`, `λ₃ = -r`, `λ₄ = r` with
    /// `r = √(γ² + (ω_B - ω_A)²)`.
    pub eigenvalues: [f64; 4],
    /// Closed-form eigensystem in the order of `eigenvalues`:
    /// `|++⟩`, `|--⟩`, then `N[(δ ∓ r)|-+⟩ + γ|+-⟩]` with `δ = ω_B - ω_A`.
    pub reference: EigenSystem,
    /// `(λ₄ - λ₂)/2`, the frequency of the effective pair `ω̃σ_z, ω̃σ_z` for
    /// the `{λ₂, λ₄}` family.
    pub omega_tilde: f64,
    pub families: Vec<KnownSupport>,
}

/// Normalized eigenvector of the flip-flop block
/// `[[δ, γ], [γ, -δ]]` in the basis `(|-+⟩, |+-⟩)` for eigenvalue `lambda`.
///
/// `(λ + δ, γ)` is the standard form; `(γ, λ - δ)` is used when that one
/// degenerates (γ → 0 with λ = -δ).
fn block_vector(delta: f64, gamma: f64, lambda: f64, fallback_sign: f64) -> (f64, f64) {
    let v2 = (lambda + delta, gamma);
    let v1 = (gamma, lambda - delta);
    let n2 = v2.0.hypot(v2.1);
    let n1 = v1.0.hypot(v1.1);
    if n2 == 0.0 && n1 == 0.0 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        return (s, fallback_sign * s);
    }
    if n2 >= n1 {
        (v2.0 / n2, v2.1 / n2)
    } else {
        (v1.0 / n1, v1.1 / n1)
    }
}

/// Two qubits with `H_A = ω_A σ_z`, `H_B = ω_B σ_z` and flip-flop coupling
/// `H_I = γ(σ₋ ⊗ σ₊ + σ₊ ⊗ σ₋)`.
pub fn two_qubit_xy(omega_a: f64, omega_b: f64, gamma: f64) -> Result<FamilyInstance> {
    check_finite(&[omega_a, omega_b, gamma], "two-qubit parameters")?;
    let dims = BipartiteDims::new(2, 2)?;
    let h_i = (&kron(&sigma_minus(), &sigma_plus())? + &kron(&sigma_plus(), &sigma_minus())?).scale_real(gamma);
    let hamiltonian = BipartiteHamiltonian::new(dims, sigma_z().scale_real(omega_a), sigma_z().scale_real(omega_b), h_i)?;

    let delta = omega_b - omega_a;
    let r = gamma.hypot(delta);
    let eigenvalues = [omega_a + omega_b, -omega_a - omega_b, -r, r];
    // Basis order |++⟩, |+-⟩, |-+⟩, |--⟩.
    let block = |lambda: f64, sign: f64| {
        let (mp, pm) = block_vector(delta, gamma, lambda, sign);
        CVector::from_real(&[0.0, pm, mp, 0.0])
    };
    let vectors = alloc::vec![
        CVector::basis(4, 0),
        CVector::basis(4, 3),
        block(-r, -1.0),
        block(r, 1.0),
    ];
    let reference = EigenSystem::from_pairs(&assemble_total(&hamiltonian)?, eigenvalues.to_vec(), vectors)?;

    let families = alloc::vec![
        KnownSupport { support: alloc::vec![1, 3], ife: false },
        KnownSupport { support: alloc::vec![0, 3], ife: false },
        KnownSupport { support: alloc::vec![0, 1], ife: true },
        KnownSupport { support: alloc::vec![1, 2], ife: false },
        KnownSupport { support: alloc::vec![0, 2], ife: false },
    ];
    let sample = [C64::new(0.6, 0.0), C64::from_polar(0.8, 0.7)];
    let mut known_gife_states = Vec::new();
    let mut known_ife_states = Vec::new();
    for f in &families {
        let mut c = [C64::new(0.0, 0.0); 4];
        c[f.support[0]] = sample[0];
        c[f.support[1]] = sample[1];
        let state = PureState::from_eigen_coefficients(dims, &reference, &c)?;
        if f.ife {
            known_ife_states.push(state.clone());
        }
        known_gife_states.push(state);
    }

    Ok(FamilyInstance {
        hamiltonian,
        known_dfs_bases: Vec::new(),
        known_gife_states,
        known_ife_states,
        metadata: FamilyMetadata::TwoQubitXy(TwoQubitXyMetadata {
            omega_a,
            omega_b,
            gamma,
            eigenvalues,
            reference,
            omega_tilde: (eigenvalues[3] - eigenvalues[1]) / 2.0,
            families,
        }),
    })
}

impl TwoQubitXyMetadata {
    pub fn from_instance(instance: &FamilyInstance) -> Option<&Self> {
        match &instance.metadata {
            FamilyMetadata::TwoQubitXy(m) => Some(m),
            _ => None,
        }
    }
}
