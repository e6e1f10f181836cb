use alloc::format;
use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use super::{FamilyInstance, FamilyMetadata};
use crate::error::{Error, Result};
use crate::model::{BipartiteDims, BipartiteHamiltonian, PureState};
use crate::numerics::{eig_hermitian, kron, CMatrix, CVector, C64, HERMITIAN_REL_TOL};
use crate::random::{random_hermitian, random_hermitian_unit_norm, random_state, random_unitary, rng};

/// Idempotence and hermiticity tolerance for the projectors.
pub const PROJECTOR_TOL: f64 = 1e-12;
/// Tolerance on `‖[X, Π]‖_F` for the Hamiltonians and corrections.
pub const COMMUTATOR_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ProjectorFamilyParams {
    pub pi_a: CMatrix,
    pub pi_b: CMatrix,
    pub h_a: CMatrix,
    pub h_b: CMatrix,
    pub delta_a: CMatrix,
    pub delta_b: CMatrix,
    /// Spectral norm of `Δ⊥`; zero drops it.
    pub perp_scale: f64,
    pub seed: u64,
}

/// `C_A^α ⊗ C_B^β`: `Δ_A` acts as `α` on `basis_a`, `Δ_B` as `β` on
/// `basis_b`, and both spans are invariant under the bare free
/// Hamiltonians.
#[derive(Clone, Debug)]
pub struct IfeBlock {
    pub basis_a: Vec<CVector>,
    pub alpha: f64,
    pub basis_b: Vec<CVector>,
    pub beta: f64,
}

impl IfeBlock {
    pub fn phase(&self) -> f64 {
        self.alpha + self.beta
    }
}

#[derive(Clone, Debug)]
pub struct ProjectorFamilyMetadata {
    pub pi_a: CMatrix,
    pub pi_b: CMatrix,
    pub s_a_basis: Vec<CVector>,
    pub s_b_basis: Vec<CVector>,
    pub delta_perp: CMatrix,
    /// `H_A + Δ_A`.
    pub h_a_eff: CMatrix,
    /// `H_B + Δ_B`.
    pub h_b_eff: CMatrix,
    /// `H_I - Δ_A ⊗ I - I ⊗ Δ_B = Δ⊥ - Δ_A ⊗ Π_B⊥ - Π_A⊥ ⊗ Δ_B`.
    pub h_i_eff: CMatrix,
    /// `[H_A, Δ_A] = 0` and `[H_B, Δ_B] = 0`.
    pub commuting: bool,
    /// Filled in the commuting case.
    pub ife_blocks: Vec<IfeBlock>,
    pub perp_scale: f64,
    pub seed: u64,
}

impl ProjectorFamilyMetadata {
    pub fn from_instance(instance: &FamilyInstance) -> Option<&Self> {
        match &instance.metadata {
            FamilyMetadata::Projector(m) => Some(m),
            _ => None,
        }
    }
}

fn check_projector(p: &CMatrix, name: &str) -> Result<()> {
    if !p.is_square() || !p.is_finite() {
        return Err(Error::Validation(format!("{name} must be a finite square matrix")));
    }
    let herm = p.hermiticity_residual();
    let idem = (&(p * p) - p).max_abs();
    if herm > PROJECTOR_TOL || idem > PROJECTOR_TOL {
        return Err(Error::Validation(format!(
            "{name} is not an orthogonal projector: hermiticity {herm:e}, idempotence {idem:e}"
        )));
    }
    Ok(())
}

fn check_commutes(x: &CMatrix, p: &CMatrix, name: &str) -> Result<()> {
    if x.rows() != p.rows() || x.cols() != p.cols() {
        return Err(Error::Shape(format!("{name} is {}x{}, projector is {}x{}", x.rows(), x.cols(), p.rows(), p.cols())));
    }
    if !x.is_finite() || !x.is_hermitian(HERMITIAN_REL_TOL) {
        return Err(Error::Validation(format!("{name} is not a finite Hermitian matrix")));
    }
    let norm = x.commutator(p).frobenius_norm();
    if norm > COMMUTATOR_TOL {
        return Err(Error::Validation(format!("{name} does not commute with its projector: norm {norm:e}")));
    }
    Ok(())
}

/// Orthonormal basis of the range of a projector.
fn range_basis(p: &CMatrix) -> Result<Vec<CVector>> {
    let es = eig_hermitian(p)?;
    Ok((0..es.dim()).filter(|&i| es.eigenvalues()[i] > 0.5).map(|i| es.vector(i)).collect())
}

/// Eigenspaces of `Δ` restricted to the span of `basis`, as
/// `(eigenvalue, vectors)` with eigenvalues clustered at `1e-9` of the
/// scale.
fn restricted_eigenspaces(delta: &CMatrix, basis: &[CVector]) -> Result<Vec<(f64, Vec<CVector>)>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let v = CMatrix::from_columns(basis);
    let restricted = (&(&v.adjoint() * delta) * &v).hermitian_part();
    let es = eig_hermitian(&restricted)?;
    let tol = 1e-9 * delta.max_abs().max(1.0);
    let mut out: Vec<(f64, Vec<CVector>)> = Vec::new();
    for i in 0..es.dim() {
        let lambda = es.eigenvalues()[i];
        let x = v.mul_vec(&es.vector(i));
        match out.last_mut() {
            Some((l, xs)) if lambda - *l <= tol => xs.push(x),
            _ => out.push((lambda, alloc::vec![x])),
        }
    }
    for (l, xs) in &mut out {
        *l = xs.iter().map(|x| x.dot(&delta.mul_vec(x)).re).sum::<f64>() / xs.len() as f64;
    }
    Ok(out)
}

/// `H_A ⊗ I + I ⊗ H_B + Δ_A ⊗ Π_B + Π_A ⊗ Δ_B + Δ⊥` with
/// `Δ⊥ = s Q M Q`, `Q = I - Π_A ⊗ Π_B` and `M` a seeded random Hermitian
/// matrix of unit spectral norm. Every state of `S_A ⊗ S_B` is GIFE.
///
/// Known GIFE states are the products of range bases plus one seeded
/// entangled state of `S_A ⊗ S_B` when both ranges have dimension > 1.
/// In the commuting case each `C_A^α ⊗ C_B^β` product state is listed as
/// IFE against the bare free evolution, with phase rate `α + β`.
pub fn projector_family(params: ProjectorFamilyParams) -> Result<FamilyInstance> {
    let ProjectorFamilyParams { pi_a, pi_b, h_a, h_b, delta_a, delta_b, perp_scale, seed } = params;
    check_projector(&pi_a, "Π_A")?;
    check_projector(&pi_b, "Π_B")?;
    check_commutes(&h_a, &pi_a, "H_A")?;
    check_commutes(&delta_a, &pi_a, "Δ_A")?;
    check_commutes(&h_b, &pi_b, "H_B")?;
    check_commutes(&delta_b, &pi_b, "Δ_B")?;
    if !(perp_scale.is_finite() && perp_scale >= 0.0) {
        return Err(Error::Argument(format!("perpendicular scale must be finite and nonnegative, got {perp_scale}")));
    }
    let dims = BipartiteDims::new(pi_a.rows(), pi_b.rows())?;
    let (dim_a, dim_b) = (dims.dim_a(), dims.dim_b());
    let n = dims.total();

    let mut r = rng(seed);
    let pp = kron(&pi_a, &pi_b)?;
    let q = &CMatrix::identity(n) - &pp;
    let delta_perp = if perp_scale > 0.0 {
        let m = random_hermitian_unit_norm(&mut r, n);
        (&(&q * &m) * &q).hermitian_part().scale_real(perp_scale)
    } else {
        CMatrix::zeros(n, n)
    };
    let id_a = CMatrix::identity(dim_a);
    let id_b = CMatrix::identity(dim_b);
    let h_i = &(&kron(&delta_a, &pi_b)? + &kron(&pi_a, &delta_b)?) + &delta_perp;
    let h_i_eff = &(&h_i - &kron(&delta_a, &id_b)?) - &kron(&id_a, &delta_b)?;
    let hamiltonian = BipartiteHamiltonian::new(dims, h_a.clone(), h_b.clone(), h_i)?;

    let s_a_basis = range_basis(&pi_a)?;
    let s_b_basis = range_basis(&pi_b)?;
    let mut known_gife_states = Vec::new();
    for a in &s_a_basis {
        for b in &s_b_basis {
            known_gife_states.push(PureState::product(dims, a, b)?);
        }
    }
    if s_a_basis.len() > 1 && s_b_basis.len() > 1 {
        let c = random_state(&mut r, s_a_basis.len() * s_b_basis.len());
        let mut v = CVector::zeros(n);
        for (i, a) in s_a_basis.iter().enumerate() {
            for (j, b) in s_b_basis.iter().enumerate() {
                v.axpy(c[i * s_b_basis.len() + j], &a.kron(b));
            }
        }
        known_gife_states.push(PureState::normalized(dims, v)?);
    }

    let scale_a = h_a.max_abs().max(delta_a.max_abs()).max(1.0);
    let scale_b = h_b.max_abs().max(delta_b.max_abs()).max(1.0);
    let commuting = h_a.commutator(&delta_a).frobenius_norm() <= COMMUTATOR_TOL * scale_a * scale_a
        && h_b.commutator(&delta_b).frobenius_norm() <= COMMUTATOR_TOL * scale_b * scale_b;
    let mut ife_blocks = Vec::new();
    let mut known_ife_states = Vec::new();
    if commuting {
        let sides_a = restricted_eigenspaces(&delta_a, &s_a_basis)?;
        let sides_b = restricted_eigenspaces(&delta_b, &s_b_basis)?;
        for (alpha, basis_a) in &sides_a {
            for (beta, basis_b) in &sides_b {
                for a in basis_a {
                    for b in basis_b {
                        known_ife_states.push(PureState::product(dims, a, b)?);
                    }
                }
                ife_blocks.push(IfeBlock {
                    basis_a: basis_a.clone(),
                    alpha: *alpha,
                    basis_b: basis_b.clone(),
                    beta: *beta,
                });
            }
        }
    }

    Ok(FamilyInstance {
        hamiltonian,
        known_dfs_bases: Vec::new(),
        known_gife_states,
        known_ife_states,
        metadata: FamilyMetadata::Projector(ProjectorFamilyMetadata {
            pi_a,
            pi_b,
            s_a_basis,
            s_b_basis,
            delta_perp,
            h_a_eff: &h_a + &delta_a,
            h_b_eff: &h_b + &delta_b,
            h_i_eff,
            commuting,
            ife_blocks,
            perp_scale,
            seed,
        }),
    })
}

/// `U diag(x) U†` for real `x`.
fn rotate_diag(u: &CMatrix, x: &[f64]) -> CMatrix {
    (&(u * &CMatrix::diag_real(x)) * &u.adjoint()).hermitian_part()
}

/// `U (X ⊕ Y) U†`.
fn rotate_blocks(u: &CMatrix, x: &CMatrix, y: &CMatrix) -> CMatrix {
    let r = x.rows();
    let n = r + y.rows();
    let block = CMatrix::from_fn(n, n, |i, j| match (i < r, j < r) {
        (true, true) => x[(i, j)],
        (false, false) => y[(i - r, j - r)],
        _ => C64::new(0.0, 0.0),
    });
    (&(u * &block) * &u.adjoint()).hermitian_part()
}

fn random_side(r: &mut crate::random::SeededRng, dim: usize, rank: usize, commuting: bool) -> (CMatrix, CMatrix, CMatrix) {
    let u = random_unitary(r, dim);
    let mask: Vec<f64> = (0..dim).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    let pi = rotate_diag(&u, &mask);
    if commuting {
        let h: Vec<f64> = (0..dim).map(|_| random_hermitian(r, 1)[(0, 0)].re).collect();
        let d: Vec<f64> = (0..dim).map(|_| random_hermitian(r, 1)[(0, 0)].re).collect();
        (pi, rotate_diag(&u, &h), rotate_diag(&u, &d))
    } else {
        let h = rotate_blocks(&u, &random_hermitian(r, rank), &random_hermitian(r, dim - rank));
        let d = rotate_blocks(&u, &random_hermitian(r, rank), &random_hermitian(r, dim - rank));
        (pi, h, d)
    }
}

/// Random instance with rank-`rank_a` and rank-`rank_b` projectors in
/// random bases and `‖Δ⊥‖ = 1`. With `commuting`, `H` and `Δ` on each side
/// are diagonal in the projector's basis.
pub fn random_projector_family(
    dim_a: usize,
    dim_b: usize,
    rank_a: usize,
    rank_b: usize,
    commuting: bool,
    seed: u64,
) -> Result<FamilyInstance> {
    BipartiteDims::new(dim_a, dim_b)?;
    if rank_a == 0 || rank_a > dim_a || rank_b == 0 || rank_b > dim_b {
        return Err(Error::Argument(format!("ranks {rank_a}, {rank_b} out of range for dimensions {dim_a}x{dim_b}")));
    }
    let mut r = rng(seed ^ 0x5DEE_CE66_D1CE_5EED);
    let (pi_a, h_a, delta_a) = random_side(&mut r, dim_a, rank_a, commuting);
    let (pi_b, h_b, delta_b) = random_side(&mut r, dim_b, rank_b, commuting);
    projector_family(ProjectorFamilyParams { pi_a, pi_b, h_a, h_b, delta_a, delta_b, perp_scale: 1.0, seed })
}
