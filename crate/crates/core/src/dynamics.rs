//! Pure-state time evolution and the spectral functionals of the reduced
//! state (trace powers, entropies, Schmidt coefficients) along a trajectory.

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::model::{BipartiteDims, PureState};
use crate::numerics::{eig_hermitian, reduced_density, schmidt_decompose, CMatrix, CVector, EigenSystem, SchmidtDecomposition, Side, C64};

/// Adjacent Schmidt coefficients closer than this are treated as degenerate
/// during tracking.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Strictly increasing sample times starting at `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    samples: Vec<f64>,
}

impl TimeGrid {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Argument(format!("time grid needs at least 2 samples, got {}", samples.len())));
        }
        if samples[0] != 0.0 {
            return Err(Error::Argument(format!("time grid must start at 0, starts at {}", samples[0])));
        }
        if samples.iter().any(|t| !t.is_finite()) || samples.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Argument("time grid must be finite and strictly increasing".into()));
        }
        Ok(TimeGrid { samples })
    }

    /// `samples` uniform points on `[0, t_max]`.
    pub fn uniform(t_max: f64, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Argument(format!("time grid needs at least 2 samples, got {samples}")));
        }
        let step = t_max / (samples - 1) as f64;
        Self::new((0..samples).map(|i| i as f64 * step).collect())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

impl Default for TimeGrid {
    /// 200 uniform samples on `[0, 20]`.
    fn default() -> Self {
        TimeGrid::uniform(20.0, 200).expect("default grid is valid")
    }
}

/// Eigen-decomposed Hamiltonian ready to propagate states.
#[derive(Clone, Debug)]
pub struct Evolution {
    es: EigenSystem,
}

impl Evolution {
    pub fn new(h_total: &CMatrix) -> Result<Self> {
        Ok(Evolution { es: eig_hermitian(h_total)? })
    }

    pub fn from_eigensystem(es: EigenSystem) -> Self {
        Evolution { es }
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        &self.es
    }

    /// `e^{-iHt}|v⟩`.
    pub fn at(&self, v: &CVector, t: f64) -> CVector {
        self.es.evolve(v, t)
    }

    /// The trajectory `χ(t)` on every grid sample, as raw vectors.
    pub fn trajectory(&self, chi0: &CVector, grid: &TimeGrid) -> Result<Vec<CVector>> {
        if chi0.dim() != self.es.dim() {
            return Err(Error::Shape(format!("state of dimension {} for a {}-dimensional Hamiltonian", chi0.dim(), self.es.dim())));
        }
        let c = self.es.coefficients(chi0);
        Ok(grid
            .samples()
            .iter()
            .map(|&t| {
                let phased: Vec<C64> = c
                    .iter()
                    .zip(self.es.eigenvalues())
                    .map(|(ci, &l)| ci * C64::from_polar(1.0, -l * t))
                    .collect();
                self.es.combine(&phased)
            })
            .collect())
    }
}

/// `χ(t) = e^{-iHt} χ0` on every grid sample.
pub fn evolve(h_total: &CMatrix, chi0: &PureState, grid: &TimeGrid) -> Result<Vec<PureState>> {
    let ev = Evolution::new(h_total)?;
    ev.trajectory(chi0.amplitudes(), grid)?
        .into_iter()
        .map(|v| PureState::new(chi0.dims(), v))
        .collect()
}

/// `tr ρ^k = Σ_l p_l^k` from the eigenvalues of `ρ`.
pub fn trace_power(rho: &CMatrix, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Argument("trace power needs k >= 1".into()));
    }
    Ok(power_sum(eig_hermitian(rho)?.eigenvalues(), k))
}

fn power_sum(p: &[f64], k: usize) -> f64 {
    p.iter().map(|x| x.powi(k as i32)).sum()
}

/// Von Neumann (natural log) and linear entropy of a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entropies {
    pub von_neumann: f64,
    pub linear: f64,
}

pub fn entropies(rho: &CMatrix) -> Result<Entropies> {
    Ok(entropies_of_spectrum(eig_hermitian(rho)?.eigenvalues()))
}

/// `0·ln 0 := 0`; tiny negative eigenvalues from rounding are ignored.
pub fn entropies_of_spectrum(p: &[f64]) -> Entropies {
    let von_neumann = -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>();
    Entropies { von_neumann, linear: 1.0 - power_sum(p, 2) }
}

/// Values of `tr(ρ_B(t)^k)` along a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalTrajectory {
    pub k: usize,
    pub values: Vec<f64>,
}

impl FunctionalTrajectory {
    /// Peak-to-peak variation.
    pub fn drift(&self) -> f64 {
        peak_to_peak(&self.values)
    }
}

pub fn peak_to_peak(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Spectra of `ρ_B(t) = tr_A |χ(t)⟩⟨χ(t)|` along the grid.
pub fn reduced_spectra(ev: &Evolution, chi0: &PureState, grid: &TimeGrid) -> Result<Vec<Vec<f64>>> {
    let dims = chi0.dims();
    ev.trajectory(chi0.amplitudes(), grid)?
        .iter()
        .map(|v| {
            let rho = reduced_density(v, dims.dim_a(), dims.dim_b(), Side::B)?;
            Ok(eig_hermitian(&rho)?.eigenvalues().to_vec())
        })
        .collect()
}

/// `tr(ρ_B(t)^k)` for `k = 1..=k_max` on every sample.
pub fn functional_trajectories(
    h_total: &CMatrix,
    chi0: &PureState,
    grid: &TimeGrid,
    k_max: usize,
) -> Result<Vec<FunctionalTrajectory>> {
    let ev = Evolution::new(h_total)?;
    functional_trajectories_with(&ev, chi0, grid, k_max)
}

pub fn functional_trajectories_with(
    ev: &Evolution,
    chi0: &PureState,
    grid: &TimeGrid,
    k_max: usize,
) -> Result<Vec<FunctionalTrajectory>> {
    let n = chi0.dims().schmidt_rank_bound();
    if k_max == 0 || k_max > n {
        return Err(Error::Argument(format!("k_max must be in 1..={n}, got {k_max}")));
    }
    let spectra = reduced_spectra(ev, chi0, grid)?;
    Ok((1..=k_max)
        .map(|k| FunctionalTrajectory { k, values: spectra.iter().map(|p| power_sum(p, k)).collect() })
        .collect())
}

/// Schmidt decompositions along a trajectory with continuity tracking.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtTrajectory {
    pub samples: Vec<SchmidtDecomposition>,
    /// Set when some sample had Schmidt coefficients closer than
    /// [`DEGENERACY_GAP`]; vectors inside a degenerate block are then only
    /// defined up to a unitary and tracking is best-effort.
    pub degenerate_tracking: bool,
}

impl SchmidtTrajectory {
    /// Per-coefficient peak-to-peak variation, coefficients padded to `n`.
    pub fn coefficient_drift(&self, n: usize) -> f64 {
        let padded: Vec<Vec<f64>> = self.samples.iter().map(|s| sorted_desc(s.padded_coefficients(n))).collect();
        (0..n)
            .map(|l| peak_to_peak(&padded.iter().map(|c| c[l]).collect::<Vec<_>>()))
            .fold(0.0, f64::max)
    }
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn schmidt_trajectory(h_total: &CMatrix, chi0: &PureState, grid: &TimeGrid) -> Result<SchmidtTrajectory> {
    let ev = Evolution::new(h_total)?;
    schmidt_trajectory_with(&ev, chi0, grid)
}

pub fn schmidt_trajectory_with(ev: &Evolution, chi0: &PureState, grid: &TimeGrid) -> Result<SchmidtTrajectory> {
    let dims = chi0.dims();
    let mut out: Vec<SchmidtDecomposition> = Vec::with_capacity(grid.len());
    let mut degenerate = false;
    for v in ev.trajectory(chi0.amplitudes(), grid)? {
        let dec = schmidt_decompose(&v, dims.dim_a(), dims.dim_b())?;
        degenerate |= has_degeneracy(&dec.coefficients);
        let dec = match out.last() {
            Some(prev) => track(prev, dec),
            None => dec,
        };
        out.push(dec);
    }
    Ok(SchmidtTrajectory { samples: out, degenerate_tracking: degenerate })
}

fn has_degeneracy(c: &[f64]) -> bool {
    c.windows(2).any(|w| (w[0] - w[1]).abs() < DEGENERACY_GAP)
}

/// Reorders and rephases `next` to follow `prev`: greedy maximal-overlap
/// assignment of left vectors, then a phase making `⟨φ_prev|φ_next⟩` real
/// nonnegative, compensated on the right vector so each product term is
/// unchanged.
fn track(prev: &SchmidtDecomposition, next: SchmidtDecomposition) -> SchmidtDecomposition {
    let m = next.rank();
    let mut overlaps: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in prev.left.iter().enumerate() {
        for (j, q) in next.left.iter().enumerate() {
            let o = p.dot(q).norm() * prev.right[i].dot(&next.right[j]).norm();
            overlaps.push((o, i, j));
        }
    }
    overlaps.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut slot_of_next = alloc::vec![usize::MAX; m];
    let mut prev_taken = alloc::vec![false; prev.rank()];
    for (_, i, j) in overlaps {
        if slot_of_next[j] == usize::MAX && !prev_taken[i] {
            slot_of_next[j] = i;
            prev_taken[i] = true;
        }
    }
    // Unmatched vectors (rank changes) go after the matched ones.
    let mut order: Vec<(usize, usize)> = (0..m)
        .map(|j| (if slot_of_next[j] == usize::MAX { usize::MAX / 2 + j } else { slot_of_next[j] }, j))
        .collect();
    order.sort();

    let mut out = SchmidtDecomposition { coefficients: Vec::new(), left: Vec::new(), right: Vec::new() };
    for (slot, j) in order {
        let mut l = next.left[j].clone();
        let mut r = next.right[j].clone();
        if let Some(pl) = prev.left.get(slot) {
            let ov = pl.dot(&l);
            if ov.norm() > 0.0 {
                let phase = ov.conj() / ov.norm();
                l = l.scale(phase);
                r = r.scale(phase.conj());
            }
        }
        out.coefficients.push(next.coefficients[j]);
        out.left.push(l);
        out.right.push(r);
    }
    out
}

/// `ρ_B` of a pure state given as a raw vector.
pub fn reduced_b(v: &CVector, dims: BipartiteDims) -> Result<CMatrix> {
    reduced_density(v, dims.dim_a(), dims.dim_b(), Side::B)
}
