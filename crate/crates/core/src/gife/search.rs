use alloc::format;
use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use super::algebraic::AlgebraicChecker;
use crate::detect::ife_algebraic_check;
use crate::error::{Error, Result};
use crate::model::{BipartiteHamiltonian, PureState};
use crate::numerics::EigenSystem;
use crate::random::{random_supported, rng};

/// Largest eigenbasis size whose `2^D` supports are enumerated.
pub const MAX_SEARCH_DIMENSION: usize = 12;

/// Default number of random coefficient draws per support.
pub const DEFAULT_TRIALS: usize = 8;

/// A set of eigenvector indices on which every coefficient vector passed
/// the algebraic GIFE conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPattern {
    /// Sorted 0-based eigenvector indices.
    pub support: Vec<usize>,
    /// Not IFE on the first random draw.
    pub is_proper_gife: bool,
    /// Worst class residual over all draws and orders.
    pub max_residual: f64,
    /// Worst Krylov residual of the IFE check on the first draw.
    pub ife_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportSearch {
    /// Maximal qualifying supports with at least two indices.
    pub families: Vec<SupportPattern>,
    /// Every eigenvector on its own; always GIFE.
    pub singletons: Vec<SupportPattern>,
    pub k_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub supports_tested: usize,
}

fn draw_seed(seed: u64, mask: u32) -> u64 {
    seed ^ (u64::from(mask)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn indices(mask: u32, d: usize) -> Vec<usize> {
    (0..d).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Finds every eigenvector support on which generic coefficients satisfy
/// the algebraic GIFE conditions for orders `1..=k_max`.
///
/// Subsets of a qualifying support qualify as well, so supports are
/// visited by increasing size and a support is only tested when all of its
/// one-smaller subsets qualified. Each test draws `trials` normalized
/// complex Gaussian coefficient vectors from a generator seeded by `seed`
/// and the support.
pub fn find_gife_supports(
    h: &BipartiteHamiltonian,
    es: &EigenSystem,
    k_max: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<SupportSearch> {
    let d = es.dim();
    if d > MAX_SEARCH_DIMENSION {
        return Err(Error::Capacity { what: "support search dimension", requested: d, limit: MAX_SEARCH_DIMENSION });
    }
    let n = h.dims.schmidt_rank_bound();
    if k_max == 0 || k_max > n {
        return Err(Error::Argument(format!("k_max must be in 1..={n}, got {k_max}")));
    }
    if trials == 0 {
        return Err(Error::Argument("need at least one trial per support".into()));
    }
    let checker = AlgebraicChecker::new(es, h.dims, None)?;

    let full: u32 = (1u32 << d) - 1;
    let mut passed = alloc::vec![false; 1 << d];
    let mut worst = alloc::vec![0.0f64; 1 << d];
    let mut tested = 0;
    let mut by_size: Vec<u32> = (1..=full).collect();
    by_size.sort_by_key(|m| (m.count_ones(), *m));
    for mask in by_size {
        let parents_ok = mask.count_ones() == 1
            || (0..d).filter(|&i| mask & (1 << i) != 0).all(|i| passed[(mask & !(1 << i)) as usize]);
        if !parents_ok {
            continue;
        }
        tested += 1;
        let support = indices(mask, d);
        let mut r = rng(draw_seed(seed, mask));
        let mut max_res: f64 = 0.0;
        let mut ok = true;
        for _ in 0..trials {
            let c = random_supported(&mut r, d, &support);
            max_res = max_res.max(checker.max_residual(&c, k_max)?);
            if max_res > tol {
                ok = false;
                break;
            }
        }
        passed[mask as usize] = ok;
        worst[mask as usize] = max_res;
    }

    let describe = |mask: u32| -> Result<SupportPattern> {
        let support = indices(mask, d);
        let c = random_supported(&mut rng(draw_seed(seed, mask)), d, &support);
        let chi = PureState::from_eigen_coefficients(h.dims, es, &c)?;
        let ife = ife_algebraic_check(h, &chi, tol)?;
        Ok(SupportPattern {
            support,
            is_proper_gife: !ife.is_ife,
            max_residual: worst[mask as usize],
            ife_residual: ife.max_krylov_residual(),
        })
    };

    let mut families = Vec::new();
    let mut singletons = Vec::new();
    for mask in 1..=full {
        if !passed[mask as usize] {
            continue;
        }
        if mask.count_ones() == 1 {
            singletons.push(describe(mask)?);
            continue;
        }
        let maximal = (0..d).filter(|&i| mask & (1 << i) == 0).all(|i| !passed[(mask | (1 << i)) as usize]);
        if maximal {
            families.push(describe(mask)?);
        }
    }
    families.sort_by(|a, b| a.support.cmp(&b.support));
    singletons.sort_by(|a, b| a.support.cmp(&b.support));
    Ok(SupportSearch { families, singletons, k_max, trials, seed, tolerance: tol, supports_tested: tested })
}
