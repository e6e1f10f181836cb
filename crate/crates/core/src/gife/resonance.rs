use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest number of `2k`-index tuples any enumeration will visit.
pub const TUPLE_BUDGET: usize = 10_000_000;

/// Default clustering tolerance: `1e-9` times the spectral range, or times
/// the spectral scale when the spectrum is fully degenerate.
pub fn default_cluster_tol(lambda: &[f64]) -> f64 {
    let lo = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range > 0.0 {
        1e-9 * range
    } else {
        1e-9 * lambda.iter().map(|l| l.abs()).fold(1.0, f64::max)
    }
}

pub(crate) fn tuple_count(base: usize, k: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..2 * k {
        n = n.checked_mul(base).filter(|&n| n <= TUPLE_BUDGET).ok_or(Error::Capacity {
            what: "resonance tuple enumeration",
            requested: base.saturating_pow(2 * k as u32),
            limit: TUPLE_BUDGET,
        })?;
    }
    Ok(n)
}

/// Tuples `(i₁, j₁, …, i_k, j_k)` sharing the same signed eigenvalue sum
/// `Σ λ_{i_s} - Σ λ_{j_s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceClass {
    pub order: usize,
    /// Mean delta of the members.
    pub delta: f64,
    /// Contains tuples with `|delta| ≤ clusterTol`; imposes no condition.
    pub resonant: bool,
    dim: usize,
    codes: Vec<u32>,
}

impl ResonanceClass {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Members as index tuples `[i₁, j₁, …, i_k, j_k]`.
    pub fn members(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.codes.iter().map(move |&c| decode(c as usize, self.dim, 2 * self.order))
    }
}

fn decode(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = alloc::vec![0; len];
    for slot in out.iter_mut() {
        *slot = code % base;
        code /= base;
    }
    out
}

/// Splits sorted `(delta, payload)` pairs into clusters at gaps larger than
/// `tol`. Returns `(start, end)` index ranges.
pub(crate) fn cluster_ranges<T>(sorted: &[(f64, T)], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i].0 - sorted[i - 1].0 > tol {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// Partitions all `D^{2k}` tuples into classes of equal delta.
pub fn resonance_classes(lambda: &[f64], k: usize, cluster_tol: f64) -> Result<Vec<ResonanceClass>> {
    if k == 0 {
        return Err(Error::Argument("resonance order must be at least 1".into()));
    }
    if lambda.is_empty() {
        return Err(Error::Argument("empty spectrum".into()));
    }
    if !(cluster_tol >= 0.0 && cluster_tol.is_finite()) {
        return Err(Error::Argument("cluster tolerance must be finite and nonnegative".into()));
    }
    let d = lambda.len();
    let total = tuple_count(d, k)?;
    let mut pairs: Vec<(f64, u32)> = (0..total)
        .map(|code| {
            let idx = decode(code, d, 2 * k);
            let delta = idx.chunks(2).map(|p| lambda[p[0]] - lambda[p[1]]).sum();
            (delta, code as u32)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(cluster_ranges(&pairs, cluster_tol)
        .into_iter()
        .map(|(s, e)| {
            let slice = &pairs[s..e];
            let delta = slice.iter().map(|p| p.0).sum::<f64>() / slice.len() as f64;
            ResonanceClass {
                order: k,
                delta,
                resonant: slice.iter().any(|p| p.0.abs() <= cluster_tol),
                dim: d,
                codes: slice.iter().map(|p| p.1).collect(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_spectrum_is_one_resonant_class() {
        for k in 1..=3 {
            let classes = resonance_classes(&[0.0; 4], k, 1e-9).unwrap();
            assert_eq!(classes.len(), 1);
            assert!(classes[0].resonant);
            assert_eq!(classes[0].len(), 4usize.pow(2 * k as u32));
        }
    }

    #[test]
    fn example_spectrum_doubled_gap_is_nonresonant() {
        let r = 0.18f64.sqrt();
        let lambda = [-1.7, -r, r, 1.7];
        let classes = resonance_classes(&lambda, 2, default_cluster_tol(&lambda)).unwrap();
        let total: usize = classes.iter().map(|c| c.len()).sum();
        assert_eq!(total, 256);
        // λ₁ - λ₂ twice, in ascending-index terms (3, 0, 3, 0).
        let class = classes.iter().find(|c| c.members().any(|m| m == [3, 0, 3, 0])).unwrap();
        assert!(!class.resonant);
        assert!((class.delta - 6.8).abs() < 1e-12);
        // λ₁ + λ₂ = λ₃ + λ₄ = 0 makes (3, 1, 0, 2) resonant.
        let class = classes.iter().find(|c| c.members().any(|m| m == [3, 1, 0, 2])).unwrap();
        assert!(class.resonant);
        assert_eq!(classes.iter().filter(|c| c.resonant).count(), 1);
    }

    #[test]
    fn rationally_independent_spectrum_matches_brute_force() {
        let lambda = [0.0, 1.0, 2f64.sqrt(), 3f64.sqrt()];
        let classes = resonance_classes(&lambda, 2, 1e-9).unwrap();
        // Two tuples share a class iff their multisets {i} and {j} coincide
        // after cancelling common indices.
        let key = |m: &[usize]| {
            let mut count = [0i32; 4];
            for p in m.chunks(2) {
                count[p[0]] += 1;
                count[p[1]] -= 1;
            }
            count
        };
        for c in &classes {
            let members: Vec<Vec<usize>> = c.members().collect();
            let k0 = key(&members[0]);
            assert!(members.iter().all(|m| key(m) == k0));
            assert_eq!(c.resonant, k0 == [0; 4]);
        }
        let mut keys: Vec<[i32; 4]> = classes.iter().map(|c| key(&c.members().next().unwrap())).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), classes.len());
    }

    #[test]
    fn budget_is_enforced() {
        let lambda: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let err = resonance_classes(&lambda, 4, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Capacity { limit: TUPLE_BUDGET, .. }));
        assert!(resonance_classes(&lambda, 0, 1e-9).is_err());
    }

    #[test]
    fn default_tolerance_scales_with_range() {
        assert_eq!(default_cluster_tol(&[-1.0, 1.0]), 2e-9);
        assert!((default_cluster_tol(&[3.0, 3.0]) - 3e-9).abs() < 1e-24);
        assert_eq!(default_cluster_tol(&[0.0]), 1e-9);
    }
}
