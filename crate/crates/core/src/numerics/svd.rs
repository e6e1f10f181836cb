// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use super::{CMatrix, CVector, C64};

const MAX_SWEEPS: usize = 80;

/// Compact singular value decomposition `A = Σ_k σ_k u_k v_k†` with
/// singular values in descending order. Only values above the relative
/// cutoff are kept.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

/// One-sided (Hestenes) Jacobi SVD. Real input stays real throughout, since
/// every rotation is built from inner products of the working columns.
///
/// Singular values `σ ≤ rel_cutoff · σ_max` are dropped.
pub fn svd(a: &CMatrix, rel_cutoff: f64) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint(), rel_cutoff);
        return Svd { singular_values: t.singular_values, left: t.right, right: t.left };
    }
    let m = a.rows();
    let n = a.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s, e);
                rotate_pair(&mut v, p, q, c, s, e);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let smax = norms.iter().cloned().fold(0.0, f64::max);

    let mut out = Svd { singular_values: Vec::new(), left: Vec::new(), right: Vec::new() };
    for &j in &order {
        let sigma = norms[j];
        if sigma <= rel_cutoff * smax || sigma == 0.0 {
            continue;
        }
        out.singular_values.push(sigma);
        out.left.push(CVector::from(cols[j].iter().map(|z| z / sigma).collect::<Vec<_>>()));
        out.right.push(CVector::from(v[j].clone()));
    }
    out
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, e: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = xp * c - xq * e.conj() * s;
        *y = xp * s + xq * e.conj() * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, rng};

    fn reconstruct(s: &Svd, rows: usize, cols: usize) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols);
        for ((sigma, u), v) in s.singular_values.iter().zip(&s.left).zip(&s.right) {
            let term = u.outer(v).scale_real(*sigma);
            m = &m + &term;
        }
        m
    }

    #[test]
    fn reconstructs_random_rectangular() {
        let mut r = rng(1);
        for (m, n) in [(3, 3), (5, 2), (2, 5), (4, 7), (1, 3)] {
            let a = random_matrix(&mut r, m, n);
            let s = svd(&a, 1e-14);
            assert_eq!(s.singular_values.len(), m.min(n));
            assert!(reconstruct(&s, m, n).max_abs_diff(&a) < 1e-12);
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
            for i in 0..s.left.len() {
                for j in 0..s.left.len() {
                    let d = if i == j { 1.0 } else { 0.0 };
                    assert!((s.left[i].dot(&s.left[j]) - d).norm() < 1e-12);
                    assert!((s.right[i].dot(&s.right[j]) - d).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rank_deficient_drops_zeros() {
        let u = CVector::from_real(&[1.0, 2.0, 0.0]);
        let v = CVector::from_real(&[0.0, 1.0]);
        let a = u.outer(&v);
        let s = svd(&a, 1e-12);
        assert_eq!(s.singular_values.len(), 1);
        assert!((s.singular_values[0] - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_is_empty() {
        assert!(svd(&CMatrix::zeros(3, 2), 1e-12).singular_values.is_empty());
    }
}
