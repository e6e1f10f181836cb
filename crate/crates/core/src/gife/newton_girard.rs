use alloc::format;
use alloc::vec::Vec;

// Inherent f64 math is unavailable without std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Accepted deviation of `s₁` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Accepted excursion of a recovered probability outside `[0, 1]`.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Elementary symmetric polynomials `e_0 … e_n` from power sums `s_1 … s_n`:
/// `m e_m = Σ_{i=1}^{m} (-1)^{i-1} e_{m-i} s_i`.
pub fn elementary_symmetric(s: &[f64]) -> Vec<f64> {
    let mut e = alloc::vec![1.0];
    for m in 1..=s.len() {
        let mut acc = 0.0;
        for i in 1..=m {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[m - i] * s[i - 1];
        }
        e.push(acc / m as f64);
    }
    e
}

/// Recovers the spectrum `{p_l}` (descending) whose power sums
/// `Σ p_l^k`, `k = 1..n`, are `s`.
pub fn power_sums_to_spectrum(s: &[f64]) -> Result<Vec<f64>> {
    let n = s.len();
    if n == 0 {
        return Err(Error::Argument("need at least one power sum".into()));
    }
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::Argument("power sums must be finite".into()));
    }
    if (s[0] - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Inconsistent(format!("first power sum is {} rather than 1", s[0])));
    }
    let e = elementary_symmetric(s);
    // x^n - e_1 x^{n-1} + e_2 x^{n-2} - …, stored by ascending degree.
    let coeffs: Vec<f64> = (0..=n)
        .map(|deg| {
            let m = n - deg;
            if m.is_multiple_of(2) {
                e[m]
            } else {
                -e[m]
            }
        })
        .collect();
    let mut roots = real_roots(&coeffs);
    if roots.len() != n {
        return Err(Error::Inconsistent(format!(
            "power sums admit only {} real roots out of {n}; not the spectrum of a density matrix",
            roots.len()
        )));
    }
    if let Some(bad) = roots.iter().find(|&&p| !(-SPECTRUM_TOL..=1.0 + SPECTRUM_TOL).contains(&p)) {
        return Err(Error::Inconsistent(format!("recovered eigenvalue {bad} lies outside [0, 1]")));
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Rounding-error bound for evaluating `c` at `x` by Horner's rule.
fn eval_noise(c: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    let mag = c.iter().rev().fold(0.0, |acc, &a| acc * ax + a.abs());
    4.0 * c.len() as f64 * f64::EPSILON * mag
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect()
}

/// Real roots with multiplicity, ascending, of a polynomial given by
/// ascending coefficients with nonzero leading term.
///
/// Between consecutive real critical points the polynomial is monotone, so
/// each such interval holds at most one simple root, found by bisection. A
/// critical point where the polynomial vanishes to within rounding, or to
/// within what a root cluster of width `SPECTRUM_TOL` would produce, is a
/// multiple root.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let deg = c.len() - 1;
    match deg {
        0 => return Vec::new(),
        1 => return alloc::vec![-c[0] / c[1]],
        _ => {}
    }
    let lead = c[deg];
    let bound = 1.0 + c[..deg].iter().map(|a| (a / lead).abs()).fold(0.0, f64::max);

    // Critical points, merged into clusters with multiplicity.
    let crit = real_roots(&derivative(c));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for x in crit {
        match clusters.last_mut() {
            Some((y, m)) if (x - *y).abs() <= 1e-9 * (1.0 + y.abs()) => {
                *y = (*y * *m as f64 + x) / (*m as f64 + 1.0);
                *m += 1;
            }
            _ => clusters.push((x, 1)),
        }
    }

    let mut roots = Vec::new();
    let mut is_root = Vec::with_capacity(clusters.len());
    for &(x, m) in &clusters {
        let mult = m + 1;
        let px = eval(c, x);
        // |p^{(mult)}(x)| / mult! is the leading coefficient of the Taylor
        // expansion that a cluster of `mult` roots would produce.
        let mut d = c.to_vec();
        let mut fact = 1.0;
        for i in 1..=mult {
            d = derivative(&d);
            fact *= i as f64;
        }
        let cluster_scale = (eval(&d, x) / fact).abs() * SPECTRUM_TOL.powi(mult as i32);
        let hit = px.abs() <= eval_noise(c, x) + cluster_scale;
        if hit {
            roots.extend(core::iter::repeat_n(x, mult));
        }
        is_root.push(hit);
    }

    let mut points: Vec<(f64, bool)> = alloc::vec![(-bound, false)];
    points.extend(clusters.iter().zip(&is_root).map(|(&(x, _), &r)| (x, r)));
    points.push((bound, false));
    for w in points.windows(2) {
        let ((a, ra), (b, rb)) = (w[0], w[1]);
        if ra || rb {
            continue;
        }
        let (fa, fb) = (eval(c, a), eval(c, b));
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(c, a, b, fa));
        }
    }
    if eval(c, bound) == 0.0 {
        roots.push(bound);
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_spectrum, rng};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn small_examples() {
        assert!(close(&power_sums_to_spectrum(&[1.0, 1.0]).unwrap(), &[1.0, 0.0], 1e-12));
        assert!(close(&power_sums_to_spectrum(&[1.0, 0.5]).unwrap(), &[0.5, 0.5], 1e-8));
        assert!(close(&power_sums_to_spectrum(&[1.0, 0.58]).unwrap(), &[0.7, 0.3], 1e-12));
        assert!(close(&power_sums_to_spectrum(&[1.0]).unwrap(), &[1.0], 0.0));
    }

    #[test]
    fn elementary_symmetric_of_known_spectrum() {
        // p = (0.7, 0.3): e₁ = 1, e₂ = 0.21.
        let e = elementary_symmetric(&[1.0, 0.58]);
        assert!((e[1] - 1.0).abs() < 1e-15 && (e[2] - 0.21).abs() < 1e-15);
    }

    #[test]
    fn degenerate_spectra() {
        let s3: Vec<f64> = (1..=3).map(|k| 3.0 * (1.0f64 / 3.0).powi(k)).collect();
        assert!(close(&power_sums_to_spectrum(&s3).unwrap(), &[1.0 / 3.0; 3], 1e-8));
        let p = [0.4, 0.4, 0.2, 0.0];
        let s: Vec<f64> = (1..=4).map(|k| p.iter().map(|x: &f64| x.powi(k)).sum()).collect();
        assert!(close(&power_sums_to_spectrum(&s).unwrap(), &p, 1e-8));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(power_sums_to_spectrum(&[0.9, 0.5]), Err(Error::Inconsistent(_))));
        // s₂ > s₁² is impossible for real nonnegative spectra: complex roots.
        assert!(matches!(power_sums_to_spectrum(&[1.0, 1.5]), Err(Error::Inconsistent(_))));
        // s₂ < 1/n forces a root outside [0, 1] or complex roots.
        assert!(power_sums_to_spectrum(&[1.0, 0.2]).is_err());
        assert!(power_sums_to_spectrum(&[]).is_err());
    }

    #[test]
    fn random_round_trip() {
        let mut r = rng(10);
        for n in 1..=6 {
            for _ in 0..20 {
                let mut p = random_spectrum(&mut r, n);
                let s: Vec<f64> = (1..=n).map(|k| p.iter().map(|x| x.powi(k as i32)).sum()).collect();
                p.sort_by(|a, b| b.total_cmp(a));
                let got = power_sums_to_spectrum(&s).unwrap();
                assert!(close(&got, &p, 1e-8), "{p:?} vs {got:?}");
            }
        }
    }

    #[test]
    fn roots_of_simple_polynomials() {
        // (x - 1)(x - 2)(x + 3) = x³ - 7x + 6
        let r = real_roots(&[6.0, -7.0, 0.0, 1.0]);
        assert!(close(&r, &[-3.0, 1.0, 2.0], 1e-12));
        // x² + 1 has no real roots.
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
        // (x - 2)³
        let r = real_roots(&[-8.0, 12.0, -6.0, 1.0]);
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| (x - 2.0).abs() < 1e-6));
    }
}
