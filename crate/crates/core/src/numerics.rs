//! Adaptive Simpson quadrature, bracketing bisection and finite differences.

use alloc::vec::Vec;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` by adaptive Simpson with Richardson
/// correction, to relative tolerance `rel_tol` of the total.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let eps = (rel_tol * whole.abs()).max(1e-300);
    simpson_step(&mut f, a, b, fa, fm, fb, whole, eps, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps || !(m > a && m < b) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Shrinks a bracket `[lo, hi]` with `pred(lo)` true and `pred(hi)` false
/// until `hi - lo <= tol` (or the midpoint stops moving). Returns the final
/// bracket.
pub fn bisect<P: FnMut(f64) -> bool>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    for _ in 0..2000 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Second-order finite-difference derivative of samples on a nonuniform
/// grid (three-point stencils, one-sided at the ends).
pub fn derivative(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    assert!(n >= 3, "need at least three samples");
    let stencil = |i: usize, j: usize| {
        // derivative at xs[j] of the parabola through points i, i+1, i+2
        let (x0, x1, x2) = (xs[i], xs[i + 1], xs[i + 2]);
        let (y0, y1, y2) = (ys[i], ys[i + 1], ys[i + 2]);
        let x = xs[j];
        y0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2))
            + y1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2))
            + y2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))
    };
    let mut d = Vec::with_capacity(n);
    d.push(stencil(0, 0));
    for j in 1..n - 1 {
        d.push(stencil(j - 1, j));
    }
    d.push(stencil(n - 3, n - 1));
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn simpson_polynomial_and_log() {
        let v = adaptive_simpson(|x| x * x * x - x, 0.0, 2.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
        let v = adaptive_simpson(|x| 1.0 / x, 1.0, 2.0, 1e-12);
        assert!((v - core::f64::consts::LN_2).abs() < 1e-12);
        let v = adaptive_simpson(|y| 1.0 / math::sqrt(y), 0.25, 1.0, 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_threshold() {
        let (lo, hi) = bisect(|x| x * x <= 2.0, 0.0, 2.0, 1e-14);
        assert!(lo * lo <= 2.0 && hi * hi > 2.0);
        assert!((lo - core::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn derivative_exact_on_quadratics() {
        let xs: Vec<f64> = (0..20).map(|i| math::exp(0.1 * i as f64)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        for (x, d) in xs.iter().zip(derivative(&xs, &ys)) {
            assert!((d - (6.0 * x - 1.0)).abs() < 1e-9);
        }
    }
}
