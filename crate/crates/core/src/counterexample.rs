//! Explicit radial counterexamples to the strong maximum principle.
//!
//! Given `f` with `∫_{0+} dy/(y + f(y)) < ∞`, let `s(y) = ∫₀^y dt/(t + f(t))`,
//! `s₀ = s(y0)`, `t₀ = e^{s₀}` and `φ′(s) = y(s₀ − s)`. Then
//! `φ″ + φ′ + f(φ′) = 0`, and `ψ′(t) = t φ′(log t)` on `[1, t₀]`, `ψ ≡ m` on
//! `[t₀, ∞)` solves `ψ″ + f(ψ′/t) = 0`: an increasing subharmonic profile
//! that attains its maximum on an open set.

use alloc::format;
use alloc::vec::Vec;

use crate::characteristic::{geometric_grid, integral_test_numeric, IntegralConfig, IntegralOutcome, IntegralVerdict};
use crate::error::{invalid, Error, Result};
use crate::functions::{IncreasingFn, KnownIntegral, MonotoneTable};
use crate::math;
use crate::numerics::{adaptive_simpson, derivative};
use crate::radial::RadialFunction;

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionConfig {
    pub y0: f64,
    /// Points of the `t`-grid on `[1, t₀]`.
    pub grid: usize,
    /// Extra points on the plateau `(t₀, 2t₀]`.
    pub plateau_points: usize,
    /// The `s`-table runs down to `y0 · y_floor`.
    pub y_floor: f64,
    pub y_segments: usize,
    pub integral: IntegralConfig,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        Self {
            y0: 1.0,
            grid: 4096,
            plateau_points: 64,
            y_floor: 1e-30,
            y_segments: 2000,
            integral: IntegralConfig::default(),
        }
    }
}

/// `φ` and its derivatives on `s ∈ [0, s₀]`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Profile {
    pub s: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstructionRecord {
    pub f: IncreasingFn,
    pub y0: f64,
    pub s0: f64,
    pub t0: f64,
    pub m: f64,
    pub quad_tol: f64,
    /// Cumulative `s(y)` on a geometric `y`-grid.
    pub s_of_y: MonotoneTable,
    /// Power `p` of the model `f(y) ~ c y^p` used below the first `y` node.
    pub tail_exponent: f64,
    /// `y(s)` at the `s`-values used by the `t`-grid.
    pub y_of_s: MonotoneTable,
    pub phi: Profile,
    pub psi: RadialFunction,
    /// Verdict on `∫ dy/(y + f(y))` that licensed the construction.
    pub certificate: IntegralVerdict,
    /// Steep rises in a tabulated `f` (slope above `1e8`), where the boundary
    /// converse of the construction can fail.
    pub f_jumps: usize,
}

/// Integral test on `y ↦ y + f(y)`, certified by `f`'s closed form when known.
pub fn shifted_integral_test(f: &IncreasingFn, y0: f64, cfg: &IntegralConfig) -> Result<IntegralVerdict> {
    let limit = match f {
        IncreasingFn::Table(t) => match t.xs.iter().copied().find(|&x| x > 0.0) {
            Some(first) if first < y0 => math::floor(math::log2(y0 / first)) as usize,
            _ => 0,
        },
        _ => cfg.max_octaves,
    };
    let mut v = if limit > cfg.window {
        integral_test_numeric(
            |y| y + f.eval(y),
            y0,
            limit,
            &IntegralConfig { octaves: cfg.octaves.min(limit), ..cfg.clone() },
        )?
    } else {
        IntegralVerdict {
            verdict: IntegralOutcome::Inconclusive,
            partial_sums: Vec::new(),
            rationale: "table too coarse near 0 for a dyadic test".into(),
            y0,
            certified: false,
        }
    };
    if let Some(k) = f.known_shifted_integral() {
        v.verdict = match k {
            KnownIntegral::Convergent => IntegralOutcome::Convergent,
            KnownIntegral::Divergent => IntegralOutcome::Divergent,
        };
        v.certified = true;
        v.rationale = format!("closed form {} (y + f): {}", f.label(), v.rationale);
    }
    Ok(v)
}

/// Cumulative `s(y)` with exact evaluation between grid points.
struct STable<'a> {
    f: &'a IncreasingFn,
    ys: Vec<f64>,
    ss: Vec<f64>,
    tail_exponent: f64,
    tol: f64,
}

impl<'a> STable<'a> {
    fn build(f: &'a IncreasingFn, y0: f64, cfg: &ConstructionConfig, tol: f64) -> Result<Self> {
        let ys = geometric_grid(y0 * cfg.y_floor, y0, cfg.y_segments + 1);
        let integrand = |y: f64| 1.0 / (y + f.eval(y));
        let y_min = ys[0];
        let (f1, f2) = (f.eval(y_min), f.eval(2.0 * y_min));
        // local power law f ~ c y^p below the grid
        let p = if f1 > 0.0 && f2 > 0.0 { math::log2(f2 / f1) } else { 1.0 };
        let tail_exponent = p.min(1.0);
        let head = if p < 1.0 && f1 > 0.0 { y_min / ((y_min + f1) * (1.0 - p)) } else { y_min * integrand(y_min) };
        let mut ss = Vec::with_capacity(ys.len());
        ss.push(head);
        for w in ys.windows(2) {
            let seg = adaptive_simpson(integrand, w[0], w[1], tol);
            if !(seg > 0.0) || !seg.is_finite() {
                return Err(Error::Numerical(format!("s-table segment on [{}, {}] is {seg}", w[0], w[1])));
            }
            ss.push(ss[ss.len() - 1] + seg);
        }
        Ok(Self { f, ys, ss, tail_exponent, tol })
    }

    fn s0(&self) -> f64 {
        self.ss[self.ss.len() - 1]
    }

    fn s_at(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y < self.ys[0] {
            return self.ss[0] * math::powf(y / self.ys[0], 1.0 - self.tail_exponent);
        }
        let i = (self.ys.partition_point(|&v| v <= y) - 1).min(self.ys.len() - 2);
        let f = self.f;
        self.ss[i] + adaptive_simpson(|t| 1.0 / (t + f.eval(t)), self.ys[i], y, self.tol)
    }

    fn y_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s < self.ss[0] {
            let q = 1.0 - self.tail_exponent;
            return if q > 0.0 { self.ys[0] * math::powf(s / self.ss[0], 1.0 / q) } else { 0.0 };
        }
        if s >= self.s0() {
            return self.ys[self.ys.len() - 1];
        }
        let i = self.ss.partition_point(|&v| v <= s) - 1;
        let (mut lo, mut hi) = (self.ys[i], self.ys[i + 1]);
        for _ in 0..200 {
            if hi - lo <= 1e-15 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.s_at(mid) <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn count_jumps(f: &IncreasingFn) -> usize {
    match f {
        IncreasingFn::Table(t) => {
            t.xs.windows(2)
                .zip(t.ys.windows(2))
                .filter(|(x, y)| y[1].is_finite() && (y[1] - y[0]) / (x[1] - x[0]) > 1e8)
                .count()
        }
        _ => 0,
    }
}

/// Builds the radial counterexample for `f`, refusing unless the integral
/// test certifies `∫_{0+} dy/(y + f(y)) < ∞`.
pub fn build_counterexample(
    f: &IncreasingFn,
    m: f64,
    quad_tol: f64,
    cfg: &ConstructionConfig,
) -> Result<ConstructionRecord> {
    f.validate()?;
    if !m.is_finite() || !(quad_tol > 0.0) {
        return Err(invalid!("m must be finite and quad_tol positive"));
    }
    let y0 = cfg.y0;
    if !(y0 > 0.0) || !y0.is_finite() {
        return Err(invalid!("y0 must be positive"));
    }
    if let Some(end) = f.increasing_end() {
        if y0 > end {
            return Err(invalid!("y0 = {y0} lies beyond the range where f is increasing ({end})"));
        }
    }
    if cfg.grid < 8 || cfg.plateau_points < 2 || cfg.y_segments < 8 {
        return Err(invalid!("construction grids are too small"));
    }
    if f.eval(0.0) != 0.0 {
        return Err(invalid!("f(0) must be 0"));
    }
    let probe = geometric_grid(y0 * 1e-12, y0, 257);
    if probe.windows(2).any(|w| f.eval(w[1]) < f.eval(w[0]) || f.eval(w[0]) < 0.0) {
        return Err(invalid!("f must be nonnegative and nondecreasing on (0, y0]"));
    }

    let certificate = shifted_integral_test(f, y0, &cfg.integral)?;
    if certificate.verdict != IntegralOutcome::Convergent {
        return Err(Error::Refused(alloc::boxed::Box::new(certificate)));
    }

    let table = STable::build(f, y0, cfg, quad_tol)?;
    let s0 = table.s0();
    let t0 = math::exp(s0);

    // t-grid: geometric on [1, t₀], then the plateau
    let mut ts = geometric_grid(1.0, t0, cfg.grid);
    let core_len = ts.len();
    ts.extend(geometric_grid(t0, 2.0 * t0, cfg.plateau_points + 1).into_iter().skip(1));

    let s_vals: Vec<f64> = ts[..core_len].iter().map(|&t| (s0 - math::ln(t)).max(0.0)).collect();
    let y_vals: Vec<f64> = s_vals.iter().map(|&s| table.y_at(s)).collect();
    let mut psi1: Vec<f64> = ts[..core_len].iter().zip(&y_vals).map(|(t, y)| t * y).collect();
    psi1[core_len - 1] = 0.0;
    psi1.resize(ts.len(), 0.0);

    let mut psi2 = derivative(&ts, &psi1);
    let mut flags = alloc::vec![false; ts.len()];
    flags[core_len - 1] = true;
    psi2[core_len - 1] = 0.0;
    for v in psi2[core_len..].iter_mut() {
        *v = 0.0;
    }

    // ψ anchored at ψ(t₀) = m, Simpson backwards with an exact midpoint slope
    let mut psi = alloc::vec![m; ts.len()];
    for i in (0..core_len - 1).rev() {
        let (a, b) = (ts[i], ts[i + 1]);
        let mid = 0.5 * (a + b);
        let mid_slope = mid * table.y_at((s0 - math::ln(mid)).max(0.0));
        let seg = (b - a) / 6.0 * (psi1[i] + 4.0 * mid_slope + psi1[i + 1]);
        psi[i] = psi[i + 1] - seg;
    }

    let psi_rf = RadialFunction::with_flags(ts.clone(), psi.clone(), psi1.clone(), psi2.clone(), flags, Some((t0, m)))?;

    // φ(s) = ψ(e^s), φ′(s) = y(s₀ − s), φ″ = −(φ′ + f(φ′))
    let phi = Profile {
        s: ts[..core_len].iter().map(|&t| math::ln(t)).collect(),
        phi: psi[..core_len].to_vec(),
        phi1: y_vals.clone(),
        phi2: y_vals.iter().map(|&y| -(y + f.eval(y))).collect(),
    };

    let mut pairs: Vec<(f64, f64)> = s_vals.iter().copied().zip(y_vals.iter().copied()).collect();
    pairs.reverse();
    pairs.dedup_by(|a, b| a.0 == b.0);
    let (sy_s, sy_y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    Ok(ConstructionRecord {
        f: f.clone(),
        y0,
        s0,
        t0,
        m,
        quad_tol,
        s_of_y: MonotoneTable::increasing(table.ys.clone(), table.ss.clone())?,
        tail_exponent: table.tail_exponent,
        y_of_s: MonotoneTable::increasing(sy_s, sy_y)?,
        phi,
        psi: psi_rf,
        certificate,
        f_jumps: count_jumps(f),
    })
}

impl ConstructionRecord {
    /// `s(y)` evaluated by quadrature (not interpolation).
    pub fn s_at(&self, y: f64) -> f64 {
        let table = STable {
            f: &self.f,
            ys: self.s_of_y.xs.clone(),
            ss: self.s_of_y.ys.clone(),
            tail_exponent: self.tail_exponent,
            tol: self.quad_tol,
        };
        table.s_at(y)
    }
}

/// Hopf barrier `ψ(t) = e^{−βR²/2} − e^{−βt²/2}` on `grid`; it solves
/// `ψ″ + f(ψ′/t) = 0` for `f(λ) = λ(log(β²/λ²) − 1)`.
pub fn hopf_function(beta: f64, r: f64, grid: Vec<f64>) -> Result<RadialFunction> {
    if !(beta > 0.0) || !(r > 0.0) || !beta.is_finite() || !r.is_finite() {
        return Err(invalid!("Hopf barrier needs beta > 0 and R > 0"));
    }
    let c = math::exp(-0.5 * beta * r * r);
    RadialFunction::from_fns(
        grid,
        |t| c - math::exp(-0.5 * beta * t * t),
        |t| beta * t * math::exp(-0.5 * beta * t * t),
        |t| beta * math::exp(-0.5 * beta * t * t) * (1.0 - beta * t * t),
    )
}

/// Geometric grid on `[R/64, 4R]`.
pub fn hopf_default_grid(r: f64, points: usize) -> Vec<f64> {
    geometric_grid(r / 64.0, 4.0 * r, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{radial_residual, smp_witness_check};

    fn small() -> ConstructionConfig {
        ConstructionConfig { grid: 512, y_segments: 400, ..Default::default() }
    }

    #[test]
    fn sqrt_construction_matches_closed_form() {
        let rec = build_counterexample(&IncreasingFn::sqrt(), 0.0, 1e-12, &small()).unwrap();
        assert!((rec.s0 - 2.0 * core::f64::consts::LN_2).abs() < 1e-10);
        assert!((rec.t0 - 4.0).abs() < 1e-9);
        let err = rec
            .psi
            .ts
            .iter()
            .zip(&rec.psi.psi1)
            .filter(|(t, _)| **t <= rec.t0)
            .map(|(t, p)| (p - (2.0 - math::sqrt(*t)) * (2.0 - math::sqrt(*t))).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
        assert!(smp_witness_check(&rec.psi));
        let r = radial_residual(&IncreasingFn::sqrt(), &rec.psi).unwrap();
        assert!(r.max_abs < 1e-5, "{}", r.max_abs);
    }

    #[test]
    fn linear_is_refused() {
        match build_counterexample(&IncreasingFn::identity(), 0.0, 1e-10, &small()) {
            Err(Error::Refused(v)) => assert_eq!(v.verdict, IntegralOutcome::Divergent),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hopf_residual() {
        let rf = hopf_function(10.0, 1.0, hopf_default_grid(1.0, 256)).unwrap();
        let r = radial_residual(&IncreasingFn::hopf(10.0), &rf).unwrap();
        assert!(r.max_abs < 1e-12);
        assert!(rf.psi1.iter().all(|&p| p > 0.0));
    }
}
