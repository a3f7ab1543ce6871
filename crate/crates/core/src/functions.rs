//! Scalar building blocks: increasing characteristic-type functions `f` with
//! `f(0) = 0`, and the decreasing functions `g` that cut out `M(g)`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::math;
use crate::numerics::bisect;

/// Piecewise-linear table `x ↦ y` on an ascending grid. Values may be `±∞`.
/// Evaluation outside the grid clamps to the nearest end value.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotoneTable {
    pub xs: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real::vec"))]
    pub ys: Vec<f64>,
}

impl MonotoneTable {
    /// Validates a nondecreasing table.
    pub fn increasing(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let t = Self::unchecked(xs, ys)?;
        if t.ys.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid!("table values must be nondecreasing"));
        }
        Ok(t)
    }

    /// Validates a nonincreasing table.
    pub fn decreasing(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let t = Self::unchecked(xs, ys)?;
        if t.ys.windows(2).any(|w| w[1] > w[0]) {
            return Err(invalid!("table values must be nonincreasing"));
        }
        Ok(t)
    }

    fn unchecked(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.is_empty() {
            return Err(invalid!("table needs matching, non-empty x and y columns"));
        }
        if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid!("table grid must be finite and strictly increasing"));
        }
        if ys.iter().any(|y| y.is_nan()) {
            return Err(invalid!("table values must not be NaN"));
        }
        Ok(Self { xs, ys })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Interpolated value and whether `x` fell outside the grid.
    pub fn eval_clamped(&self, x: f64) -> (f64, bool) {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return (self.ys[0], x < self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return (self.ys[n - 1], x > self.xs[n - 1]);
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
        if !y0.is_finite() || !y1.is_finite() {
            // extended-real segment: the sentinel wins on its open side
            let y = if x == x0 {
                y0
            } else if y1.is_infinite() {
                y1
            } else {
                y0
            };
            return (y, false);
        }
        (y0 + (y1 - y0) * (x - x0) / (x1 - x0), false)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_clamped(x).0
    }
}

/// Integral behaviour of `∫_{0+} dy / f(y)` known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum KnownIntegral {
    Divergent,
    Convergent,
}

/// An increasing function on `[0, ∞)` with `f(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "kebab-case")
)]
pub enum IncreasingFn {
    Zero,
    /// `slope · y`
    Linear {
        slope: f64,
    },
    /// `coeff · y^exponent`
    Power {
        coeff: f64,
        exponent: f64,
    },
    /// `y (offset − 2 ln y)`; increasing only for `y < exp((offset − 2)/2)`.
    LogLinear {
        offset: f64,
    },
    /// `g⁻¹(−y) + (dim − 1) y`, the characteristic function of the dual of `M(g)`.
    MgDual {
        g: GFunction,
        dim: usize,
    },
    Table(MonotoneTable),
}

impl IncreasingFn {
    pub fn sqrt() -> Self {
        IncreasingFn::Power { coeff: 1.0, exponent: 0.5 }
    }

    pub fn identity() -> Self {
        IncreasingFn::Linear { slope: 1.0 }
    }

    /// `λ (log(β²/λ²) − 1)`, the function annihilated by the Hopf barrier.
    pub fn hopf(beta: f64) -> Self {
        IncreasingFn::LogLinear { offset: 2.0 * math::ln(beta) - 1.0 }
    }

    /// `λ (α + n − 1 − 2 log λ)`.
    pub fn log_borderline(alpha: f64, n: usize) -> Self {
        IncreasingFn::LogLinear { offset: alpha + n as f64 - 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IncreasingFn::Zero => Ok(()),
            IncreasingFn::Linear { slope } if *slope >= 0.0 && slope.is_finite() => Ok(()),
            IncreasingFn::Power { coeff, exponent }
                if *coeff > 0.0 && *exponent > 0.0 && coeff.is_finite() && exponent.is_finite() =>
            {
                Ok(())
            }
            IncreasingFn::LogLinear { offset } if offset.is_finite() => Ok(()),
            IncreasingFn::MgDual { g, dim } if *dim >= 1 => g.audit(),
            IncreasingFn::Table(t) => {
                if t.ys.windows(2).any(|w| w[1] < w[0]) {
                    Err(invalid!("table must be nondecreasing"))
                } else {
                    Ok(())
                }
            }
            other => Err(invalid!("invalid increasing function parameters: {:?}", other)),
        }
    }

    /// Value at `y`. Zero, linear and power forms extend oddly to `y < 0`;
    /// the logarithmic forms return NaN there; tables clamp.
    pub fn eval(&self, y: f64) -> f64 {
        self.eval_clamped(y).0
    }

    /// Value at `y`, plus whether a table had to clamp.
    pub fn eval_clamped(&self, y: f64) -> (f64, bool) {
        let v = match self {
            IncreasingFn::Zero => 0.0,
            IncreasingFn::Linear { slope } => slope * y,
            IncreasingFn::Power { coeff, exponent } => coeff * math::odd_pow(y, *exponent),
            IncreasingFn::LogLinear { offset } => {
                if y == 0.0 {
                    0.0
                } else if y > 0.0 {
                    y * (offset - 2.0 * math::ln(y))
                } else {
                    f64::NAN
                }
            }
            IncreasingFn::MgDual { g, dim } => {
                if y < 0.0 {
                    f64::NAN
                } else {
                    g.inverse(-y) + (*dim as f64 - 1.0) * y
                }
            }
            IncreasingFn::Table(t) => return t.eval_clamped(y),
        };
        (v, false)
    }

    /// Largest `y` up to which the closed form is increasing, if bounded.
    pub fn increasing_end(&self) -> Option<f64> {
        match self {
            IncreasingFn::LogLinear { offset } => Some(math::exp((offset - 2.0) / 2.0)),
            IncreasingFn::Table(t) => Some(t.x_max()),
            _ => None,
        }
    }

    /// Closed-form behaviour of `∫_{0+} dy/f(y)`, when known.
    ///
    /// * `0` and `c·y`: logarithmic divergence.
    /// * `c·y^p`: antiderivative `y^{1−p}/(c(1−p))`, finite at `0` iff `p < 1`.
    /// * `y(c − 2 ln y)`: antiderivative `−½ ln(c − 2 ln y)`, divergent.
    /// * `g⁻¹(−y) + (n−1)y`: reduces to the cases above through `g`'s closed form.
    pub fn known_integral(&self) -> Option<KnownIntegral> {
        use KnownIntegral::*;
        match self {
            IncreasingFn::Zero | IncreasingFn::Linear { .. } => Some(Divergent),
            IncreasingFn::Power { exponent, .. } => Some(if *exponent < 1.0 { Convergent } else { Divergent }),
            IncreasingFn::LogLinear { .. } => Some(Divergent),
            IncreasingFn::MgDual { g, dim } => match &g.base {
                // g⁻¹(−y) = (y/c)^{1/p}
                GBase::NegPower { exponent, .. } => {
                    let inv_exp = 1.0 / exponent;
                    if *dim >= 2 && inv_exp >= 1.0 {
                        Some(Divergent)
                    } else {
                        Some(if inv_exp < 1.0 { Convergent } else { Divergent })
                    }
                }
                // g⁻¹(−y) = y/(1−y) ~ y
                GBase::NegRational => Some(Divergent),
                GBase::LogFamily { .. } => Some(Divergent),
                GBase::Table(_) => None,
            },
            IncreasingFn::Table(_) => None,
        }
    }

    /// Closed-form behaviour of `∫_{0+} dy/(y + f(y))`, the integral behind the
    /// shifted one-variable equation used by the counterexample construction.
    /// Every convergent closed form above is a sublinear power near `0` and every
    /// divergent one is `O(y log(1/y))`, so adding `y` preserves the verdict.
    pub fn known_shifted_integral(&self) -> Option<KnownIntegral> {
        self.known_integral()
    }

    pub fn label(&self) -> alloc::string::String {
        match self {
            IncreasingFn::Zero => "zero".into(),
            IncreasingFn::Linear { slope } => format!("linear(slope={slope})"),
            IncreasingFn::Power { coeff, exponent } => format!("power(coeff={coeff},exponent={exponent})"),
            IncreasingFn::LogLinear { offset } => format!("log-linear(offset={offset})"),
            IncreasingFn::MgDual { g, dim } => format!("mg-dual({},n={dim})", g.label()),
            IncreasingFn::Table(t) => format!("table({} points)", t.xs.len()),
        }
    }
}

/// Closed forms available for `g` on its base interval.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "kebab-case")
)]
pub enum GBase {
    /// `−coeff · x^exponent`
    NegPower { coeff: f64, exponent: f64 },
    /// `−x/(1+x)`; decreasing but not subadditive.
    NegRational,
    /// Defined through its inverse `g⁻¹(−λ) = λ(α − 2 ln λ)` for
    /// `0 ≤ λ ≤ lambda_end`.
    LogFamily { alpha: f64, lambda_end: f64 },
    /// Piecewise-linear samples starting at `(0, 0)`.
    Table(MonotoneTable),
}

/// A continuous decreasing `g` with `g(0) = 0` and `g < 0` on `(0, a]`.
///
/// Beyond `a` the function continues either by the subadditive shift
/// `g(x) = k g(a) + g(x − k a)` for `k a ≤ x ≤ (k+1) a` (`extended = true`) or
/// linearly with the left slope at `a`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GFunction {
    pub base: GBase,
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real"))]
    pub domain_end: f64,
    pub extended: bool,
}

fn log_family_h(alpha: f64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else {
        lambda * (alpha - 2.0 * math::ln(lambda))
    }
}

impl GFunction {
    pub fn neg_sqrt() -> Self {
        Self::neg_power(1.0, 0.5)
    }

    pub fn neg_power(coeff: f64, exponent: f64) -> Self {
        Self { base: GBase::NegPower { coeff, exponent }, domain_end: f64::INFINITY, extended: false }
    }

    pub fn neg_rational() -> Self {
        Self { base: GBase::NegRational, domain_end: f64::INFINITY, extended: false }
    }

    /// The logarithmic family with `g⁻¹(−λ) = λ(α − 2 log λ)`. The λ-range
    /// `[0, lambda_end]` is halved until `h′(λ) = α − 2 − 2 log λ > 0` holds on
    /// it; the result is extended subadditively.
    pub fn log_family(alpha: f64, lambda_end: f64) -> Result<Self> {
        if !alpha.is_finite() || !(lambda_end > 0.0) || !lambda_end.is_finite() {
            return Err(invalid!("log family needs finite alpha and positive lambda_end"));
        }
        let mut a = lambda_end;
        while alpha - 2.0 - 2.0 * math::ln(a) <= 0.0 {
            a *= 0.5;
        }
        Ok(Self { base: GBase::LogFamily { alpha, lambda_end: a }, domain_end: log_family_h(alpha, a), extended: true })
    }

    pub fn table(xs: Vec<f64>, gs: Vec<f64>, extended: bool) -> Result<Self> {
        let t = MonotoneTable::decreasing(xs, gs)?;
        if t.xs[0] != 0.0 || t.ys[0] != 0.0 {
            return Err(invalid!("g table must start at (0, 0)"));
        }
        if t.ys[1..].iter().any(|&g| !(g < 0.0) || !g.is_finite()) {
            return Err(invalid!("g table must be finite and negative for x > 0"));
        }
        let end = t.x_max();
        Ok(Self { base: GBase::Table(t), domain_end: end, extended })
    }

    /// Restricts the base interval to `[0, a]` and selects the continuation.
    pub fn with_domain(mut self, a: f64, extended: bool) -> Result<Self> {
        if !(a > 0.0) {
            return Err(invalid!("domain end must be positive"));
        }
        if let GBase::LogFamily { .. } | GBase::Table(_) = self.base {
            if a > self.domain_end {
                return Err(invalid!("cannot enlarge the base interval of a defined-by-samples g"));
            }
        }
        self.domain_end = a;
        self.extended = extended;
        Ok(self)
    }

    pub fn label(&self) -> alloc::string::String {
        let base = match &self.base {
            GBase::NegPower { coeff, exponent } => format!("neg-power(coeff={coeff},exponent={exponent})"),
            GBase::NegRational => "neg-rational".into(),
            GBase::LogFamily { alpha, lambda_end } => format!("log-family(alpha={alpha},lambda_end={lambda_end})"),
            GBase::Table(t) => format!("table({} points)", t.xs.len()),
        };
        format!("{base};a={};extended={}", self.domain_end, self.extended)
    }

    fn base_eval(&self, x: f64) -> f64 {
        match &self.base {
            GBase::NegPower { coeff, exponent } => -coeff * math::powf(x, *exponent),
            GBase::NegRational => -x / (1.0 + x),
            GBase::LogFamily { alpha, lambda_end } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let (lo, hi) = bisect(|l| log_family_h(*alpha, l) <= x, 0.0, *lambda_end, 0.0);
                let l = if x >= log_family_h(*alpha, *lambda_end) { *lambda_end } else { 0.5 * (lo + hi) };
                -l
            }
            GBase::Table(t) => t.eval(x),
        }
    }

    fn base_inverse(&self, y: f64) -> f64 {
        match &self.base {
            GBase::NegPower { coeff, exponent } => math::powf(-y / coeff, 1.0 / exponent),
            GBase::NegRational => {
                if y <= -1.0 {
                    f64::INFINITY
                } else {
                    -y / (1.0 + y)
                }
            }
            GBase::LogFamily { alpha, .. } => log_family_h(*alpha, -y),
            GBase::Table(t) => {
                // nonincreasing samples; smallest x with g(x) = y
                let i = t.ys.partition_point(|&g| g > y);
                if i == 0 {
                    return 0.0;
                }
                if i >= t.ys.len() {
                    return t.x_max();
                }
                let (x0, x1, g0, g1) = (t.xs[i - 1], t.xs[i], t.ys[i - 1], t.ys[i]);
                x0 + (x1 - x0) * (g0 - y) / (g0 - g1)
            }
        }
    }

    /// Left derivative of the base at `domain_end`.
    fn end_slope(&self) -> f64 {
        let a = self.domain_end;
        let slope = match &self.base {
            GBase::NegPower { coeff, exponent } => -coeff * exponent * math::powf(a, exponent - 1.0),
            GBase::NegRational => -1.0 / ((1.0 + a) * (1.0 + a)),
            GBase::LogFamily { alpha, .. } => {
                let l = -self.base_eval(a);
                -1.0 / (alpha - 2.0 - 2.0 * math::ln(l))
            }
            GBase::Table(t) => {
                let i = t.xs.partition_point(|&x| x < a).clamp(1, t.xs.len() - 1);
                (t.ys[i] - t.ys[i - 1]) / (t.xs[i] - t.xs[i - 1])
            }
        };
        if slope < 0.0 {
            slope
        } else {
            self.base_eval(a) / a
        }
    }

    /// `g(x)` for `x ≥ 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(invalid!("g is defined on [0, ∞); got {x}"));
        }
        let a = self.domain_end;
        if x <= a {
            return Ok(self.base_eval(x));
        }
        let ga = self.base_eval(a);
        if self.extended {
            let k = math::floor(x / a);
            let r = (x - k * a).clamp(0.0, a);
            Ok(k * ga + self.base_eval(r))
        } else {
            Ok(ga + self.end_slope() * (x - a))
        }
    }

    /// The `x ≥ 0` with `g(x) = y` for `y ≤ 0` (`+∞` when `y` is below the
    /// range of `g`).
    pub fn inverse(&self, y: f64) -> f64 {
        if y >= 0.0 {
            return 0.0;
        }
        let a = self.domain_end;
        if a.is_infinite() {
            return self.base_inverse(y);
        }
        let ga = self.base_eval(a);
        if y >= ga {
            return self.base_inverse(y).min(a);
        }
        if self.extended {
            let k = math::floor(y / ga);
            let rem = y - k * ga;
            if rem >= 0.0 {
                return k * a;
            }
            k * a + self.base_inverse(rem).min(a)
        } else {
            a + (y - ga) / self.end_slope()
        }
    }

    /// Audits `g(0) = 0`, strict negativity and monotone decrease on a
    /// 1000-point grid over the base interval (or `[0, 4]` when unbounded).
    pub fn audit(&self) -> Result<()> {
        let span = if self.domain_end.is_finite() { self.domain_end } else { 4.0 };
        if self.eval(0.0)? != 0.0 {
            return Err(invalid!("g(0) must be 0"));
        }
        let mut prev = 0.0;
        for i in 1..=1000 {
            let x = span * i as f64 / 1000.0;
            let g = self.eval(x)?;
            if !(g < 0.0) {
                return Err(invalid!("g must be negative on (0, a]; g({x}) = {g}"));
            }
            if g > prev {
                return Err(invalid!("g must be decreasing; increases near x = {x}"));
            }
            prev = g;
        }
        Ok(())
    }

    /// Concavity on the base interval via second differences.
    pub fn is_concave_on_base(&self) -> bool {
        let span = if self.domain_end.is_finite() { self.domain_end } else { 4.0 };
        let pts: Vec<f64> = (0..=1000).map(|i| self.base_eval(span * i as f64 / 1000.0)).collect();
        let scale = pts.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        pts.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] <= 1e-12 * scale)
    }
}
