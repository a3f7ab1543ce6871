//! Characteristic functions, the three-case classification, the integral
//! test near `0⁺`, and verdicts for the strong maximum principle.
//!
//! For a subequation `F` the upper and lower characteristic functions are
//!
//! ```text
//! f̄(λ) = sup{ μ : λP_{e⊥} − μP_e ∈ F for some unit e }
//! f̲(λ) = sup{ μ : λP_{e⊥} − μP_e ∈ F for all unit e }
//! ```
//!
//! with the extended-real conventions `sup ∅ = −∞` and `sup ℝ = +∞`. By
//! positivity the admissible `μ` form a closed lower ray, so each value is a
//! bracket-and-bisect problem. The sphere is sampled, so for entries that are
//! not orthogonally invariant `f̄` is an under-estimate and `f̲` an
//! over-estimate.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::functions::{IncreasingFn, KnownIntegral, MonotoneTable};
use crate::linalg::{norm, profile_matrix, SymMatrix};
use crate::math;
use crate::numerics::{adaptive_simpson, bisect};
use crate::random;
use crate::subequation::{positivity_check, SubequationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharFnConfig {
    /// Random unit directions sampled in addition to the coordinate axes.
    pub e_samples: usize,
    /// `μ` beyond which membership is reported as `+∞` (and below `−mu_cap`, `−∞`).
    pub mu_cap: f64,
    /// Absolute bisection tolerance on `μ`.
    pub tol: f64,
    pub seed: u64,
    /// Use a single direction for orthogonally invariant entries.
    pub exploit_invariance: bool,
    /// Hill-climb on the sphere from the best sampled direction.
    pub refine: bool,
}

impl Default for CharFnConfig {
    fn default() -> Self {
        Self { e_samples: 64, mu_cap: 1e12, tol: 1e-10, seed: 0, exploit_invariance: true, refine: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableMeta {
    pub spec_id: String,
    pub side: Side,
    pub e_samples: usize,
    pub tol: f64,
    pub mu_cap: f64,
}

/// Sampled `λ ↦ f(λ)` with explicit `±∞` sentinels.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CharacteristicTable {
    pub lambdas: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real::vec"))]
    pub values: Vec<f64>,
    pub meta: TableMeta,
}

impl CharacteristicTable {
    /// Nondecreasing up to `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] - slack || w[0] == f64::INFINITY && w[1] == f64::INFINITY)
    }

    /// Value at a grid point (exact match) or by interpolation.
    pub fn value_at(&self, lambda: f64) -> f64 {
        match self.lambdas.iter().position(|&l| l == lambda) {
            Some(i) => self.values[i],
            None => self.as_table().eval(lambda),
        }
    }

    fn as_table(&self) -> MonotoneTable {
        MonotoneTable { xs: self.lambdas.clone(), ys: self.values.clone() }
    }

    /// The `λ ≥ 0` part as a piecewise-linear increasing function.
    pub fn to_increasing_fn(&self) -> Result<IncreasingFn> {
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            self.lambdas.iter().zip(&self.values).filter(|(l, _)| **l >= 0.0).map(|(l, v)| (*l, *v)).unzip();
        let mut ys = ys;
        // absorb bisection noise so the table validates as nondecreasing
        for i in 1..ys.len() {
            if ys[i] < ys[i - 1] && ys[i - 1] - ys[i] <= self.meta.tol * 4.0 {
                ys[i] = ys[i - 1];
            }
        }
        Ok(IncreasingFn::Table(MonotoneTable::increasing(xs, ys)?))
    }
}

/// `{0} ∪ {10^{k/20} : −160 ≤ k ≤ 20}`: twenty points per decade on
/// `[1e-8, 10]`, hitting every power of ten exactly.
pub fn default_lambda_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend((-160..=20).map(|k| math::powf(10.0, k as f64 / 20.0)));
    g
}

/// `count` points from `lo` to `hi` (inclusive), equally spaced in `log`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let r = math::ln(hi / lo) / (count - 1) as f64;
    let mut g: Vec<f64> = (0..count).map(|i| lo * math::exp(r * i as f64)).collect();
    g[count - 1] = hi;
    g
}

/// `count` equally spaced points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(hi > lo && count >= 2);
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

/// `sup{ μ : λP_{e⊥} − μP_e ∈ F }` for one direction.
pub fn sup_mu(spec: &SubequationSpec, lambda: f64, e: &[f64], cfg: &CharFnConfig) -> Result<f64> {
    let mut err: Option<Error> = None;
    let mut member = |mu: f64| -> bool {
        match profile_matrix(e, lambda, -mu).and_then(|m| spec.member(&m, false)) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        }
    };
    let (lo, hi) = if member(0.0) {
        let (mut lo, mut hi) = (0.0, 1.0);
        while member(hi) {
            lo = hi;
            hi *= 2.0;
            if hi >= cfg.mu_cap {
                if member(cfg.mu_cap) {
                    return err.map_or(Ok(f64::INFINITY), Err);
                }
                hi = cfg.mu_cap;
                break;
            }
        }
        (lo, hi)
    } else {
        let (mut lo, mut hi) = (-1.0, 0.0);
        while !member(lo) {
            hi = lo;
            lo *= 2.0;
            if lo <= -cfg.mu_cap {
                if !member(-cfg.mu_cap) {
                    // sup ∅ = −∞
                    return err.map_or(Ok(f64::NEG_INFINITY), Err);
                }
                lo = -cfg.mu_cap;
                break;
            }
        }
        (lo, hi)
    };
    let (lo, hi) = bisect(&mut member, lo, hi, cfg.tol);
    // the admissible set must be a lower ray
    for probe in [lo - cfg.tol, lo - 1.0, lo - 1e3 * (1.0 + lo.abs())] {
        if !member(probe) {
            if let Some(e) = err {
                return Err(e);
            }
            return Err(Error::PositivityViolation(format!(
                "membership of λP_e⊥ − μP_e is not a lower ray in μ (λ = {lambda}, member at μ = {lo}, not at μ = {probe})"
            )));
        }
    }
    if member(hi + 1.0) {
        if let Some(e) = err {
            return Err(e);
        }
        return Err(Error::PositivityViolation(format!(
            "membership of λP_e⊥ − μP_e is not a lower ray in μ (λ = {lambda}, gap above μ = {hi})"
        )));
    }
    match err {
        Some(e) => Err(e),
        None => Ok(lo),
    }
}

fn directions(spec: &SubequationSpec, cfg: &CharFnConfig) -> Vec<Vec<f64>> {
    let n = spec.dim();
    let axis = |i: usize| {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    };
    if cfg.exploit_invariance && spec.is_orthogonally_invariant() {
        return vec![axis(0)];
    }
    let mut rng = random::rng(cfg.seed);
    let mut dirs: Vec<Vec<f64>> = (0..n).map(axis).collect();
    dirs.extend((0..cfg.e_samples).map(|_| random::unit_vector(&mut rng, n)));
    dirs
}

fn extremum(side: Side, a: f64, b: f64) -> f64 {
    match side {
        Side::Upper => a.max(b),
        Side::Lower => a.min(b),
    }
}

fn char_value_with(
    spec: &SubequationSpec,
    side: Side,
    lambda: f64,
    dirs: &[Vec<f64>],
    cfg: &CharFnConfig,
) -> Result<f64> {
    let mut best = match side {
        Side::Upper => f64::NEG_INFINITY,
        Side::Lower => f64::INFINITY,
    };
    let mut best_dir = 0;
    for (i, e) in dirs.iter().enumerate() {
        let v = sup_mu(spec, lambda, e, cfg)?;
        if extremum(side, v, best) != best || i == 0 {
            best = extremum(side, v, best);
            best_dir = i;
        }
    }
    if cfg.refine && dirs.len() > 1 && best.is_finite() {
        let mut rng = random::rng(cfg.seed ^ lambda.to_bits());
        let mut e = dirs[best_dir].clone();
        let mut step = 0.25;
        for _ in 0..48 {
            let mut cand: Vec<f64> = e.iter().map(|x| x + step * random::gaussian(&mut rng)).collect();
            let r = norm(&cand);
            cand.iter_mut().for_each(|x| *x /= r);
            let v = sup_mu(spec, lambda, &cand, cfg)?;
            if extremum(side, v, best) != best {
                best = extremum(side, v, best);
                e = cand;
            } else {
                step *= 0.8;
            }
        }
    }
    Ok(best)
}

/// `f̄(λ)` or `f̲(λ)` at a single point.
pub fn char_value(spec: &SubequationSpec, side: Side, lambda: f64, cfg: &CharFnConfig) -> Result<f64> {
    check_cfg(cfg)?;
    char_value_with(spec, side, lambda, &directions(spec, cfg), cfg)
}

fn check_cfg(cfg: &CharFnConfig) -> Result<()> {
    if !(cfg.tol > 0.0) || !(cfg.mu_cap > 0.0) || cfg.e_samples == 0 {
        return Err(invalid!("char_fn needs tol > 0, mu_cap > 0 and e_samples >= 1"));
    }
    Ok(())
}

/// Tabulates the upper or lower characteristic function on `grid`.
///
/// A short positivity audit runs first: the per-direction probes only see
/// violations that break the lower-ray shape near the bracket.
pub fn char_fn(spec: &SubequationSpec, side: Side, grid: &[f64], cfg: &CharFnConfig) -> Result<CharacteristicTable> {
    check_cfg(cfg)?;
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid!("lambda grid must be non-empty and strictly increasing"));
    }
    let audit = positivity_check(spec, 64, cfg.seed)?;
    if let Some((a, p)) = audit.witness {
        return Err(Error::PositivityViolation(format!(
            "{}: A ∈ F but A + P ∉ F for A = {:?}, P = {:?}",
            spec.id(),
            a.as_row_major(),
            p.as_row_major()
        )));
    }
    let dirs = directions(spec, cfg);
    let values = grid.iter().map(|&l| char_value_with(spec, side, l, &dirs, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(CharacteristicTable {
        lambdas: grid.to_vec(),
        values,
        meta: TableMeta { spec_id: spec.id(), side, e_samples: dirs.len(), tol: cfg.tol, mu_cap: cfg.mu_cap },
    })
}

// ---------------------------------------------------------------------------
// classification

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Case {
    /// `0 ∉ F`, equivalently `F ∩ (−P) = ∅`.
    Generic,
    /// `F ∩ (−P) = {0}`.
    Borderline,
    /// `(F − {0}) ∩ (−P) ≠ ∅`.
    Counterexample,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "type", rename_all = "kebab-case")
)]
pub enum Witness {
    /// `−μ P_e ∈ F`.
    NegativeProjector { mu: f64, e: Vec<f64>, matrix: SymMatrix },
    /// A nonzero `A ⪯ 0` in `F`.
    NegativeSemidefinite { matrix: SymMatrix },
}

impl Witness {
    /// `A` such that `⟨Ax, x⟩` violates the strong maximum principle.
    pub fn matrix(&self) -> &SymMatrix {
        match self {
            Witness::NegativeProjector { matrix, .. } | Witness::NegativeSemidefinite { matrix } => matrix,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Classification {
    pub case: Case,
    pub witness: Option<Witness>,
    /// `f̲(0)` for borderline entries; should vanish.
    pub lower_at_zero: Option<f64>,
    pub probes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub probe_mus: Vec<f64>,
    /// Random unit directions probed besides the axes.
    pub probe_directions: usize,
    /// Random nonzero negative semidefinite matrices probed.
    pub nsd_samples: usize,
    pub seed: u64,
    pub charfn: CharFnConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            probe_mus: vec![1e-8, 1e-4, 1e-2, 1.0, 1e2, 1e4],
            probe_directions: 16,
            nsd_samples: 64,
            seed: 0,
            charfn: CharFnConfig::default(),
        }
    }
}

/// Places `spec` in one of the three cases. A counterexample witness is exact;
/// the borderline verdict rests on the probes finding none.
pub fn classify(spec: &SubequationSpec, cfg: &ClassifyConfig) -> Result<Classification> {
    if cfg.probe_mus.is_empty() || cfg.probe_mus.iter().any(|m| !(*m > 0.0)) {
        return Err(invalid!("probe_mus must be non-empty and positive"));
    }
    let n = spec.dim();
    if !spec.member(&SymMatrix::zeros(n), false)? {
        return Ok(Classification { case: Case::Generic, witness: None, lower_at_zero: None, probes: 1 });
    }
    let mut rng = random::rng(cfg.seed);
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        })
        .collect();
    dirs.extend((0..cfg.probe_directions).map(|_| random::unit_vector(&mut rng, n)));

    let mut probes = 1;
    for e in &dirs {
        for &mu in &cfg.probe_mus {
            probes += 1;
            let m = profile_matrix(e, 0.0, -mu)?;
            if spec.member(&m, false)? {
                let witness = Witness::NegativeProjector { mu, e: e.clone(), matrix: m };
                return Ok(Classification {
                    case: Case::Counterexample,
                    witness: Some(witness),
                    lower_at_zero: None,
                    probes,
                });
            }
        }
    }
    for _ in 0..cfg.nsd_samples {
        probes += 1;
        let scale = math::powf(10.0, random::uniform(&mut rng, -4.0, 2.0));
        let m = random::random_psd(&mut rng, n).scale(-scale);
        if spec.member(&m, false)? {
            let witness = Witness::NegativeSemidefinite { matrix: m };
            return Ok(Classification {
                case: Case::Counterexample,
                witness: Some(witness),
                lower_at_zero: None,
                probes,
            });
        }
    }
    let f0 = char_value(spec, Side::Lower, 0.0, &cfg.charfn)?;
    Ok(Classification { case: Case::Borderline, witness: None, lower_at_zero: Some(f0), probes })
}

// ---------------------------------------------------------------------------
// integral test

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum IntegralOutcome {
    Divergent,
    Convergent,
    Inconclusive,
}

/// Verdict on `∫_{0+} dy/f(y)` with the dyadic evidence behind it.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegralVerdict {
    pub verdict: IntegralOutcome,
    /// `I_k = ∫ dy/f(y)` over `[2^{−k−1} y0, 2^{−k} y0]`.
    pub partial_sums: Vec<f64>,
    pub rationale: String,
    pub y0: f64,
    /// Set when the verdict follows from a closed-form antiderivative.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralConfig {
    /// Octaves computed before the first decision.
    pub octaves: usize,
    /// Octaves allowed when geometric decay is seen but the tail is not yet small.
    pub max_octaves: usize,
    pub window: usize,
    /// Divergent if `min` of the last window stays above `decay_floor · I_0`.
    pub decay_floor: f64,
    /// Geometric decay means every window ratio `I_{k+1}/I_k ≤ ratio_max`.
    pub ratio_max: f64,
    /// Convergent once the geometric tail bound is below `tail_rel · Σ I_k`.
    pub tail_rel: f64,
    pub quad_rel_tol: f64,
}

impl Default for IntegralConfig {
    fn default() -> Self {
        Self {
            octaves: 60,
            max_octaves: 1000,
            window: 10,
            decay_floor: 1e-3,
            ratio_max: 0.95,
            tail_rel: 1e-9,
            quad_rel_tol: 1e-9,
        }
    }
}

/// Dyadic integral test on an arbitrary increasing `f` with `f(0) = 0`.
/// `octave_limit` caps the number of octaves (tables cannot resolve below
/// their first positive grid point).
pub fn integral_test_numeric<F: Fn(f64) -> f64>(
    f: F,
    y0: f64,
    octave_limit: usize,
    cfg: &IntegralConfig,
) -> Result<IntegralVerdict> {
    if !(y0 > 0.0) || !y0.is_finite() {
        return Err(invalid!("y0 must be positive and finite"));
    }
    if cfg.window < 2 || cfg.octaves <= cfg.window {
        return Err(invalid!("integral test needs window >= 2 and octaves > window"));
    }
    let limit = octave_limit.min(cfg.max_octaves);
    let mut sums: Vec<f64> = Vec::new();
    let verdict = |v, sums: Vec<f64>, rationale: String| {
        Ok(IntegralVerdict { verdict: v, partial_sums: sums, rationale, y0, certified: false })
    };
    for k in 0..limit {
        let b = y0 * math::powf(2.0, -(k as f64));
        let a = 0.5 * b;
        let (fa, fb) = (f(a), f(b));
        if fa.is_nan() || fb.is_nan() || fa < 0.0 || fb < 0.0 {
            return Err(invalid!("f must be nonnegative on (0, y0]; f({a}) = {fa}, f({b}) = {fb}"));
        }
        if fa == 0.0 {
            return verdict(
                IntegralOutcome::Divergent,
                sums,
                format!("f vanishes on (0, {a:e}], so 1/f is not integrable"),
            );
        }
        let ik = adaptive_simpson(|y| 1.0 / f(y), a, b, cfg.quad_rel_tol);
        if !ik.is_finite() {
            return Err(Error::Numerical(format!("octave integral not finite at k = {k}")));
        }
        sums.push(ik);
        let done = sums.len();
        if done < cfg.octaves {
            continue;
        }
        let total: f64 = sums.iter().sum();
        if total == 0.0 {
            return verdict(IntegralOutcome::Convergent, sums, "1/f vanishes identically near 0".into());
        }
        let tail = &sums[done - cfg.window..];
        let ratio = tail.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).fold(0.0, f64::max);
        if ratio <= cfg.ratio_max {
            let bound = tail[cfg.window - 1] * ratio / (1.0 - ratio);
            if bound < cfg.tail_rel * total {
                return verdict(
                    IntegralOutcome::Convergent,
                    sums,
                    format!(
                        "geometric decay with ratio <= {ratio:.4} over {} octaves; tail bound {bound:e}",
                        cfg.window
                    ),
                );
            }
            continue;
        }
        let floor = tail.iter().copied().fold(f64::INFINITY, f64::min);
        if floor >= cfg.decay_floor * sums[0] {
            return verdict(
                IntegralOutcome::Divergent,
                sums,
                format!(
                    "octave integrals fail to decay: min of last {} is {floor:e} >= {} * I_0",
                    cfg.window, cfg.decay_floor
                ),
            );
        }
        return verdict(
            IntegralOutcome::Inconclusive,
            sums,
            format!("sub-geometric decay (max ratio {ratio:.4}) without stalling"),
        );
    }
    verdict(IntegralOutcome::Inconclusive, sums, format!("octave budget ({limit}) exhausted before a decision"))
}

/// Integral test on a closed form or table. Closed forms with a known
/// antiderivative override the numerical evidence and are marked certified.
pub fn integral_test(f: &IncreasingFn, y0: f64, cfg: &IntegralConfig) -> Result<IntegralVerdict> {
    f.validate()?;
    let limit = match f {
        IncreasingFn::Table(t) => {
            let first = t.xs.iter().copied().find(|&x| x > 0.0).unwrap_or(y0);
            if first >= y0 {
                0
            } else {
                math::floor(math::log2(y0 / first)) as usize
            }
        }
        _ => cfg.max_octaves,
    };
    let numeric = if limit > cfg.window {
        integral_test_numeric(
            |y| f.eval(y),
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
    Ok(match f.known_integral() {
        Some(k) => {
            let v = match k {
                KnownIntegral::Divergent => IntegralOutcome::Divergent,
                KnownIntegral::Convergent => IntegralOutcome::Convergent,
            };
            let agree = if v == numeric.verdict { "agrees" } else { "numerical evidence differs" };
            IntegralVerdict {
                verdict: v,
                rationale: format!("closed form {}: antiderivative known ({agree}: {})", f.label(), numeric.rationale),
                certified: true,
                ..numeric
            }
        }
        None => numeric,
    })
}

/// Default right end for the integral test of a closed form.
pub fn default_y0(f: &IncreasingFn) -> f64 {
    match f.increasing_end() {
        Some(end) => (0.5 * end).min(1.0),
        None => 1.0,
    }
}

// ---------------------------------------------------------------------------
// strong maximum principle

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SmpOutcome {
    Holds,
    Fails,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmpReport {
    pub spec_id: String,
    pub verdict: SmpOutcome,
    pub classification: Classification,
    pub rationale: Vec<String>,
    pub upper: Option<IntegralVerdict>,
    pub lower: Option<IntegralVerdict>,
    /// `A` with `⟨Ax, x⟩` a counterexample, in the counterexample case.
    pub counterexample_quadratic: Option<SymMatrix>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SmpConfig {
    pub classify: ClassifyConfig,
    pub charfn: CharFnConfig,
    pub integral: IntegralConfig,
}

/// Generic ⇒ holds; counterexample ⇒ fails; borderline ⇒ holds if
/// `∫ dy/f̄ = ∞`, fails if `∫ dy/f̲ < ∞`, otherwise undetermined.
pub fn smp_verdict(spec: &SubequationSpec, cfg: &SmpConfig) -> Result<SmpReport> {
    let classification = classify(spec, &cfg.classify)?;
    let mut rationale = Vec::new();
    let report = |verdict, rationale, upper, lower, quad, classification| SmpReport {
        spec_id: spec.id(),
        verdict,
        classification,
        rationale,
        upper,
        lower,
        counterexample_quadratic: quad,
    };
    match classification.case {
        Case::Generic => {
            rationale.push("0 is not in F, so F meets -P trivially: generic case".into());
            Ok(report(SmpOutcome::Holds, rationale, None, None, None, classification))
        }
        Case::Counterexample => {
            let a = classification.witness.as_ref().map(|w| w.matrix().clone());
            rationale.push("nonzero A <= 0 lies in F: the quadratic <Ax,x> is a counterexample".into());
            Ok(report(SmpOutcome::Fails, rationale, None, None, a, classification))
        }
        Case::Borderline => {
            rationale.push("F ∩ (−P) = {0}: borderline, decided by the integral test".into());
            let (upper, lower) = match spec.closed_form_characteristic() {
                Some(f) => {
                    rationale.push(format!("characteristic function in closed form: {}", f.label()));
                    let v = integral_test(&f, default_y0(&f), &cfg.integral)?;
                    (v.clone(), v)
                }
                None => {
                    let grid = default_lambda_grid();
                    let up = char_fn(spec, Side::Upper, &grid, &cfg.charfn)?.to_increasing_fn()?;
                    let lo = char_fn(spec, Side::Lower, &grid, &cfg.charfn)?.to_increasing_fn()?;
                    rationale.push("characteristic functions tabulated numerically (heuristic verdict)".into());
                    (integral_test(&up, 1.0, &cfg.integral)?, integral_test(&lo, 1.0, &cfg.integral)?)
                }
            };
            rationale.push(format!("upper integral: {:?} ({})", upper.verdict, upper.rationale));
            rationale.push(format!("lower integral: {:?} ({})", lower.verdict, lower.rationale));
            let verdict = if upper.verdict == IntegralOutcome::Divergent {
                rationale.push("∫ dy/f̄ = ∞ near 0: SMP holds".into());
                SmpOutcome::Holds
            } else if lower.verdict == IntegralOutcome::Convergent {
                rationale.push("∫ dy/f̲ < ∞ near 0: SMP fails (radial counterexample exists)".into());
                SmpOutcome::Fails
            } else {
                rationale.push("neither integral criterion fires: undetermined".into());
                SmpOutcome::Undetermined
            };
            Ok(report(verdict, rationale, Some(upper), Some(lower), None, classification))
        }
    }
}

// ---------------------------------------------------------------------------
// cones

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConeInvariants {
    /// `f(1)`
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real"))]
    pub alpha: f64,
    /// `−f(−1)`
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real"))]
    pub alpha_star: f64,
    /// Riesz characteristic `α + 1`.
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real"))]
    pub riesz_p: f64,
    /// Holds iff `α < ∞`.
    pub smp: SmpOutcome,
}

/// Numerical invariants of a cone subequation. The cone property is audited
/// on random and sampled-member matrices scaled by powers of two.
pub fn cone_invariants(spec: &SubequationSpec, cfg: &CharFnConfig, trials: usize) -> Result<ConeInvariants> {
    let mut rng = random::rng(cfg.seed);
    let n = spec.dim();
    for i in 0..trials {
        let a = if i % 2 == 0 {
            random::gaussian_sym(&mut rng, n)
        } else {
            match spec.sample_member(&mut rng)? {
                Some(a) => a,
                None => continue,
            }
        };
        let base = spec.member(&a, false)?;
        for t in [0.25, 0.5, 2.0, 4.0, 1024.0] {
            if spec.member(&a.scale(t), false)? != base {
                return Err(Error::Precondition(format!(
                    "{} is not a cone: membership of A changes under scaling by {t} (A = {:?})",
                    spec.id(),
                    a.as_row_major()
                )));
            }
        }
    }
    let alpha = char_value(spec, Side::Upper, 1.0, cfg)?;
    let alpha_star = -char_value(spec, Side::Upper, -1.0, cfg)?;
    Ok(ConeInvariants {
        alpha,
        alpha_star,
        riesz_p: alpha + 1.0,
        smp: if alpha < f64::INFINITY { SmpOutcome::Holds } else { SmpOutcome::Fails },
    })
}

// ---------------------------------------------------------------------------
// containment

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContainmentReport {
    pub samples: usize,
    /// Some `A ∈ F_a ∖ F_b`.
    pub witness: Option<SymMatrix>,
}

/// One-sided check of `F_a ⊂ F_b` on the Frobenius ball of the given radius:
/// alternates uniform ball samples with sampled members of `F_a`.
pub fn containment_check(
    a: &SubequationSpec,
    b: &SubequationSpec,
    trials: usize,
    seed: u64,
    radius: f64,
) -> Result<ContainmentReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if !(radius > 0.0) {
        return Err(invalid!("radius must be positive"));
    }
    let n = a.dim();
    let mut rng = random::rng(seed);
    for t in 0..trials {
        let x = if t % 2 == 0 {
            let d = random::gaussian_sym(&mut rng, n);
            let r = d.frobenius_norm();
            d.scale(radius * random::uniform(&mut rng, 0.0, 1.0) / r)
        } else {
            match a.sample_member(&mut rng)? {
                Some(m) if m.frobenius_norm() <= radius => m,
                _ => continue,
            }
        };
        if a.member(&x, false)? && !b.member(&x, false)? {
            return Ok(ContainmentReport { samples: t + 1, witness: Some(x) });
        }
    }
    Ok(ContainmentReport { samples: trials, witness: None })
}
