//! Monotonicity subequations: `M_F = {A : F + A ⊂ F}` and the family
//! `M(g) = {tr A ≥ 0, λ_min(A) ≥ g(tr A)}`, with the additivity audits and
//! the strong-comparison report built on the dual's characteristic function.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::characteristic::{
    classify, default_lambda_grid, default_y0, integral_test, Case, CharacteristicTable, ClassifyConfig,
    IntegralConfig, IntegralOutcome, IntegralVerdict, Side, TableMeta,
};
use crate::error::{invalid, Error, Result};
use crate::functions::{GFunction, IncreasingFn};
use crate::linalg::SymMatrix;
use crate::math;
use crate::numerics::bisect;
use crate::random;
use crate::subequation::SubequationSpec;

/// The shift extension `g(x) = k g(a) + g(x − k a)` for `k a ≤ x ≤ (k+1) a`.
/// Requires `g` concave on its base interval `[0, a]`.
pub fn subadditive_extend(g: &GFunction, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid!("x must be nonnegative, got {x}"));
    }
    if !g.is_concave_on_base() {
        return Err(Error::Precondition(format!("{} is not concave on its base interval", g.label())));
    }
    GFunction { extended: true, ..g.clone() }.eval(x)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "level", rename_all = "kebab-case")
)]
pub enum AdditivityWitness {
    /// `g(x + y) > g(x) + g(y)`.
    Scalar { x: f64, y: f64, g_sum: f64, sum_g: f64 },
    /// `A, B ∈ M(g)` with `A + B ∉ M(g)`.
    Matrix { a: SymMatrix, b: SymMatrix },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdditivityReport {
    pub scalar_pass: bool,
    pub matrix_pass: bool,
    pub trials: usize,
    /// First failure found at each level.
    pub witnesses: Vec<AdditivityWitness>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.scalar_pass && self.matrix_pass
    }
}

fn sample_span(g: &GFunction) -> f64 {
    if g.domain_end.is_finite() {
        4.0 * g.domain_end
    } else {
        4.0
    }
}

/// A boundary point of `M(g)`: trace `x`, `λ_min = g(x)` in the first slot,
/// the remaining trace spread evenly.
fn boundary_diag(g: &GFunction, x: f64, n: usize) -> Result<Vec<f64>> {
    let gx = g.eval(x)?;
    let rest = if n > 1 { (x - gx) / (n - 1) as f64 } else { 0.0 };
    let mut d = alloc::vec![rest; n];
    d[0] = if n > 1 { gx } else { x };
    Ok(d)
}

/// Audits `M(g) + M(g) ⊂ M(g)` on matrices and `g(x + y) ≤ g(x) + g(y)` on
/// scalars. Half the matrix pairs share an eigenframe, which is where a
/// failure of subadditivity shows up.
pub fn additivity_check(g: &GFunction, n: usize, trials: usize, seed: u64) -> Result<AdditivityReport> {
    if trials == 0 {
        return Err(invalid!("trials must be at least 1"));
    }
    let spec = SubequationSpec::mg(g.clone(), n)?;
    let loose = spec.clone().with_slack(1e-9);
    let mut rng = random::rng(seed);
    let span = sample_span(g);
    let mut witnesses = Vec::new();

    let mut scalar_pass = true;
    let probes = [(1.0, 1.0), (0.5, 0.5), (2.0, 2.0)];
    for t in 0..trials {
        let (x, y) = match probes.get(t) {
            Some(&p) => p,
            None => (random::uniform(&mut rng, 0.0, span), random::uniform(&mut rng, 0.0, span)),
        };
        let (gx, gy, gxy) = (g.eval(x)?, g.eval(y)?, g.eval(x + y)?);
        let slack = 1e-12 * (gx.abs() + gy.abs() + gxy.abs());
        if gxy > gx + gy + slack {
            scalar_pass = false;
            witnesses.push(AdditivityWitness::Scalar { x, y, g_sum: gxy, sum_g: gx + gy });
            break;
        }
    }

    let mut matrix_pass = true;
    for t in 0..trials {
        let x = random::uniform(&mut rng, 0.0, span);
        let y = random::uniform(&mut rng, 0.0, span);
        let (a, b) = if t % 2 == 0 {
            (SymMatrix::from_diag(&boundary_diag(g, x, n)?), SymMatrix::from_diag(&boundary_diag(g, y, n)?))
        } else {
            let qa = random::haar_orthogonal(&mut rng, n);
            let qb = random::haar_orthogonal(&mut rng, n);
            let a = SymMatrix::from_diag(&boundary_diag(g, x, n)?).conjugate(&qa.transpose());
            let b = match spec.sample_member(&mut rng)? {
                Some(m) => m,
                None => SymMatrix::from_diag(&boundary_diag(g, y, n)?).conjugate(&qb.transpose()),
            };
            (a, b)
        };
        if !loose.member(&a, false)? || !loose.member(&b, false)? {
            continue;
        }
        if !loose.member(&(&a + &b), false)? {
            matrix_pass = false;
            witnesses.push(AdditivityWitness::Matrix { a, b });
            break;
        }
    }
    Ok(AdditivityReport { scalar_pass, matrix_pass, trials, witnesses })
}

/// The explicit form of the dual of `M(g)`: `tr A ≥ 0` or `λ_max(A) ≥ −g(−tr A)`.
pub fn mg_dual_explicit(g: &GFunction, a: &SymMatrix) -> Result<bool> {
    let t = a.trace();
    if t >= 0.0 {
        return Ok(true);
    }
    Ok(a.lambda_max()? >= -g.eval(-t)?)
}

/// `f(λ) = g⁻¹(−λ) + (n − 1)λ` on `λ ≥ 0`, the characteristic function of the
/// dual of `M(g)`. `+∞` where `−λ` lies below the range of `g`.
pub fn mg_dual_char(g: &GFunction, n: usize, grid: &[f64]) -> Result<CharacteristicTable> {
    if grid.iter().any(|&l| !(l >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid!("grid must be increasing and lie in [0, ∞)"));
    }
    g.audit()?;
    let f = IncreasingFn::MgDual { g: g.clone(), dim: n };
    let spec = SubequationSpec::mg(g.clone(), n)?.dual();
    Ok(CharacteristicTable {
        lambdas: grid.to_vec(),
        values: grid.iter().map(|&l| f.eval(l)).collect(),
        meta: TableMeta { spec_id: spec.id(), side: Side::Upper, e_samples: 0, tol: 0.0, mu_cap: f64::INFINITY },
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotonicityVerdict {
    /// No sampled `B ∈ F` had `B + A ∉ F`.
    pub consistent: bool,
    pub samples: usize,
    pub witness: Option<SymMatrix>,
}

/// One-sided test of `A ∈ M_F`: samples `B ∈ F`, mostly on `∂F` along rays
/// from an interior point `cI`, and checks `B + A ∈ F`.
pub fn monotonicity_membership(
    spec: &SubequationSpec,
    a: &SymMatrix,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityVerdict> {
    if trials == 0 {
        return Err(invalid!("trials must be at least 1"));
    }
    let n = spec.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
    }
    let check = spec.clone().with_slack(spec.slack().max(1e-9));
    let mut c = 1.0;
    while !spec.member(&SymMatrix::scalar(n, c), true)? {
        c *= 2.0;
        if c > 1e8 {
            return Err(Error::Precondition(format!("no interior point cI of {} with c <= 1e8", spec.id())));
        }
    }
    let center = SymMatrix::scalar(n, c);
    let far = 1e6 * (1.0 + c);
    let mut rng = random::rng(seed);
    let mut samples = 0;
    let include_zero = spec.member(&SymMatrix::zeros(n), false)?;
    for t in 0..trials {
        let b = if t == 0 && include_zero {
            SymMatrix::zeros(n)
        } else {
            let d = random::gaussian_sym(&mut rng, n);
            let d = d.scale(1.0 / d.frobenius_norm());
            let at = |r: f64| center.combine(1.0, &d, r);
            if spec.member(&at(far), false)? {
                at(random::uniform(&mut rng, 0.0, far))
            } else {
                let (lo, _) = bisect(|r| spec.member(&at(r), false).unwrap_or(false), 0.0, far, 1e-12 * (1.0 + c));
                at(lo)
            }
        };
        samples += 1;
        if !check.member(&(&b + a), false)? {
            return Ok(MonotonicityVerdict { consistent: false, samples, witness: Some(b) });
        }
    }
    if samples == 0 {
        return Err(Error::Precondition("sampler found no member of F".into()));
    }
    Ok(MonotonicityVerdict { consistent: true, samples, witness: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScpOutcome {
    Holds,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScpReport {
    pub g: String,
    pub n: usize,
    pub additivity: AdditivityReport,
    pub dual_case: Case,
    pub dual_borderline: bool,
    pub dual_char: CharacteristicTable,
    pub integral: IntegralVerdict,
    pub scp: ScpOutcome,
    pub rationale: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScpConfig {
    pub trials: usize,
    pub seed: u64,
    pub classify: ClassifyConfig,
    pub integral: IntegralConfig,
    pub grid: Vec<f64>,
}

impl Default for ScpConfig {
    fn default() -> Self {
        Self {
            trials: 2000,
            seed: 0,
            classify: ClassifyConfig::default(),
            integral: IntegralConfig::default(),
            grid: default_lambda_grid(),
        }
    }
}

/// Strong comparison for `M(g)`: holds when `M(g)` is additive, its dual is
/// borderline and the dual's characteristic function has a divergent integral.
pub fn scp_report(g: &GFunction, n: usize, cfg: &ScpConfig) -> Result<ScpReport> {
    let mut rationale = Vec::new();
    let additivity = additivity_check(g, n, cfg.trials, cfg.seed)?;
    rationale.push(if additivity.passed() {
        "M(g) + M(g) ⊂ M(g) on all samples".into()
    } else {
        "additivity fails: g is not subadditive".into()
    });
    let dual = SubequationSpec::mg(g.clone(), n)?.dual();
    let dual_case = classify(&dual, &cfg.classify)?.case;
    let dual_borderline = dual_case == Case::Borderline;
    rationale.push(format!("dual of M(g) classified {dual_case:?}"));
    let dual_char = mg_dual_char(g, n, &cfg.grid)?;
    let f = IncreasingFn::MgDual { g: g.clone(), dim: n };
    let integral = integral_test(&f, default_y0(&f), &cfg.integral)?;
    rationale.push(format!("∫ dy/f near 0: {:?} ({})", integral.verdict, integral.rationale));
    let scp = if additivity.passed() && dual_borderline && integral.verdict == IntegralOutcome::Divergent {
        rationale.push("SMP holds for the dual and M(g) is a monotonicity cone for itself: SCP holds".into());
        ScpOutcome::Holds
    } else {
        rationale.push("a gate failed: SCP not established".into());
        ScpOutcome::Unknown
    };
    Ok(ScpReport { g: g.label(), n, additivity, dual_case, dual_borderline, dual_char, integral, scp, rationale })
}

/// The `β` with `log β² − 1 = α + n − 1`, matching the Hopf barrier to the
/// logarithmic family.
pub fn hopf_beta_for(alpha: f64, n: usize) -> f64 {
    math::exp(0.5 * (alpha + n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_value_and_precondition() {
        let g = GFunction::neg_power(1.0, 2.0).with_domain(1.0, false).unwrap();
        assert_eq!(subadditive_extend(&g, 2.5).unwrap(), -2.25);
        assert_eq!(subadditive_extend(&g, 0.5).unwrap(), -0.25);
        let convex = GFunction::neg_sqrt().with_domain(1.0, false).unwrap();
        assert!(matches!(subadditive_extend(&convex, 2.5), Err(Error::Precondition(_))));
        assert!(subadditive_extend(&g, -1.0).is_err());
    }

    #[test]
    fn rational_g_fails_at_one_one() {
        let r = additivity_check(&GFunction::neg_rational(), 2, 500, 3).unwrap();
        assert!(!r.scalar_pass && !r.matrix_pass);
        match &r.witnesses[0] {
            AdditivityWitness::Scalar { x, y, .. } => assert_eq!((*x, *y), (1.0, 1.0)),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn concave_g_is_additive() {
        let g = GFunction::neg_power(1.0, 2.0).with_domain(1.0, true).unwrap();
        assert!(additivity_check(&g, 3, 2000, 1).unwrap().passed());
    }

    #[test]
    fn dual_char_of_neg_sqrt() {
        let t = mg_dual_char(&GFunction::neg_sqrt(), 2, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(t.values, alloc::vec![0.0, 2.0, 6.0]);
    }

    #[test]
    fn pos_monotonicity() {
        let pos = SubequationSpec::pos(2);
        let v = monotonicity_membership(&pos, &SymMatrix::from_diag(&[-1.0, 0.0]), 100, 0).unwrap();
        assert!(!v.consistent);
        assert!(v.witness.unwrap().frobenius_norm() < 1e-9);
        let v = monotonicity_membership(&pos, &SymMatrix::from_diag(&[1.0, 0.5]), 200, 0).unwrap();
        assert!(v.consistent);
    }
}
