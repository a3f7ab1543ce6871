//! End-to-end acceptance suite. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use smp_core::characteristic::{
    char_fn, char_value, classify, cone_invariants, containment_check, geometric_grid, smp_verdict, Case, CharFnConfig,
    ClassifyConfig, IntegralOutcome, Side, SmpConfig, SmpOutcome, Witness,
};
use smp_core::counterexample::{build_counterexample, hopf_default_grid, hopf_function, ConstructionConfig};
use smp_core::functions::{GFunction, IncreasingFn};
use smp_core::linalg::{eigen_sorted, Matrix, SymMatrix};
use smp_core::monotonicity::{mg_dual_char, mg_dual_explicit};
use smp_core::radial::{radial_residual, reduce_test_function, smp_witness_check};
use smp_core::random::{self, SeededRng};
use smp_core::subequation::{positivity_check, SubequationSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TRIALS: usize = 10_000;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit, format!("{what} took {:.2}s (limit {limit}s)", elapsed.as_secs_f64()))
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

/// Matrices spread over several orders of magnitude.
fn random_matrix(rng: &mut SeededRng, n: usize) -> SymMatrix {
    let scale = 10f64.powf(random::uniform(rng, -2.0, 2.0));
    random::gaussian_sym(rng, n).scale(scale)
}

fn catalog(n: usize) -> Vec<SubequationSpec> {
    let mut v = vec![
        SubequationSpec::pos(n),
        SubequationSpec::subaffine(n),
        SubequationSpec::minmax_cone(0.5, n).unwrap(),
        SubequationSpec::pucci(1.0, 2.0, n).unwrap(),
        SubequationSpec::p_delta(0.3, n).unwrap(),
        SubequationSpec::sigma_psi_k(1.0 / 3.0, 1, n).unwrap(),
        SubequationSpec::sigma_psi_k(1.0, 2.min(n), n).unwrap(),
        SubequationSpec::minmax_f(IncreasingFn::sqrt(), n).unwrap(),
        SubequationSpec::mg(GFunction::neg_sqrt(), n).unwrap(),
        SubequationSpec::mg(GFunction::log_family(1.0, 0.1).unwrap(), n).unwrap(),
        SubequationSpec::half_space(1.0, n).unwrap(),
        SubequationSpec::diagonal_entry(0, n).unwrap(),
    ];
    if n >= 2 {
        v.push(SubequationSpec::min_two_f(IncreasingFn::identity(), n).unwrap());
    }
    let duals: Vec<_> = v.iter().map(|s| s.dual()).collect();
    v.extend(duals);
    v
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let spec = SubequationSpec::sigma_psi_k(1.0 / 3.0, 1, 3).map_err(e)?;
    let grid = geometric_grid(0.01, 10.0, 200);
    let table = char_fn(&spec, Side::Upper, &grid, &CharFnConfig::default()).map_err(e)?;
    let err = table.lambdas.iter().zip(&table.values).map(|(l, f)| (f - 8.0 * l).abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    check(err <= 1e-4, format!("max |f - 8λ| = {err:.3e}"))?;
    within(elapsed, 10.0, "char_fn")?;
    Ok(format!("max |f - 8λ| = {err:.2e} on 200 points in [0.01, 10], {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut rng = random::rng(2);
    let mut disagreements = 0usize;
    let mut checked = 0usize;
    for alpha in [0.25, 1.0, 4.0] {
        for n in [2, 3, 5] {
            let f = SubequationSpec::minmax_cone(alpha, n).map_err(e)?;
            let g = SubequationSpec::minmax_cone(1.0 / alpha, n).map_err(e)?;
            for _ in 0..TRIALS {
                let a = random_matrix(&mut rng, n);
                checked += 1;
                if f.dual_member(&a, false).map_err(e)? != g.member(&a, false).map_err(e)? {
                    disagreements += 1;
                }
            }
        }
    }
    check(disagreements == 0, format!("{disagreements} dual-table disagreements"))?;
    let mut involution = 0usize;
    for n in [2, 3, 5] {
        for spec in catalog(n) {
            let dd = spec.dual().dual();
            for _ in 0..TRIALS / 10 {
                let a = random_matrix(&mut rng, n);
                for strict in [false, true] {
                    checked += 1;
                    if dd.member(&a, strict).map_err(e)? != spec.member(&a, strict).map_err(e)? {
                        involution += 1;
                    }
                }
            }
        }
    }
    check(involution == 0, format!("{involution} involution disagreements"))?;
    Ok(format!("0 disagreements over {checked} memberships"))
}

fn criterion_3() -> Outcome {
    let cfg = ClassifyConfig::default();
    let n = 3;
    let cases = [
        (SubequationSpec::pos(n), Case::Borderline),
        (SubequationSpec::mg(GFunction::neg_sqrt(), n).map_err(e)?, Case::Borderline),
        (SubequationSpec::minmax_f(IncreasingFn::sqrt(), n).map_err(e)?, Case::Borderline),
        (SubequationSpec::min_two_f(IncreasingFn::sqrt(), n).map_err(e)?, Case::Borderline),
        (SubequationSpec::subaffine(n), Case::Counterexample),
        (SubequationSpec::half_space(1.0, n).map_err(e)?, Case::Generic),
    ];
    let mut slowest = 0.0f64;
    for (spec, want) in cases {
        let start = Instant::now();
        let c = classify(&spec, &cfg).map_err(e)?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed.as_secs_f64());
        check(c.case == want, format!("{}: {:?}, expected {want:?}", spec.id(), c.case))?;
        within(elapsed, 1.0, &spec.id())?;
        if want == Case::Counterexample {
            match &c.witness {
                Some(Witness::NegativeProjector { mu, e: dir, matrix }) => {
                    let expected = SymMatrix::outer(dir).scale(-mu);
                    let diff = (matrix - &expected).frobenius_norm();
                    check(*mu > 0.0 && diff < 1e-12, "witness is not -μ P_e")?;
                    check(spec.member(matrix, false).map_err(e)?, "witness is not a member")?;
                }
                other => return Err(format!("subaffine witness {other:?}")),
            }
        }
    }
    Ok(format!("6 specs classified as expected, slowest {slowest:.3}s"))
}

fn criterion_4() -> Outcome {
    let cfg = SmpConfig::default();
    let n = 3;
    let mut cases = vec![(SubequationSpec::pos(n), SmpOutcome::Holds)];
    for a in [1.0 / 3.0, 1.0, 3.0] {
        cases.push((SubequationSpec::sigma_psi_k(a, 1, n).map_err(e)?, SmpOutcome::Holds));
        cases.push((SubequationSpec::sigma_psi_k(a, 2, n).map_err(e)?, SmpOutcome::Holds));
    }
    cases.push((SubequationSpec::minmax_f(IncreasingFn::sqrt(), n).map_err(e)?, SmpOutcome::Fails));
    let g = GFunction::log_family(1.0, 0.1).map_err(e)?;
    cases.push((SubequationSpec::mg(g, n).map_err(e)?.dual(), SmpOutcome::Holds));
    let count = cases.len();
    for (spec, want) in cases {
        let report = smp_verdict(&spec, &cfg).map_err(e)?;
        check(report.verdict == want, format!("{}: {:?}, expected {want:?}", spec.id(), report.verdict))?;
        let json = serde_json::to_value(&report).map_err(e)?;
        let rationale = json["rationale"].as_array().map(Vec::len).unwrap_or(0);
        check(rationale > 0, format!("{}: empty serialized rationale", spec.id()))?;
        if matches!(spec.kind(), smp_core::subequation::Kind::Dual { .. }) {
            let upper = report.upper.as_ref().map(|v| v.verdict);
            check(upper == Some(IntegralOutcome::Divergent), format!("log-family dual upper integral {upper:?}"))?;
        }
    }
    Ok(format!("{count} verdicts as expected, rationales serialized"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let f = IncreasingFn::sqrt();
    let rec = build_counterexample(&f, 0.0, 1e-12, &ConstructionConfig::default()).map_err(e)?;
    let residual = radial_residual(&f, &rec.psi).map_err(e)?;
    let elapsed = start.elapsed();
    let t0 = rec.t0;
    let err = rec
        .psi
        .ts
        .iter()
        .zip(&rec.psi.psi1)
        .filter(|(t, _)| **t > 1.0 && **t < t0)
        .map(|(t, p)| (p - (t0.sqrt() - t.sqrt()).powi(2)).abs())
        .fold(0.0, f64::max);
    check(err <= 1e-6, format!("max |ψ' - closed form| = {err:.3e}"))?;
    check(residual.max_abs <= 1e-6, format!("max residual {:.3e}", residual.max_abs))?;
    check(smp_witness_check(&rec.psi), "smp_witness_check false")?;
    within(elapsed, 30.0, "construction")?;
    Ok(format!(
        "ψ' error {err:.2e}, residual {:.2e}, witness true, {} points, {:.2}s",
        residual.max_abs,
        rec.psi.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_6() -> Outcome {
    let (beta, r) = (10.0, 1.0);
    let rf = hopf_function(beta, r, hopf_default_grid(r, 4096)).map_err(e)?;
    let f = IncreasingFn::hopf(beta);
    for lam in [1e-3, 0.5, 2.0, 7.0] {
        let closed = lam * ((beta * beta / (lam * lam)).ln() - 1.0);
        check(
            (f.eval(lam) - closed).abs() <= 1e-12 * closed.abs().max(1.0),
            "Hopf f does not match λ(log(β²/λ²) − 1)",
        )?;
    }
    let res = radial_residual(&f, &rf).map_err(e)?;
    check(res.max_abs <= 1e-8, format!("max residual {:.3e}", res.max_abs))?;
    Ok(format!("max residual {:.2e} on 4096 points", res.max_abs))
}

fn criterion_7() -> Outcome {
    let n = 3;
    let mut msgs = Vec::new();
    for f in [IncreasingFn::sqrt(), IncreasingFn::identity()] {
        let lo = SubequationSpec::min_two_f(f.clone(), n).map_err(e)?;
        let hi = SubequationSpec::minmax_f(f.clone(), n).map_err(e)?;
        let fwd = containment_check(&lo, &hi, TRIALS, 7, 10.0).map_err(e)?;
        check(fwd.witness.is_none(), format!("{}: violation {:?}", f.label(), fwd.witness))?;
        let rev = containment_check(&hi, &lo, TRIALS, 7, 10.0).map_err(e)?;
        let w = rev.witness.ok_or_else(|| format!("{}: reversed containment not refuted", f.label()))?;
        check(hi.member(&w, false).map_err(e)? && !lo.member(&w, false).map_err(e)?, "bad reverse witness")?;
        msgs.push(format!("{}: 0/{} forward, reverse refuted at sample {}", f.label(), fwd.samples, rev.samples));
    }
    Ok(msgs.join("; "))
}

fn criterion_8() -> Outcome {
    let g = GFunction::neg_sqrt();
    let n = 2;
    let grid = geometric_grid(0.01, 5.0, 120);
    let explicit = mg_dual_char(&g, n, &grid).map_err(e)?;
    let dual = SubequationSpec::mg(g, n).map_err(e)?.dual();
    let numeric = char_fn(&dual, Side::Upper, &grid, &CharFnConfig::default()).map_err(e)?;
    let err = explicit.values.iter().zip(&numeric.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    check(err <= 1e-6, format!("max disagreement {err:.3e}"))?;
    Ok(format!("max disagreement {err:.2e} on 120 points in [0.01, 5]"))
}

fn criterion_9() -> Outcome {
    let cfg = CharFnConfig::default();
    let p = cone_invariants(&SubequationSpec::pucci(1.0, 2.0, 3).map_err(e)?, &cfg, 200).map_err(e)?;
    check((p.alpha - 1.0).abs() <= 1e-8 && (p.riesz_p - 2.0).abs() <= 1e-8, format!("Pucci {p:?}"))?;
    let mut worst = 0.0f64;
    for a0 in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let c = cone_invariants(&SubequationSpec::minmax_cone(a0, 3).map_err(e)?, &cfg, 200).map_err(e)?;
        check(
            (c.alpha - a0).abs() <= 1e-8 && (c.alpha_star - 1.0 / a0).abs() <= 1e-8,
            format!("MinMaxCone({a0}) {c:?}"),
        )?;
        worst = worst.max((c.alpha * c.alpha_star - 1.0).abs());
    }
    check(worst <= 1e-8, format!("|α·α* − 1| = {worst:.3e}"))?;
    let pos = cone_invariants(&SubequationSpec::pos(3), &cfg, 200).map_err(e)?;
    check(pos.alpha == 0.0 && pos.alpha_star == f64::INFINITY && pos.riesz_p == 1.0, format!("Pos {pos:?}"))?;
    Ok(format!("Pucci α = {}, p = {}; max |α·α* − 1| = {worst:.1e}; Pos (0, inf, 1)", p.alpha, p.riesz_p))
}

fn lambda_monotonicity(rng: &mut SeededRng) -> Result<(), String> {
    for i in 0..TRIALS {
        let n = 2 + i % 4;
        let a = random_matrix(rng, n);
        let p = random::random_psd(rng, n);
        let ea = a.eigenvalues().map_err(e)?;
        let eb = (&a + &p).eigenvalues().map_err(e)?;
        let scale = 1e-12 * (a.frobenius_norm() + p.frobenius_norm());
        if ea.iter().zip(&eb).any(|(x, y)| *y < *x - scale) {
            return Err(format!("λ_k(A + P) < λ_k(A) at trial {i}"));
        }
    }
    Ok(())
}

fn char_properties(rng: &mut SeededRng) -> Result<(), String> {
    let cfg = CharFnConfig { e_samples: 8, ..Default::default() };
    let specs: Vec<SubequationSpec> = catalog(3).into_iter().filter(|s| !s.id().contains("halfspace")).collect();
    for i in 0..TRIALS {
        let spec = &specs[i % specs.len()];
        let l1 = 10f64.powf(random::uniform(rng, -3.0, 1.0));
        let l2 = l1 * (1.0 + random::uniform(rng, 0.0, 2.0));
        let up1 = char_value(spec, Side::Upper, l1, &cfg).map_err(e)?;
        let lo1 = char_value(spec, Side::Lower, l1, &cfg).map_err(e)?;
        let up2 = char_value(spec, Side::Upper, l2, &cfg).map_err(e)?;
        let tol = 4.0 * cfg.tol * (1.0 + up1.abs());
        if lo1 > up1 + tol {
            return Err(format!("{}: lower {lo1} > upper {up1} at λ = {l1}", spec.id()));
        }
        if up2 < up1 - tol {
            return Err(format!("{}: f({l2}) = {up2} < f({l1}) = {up1}", spec.id()));
        }
        if spec.is_cone() && up1.is_finite() {
            let t = 10f64.powf(random::uniform(rng, -1.0, 1.0));
            let ut = char_value(spec, Side::Upper, t * l1, &cfg).map_err(e)?;
            if (ut - t * up1).abs() > 1e-8 * (1.0 + ut.abs()) {
                return Err(format!("{}: f({t}·{l1}) = {ut} ≠ {}", spec.id(), t * up1));
            }
        }
    }
    Ok(())
}

fn mg_explicit_dual(rng: &mut SeededRng) -> Result<(), String> {
    let gs = [GFunction::neg_sqrt(), GFunction::neg_power(1.0, 2.0), GFunction::neg_rational()];
    for i in 0..TRIALS {
        let g = &gs[i % gs.len()];
        let n = 2 + i % 3;
        let a = random_matrix(rng, n);
        let dual = SubequationSpec::mg(g.clone(), n).map_err(e)?.dual();
        if mg_dual_explicit(g, &a).map_err(e)? != dual.member(&a, false).map_err(e)? {
            return Err(format!("explicit and generic duals disagree for {} at {:?}", g.label(), a.as_row_major()));
        }
    }
    Ok(())
}

/// `min_y φ(t, y)` by a uniform grid scan; the quadratic `c y²` bounds the
/// scan error by `c (h/2)²`.
fn reduction_oracle(rng: &mut SeededRng) -> Result<(), String> {
    for i in 0..TRIALS {
        let k = 1 + i % 3;
        let p = random::gaussian_vec(rng, k);
        let a = random::gaussian_sym(rng, k);
        let b = Matrix::from_row_major(1, k, random::gaussian_vec(rng, k)).map_err(e)?;
        let c = 0.5 + random::uniform(rng, 0.0, 2.0);
        let red = reduce_test_function(&p, &[0.0], &a, &b, &SymMatrix::scalar(1, c)).map_err(e)?;
        let t = random::gaussian_vec(rng, k);
        let bt: f64 = (0..k).map(|j| b.get(0, j) * t[j]).sum();
        let base = smp_core::linalg::dot(&p, &t) + a.quadratic_form(&t);
        let phi = |y: f64| base + 2.0 * y * bt + c * y * y;
        let (lo, hi) = (-20.0, 20.0);
        let steps = 4000;
        let h = (hi - lo) / steps as f64;
        let min = (0..=steps).map(|j| phi(lo + j as f64 * h)).fold(f64::INFINITY, f64::min);
        let exact = red.eval(&t);
        if !(exact <= min + 1e-9 * (1.0 + min.abs()) && min - exact <= c * h * h / 4.0 + 1e-9 * (1.0 + min.abs())) {
            return Err(format!("reduced value {exact} vs grid minimum {min} at trial {i}"));
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    for n in [2, 3, 5] {
        for spec in catalog(n) {
            let audit = positivity_check(&spec, TRIALS, 10).map_err(e)?;
            check(audit.passed, format!("positivity fails for {}: {:?}", spec.id(), audit.witness))?;
        }
    }
    let mut rng = random::rng(10);
    lambda_monotonicity(&mut rng)?;
    char_properties(&mut rng)?;
    mg_explicit_dual(&mut rng)?;
    reduction_oracle(&mut rng)?;
    // the eigen kernel underlies everything above
    for _ in 0..100 {
        let a = random_matrix(&mut rng, 4);
        let d = eigen_sorted(&a).map_err(e)?;
        check((&d.reconstruct() - &a).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()), "eigen reconstruction")?;
    }
    Ok(format!("7 property suites x {TRIALS} trials green in {:.1}s", start.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sigma-psi-k closed-form characteristic", criterion_1),
        ("duality table and involution", criterion_2),
        ("classification suite", criterion_3),
        ("SMP verdicts", criterion_4),
        ("counterexample oracle", criterion_5),
        ("Hopf identity", criterion_6),
        ("sandwich containment", criterion_7),
        ("explicit vs numerical dual characteristic", criterion_8),
        ("cone invariants", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
