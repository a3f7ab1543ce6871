use proptest::prelude::*;

use smp_core::characteristic::{char_value, CharFnConfig, Side};
use smp_core::functions::{GFunction, IncreasingFn};
use smp_core::linalg::{radial_hessian, SymMatrix};
use smp_core::monotonicity::mg_dual_explicit;
use smp_core::radial::{verify_monotone_radial, Direction, RadialFunction};
use smp_core::random;
use smp_core::subequation::SubequationSpec;

fn catalog(n: usize) -> Vec<SubequationSpec> {
    let mut v = vec![
        SubequationSpec::pos(n),
        SubequationSpec::subaffine(n),
        SubequationSpec::minmax_cone(2.0, n).unwrap(),
        SubequationSpec::pucci(0.5, 3.0, n).unwrap(),
        SubequationSpec::p_delta(1.0, n).unwrap(),
        SubequationSpec::sigma_psi_k(1.0 / 3.0, 1, n).unwrap(),
        SubequationSpec::sigma_psi_k(3.0, n, n).unwrap(),
        SubequationSpec::minmax_f(IncreasingFn::sqrt(), n).unwrap(),
        SubequationSpec::min_two_f(IncreasingFn::sqrt(), n).unwrap(),
        SubequationSpec::mg(GFunction::neg_sqrt(), n).unwrap(),
        SubequationSpec::mg(GFunction::neg_rational(), n).unwrap(),
        SubequationSpec::half_space(-0.5, n).unwrap(),
        SubequationSpec::diagonal_entry(n - 1, n).unwrap(),
    ];
    let duals: Vec<_> = v.iter().map(|s| s.dual()).collect();
    v.extend(duals);
    v
}

fn cones(n: usize) -> Vec<SubequationSpec> {
    catalog(n).into_iter().filter(|s| s.is_cone()).collect()
}

/// `a ≤ b` up to `tol`, exact when either side is infinite.
fn le(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a <= b
    } else {
        a <= b + tol
    }
}

fn sym(n: usize) -> impl Strategy<Value = SymMatrix> {
    (prop::collection::vec(-1.0f64..1.0, n * n), -2.0f64..2.0)
        .prop_map(move |(e, s)| SymMatrix::from_row_major(n, &e).unwrap().scale(10f64.powf(s)))
}

fn dim_and_sym() -> impl Strategy<Value = (usize, SymMatrix)> {
    (2usize..=5).prop_flat_map(|n| (Just(n), sym(n)))
}

fn psd(n: usize) -> impl Strategy<Value = SymMatrix> {
    sym(n).prop_map(|g| {
        let gt = g.as_row_major();
        SymMatrix::from_fn(g.dim(), |i, j| (0..g.dim()).map(|k| gt[k * g.dim() + i] * gt[k * g.dim() + j]).sum())
            .unwrap()
    })
}

fn big() -> ProptestConfig {
    ProptestConfig { cases: 10_000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(big())]

    #[test]
    fn dual_is_an_involution((n, a) in dim_and_sym(), idx in 0usize..26, strict: bool) {
        let spec = &catalog(n)[idx];
        prop_assert_eq!(spec.dual().dual().member(&a, strict).unwrap(), spec.member(&a, strict).unwrap());
    }

    #[test]
    fn minmax_cone_dual_table(alpha in prop::sample::select(vec![0.25, 1.0, 4.0]), (n, a) in dim_and_sym()) {
        let f = SubequationSpec::minmax_cone(alpha, n).unwrap();
        let g = SubequationSpec::minmax_cone(1.0 / alpha, n).unwrap();
        prop_assert_eq!(f.dual_member(&a, false).unwrap(), g.member(&a, false).unwrap());
    }

    #[test]
    fn eigenvalues_increase_under_psd_shifts((a, p) in (2usize..=5).prop_flat_map(|n| (sym(n), psd(n)))) {
        let ea = a.eigenvalues().unwrap();
        let eb = (&a + &p).eigenvalues().unwrap();
        let slack = 1e-12 * (a.frobenius_norm() + p.frobenius_norm());
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!(*y >= *x - slack);
        }
    }

    #[test]
    fn positivity_on_sampled_members(n in 2usize..=4, idx in 0usize..26, seed: u64) {
        let spec = &catalog(n)[idx];
        let mut rng = random::rng(seed);
        if let Some(a) = spec.sample_member(&mut rng).unwrap() {
            let p = random::random_psd(&mut rng, n);
            prop_assert!(spec.member(&(&a + &p), false).unwrap());
        }
    }

    #[test]
    fn cone_membership_is_scale_invariant((n, a) in dim_and_sym(), idx in 0usize..64, t in 0.01f64..100.0) {
        let list = cones(n);
        let spec = &list[idx % list.len()];
        prop_assert_eq!(spec.member(&a.scale(t), false).unwrap(), spec.member(&a, false).unwrap());
    }

    #[test]
    fn mg_explicit_dual_agrees((n, a) in dim_and_sym(), which in 0usize..3) {
        let g = [GFunction::neg_sqrt(), GFunction::neg_power(1.0, 2.0), GFunction::neg_rational()][which].clone();
        let dual = SubequationSpec::mg(g.clone(), n).unwrap().dual();
        prop_assert_eq!(mg_dual_explicit(&g, &a).unwrap(), dual.member(&a, false).unwrap());
    }

    #[test]
    fn mg_trace_properties((n, a) in dim_and_sym()) {
        let spec = SubequationSpec::mg(GFunction::neg_sqrt(), n).unwrap();
        let free = a.shift(-a.trace() / n as f64);
        // trace-free matrices are members only when they are zero
        prop_assert!(!spec.member(&free, false).unwrap() || free.frobenius_norm() < 1e-9);
        if spec.member(&a, true).unwrap() {
            prop_assert!(a.trace() > 0.0);
        }
        if a.trace() >= 0.0 {
            prop_assert!(spec.dual().member(&a, false).unwrap());
        }
    }

    #[test]
    fn radial_hessian_of_cubic(x in prop::collection::vec(-3.0f64..3.0, 2..=5)) {
        // u = |x|³ has D²u = 3|x| I + 3 x xᵀ / |x|
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(r > 1e-3);
        let h = radial_hessian(&x, 3.0 * r * r, 6.0 * r).unwrap();
        let n = x.len();
        let want = SymMatrix::from_fn(n, |i, j| 3.0 * x[i] * x[j] / r + if i == j { 3.0 * r } else { 0.0 }).unwrap();
        prop_assert!((&h - &want).frobenius_norm() <= 1e-12 * (1.0 + want.frobenius_norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2_000, ..ProptestConfig::default() })]

    #[test]
    fn lower_below_upper_and_monotone(idx in 0usize..26, l in -3.0f64..1.0, step in 0.0f64..2.0) {
        let spec = &catalog(3)[idx];
        prop_assume!(!spec.id().contains("halfspace"));
        let cfg = CharFnConfig { e_samples: 8, ..Default::default() };
        let l1 = 10f64.powf(l);
        let up1 = char_value(spec, Side::Upper, l1, &cfg).unwrap();
        let lo1 = char_value(spec, Side::Lower, l1, &cfg).unwrap();
        let up2 = char_value(spec, Side::Upper, l1 * (1.0 + step), &cfg).unwrap();
        let tol = 4.0 * cfg.tol * (1.0 + up1.abs());
        prop_assert!(le(lo1, up1, tol), "{} {} {}", spec.id(), lo1, up1);
        prop_assert!(le(up1, up2, tol), "{} {} {}", spec.id(), up1, up2);
    }

    #[test]
    fn characteristic_is_homogeneous_on_cones(idx in 0usize..64, l in -2.0f64..1.0, t in 0.1f64..10.0) {
        let list = cones(3);
        let spec = &list[idx % list.len()];
        let cfg = CharFnConfig { e_samples: 8, ..Default::default() };
        let f = char_value(spec, Side::Upper, 10f64.powf(l), &cfg).unwrap();
        let ft = char_value(spec, Side::Upper, t * 10f64.powf(l), &cfg).unwrap();
        if f.is_finite() {
            prop_assert!((ft - t * f).abs() <= 1e-8 * (1.0 + ft.abs()), "{} {} {}", spec.id(), f, ft);
        } else {
            prop_assert_eq!(f, ft);
        }
    }

    #[test]
    fn reflection_swaps_monotonicity(c in 5.0f64..20.0, a in 0.1f64..3.0, b in -1.0f64..1.0) {
        // ψ(t) = a t² + b t with f ≡ 0: the residual is ψ″ = 2a either way
        let ts: Vec<f64> = (0..40).map(|i| 0.5 + 0.1 * i as f64).collect();
        let rf = RadialFunction::from_fns(ts, |t| a * t * t + b * t, |t| 2.0 * a * t + b, |_| 2.0 * a).unwrap();
        let back = rf.reflect(c).unwrap().reflect(c).unwrap();
        prop_assert!(back.ts.iter().zip(&rf.ts).all(|(x, y)| (x - y).abs() < 1e-12));
        prop_assert_eq!(&back.psi, &rf.psi);
        let up = verify_monotone_radial(&IncreasingFn::Zero, &rf, Direction::Up, 0.0).unwrap();
        let down = verify_monotone_radial(&IncreasingFn::Zero, &rf.reflect(c).unwrap(), Direction::Down, 0.0).unwrap();
        prop_assert_eq!(up.holds, down.holds);
        prop_assert_eq!(up.sign_violations, down.sign_violations);
    }
}
