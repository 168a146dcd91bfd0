//! Microcanonical averages and the approach of eigenstate averages to them.

use std::f64::consts::PI;

use proptest::prelude::*;
use wigner_ho::classical::*;
use wigner_ho::wigner::PhaseGrid;
use wigner_ho::{OscillatorParams, PhaseSpacePoint, QuantumState};

fn bump(x: f64, p: f64, sx: f64, sp: f64) -> TestFunctional {
    TestFunctional::new("f", PhaseSpacePoint::new(x, p), sx, sp).unwrap()
}

#[test]
fn functional_validation() {
    assert!(TestFunctional::new("f", PhaseSpacePoint::origin(), 0.0, 1.0).is_err());
    assert!(TestFunctional::new("f", PhaseSpacePoint::new(f64::NAN, 0.0), 1.0, 1.0).is_err());
    let f = bump(1.0, 2.0, 0.5, 0.25);
    assert_eq!(f.eval(PhaseSpacePoint::new(1.0, 2.0)), 1.0);
    assert!((f.eval(PhaseSpacePoint::new(1.5, 2.25)) - (-1.0f64).exp()).abs() < 1e-15);
}

#[test]
fn energy_and_action_consistency() {
    let params = OscillatorParams::new(0.7, 2.3, 1.0).unwrap();
    let e = 5.0;
    let x_max = params.turning_point(e);
    assert!((action_of_point(&params, PhaseSpacePoint::new(x_max, 0.0)) - e / params.omega()).abs() < 1e-14);
    assert_eq!(action_of_point(&params, PhaseSpacePoint::origin()), 0.0);
    for k in 0..16 {
        let aa = ActionAngle::new(e / params.omega(), 2.0 * PI * k as f64 / 16.0).unwrap();
        let pt = action_angle_to_cartesian(&params, aa);
        assert!((params.energy(pt) - e).abs() < 1e-13 * e);
    }
}

#[test]
fn angle_average_normalization_and_moments() {
    let params = OscillatorParams::new(1.3, 0.6, 1.0).unwrap();
    let (m, w) = (params.mass(), params.omega());
    let e = 7.0;
    let wide = bump(0.0, 0.0, 1e4, 1e4);
    assert!((classical_expectation(&params, e, &wide).unwrap() - 1.0).abs() < 1e-6);
    assert!((classical_moment(&params, e, 2, 0).unwrap() - e / (m * w * w)).abs() < 1e-12);
    assert!((classical_moment(&params, e, 0, 2).unwrap() - m * e).abs() < 1e-12);
    assert!(classical_moment(&params, e, 1, 1).unwrap().abs() < 1e-12);
    // <x^4> = (3/8) x_max^4.
    let xm = params.turning_point(e);
    assert!((classical_moment(&params, e, 4, 0).unwrap() - 0.375 * xm.powi(4)).abs() < 1e-11 * xm.powi(4));
}

#[test]
fn on_shell_bump_exceeds_origin_bump() {
    let params = OscillatorParams::natural();
    let e = 10.0;
    let xm = params.turning_point(e);
    let on = classical_expectation(&params, e, &bump(xm, 0.0, 0.5, 0.5)).unwrap();
    let origin = classical_expectation(&params, e, &bump(0.0, 0.0, 0.5, 0.5)).unwrap();
    assert!(on > origin);
    // Direct check against a fine midpoint sum over the angle.
    let f = bump(xm, 0.0, 0.5, 0.5);
    let n = 200_000;
    let direct: f64 = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            f.eval(action_angle_to_cartesian(&params, ActionAngle { action: e, angle: phi }))
        })
        .sum::<f64>()
        / n as f64;
    assert!((on - direct).abs() < 1e-12);
}

#[test]
fn classical_values_do_not_depend_on_hbar() {
    let e = 10.0;
    let a = OscillatorParams::new(1.0, 1.0, 1.0).unwrap();
    let b = OscillatorParams::new(1.0, 1.0, 1e-3).unwrap();
    for f in default_functionals(&a, e) {
        let va = classical_expectation(&a, e, &f).unwrap();
        let vb = classical_expectation(&b, e, &f).unwrap();
        assert!((va - vb).abs() <= 1e-13 * va.abs().max(1e-300));
    }
}

#[test]
fn smeared_density_integrates_to_one() {
    let params = OscillatorParams::new(2.0, 0.5, 1.0).unwrap();
    let e = 3.0;
    let rx = 1.8 * params.turning_point(e);
    let rp = 1.8 * params.peak_momentum(e);
    let grid = PhaseGrid::new(-rx, rx, -rp, rp, 1601, 1601).unwrap();
    for sigma_e in [0.4, 0.2, 0.1] {
        let total = grid.integrate(|pt| classical_density_smeared(&params, e, pt, sigma_e).unwrap());
        assert!((total - 1.0).abs() < 1e-6, "sigma_e={sigma_e}: {total}");
    }
    assert!(classical_density_smeared(&params, e, PhaseSpacePoint::origin(), 0.0).is_err());
}

#[test]
fn smeared_density_converges_to_angle_average() {
    let params = OscillatorParams::natural();
    let e = 10.0;
    let xm = params.turning_point(e);
    let f = bump(0.6 * xm, 0.5, 1.2, 1.5);
    let reference = classical_expectation(&params, e, &f).unwrap();
    let r = 1.5 * xm;
    let grid = PhaseGrid::new(-r, r, -r, r, 2401, 2401).unwrap();
    let estimate = |s: f64| grid.integrate(|pt| classical_density_smeared(&params, e, pt, s).unwrap() * f.eval(pt));
    let (a, b, c) = (estimate(1.0), estimate(0.5), estimate(0.25));
    // Errors expand in even powers of sigma_e.
    let r1 = (4.0 * b - a) / 3.0;
    let r2 = (4.0 * c - b) / 3.0;
    let extrapolated = (16.0 * r2 - r1) / 15.0;
    assert!((c - reference).abs() < (a - reference).abs());
    assert!((extrapolated - reference).abs() < 1e-4, "{extrapolated} vs {reference}");
}

#[test]
fn quantum_expectation_limits() {
    let params = OscillatorParams::new(1.0, 1.0, 0.5).unwrap();
    let ground = QuantumState::eigen(0);
    let wide = bump(0.0, 0.0, 1e3, 1e3);
    let v = quantum_expectation(&params, &ground, &wide).unwrap();
    assert!(!v.truncated());
    assert!((v.value - 1.0).abs() < 1e-6);
    let support = ground.support(&params);
    let far = bump(support.x_radius + 10.0 * 0.3, 0.0, 0.3, 0.3);
    assert!(quantum_expectation(&params, &ground, &far).unwrap().value.abs() < 1e-8);
}

#[test]
fn radial_and_planar_expectations_agree() {
    // sigma_p = m omega sigma_x makes the bump a function of E(X, P) alone.
    let params = OscillatorParams::new(1.4, 0.8, 0.3).unwrap();
    let (m, w) = (params.mass(), params.omega());
    for (n, sx) in [(3usize, 0.9), (11, 1.7), (25, 0.6)] {
        let f = bump(0.0, 0.0, sx, m * w * sx);
        let planar = quantum_expectation(&params, &QuantumState::eigen(n), &f).unwrap().value;
        let radial = radial_expectation(&params, n, |e| (-e / (m * w * w * sx * sx)).exp()).unwrap();
        assert!((planar - radial).abs() < 1e-5, "n={n}: {planar} vs {radial}");
    }
}

#[test]
fn sweep_invariants() {
    let params = OscillatorParams::new(1.0, 1.3, 1.0).unwrap();
    let e = 8.0;
    let cfg = SweepConfig {
        e_clas: e,
        params,
        n_list: vec![4, 16, 64],
        functionals: default_functionals(&params, e),
        windows: vec![(16, 3)],
        strict: true,
    };
    let report = convergence_sweep(&cfg).unwrap();
    assert_eq!(report.rows.len(), 4 * cfg.functionals.len());
    let mut last = (0, None);
    for row in &report.rows {
        assert!(((row.hbar * row.n as f64 * params.omega()) - e).abs() <= 1e-14 * e);
        assert!((row.n, row.window) >= last);
        last = (row.n, row.window);
        assert_eq!(row.abs_err, (row.quantum - row.classical).abs());
    }
    assert_eq!(report.cases.len(), 4);
    assert_eq!(convergence_sweep(&cfg).unwrap(), report);
}

#[test]
fn wide_functional_error_is_zero_point_shift() {
    let params = OscillatorParams::natural();
    let cfg = SweepConfig {
        e_clas: 10.0,
        params,
        n_list: vec![1],
        functionals: vec![bump(0.0, 0.0, 1e3, 1e3)],
        windows: vec![],
        strict: true,
    };
    let row = &convergence_sweep(&cfg).unwrap().rows[0];
    // To first order in 1/sigma^2 the bump is 1 - E/sigma^2 and the levels sit
    // hbar omega / 2 above the shell.
    let shift = 0.5 * row.hbar / 1e6;
    assert!((row.quantum - 1.0).abs() < 2e-5);
    assert!((row.abs_err - shift).abs() < 1e-9, "{row:?}");
}

#[test]
fn error_shrinks_between_n9_and_n130() {
    let params = OscillatorParams::natural();
    let e = 10.0;
    let f = &default_functionals(&params, e)[0];
    let classical = classical_expectation(&params, e, f).unwrap();
    let err = |n: usize| {
        let p = params.with_hbar(e / n as f64).unwrap();
        (quantum_expectation(&p, &QuantumState::eigen(n), f).unwrap().value - classical).abs()
    };
    assert!(err(130) < err(9));
}

#[test]
fn convergence_order_probe() {
    let params = OscillatorParams::natural();
    let e = 10.0;
    let functionals = default_functionals(&params, e);
    let cfg = SweepConfig { e_clas: e, params, n_list: vec![10, 20, 40, 80], functionals, windows: vec![], strict: true };
    let report = convergence_sweep(&cfg).unwrap();
    let id = "shell-phi0";
    let err = |n| report.row(n, None, id).unwrap().abs_err.ln();
    let slope = -(err(80) - err(10)) / (80f64 / 10.0).ln();
    assert!((0.5..=2.0).contains(&slope), "slope {slope}");
}

#[test]
fn shell_amplitude_recorded() {
    let a9 = shell_amplitude(9);
    let a130 = shell_amplitude(130);
    assert!(a9 > 0.0 && a130 > 0.0 && a9 <= 1.0 && a130 <= 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_angle_round_trip(action in 0.01f64..100.0, angle in 0.0f64..(2.0 * PI), m in 0.2f64..5.0, w in 0.2f64..5.0) {
        let params = OscillatorParams::new(m, w, 1.0).unwrap();
        let aa = ActionAngle::new(action, angle).unwrap();
        let back = cartesian_to_action_angle(&params, action_angle_to_cartesian(&params, aa));
        prop_assert!((back.action - action).abs() < 1e-13 * action);
        let d = (back.angle - angle).abs();
        prop_assert!(d.min(2.0 * PI - d) < 1e-12);
    }
}

#[test]
fn sweep_rejects_bad_configs() {
    let params = OscillatorParams::natural();
    let base = SweepConfig {
        e_clas: 10.0,
        params,
        n_list: vec![2, 4],
        functionals: vec![bump(0.0, 0.0, 1.0, 1.0)],
        windows: vec![],
        strict: false,
    };
    let with = |f: &dyn Fn(&mut SweepConfig)| {
        let mut c = base.clone();
        f(&mut c);
        convergence_sweep(&c)
    };
    assert!(with(&|c| c.n_list.clear()).is_err());
    assert!(with(&|c| c.n_list = vec![0, 3]).is_err());
    assert!(with(&|c| c.n_list = vec![4, 2]).is_err());
    assert!(with(&|c| c.e_clas = -1.0).is_err());
    assert!(with(&|c| c.e_clas = f64::NAN).is_err());
    assert!(with(&|c| c.functionals[0].sigma_x = 0.0).is_err());
    assert!(matches!(with(&|c| c.windows = vec![(3, 4)]), Err(wigner_ho::Error::InvalidWindow { .. })));
    assert!(with(&|_| ()).is_ok());
}
