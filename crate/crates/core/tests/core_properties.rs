//! States, closed-form Wigner functions, marginals and moments.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use wigner_ho::quad::{linspace, trapezoid};
use wigner_ho::wigner::*;
use wigner_ho::{coherent_center, coherent_evolve, psi_coherent, psi_eigen, OscillatorParams, PhaseSpacePoint, QuantumState};

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

#[test]
fn eigenfunctions_are_orthonormal() {
    let params = OscillatorParams::new(0.7, 1.9, 0.6).unwrap();
    let a = params.length_scale();
    let xs = linspace(-16.0 * a, 16.0 * a, 4001);
    let h = xs[1] - xs[0];
    let table: Vec<Vec<f64>> = (0..=30).map(|n| xs.iter().map(|&x| psi_eigen(&params, n, x)).collect()).collect();
    for m in 0..=30 {
        for n in m..=30 {
            let prod: Vec<f64> = table[m].iter().zip(&table[n]).map(|(u, v)| u * v).collect();
            let target = if m == n { 1.0 } else { 0.0 };
            assert!((trapezoid(&prod, h) - target).abs() < 1e-12, "<{m}|{n}>");
        }
    }
}

#[test]
fn coherent_state_matches_number_series() {
    let params = OscillatorParams::new(1.3, 0.8, 0.4).unwrap();
    for z in [Complex64::new(0.3, -0.2), Complex64::new(2.0, 1.5), Complex64::new(-3.0, 4.0)] {
        // The tail sum_{n > N} |z|^{2n}/n! e^{-|z|^2} is below 1e-14 once N
        // exceeds |z|^2 by about 12 |z| + 40.
        let r2 = z.norm_sqr();
        let terms = (r2 + 12.0 * r2.sqrt() + 40.0) as usize;
        let tail: f64 = (terms + 1..terms + 200)
            .map(|n| (n as f64 * r2.ln() - ln_factorial(n) - r2).exp())
            .sum();
        assert!(tail < 1e-14);
        let c = coherent_center(&params, z);
        for k in 0..9 {
            let x = c.x + (k as f64 - 4.0) * params.length_scale();
            let series: Complex64 = (0..=terms)
                .map(|n| {
                    let mag = (-0.5 * r2 - 0.5 * ln_factorial(n)).exp();
                    z.powu(n as u32) * mag * psi_eigen(&params, n, x)
                })
                .sum();
            let closed = psi_coherent(&params, z, x).unwrap();
            assert!((series - closed).norm() < 1e-12, "z={z} x={x}: {series} vs {closed}");
        }
    }
}

#[test]
fn coherent_states_beyond_range_rejected() {
    assert!(psi_coherent(&OscillatorParams::natural(), Complex64::new(30.0, 1.0), 0.0).is_err());
    assert!(QuantumState::coherent(Complex64::new(0.0, 31.0)).is_err());
}

#[test]
fn eigen_wigner_parity() {
    let params = OscillatorParams::new(1.0, 1.0, 0.3).unwrap();
    for n in [0usize, 3, 8, 21] {
        for &(x, p) in &[(0.3, 0.1), (-0.7, 1.2), (1.4, -0.4)] {
            let w = wigner_eigen_exact(&params, n, PhaseSpacePoint::new(x, p));
            assert_eq!(w, wigner_eigen_exact(&params, n, PhaseSpacePoint::new(-x, p)));
            assert_eq!(w, wigner_eigen_exact(&params, n, PhaseSpacePoint::new(x, -p)));
        }
    }
}

#[test]
fn odd_superposition_wigner_is_not_even_in_x() {
    let params = OscillatorParams::natural();
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let s = QuantumState::superposition([(0, Complex64::new(c, 0.0)), (1, Complex64::new(c, 0.0))]).unwrap();
    let pt = PhaseSpacePoint::new(0.8, 0.0);
    let w = wigner_exact(&params, &s, pt);
    assert!((w - wigner_exact(&params, &s, -pt)).abs() > 1e-3);
    let q = wigner_quadrature(&params, &s, pt).unwrap();
    assert!((w - q).abs() < 1e-10);
}

#[test]
fn eigen_moments() {
    let params = OscillatorParams::new(1.6, 0.7, 0.45).unwrap();
    let (m, w, hbar) = (params.mass(), params.omega(), params.hbar());
    for n in [0usize, 4, 15] {
        let state = QuantumState::eigen(n);
        let nn = n as f64 + 0.5;
        let x2 = weyl_moment(&params, &state, 2, 0).unwrap().strict().unwrap();
        let p2 = weyl_moment(&params, &state, 0, 2).unwrap().strict().unwrap();
        assert!((x2 - nn * hbar / (m * w)).abs() < 1e-9 * x2);
        assert!((p2 - nn * hbar * m * w).abs() < 1e-9 * p2);
        // Weyl-ordered x^4: (3/4)(2n^2 + 2n + 1) (hbar/m omega)^2.
        let x4 = weyl_moment(&params, &state, 4, 0).unwrap().strict().unwrap();
        let nf = n as f64;
        let expect = 0.75 * (2.0 * nf * nf + 2.0 * nf + 1.0) * (hbar / (m * w)).powi(2);
        assert!((x4 - expect).abs() < 1e-8 * expect, "n={n}: {x4} vs {expect}");
        assert!(weyl_moment(&params, &state, 1, 0).unwrap().value.abs() < 1e-12);
    }
}

#[test]
fn symmetric_product_for_coherent_state() {
    // <xp + px> = 2 X0 P0 for a coherent state: its covariance has no X-P term.
    let params = OscillatorParams::new(1.0, 1.0, 0.8).unwrap();
    let z = Complex64::new(1.2, -0.7);
    let c = coherent_center(&params, z);
    let got = symmetric_xp(&params, &QuantumState::coherent(z).unwrap()).unwrap().strict().unwrap();
    assert!((got - 2.0 * c.x * c.p).abs() < 1e-9);

    // Direct operator check with psi: <xp + px> = -i hbar int (2 x psi* psi' + |psi|^2).
    let psi = |x: f64| psi_coherent(&params, z, x).unwrap();
    let xs = linspace(c.x - 12.0, c.x + 12.0, 6001);
    let h = 1e-5;
    let vals: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let d = (psi(x + h) - psi(x - h)) / (2.0 * h);
            let v = Complex64::new(0.0, -params.hbar()) * (2.0 * x * psi(x).conj() * d + psi(x).norm_sqr());
            v.re
        })
        .collect();
    let direct = trapezoid(&vals, xs[1] - xs[0]);
    assert!((direct - got).abs() < 1e-6, "{direct} vs {got}");
}

#[test]
fn marginals_reproduce_densities() {
    let params = OscillatorParams::new(0.8, 1.1, 0.9).unwrap();
    let z = Complex64::new(-1.5, 2.5);
    for state in [QuantumState::eigen(7), QuantumState::coherent(z).unwrap()] {
        let c = state.support(&params).center;
        for k in 0..5 {
            let t = k as f64 - 2.0;
            let x = c.x + 0.8 * t * params.length_scale();
            let p = c.p + 0.8 * t * params.momentum_scale();
            let mx = marginal_position(&params, &state, x);
            let mp = marginal_momentum(&params, &state, p);
            assert!(!mx.truncated() && !mp.truncated());
            assert!((mx.value - position_density(&params, &state, x)).abs() < 1e-10);
            assert!((mp.value - momentum_density(&params, &state, p).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn grid_normalization_and_truncation_flag() {
    let params = OscillatorParams::natural();
    let field = exact_field(&params, &QuantumState::eigen(12)).unwrap();
    let est = field.integral();
    assert!(!est.truncated());
    assert!((est.value - 1.0).abs() < 1e-10);
    let small = PhaseGrid::new(-2.0, 2.0, -2.0, 2.0, 101, 101).unwrap();
    let cut = WignerField::evaluate(small, Method::ExactLaguerre, "n=12".into(), |pt| {
        Ok(wigner_eigen_exact(&params, 12, pt))
    })
    .unwrap();
    assert!(cut.integral().truncated());
    assert!(cut.integral().strict().is_err());
}

#[test]
fn averaged_window() {
    let params = OscillatorParams::new(1.0, 1.0, 0.1).unwrap();
    let pt = PhaseSpacePoint::new(0.7, -0.4);
    assert_eq!(wigner_averaged(&params, 9, 0, pt).unwrap(), wigner_eigen_exact(&params, 9, pt));
    let mean: f64 = (5..=13).map(|m| wigner_eigen_exact(&params, m, pt)).sum::<f64>() / 9.0;
    assert!((wigner_averaged(&params, 9, 4, pt).unwrap() - mean).abs() < 1e-12 / (PI * 0.1));
    assert!(wigner_averaged(&params, 3, 4, pt).is_err());

    let top = QuantumState::eigen(70);
    let field = WignerField::evaluate(PhaseGrid::auto(&params, &top), Method::Averaged, "avg".into(), |pt| {
        wigner_averaged(&params, 60, 10, pt)
    })
    .unwrap();
    assert!((field.integral().value - 1.0).abs() < 1e-6);
}

#[test]
fn scaled_energy_curves() {
    let c9 = ScaledEnergyCurve::new(9, 0, 1.5, 2000).unwrap();
    assert_eq!(c9.samples[0].value, -1.0);
    let c130 = ScaledEnergyCurve::new(130, 0, 1.0, 200_000).unwrap();
    assert_eq!(c130.sign_changes(), 130);
    let avg = ScaledEnergyCurve::new(60, 10, 1.5, 3000).unwrap();
    let single = ScaledEnergyCurve::new(60, 0, 1.5, 3000).unwrap();
    let inner = |c: &ScaledEnergyCurve| {
        c.samples.iter().filter(|s| s.r > 0.2 && s.r < 0.8).map(|s| s.value.abs()).fold(0.0, f64::max)
    };
    assert!(inner(&avg) < 0.2 * inner(&single));
    // 21 levels, 11 of them even: the origin keeps a value of 1/21.
    assert!((avg.samples[0].value - 1.0 / 21.0).abs() < 1e-14);
    let peak = avg
        .samples
        .iter()
        .filter(|s| s.r > 0.05)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap();
    assert!((peak.r - 1.0).abs() < 0.15, "averaged peak at r = {}", peak.r);
}

#[test]
fn ground_state_is_positive_and_gaussian() {
    let params = OscillatorParams::new(2.0, 0.5, 0.7).unwrap();
    for &(x, p) in &[(0.0, 0.0), (3.0, -2.0), (-1.0, 0.5)] {
        let pt = PhaseSpacePoint::new(x, p);
        let w = wigner_ground(&params, pt);
        assert!(w > 0.0);
        assert!((w - (-params.xi(pt)).exp() / (PI * params.hbar())).abs() < 1e-15);
        assert_eq!(w, wigner_coherent(&params, Complex64::new(0.0, 0.0), pt));
    }
}

#[test]
fn large_n_values_stay_finite() {
    let params = OscillatorParams::natural();
    for n in [200usize, 500, 1000] {
        for &x in &[0.0, 10.0, 44.0, 80.0] {
            let w = wigner_eigen_exact(&params, n, PhaseSpacePoint::new(x, 3.0));
            assert!(w.is_finite() && w.abs() <= 1.0 / PI * (1.0 + 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wigner_is_bounded_by_inverse_pi_hbar(n in 0usize..80, x in -15.0f64..15.0, p in -15.0f64..15.0, hbar in 0.2f64..3.0) {
        let params = OscillatorParams::new(1.0, 1.0, hbar).unwrap();
        let w = wigner_eigen_exact(&params, n, PhaseSpacePoint::new(x, p));
        prop_assert!(w.abs() <= (1.0 + 1e-12) / (PI * hbar));
    }

    #[test]
    fn coherent_rotation(re in -5.0f64..5.0, im in -5.0f64..5.0, t in -10.0f64..10.0, dx in -2.0f64..2.0, dp in -2.0f64..2.0) {
        let params = OscillatorParams::new(1.3, 0.9, 0.6).unwrap();
        let (m, w) = (params.mass(), params.omega());
        let z = Complex64::new(re, im);
        let zt = coherent_evolve(z, t, w);
        let c = coherent_center(&params, zt);
        let pt = PhaseSpacePoint::new(c.x + dx, c.p + dp);
        let (s, co) = (w * t).sin_cos();
        let back = PhaseSpacePoint::new(pt.x * co - pt.p / (m * w) * s, pt.p * co + m * w * pt.x * s);
        let diff = wigner_coherent(&params, zt, pt) - wigner_coherent(&params, z, back);
        prop_assert!(diff.abs() < 1e-12 / (PI * 0.6));
    }

    #[test]
    fn coherent_wavefunction_has_unit_norm(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let params = OscillatorParams::natural();
        let z = Complex64::new(re, im);
        let c = coherent_center(&params, z);
        let xs = linspace(c.x - 12.0, c.x + 12.0, 2001);
        let dens: Vec<f64> = xs.iter().map(|&x| psi_coherent(&params, z, x).unwrap().norm_sqr()).collect();
        prop_assert!((trapezoid(&dens, xs[1] - xs[0]) - 1.0).abs() < 1e-12);
    }
}
