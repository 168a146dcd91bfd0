//! Closed-form Wigner functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::special::{assoc_laguerre_scaled_log, laguerre_scaled, laguerre_scaled_table, ln_factorial_ratio, Scaled};
use crate::state::{coherent_center, QuantumState, Superposition};

fn inv_pi_hbar(params: &OscillatorParams) -> f64 {
    1.0 / (PI * params.hbar())
}

fn parity(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `W_0 = e^{-X^2/a^2} e^{-P^2 a^2/hbar^2} / (pi hbar)`.
pub fn wigner_ground(params: &OscillatorParams, pt: PhaseSpacePoint) -> f64 {
    inv_pi_hbar(params) * (-params.xi(pt)).exp()
}

/// Gaussian Wigner function of the coherent state `z`, centered on
/// `(X_0, P_0) = (sqrt(2) a Re z, sqrt(2) (hbar/a) Im z)`.
pub fn wigner_coherent(params: &OscillatorParams, z: Complex64, pt: PhaseSpacePoint) -> f64 {
    let c = coherent_center(params, z);
    wigner_ground(params, PhaseSpacePoint::new(pt.x - c.x, pt.p - c.p))
}

/// `W_n = (-1)^n e^{-xi} L_n(2 xi) / (pi hbar)`.
///
/// `e^{-xi} L_n(2 xi)` is exactly the scaled Laguerre value at `2 xi`, so no
/// separate exponential is ever formed.
pub fn wigner_eigen_exact(params: &OscillatorParams, n: usize, pt: PhaseSpacePoint) -> f64 {
    parity(n) * inv_pi_hbar(params) * laguerre_scaled(n, 2.0 * params.xi(pt))
}

/// Cross-Wigner function of `psi_m` (conjugated, left) and `psi_n` (right):
/// `(1/2 pi hbar) int ds psi_m(X - s/2) e^{-iPs/hbar} psi_n(X + s/2)`.
pub fn wigner_cross(params: &OscillatorParams, m: usize, n: usize, pt: PhaseSpacePoint) -> Complex64 {
    let u = pt.x / params.length_scale();
    let v = pt.p / params.momentum_scale();
    let xi = u * u + v * v;
    let (lo, hi) = (m.min(n), m.max(n));
    let k = hi - lo;
    if k == 0 {
        return Complex64::new(wigner_eigen_exact(params, lo, pt), 0.0);
    }
    if xi == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (mantissa, log_scale) = assoc_laguerre_scaled_log(lo, k, 2.0 * xi);
    let log_scale =
        log_scale + 0.5 * k as f64 * (2.0 * xi).ln() - 0.5 * ln_factorial_ratio(hi, lo);
    let magnitude = Scaled { mantissa, log_scale }.value() * parity(lo) * inv_pi_hbar(params);
    // (sqrt2 (u - iv))^k when the right index is larger, its conjugate otherwise.
    let theta = v.atan2(u);
    let phase = if n >= m { -(k as f64) * theta } else { k as f64 * theta };
    Complex64::from_polar(magnitude, phase)
}

/// Exact Wigner function of a normalized superposition.
pub fn wigner_superposition(params: &OscillatorParams, s: &Superposition, pt: PhaseSpacePoint) -> f64 {
    let terms = s.terms();
    let mut total = 0.0;
    for (j, &(m, cm)) in terms.iter().enumerate() {
        total += cm.norm_sqr() * wigner_eigen_exact(params, m, pt);
        for &(n, cn) in &terms[j + 1..] {
            total += 2.0 * (cm.conj() * cn * wigner_cross(params, m, n, pt)).re;
        }
    }
    total
}

/// Closed-form Wigner function of any supported state.
pub fn wigner_exact(params: &OscillatorParams, state: &QuantumState, pt: PhaseSpacePoint) -> f64 {
    match state {
        QuantumState::Eigenstate { n } => wigner_eigen_exact(params, *n, pt),
        QuantumState::Coherent { z } => wigner_coherent(params, *z, pt),
        QuantumState::Superposition(s) => wigner_superposition(params, s, pt),
    }
}

/// Dimensionless `pi hbar W_n` as a function of `r = E(X,P) / E_clas` with
/// `E_clas = n hbar omega`: `(-1)^n e^{-2nr} L_n(4nr)`.
pub fn wigner_scaled_energy(n: usize, r: f64) -> f64 {
    parity(n) * laguerre_scaled(n, 4.0 * n as f64 * r)
}

/// Uniform mean of `pi hbar W_m` over `m in [n - half_width, n + half_width]`
/// on the same `r` parameterization (`xi = 2 n r`).
pub fn wigner_scaled_energy_averaged(n: usize, half_width: usize, r: f64) -> Result<f64> {
    check_window(n, half_width)?;
    Ok(window_mean(n, half_width, 4.0 * n as f64 * r))
}

/// Uniform mean of `W_m(X, P)` over the inclusive window
/// `m in [n - half_width, n + half_width]`.
pub fn wigner_averaged(
    params: &OscillatorParams,
    n: usize,
    half_width: usize,
    pt: PhaseSpacePoint,
) -> Result<f64> {
    check_window(n, half_width)?;
    Ok(inv_pi_hbar(params) * window_mean(n, half_width, 2.0 * params.xi(pt)))
}

fn check_window(n: usize, half_width: usize) -> Result<()> {
    if half_width > n {
        return Err(Error::InvalidWindow { n, half_width });
    }
    Ok(())
}

fn window_mean(n: usize, half_width: usize, x: f64) -> f64 {
    let table = laguerre_scaled_table(n + half_width, x);
    let lo = n - half_width;
    let sum: f64 = (lo..=n + half_width).map(|m| parity(m) * table[m]).sum();
    sum / (2 * half_width + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_values() {
        let params = OscillatorParams::new(1.0, 1.0, 0.5).unwrap();
        let a = params.length_scale();
        let peak = 1.0 / (PI * 0.5);
        assert!((wigner_ground(&params, PhaseSpacePoint::origin()) - peak).abs() < 1e-15);
        let v = wigner_ground(&params, PhaseSpacePoint::new(a, 0.0));
        assert!((v - peak * (-1.0f64).exp()).abs() < 1e-15);
        assert!((wigner_eigen_exact(&params, 0, PhaseSpacePoint::new(0.3, -0.2))
            - wigner_ground(&params, PhaseSpacePoint::new(0.3, -0.2)))
        .abs()
            < 1e-15);
    }

    #[test]
    fn origin_values_alternate() {
        let params = OscillatorParams::new(2.0, 3.0, 0.7).unwrap();
        let peak = 1.0 / (PI * 0.7);
        for n in 0..40 {
            let v = wigner_eigen_exact(&params, n, PhaseSpacePoint::origin());
            assert_eq!(v, parity(n) * peak);
        }
    }

    #[test]
    fn coherent_peak_and_reduction() {
        let params = OscillatorParams::natural();
        let z = Complex64::new(3.0, 0.0);
        let c = coherent_center(&params, z);
        assert!((c.x - 3.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.p, 0.0);
        assert!((wigner_coherent(&params, z, c) - 1.0 / PI).abs() < 1e-15);
        let pt = PhaseSpacePoint::new(0.4, 1.1);
        assert_eq!(wigner_coherent(&params, Complex64::new(0.0, 0.0), pt), wigner_ground(&params, pt));
    }

    #[test]
    fn scaled_energy_at_zero() {
        for n in 1..30 {
            assert_eq!(wigner_scaled_energy(n, 0.0), parity(n));
        }
    }

    #[test]
    fn scaled_energy_matches_phase_space_form() {
        // E_clas = n hbar omega, so E(X,P)/E_clas = 0.5 on the circle xi = n.
        let n = 60;
        let params = OscillatorParams::new(1.0, 1.0, 10.0 / n as f64).unwrap();
        let (a, b) = (params.length_scale(), params.momentum_scale());
        let rho = (n as f64).sqrt();
        for k in 0..8 {
            let t = 0.4 * k as f64;
            let pt = PhaseSpacePoint::new(rho * a * t.cos(), rho * b * t.sin());
            let e_ratio = params.energy(pt) / (n as f64 * params.hbar() * params.omega());
            assert!((e_ratio - 0.5).abs() < 1e-13);
            let lhs = wigner_scaled_energy(n, 0.5);
            let rhs = PI * params.hbar() * wigner_eigen_exact(&params, n, pt);
            assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn window_of_one_is_single_state() {
        let params = OscillatorParams::natural();
        let pt = PhaseSpacePoint::new(1.3, -0.4);
        for n in [0, 3, 17] {
            let avg = wigner_averaged(&params, n, 0, pt).unwrap();
            assert!((avg - wigner_eigen_exact(&params, n, pt)).abs() < 1e-15);
        }
        assert!(matches!(wigner_averaged(&params, 3, 4, pt), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn cross_wigner_is_hermitian() {
        let params = OscillatorParams::natural();
        let pt = PhaseSpacePoint::new(0.7, -1.2);
        for (m, n) in [(0, 1), (2, 5), (3, 9)] {
            let a = wigner_cross(&params, m, n, pt);
            let b = wigner_cross(&params, n, m, pt);
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }
}
