//! Generating kernel of the eigenstate Wigner functions.
//!
//! `K(z1, z2; X, P)` is the cross-Wigner function of the coherent states
//! `z1` (left, conjugated) and `z2`. Stripping the factor
//! `exp(-(|z1|^2 + |z2|^2)/2)` leaves a function analytic in
//! `(w1, w2) = (z1*, z2)`,
//!
//! ```text
//! K~(w1, w2) = (1/(pi hbar)) exp(-xi - w1 w2 + sqrt2 w1 (u + iv) + sqrt2 w2 (u - iv)),
//! ```
//!
//! with `u = X/a`, `v = P a / hbar`, whose Taylor coefficient of
//! `w1^m w2^n` is `W[psi_m, psi_n] / sqrt(m! n!)`. The diagonal `z1 = z2`
//! reproduces the coherent-state Wigner function exactly.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::state::MAX_COHERENT_MODULUS;

/// Radius of the Cauchy circles used to extract Taylor coefficients.
pub const CAUCHY_RADIUS: f64 = 0.8;

/// Analytic part `K~(w1, w2)` of the generating kernel.
pub fn generating_kernel(params: &OscillatorParams, w1: Complex64, w2: Complex64, pt: PhaseSpacePoint) -> Complex64 {
    let u = pt.x / params.length_scale();
    let v = pt.p / params.momentum_scale();
    let plus = Complex64::new(u, v) * SQRT_2;
    let minus = Complex64::new(u, -v) * SQRT_2;
    let exponent = -(u * u + v * v) - w1 * w2 + w1 * plus + w2 * minus;
    exponent.exp() / (PI * params.hbar())
}

/// Full kernel `K(z1, z2; X, P)`, the coherent-state cross-Wigner function.
pub fn k_function(params: &OscillatorParams, z1: Complex64, z2: Complex64, pt: PhaseSpacePoint) -> Result<Complex64> {
    for z in [z1, z2] {
        let modulus = z.norm();
        if !modulus.is_finite() || modulus > MAX_COHERENT_MODULUS {
            return Err(Error::CoherentOutOfRange { modulus });
        }
    }
    let damping = (-0.5 * (z1.norm_sqr() + z2.norm_sqr())).exp();
    Ok(generating_kernel(params, z1.conj(), z2, pt) * damping)
}

/// Nodes per Cauchy circle. The aliased Taylor terms shrink like
/// `(2 e r^2 xi / N)^{N/2}`, so the count grows with `xi` beyond the `4n + 8`
/// that suffices near the origin.
pub fn cauchy_nodes(n: usize, xi: f64) -> usize {
    let by_xi = (8.0 * std::f64::consts::E * CAUCHY_RADIUS * CAUCHY_RADIUS * xi).ceil() as usize;
    (4 * n + 8).max(40).max(by_xi)
}

/// `d^n/dw1^n d^n/dw2^n K~` at the origin, by trapezoid quadrature on two
/// circles of radius [`CAUCHY_RADIUS`] with [`cauchy_nodes`] nodes each.
///
/// Equals `n! W_n(X, P)`.
pub fn kernel_mixed_derivative(params: &OscillatorParams, n: usize, pt: PhaseSpacePoint) -> Complex64 {
    let nodes = cauchy_nodes(n, params.xi(pt));
    let roots: Vec<Complex64> =
        (0..nodes).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64)).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for (j, r1) in roots.iter().enumerate() {
        for (k, r2) in roots.iter().enumerate() {
            let value = generating_kernel(params, r1 * CAUCHY_RADIUS, r2 * CAUCHY_RADIUS, pt);
            // e^{-i n (theta_j + theta_k)}
            let twist = roots[(nodes - (n * (j + k)) % nodes) % nodes];
            sum += value * twist;
        }
    }
    let coefficient = sum / (nodes * nodes) as f64 / CAUCHY_RADIUS.powi(2 * n as i32);
    let n_factorial: f64 = (1..=n).map(|j| j as f64).product();
    coefficient * n_factorial * n_factorial
}

/// `W_n(X, P)` recovered from the generating kernel.
pub fn eigen_wigner_from_kernel(params: &OscillatorParams, n: usize, pt: PhaseSpacePoint) -> f64 {
    let n_factorial: f64 = (1..=n).map(|j| j as f64).product();
    kernel_mixed_derivative(params, n, pt).re / n_factorial
}
