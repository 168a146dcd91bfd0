//! Direct quadrature of the defining integral
//! `W(X,P) = (1/2 pi hbar) int ds psi*(X - s/2) e^{-iPs/hbar} psi(X + s/2)`.
//!
//! This is the independent oracle the closed forms are checked against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::quad::AdaptiveSimpson;
use crate::state::{psi_eigen, QuantumState, Support};

/// Absolute tolerance on `int ds psi* psi e^{...}`, i.e. per unit of `1/(pi hbar)`.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Panels per oscillation period of the integrand.
const PANELS_PER_PERIOD: f64 = 4.0;

/// Half-range in `s` where both `X +- s/2` stay inside the support.
fn s_half_range(support: &Support, x: f64) -> f64 {
    let d = (x - support.center.x).abs();
    (2.0 * (support.x_radius - d)).max(0.0)
}

fn panels_for(s_range: f64, wavenumber: f64) -> usize {
    ((s_range * wavenumber / (2.0 * PI)) * PANELS_PER_PERIOD).ceil().max(8.0) as usize
}

/// Wigner function of `state` at `pt` by adaptive Simpson quadrature.
///
/// The integrand at `-s` is the complex conjugate of the one at `s`, so only
/// `s >= 0` is integrated. The range is cut where either factor leaves the
/// state's support (envelope below ~1e-14 of its peak).
pub fn wigner_quadrature(params: &OscillatorParams, state: &QuantumState, pt: PhaseSpacePoint) -> Result<f64> {
    let support = state.support(params);
    let s_max = s_half_range(&support, pt.x);
    if s_max == 0.0 {
        return Ok(0.0);
    }
    let hbar = params.hbar();
    let k = state.bandwidth(params) + (pt.p - support.center.p).abs() / hbar;
    let rule = AdaptiveSimpson::new(QUADRATURE_TOL).with_panels(panels_for(s_max, k));
    let integral: f64 = match state {
        QuantumState::Eigenstate { n } => rule.integrate(
            |s| {
                psi_eigen(params, *n, pt.x - 0.5 * s)
                    * psi_eigen(params, *n, pt.x + 0.5 * s)
                    * (pt.p * s / hbar).cos()
            },
            0.0,
            s_max,
        )?,
        _ => rule.integrate(
            |s| {
                let left = state.psi(params, pt.x - 0.5 * s).conj();
                let right = state.psi(params, pt.x + 0.5 * s);
                (left * right * Complex64::from_polar(1.0, -pt.p * s / hbar)).re
            },
            0.0,
            s_max,
        )?,
    };
    Ok(integral / (PI * hbar))
}

/// Cross-Wigner function `(1/2 pi hbar) int ds left*(X - s/2) e^{-iPs/hbar} right(X + s/2)`
/// between two states, by quadrature over the full `s` range.
pub fn cross_wigner_quadrature(
    params: &OscillatorParams,
    left: &QuantumState,
    right: &QuantumState,
    pt: PhaseSpacePoint,
) -> Result<Complex64> {
    let (sl, sr) = (left.support(params), right.support(params));
    let hbar = params.hbar();
    // s must keep X - s/2 inside the left support and X + s/2 inside the right one.
    let (cl, rl) = (sl.center.x, sl.x_radius);
    let (cr, rr) = (sr.center.x, sr.x_radius);
    let lo = (2.0 * (pt.x - cl - rl)).max(2.0 * (cr - rr - pt.x));
    let hi = (2.0 * (pt.x - cl + rl)).min(2.0 * (cr + rr - pt.x));
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = left.bandwidth(params)
        + right.bandwidth(params)
        + (pt.p.abs() + sl.center.p.abs() + sr.center.p.abs()) / hbar;
    let rule = AdaptiveSimpson::new(QUADRATURE_TOL).with_panels(panels_for(hi - lo, k));
    let integral: Complex64 = rule.integrate(
        |s| {
            left.psi(params, pt.x - 0.5 * s).conj()
                * right.psi(params, pt.x + 0.5 * s)
                * Complex64::from_polar(1.0, -pt.p * s / hbar)
        },
        lo,
        hi,
    )?;
    Ok(integral / (2.0 * PI * hbar))
}
