//! Marginal densities and symmetric-ordered phase-space moments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::quad::{linspace, trapezoid, AdaptiveSimpson};
use crate::state::QuantumState;

use super::closed::wigner_exact;
use super::grid::{check_moment_order, Estimate, PhaseGrid, WignerField, Method, DEFAULT_NODES};

/// Node count for a 1D trapezoid of a band-limited Wigner slice.
fn slice_nodes(radius: f64, conjugate_radius: f64, hbar: f64) -> usize {
    let step = 0.5 * PI * hbar / conjugate_radius;
    ((2.0 * radius / step).ceil() as usize + 1).max(DEFAULT_NODES)
}

fn slice_estimate(values: &[f64], step: f64) -> Estimate {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = values[0].abs().max(values[values.len() - 1].abs());
    Estimate {
        value: trapezoid(values, step),
        boundary_ratio: if peak == 0.0 { 0.0 } else { edge / peak },
    }
}

/// `int dP W(x, P)`, which should equal `|psi(x)|^2`.
pub fn marginal_position(params: &OscillatorParams, state: &QuantumState, x: f64) -> Estimate {
    let sup = state.support(params);
    let n = slice_nodes(sup.p_radius, sup.x_radius, params.hbar());
    let ps = linspace(sup.center.p - sup.p_radius, sup.center.p + sup.p_radius, n);
    let values: Vec<f64> = ps.iter().map(|&p| wigner_exact(params, state, PhaseSpacePoint::new(x, p))).collect();
    slice_estimate(&values, ps[1] - ps[0])
}

/// `int dX W(X, p)`, which should equal `|psi~(p)|^2`.
pub fn marginal_momentum(params: &OscillatorParams, state: &QuantumState, p: f64) -> Estimate {
    let sup = state.support(params);
    let n = slice_nodes(sup.x_radius, sup.p_radius, params.hbar());
    let xs = linspace(sup.center.x - sup.x_radius, sup.center.x + sup.x_radius, n);
    let values: Vec<f64> = xs.iter().map(|&x| wigner_exact(params, state, PhaseSpacePoint::new(x, p))).collect();
    slice_estimate(&values, xs[1] - xs[0])
}

/// `|psi(x)|^2`.
pub fn position_density(params: &OscillatorParams, state: &QuantumState, x: f64) -> f64 {
    state.psi(params, x).norm_sqr()
}

/// Momentum-space wavefunction `(2 pi hbar)^{-1/2} int dx e^{-ipx/hbar} psi(x)`
/// by adaptive quadrature.
pub fn momentum_wavefunction(params: &OscillatorParams, state: &QuantumState, p: f64) -> Result<Complex64> {
    let sup = state.support(params);
    let hbar = params.hbar();
    let (lo, hi) = (sup.center.x - sup.x_radius, sup.center.x + sup.x_radius);
    let k = state.bandwidth(params) + (p - sup.center.p).abs() / hbar;
    let panels = (((hi - lo) * k / (2.0 * PI)) * 4.0).ceil().max(8.0) as usize;
    let rule = AdaptiveSimpson::new(1e-13).with_panels(panels);
    let integral: Complex64 =
        rule.integrate(|x| state.psi(params, x) * Complex64::from_polar(1.0, -p * x / hbar), lo, hi)?;
    Ok(integral / (2.0 * PI * hbar).sqrt())
}

/// `|psi~(p)|^2`.
pub fn momentum_density(params: &OscillatorParams, state: &QuantumState, p: f64) -> Result<f64> {
    Ok(momentum_wavefunction(params, state, p)?.norm_sqr())
}

/// Closed-form Wigner function of `state` sampled on its automatic grid.
pub fn exact_field(params: &OscillatorParams, state: &QuantumState) -> Result<WignerField> {
    let grid = PhaseGrid::auto(params, state);
    WignerField::evaluate(grid, Method::ExactLaguerre, state.describe(), |pt| Ok(wigner_exact(params, state, pt)))
}

/// Weyl-ordered moment `int int X^k P^l W dX dP`, `k + l <= 4`.
pub fn weyl_moment(params: &OscillatorParams, state: &QuantumState, k: u32, l: u32) -> Result<Estimate> {
    check_moment_order(k, l)?;
    exact_field(params, state)?.moment(k, l)
}

/// `<xp + px> = 2 int int X P W dX dP`.
pub fn symmetric_xp(params: &OscillatorParams, state: &QuantumState) -> Result<Estimate> {
    let m = weyl_moment(params, state, 1, 1)?;
    Ok(Estimate { value: 2.0 * m.value, ..m })
}
