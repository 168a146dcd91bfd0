//! Semiclassical (WKB) eigenfunctions and the Wigner functions built from them.
//!
//! The WKB eigenfunction of level `n` is `A / sqrt(p(x)) sin(S(x)/hbar + mu)`
//! with `E = hbar omega (n + 1/2)`, `A = sqrt(4m/T)` and `S(-x_max) = 0`. Its
//! Wigner function is available by direct quadrature over the classically
//! allowed chord range and in the closed form obtained by linearizing the
//! action around `X`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::quad::AdaptiveSimpson;
use crate::special::sinc;

/// Default guard band around the turning points, as a fraction of `x_max`.
pub const DEFAULT_GUARD: f64 = 0.02;

/// Fraction of the chord range over which the numeric Wigner integrand is
/// tapered to zero.
pub const TAPER_FRACTION: f64 = 0.05;

/// Phase contributed by a Maslov index of one half.
pub const MASLOV_PHASE: f64 = FRAC_PI_4;

/// Kernel half-width in units of the smoothing width.
const SMOOTHING_SPAN: f64 = 3.0;

/// Parameters of one semiclassical level. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbContext {
    params: OscillatorParams,
    n: usize,
    energy: f64,
    x_max: f64,
    amplitude: f64,
    phase: f64,
    guard: f64,
}

/// The two pieces of the closed-form semiclassical Wigner function: the
/// `P = +-p(X)` ridges and the interference term carrying `cos(2S/hbar)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbTerms {
    pub direct: f64,
    pub cross: f64,
}

impl WkbTerms {
    pub fn total(&self) -> f64 {
        self.direct + self.cross
    }
}

impl WkbContext {
    pub fn new(params: OscillatorParams, n: usize) -> Self {
        let energy = params.eigen_energy(n);
        Self {
            params,
            n,
            energy,
            x_max: params.turning_point(energy),
            amplitude: (4.0 * params.mass() / params.period()).sqrt(),
            phase: MASLOV_PHASE,
            guard: DEFAULT_GUARD,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_guard(mut self, guard: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&guard) {
            return Err(Error::InvalidArgument(format!("guard must lie in [0, 1), got {guard}")));
        }
        self.guard = guard;
        Ok(self)
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    /// Edge of the region where [`psi_wkb`](Self::psi_wkb) is evaluated.
    pub fn guard_limit(&self) -> f64 {
        self.x_max * (1.0 - self.guard)
    }

    fn check_allowed(&self, x: f64) -> Result<()> {
        if !(x.abs() <= self.x_max) {
            return Err(Error::OutsideAllowedRegion { x, x_max: self.x_max });
        }
        Ok(())
    }

    fn check_interior(&self, x: f64) -> Result<()> {
        if !(x.abs() < self.x_max) {
            return Err(Error::OutsideAllowedRegion { x, x_max: self.x_max });
        }
        Ok(())
    }

    /// `p(x) = sqrt(2m (E - m omega^2 x^2 / 2))`.
    pub fn local_momentum(&self, x: f64) -> Result<f64> {
        self.check_allowed(x)?;
        Ok(self.momentum_unchecked(x))
    }

    fn momentum_unchecked(&self, x: f64) -> f64 {
        let m = self.params.mass();
        let w = self.params.omega();
        (2.0 * m * (self.energy - 0.5 * m * w * w * x * x)).max(0.0).sqrt()
    }

    /// `S(x) = (E/omega) (phi + sin(2 phi)/2 + pi/2)`, `phi = asin(x / x_max)`.
    pub fn action(&self, x: f64) -> Result<f64> {
        self.check_allowed(x)?;
        Ok(self.action_unchecked(x))
    }

    fn action_unchecked(&self, x: f64) -> f64 {
        let phi = (x / self.x_max).clamp(-1.0, 1.0).asin();
        self.energy / self.params.omega() * (phi + 0.5 * (2.0 * phi).sin() + FRAC_PI_2)
    }

    /// `oint p dx = 2 pi E / omega` over one period (equals `2 pi hbar (n + 1/2)`).
    pub fn quantization_integral(&self) -> f64 {
        2.0 * PI * self.energy / self.params.omega()
    }

    /// WKB wavefunction, refused inside the turning-point guard band.
    pub fn psi_wkb(&self, x: f64) -> Result<f64> {
        self.check_allowed(x)?;
        let limit = self.guard_limit();
        if x.abs() > limit {
            return Err(Error::TurningPointRegion { x, limit });
        }
        Ok(self.amplitude * self.reduced_psi(x))
    }

    /// `sin(S/hbar + mu) / sqrt(p)`, no range checks.
    fn reduced_psi(&self, x: f64) -> f64 {
        (self.action_unchecked(x) / self.params.hbar() + self.phase).sin() / self.momentum_unchecked(x).sqrt()
    }

    /// Largest error of the linearized action `S(X) +- p(X) s/2` at chord
    /// half-length `s/2`.
    pub fn linearization_error(&self, x: f64, s: f64) -> Result<f64> {
        self.check_allowed(x + 0.5 * s)?;
        self.check_allowed(x - 0.5 * s)?;
        let (s0, p0) = (self.action_unchecked(x), self.momentum_unchecked(x));
        let plus = (self.action_unchecked(x + 0.5 * s) - s0 - 0.5 * p0 * s).abs();
        let minus = (self.action_unchecked(x - 0.5 * s) - s0 + 0.5 * p0 * s).abs();
        Ok(plus.max(minus))
    }

    /// Semiclassical Wigner function by quadrature of
    /// `A^2 int ds/(2 pi hbar) e^{iPs/hbar} psi(X - s/2) psi(X + s/2) / A^2`
    /// over `|s| < 2 (x_max - |X|)`, with a cosine taper over the outer
    /// [`TAPER_FRACTION`] of the range in place of the turning-point guard.
    pub fn wigner_numeric(&self, pt: PhaseSpacePoint) -> Result<f64> {
        self.check_interior(pt.x)?;
        let hbar = self.params.hbar();
        let range = 2.0 * (self.x_max - pt.x.abs());
        let taper_start = (1.0 - TAPER_FRACTION) * range;
        let integrand = |s: f64| {
            let w = if s <= taper_start {
                1.0
            } else {
                0.5 * (1.0 + (PI * (s - taper_start) / (range - taper_start)).cos())
            };
            if w == 0.0 {
                return 0.0;
            }
            w * self.reduced_psi(pt.x - 0.5 * s) * self.reduced_psi(pt.x + 0.5 * s) * (pt.p * s / hbar).cos()
        };
        let k = (self.momentum_unchecked(0.0) + pt.p.abs()) / hbar + 1.0 / self.params.length_scale();
        let panels = ((range * k / (2.0 * PI)) * 4.0).ceil().max(16.0) as usize;
        let rule = AdaptiveSimpson { abs_tol: 1e-10, max_depth: 60, panels };
        let integral: f64 = rule.integrate(integrand, 0.0, range)?;
        Ok(self.amplitude * self.amplitude * integral / (PI * hbar))
    }

    /// Closed-form semiclassical Wigner function split into its two terms.
    ///
    /// For `X < 0` the value at `(-X, -P)` is returned. Every `sin(k q)/q`
    /// factor is evaluated as `k sinc(k q)`, so the caustics `P = +-p(X)` and
    /// the line `P = 0` are regular.
    pub fn closed_terms(&self, pt: PhaseSpacePoint) -> Result<WkbTerms> {
        self.check_interior(pt.x)?;
        let pt = if pt.x < 0.0 { -pt } else { pt };
        let hbar = self.params.hbar();
        let p = self.momentum_unchecked(pt.x);
        let k = 2.0 * (self.x_max - pt.x) / hbar;
        let a2 = self.amplitude * self.amplitude;
        let direct = a2 / (4.0 * PI * p) * k * (sinc(k * (pt.p + p)) + sinc(k * (pt.p - p)));
        let oscillation = (2.0 * self.action_unchecked(pt.x) / hbar + 2.0 * self.phase).cos();
        let cross = -a2 / (2.0 * PI * p) * k * sinc(k * pt.p) * oscillation;
        Ok(WkbTerms { direct, cross })
    }

    pub fn wigner_closed(&self, pt: PhaseSpacePoint) -> Result<f64> {
        Ok(self.closed_terms(pt)?.total())
    }

    /// Closed form treated as zero outside the allowed region.
    pub fn closed_terms_or_zero(&self, pt: PhaseSpacePoint) -> WkbTerms {
        self.closed_terms(pt).unwrap_or(WkbTerms { direct: 0.0, cross: 0.0 })
    }

    /// Narrowest smoothing width accepted at `x`: the period `pi hbar / p(x)`
    /// of the `cos(2S/hbar)` interference term.
    pub fn smoothing_bound(&self, x: f64) -> Result<f64> {
        self.check_interior(x)?;
        Ok(PI * self.params.hbar() / self.momentum_unchecked(x))
    }

    /// Both closed-form terms convolved in `X` with a normalized Gaussian of
    /// width `sigma` (discrete kernel over `+-3 sigma`).
    pub fn smoothed_terms(&self, pt: PhaseSpacePoint, sigma: f64) -> Result<WkbTerms> {
        let bound = self.smoothing_bound(pt.x)?;
        if !(sigma >= bound) {
            return Err(Error::SmoothingTooNarrow { sigma, bound });
        }
        let hbar = self.params.hbar();
        let step = (sigma / 16.0).min(PI * hbar / (16.0 * self.momentum_unchecked(0.0)));
        let half = (SMOOTHING_SPAN * sigma / step).ceil() as i64;
        let mut weight_sum = 0.0;
        let (mut direct, mut cross) = (0.0, 0.0);
        for k in -half..=half {
            let offset = k as f64 * step;
            let w = (-0.5 * (offset / sigma).powi(2)).exp();
            weight_sum += w;
            let t = self.closed_terms_or_zero(PhaseSpacePoint::new(pt.x + offset, pt.p));
            direct += w * t.direct;
            cross += w * t.cross;
        }
        Ok(WkbTerms { direct: direct / weight_sum, cross: cross / weight_sum })
    }

    pub fn wigner_smoothed(&self, pt: PhaseSpacePoint, sigma: f64) -> Result<f64> {
        Ok(self.smoothed_terms(pt, sigma)?.total())
    }
}
