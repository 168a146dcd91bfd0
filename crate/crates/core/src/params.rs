//! Physical constants of the oscillator and phase-space points.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass, angular frequency and reduced Planck constant of the oscillator.
///
/// Everything else in the crate is expressed in the unit system these fix,
/// in particular the length scale `a = sqrt(hbar / (m omega))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    mass: f64,
    omega: f64,
    hbar: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        let params = Self { mass, omega, hbar };
        let (a, t) = (params.length_scale(), params.period());
        if !(a.is_finite() && a > 0.0 && t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParams(format!(
                "derived scales out of range: a = {a}, T = {t}"
            )));
        }
        Ok(params)
    }

    /// m = omega = hbar = 1.
    pub fn natural() -> Self {
        Self { mass: 1.0, omega: 1.0, hbar: 1.0 }
    }

    /// Same mass and frequency, different Planck constant.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        Self::new(self.mass, self.omega, hbar)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `a = sqrt(hbar / (m omega))`.
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// `hbar / a`, the natural momentum unit.
    pub fn momentum_scale(&self) -> f64 {
        (self.hbar * self.mass * self.omega).sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// `E_n = hbar omega (n + 1/2)`.
    pub fn eigen_energy(&self, n: usize) -> f64 {
        self.hbar * self.omega * (n as f64 + 0.5)
    }

    /// Classical energy `P^2/2m + m omega^2 X^2 / 2` of a phase-space point.
    pub fn energy(&self, pt: PhaseSpacePoint) -> f64 {
        0.5 * pt.p * pt.p / self.mass + 0.5 * self.mass * self.omega * self.omega * pt.x * pt.x
    }

    /// `xi = (X/a)^2 + (P a / hbar)^2`.
    pub fn xi(&self, pt: PhaseSpacePoint) -> f64 {
        let u = pt.x / self.length_scale();
        let v = pt.p / self.momentum_scale();
        u * u + v * v
    }

    /// Turning point `sqrt(2E / (m omega^2))` of the orbit with energy `energy`.
    pub fn turning_point(&self, energy: f64) -> f64 {
        (2.0 * energy / (self.mass * self.omega * self.omega)).sqrt()
    }

    /// Peak momentum `sqrt(2 m E)` of the orbit with energy `energy`.
    pub fn peak_momentum(&self, energy: f64) -> f64 {
        (2.0 * self.mass * energy).sqrt()
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self::natural()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub x: f64,
    pub p: f64,
}

impl PhaseSpacePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, p: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.p.is_finite()
    }
}

impl std::ops::Neg for PhaseSpacePoint {
    type Output = Self;

    fn neg(self) -> Self {
        Self { x: -self.x, p: -self.p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_constants() {
        assert!(OscillatorParams::new(0.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn length_scale_identity() {
        for &(m, w, h) in &[(1.0, 1.0, 1.0), (2.5, 0.3, 0.01), (1e-3, 7.0, 3.0), (9.1, 1e3, 1e-4)] {
            let params = OscillatorParams::new(m, w, h).unwrap();
            let a = params.length_scale();
            let rel = (a * a * m * w - h).abs() / h;
            assert!(rel < 4.0 * f64::EPSILON, "rel = {rel}");
            assert!((params.period() - 2.0 * PI / w).abs() < 1e-15 * params.period());
        }
    }

    #[test]
    fn xi_matches_scaled_energy() {
        let params = OscillatorParams::new(1.3, 0.7, 0.2).unwrap();
        let pt = PhaseSpacePoint::new(0.4, -0.9);
        let e = params.energy(pt);
        let xi = params.xi(pt);
        assert!((xi - 2.0 * e / (params.hbar() * params.omega())).abs() < 1e-13);
    }
}
