//! Eigenstates, coherent states and finite superpositions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::special::{hermite_function, hermite_functions, PI_POW_NEG_QUARTER};

/// Largest coherent amplitude accepted by [`psi_coherent`].
pub const MAX_COHERENT_MODULUS: f64 = 30.0;

/// Distance (in units of `a`) kept beyond the outermost classical turning
/// point when bounding a state's support.
pub const TAIL_LENGTHS: f64 = 8.0;

const NORM_TOLERANCE: f64 = 1e-12;

/// `psi_n(x) = a^{-1/2} h_n(x / a)`.
pub fn psi_eigen(params: &OscillatorParams, n: usize, x: f64) -> f64 {
    let a = params.length_scale();
    hermite_function(n, x / a) / a.sqrt()
}

/// Closed-form coherent state
/// `(a sqrt(pi))^{-1/2} exp(-(|z|^2 + z^2)/2 - x^2/2a^2 + sqrt(2) z x / a)`.
pub fn psi_coherent(params: &OscillatorParams, z: Complex64, x: f64) -> Result<Complex64> {
    check_coherent(z)?;
    Ok(coherent_unchecked(params, z, x))
}

fn coherent_unchecked(params: &OscillatorParams, z: Complex64, x: f64) -> Complex64 {
    let a = params.length_scale();
    let u = x / a;
    let exponent = -0.5 * (z.norm_sqr() + z * z) - 0.5 * u * u + std::f64::consts::SQRT_2 * z * u;
    exponent.exp() * (PI_POW_NEG_QUARTER / a.sqrt())
}

fn check_coherent(z: Complex64) -> Result<()> {
    let modulus = z.norm();
    if !modulus.is_finite() || modulus > MAX_COHERENT_MODULUS {
        return Err(Error::CoherentOutOfRange { modulus });
    }
    Ok(())
}

/// `z(t) = z e^{-i omega t}`.
pub fn coherent_evolve(z: Complex64, t: f64, omega: f64) -> Complex64 {
    z * Complex64::from_polar(1.0, -omega * t)
}

/// Mean position and momentum `(sqrt(2) a Re z, sqrt(2) (hbar/a) Im z)` of a
/// coherent state.
pub fn coherent_center(params: &OscillatorParams, z: Complex64) -> PhaseSpacePoint {
    let s = std::f64::consts::SQRT_2;
    PhaseSpacePoint::new(s * params.length_scale() * z.re, s * params.momentum_scale() * z.im)
}

/// Normalized finite superposition of energy eigenstates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    terms: Vec<(usize, Complex64)>,
}

impl Superposition {
    /// Builds the superposition, merging repeated levels. Fails unless
    /// `sum |c_n|^2 = 1` within `1e-12`.
    pub fn new(terms: impl IntoIterator<Item = (usize, Complex64)>) -> Result<Self> {
        let mut merged: Vec<(usize, Complex64)> = Vec::new();
        for (n, c) in terms {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidState(format!("non-finite amplitude for level {n}")));
            }
            match merged.iter_mut().find(|(m, _)| *m == n) {
                Some((_, acc)) => *acc += c,
                None => merged.push((n, c)),
            }
        }
        merged.sort_by_key(|&(n, _)| n);
        if merged.is_empty() {
            return Err(Error::InvalidState("empty superposition".into()));
        }
        let norm: f64 = merged.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { terms: merged })
    }

    pub fn terms(&self) -> &[(usize, Complex64)] {
        &self.terms
    }

    pub fn max_level(&self) -> usize {
        self.terms.last().map_or(0, |&(n, _)| n)
    }

    pub fn psi(&self, params: &OscillatorParams, x: f64) -> Complex64 {
        let a = params.length_scale();
        let table = hermite_functions(self.max_level(), x / a);
        let scale = 1.0 / a.sqrt();
        self.terms.iter().map(|&(n, c)| c * (table[n] * scale)).sum()
    }
}

/// A pure state of the oscillator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantumState {
    Eigenstate { n: usize },
    Coherent { z: Complex64 },
    Superposition(Superposition),
}

/// Rectangle in phase space outside of which a state's Wigner function is
/// negligible (below ~1e-14 of its peak).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub center: PhaseSpacePoint,
    /// Half-width in position.
    pub x_radius: f64,
    /// Half-width in momentum.
    pub p_radius: f64,
}

impl QuantumState {
    pub fn eigen(n: usize) -> Self {
        Self::Eigenstate { n }
    }

    pub fn coherent(z: Complex64) -> Result<Self> {
        check_coherent(z)?;
        Ok(Self::Coherent { z })
    }

    pub fn superposition(terms: impl IntoIterator<Item = (usize, Complex64)>) -> Result<Self> {
        Superposition::new(terms).map(Self::Superposition)
    }

    /// Position-space wavefunction.
    pub fn psi(&self, params: &OscillatorParams, x: f64) -> Complex64 {
        match self {
            Self::Eigenstate { n } => Complex64::new(psi_eigen(params, *n, x), 0.0),
            Self::Coherent { z } => coherent_unchecked(params, *z, x),
            Self::Superposition(s) => s.psi(params, x),
        }
    }

    /// Highest energy level that carries weight; coherent states report the
    /// level matching their mean energy.
    pub fn effective_level(&self) -> usize {
        match self {
            Self::Eigenstate { n } => *n,
            Self::Coherent { z } => z.norm_sqr().ceil() as usize,
            Self::Superposition(s) => s.max_level(),
        }
    }

    pub fn support(&self, params: &OscillatorParams) -> Support {
        let a = params.length_scale();
        let b = params.momentum_scale();
        match self {
            Self::Coherent { z } => Support {
                center: coherent_center(params, *z),
                x_radius: (1.0 + TAIL_LENGTHS) * a,
                p_radius: (1.0 + TAIL_LENGTHS) * b,
            },
            _ => {
                let rho = (2.0 * self.effective_level() as f64 + 1.0).sqrt() + TAIL_LENGTHS;
                Support { center: PhaseSpacePoint::origin(), x_radius: rho * a, p_radius: rho * b }
            }
        }
    }

    /// Upper bound on the spatial wavenumber of `psi` minus the carrier at the
    /// mean momentum.
    pub(crate) fn bandwidth(&self, params: &OscillatorParams) -> f64 {
        let a = params.length_scale();
        match self {
            Self::Coherent { .. } => 2.0 / a,
            _ => ((2.0 * self.effective_level() as f64 + 1.0).sqrt() + 1.0) / a,
        }
    }

    /// Short human-readable descriptor, e.g. `eigen(n=9)`.
    pub fn describe(&self) -> String {
        match self {
            Self::Eigenstate { n } => format!("eigen(n={n})"),
            Self::Coherent { z } => format!("coherent(z={}{:+}i)", z.re, z.im),
            Self::Superposition(s) => {
                let parts: Vec<String> = s
                    .terms()
                    .iter()
                    .map(|(n, c)| format!("{n}:{}{:+}i", c.re, c.im))
                    .collect();
                format!("superposition({})", parts.join(","))
            }
        }
    }
}
