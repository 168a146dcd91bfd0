//! The Wigner transform of oscillator states: closed forms, the quadrature
//! oracle, grids, marginals, moments, and the generating kernel.

mod closed;
pub mod generating;
mod grid;
mod marginals;
mod quadrature;

pub use closed::{
    wigner_averaged, wigner_coherent, wigner_cross, wigner_eigen_exact, wigner_exact, wigner_ground,
    wigner_scaled_energy, wigner_scaled_energy_averaged, wigner_superposition,
};
pub use generating::{cauchy_nodes, eigen_wigner_from_kernel, generating_kernel, k_function, kernel_mixed_derivative};
pub use grid::{Estimate, Method, PhaseGrid, WignerField, DEFAULT_NODES, TRUNCATION_RATIO};
pub use marginals::{
    exact_field, marginal_momentum, marginal_position, momentum_density, momentum_wavefunction,
    position_density, symmetric_xp, weyl_moment,
};
pub use quadrature::{cross_wigner_quadrature, wigner_quadrature, QUADRATURE_TOL};

use serde::{Deserialize, Serialize};

/// One point of a `pi hbar W` curve against `E(X,P) / E_clas`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub r: f64,
    pub value: f64,
}

/// `pi hbar W_n` sampled along `r = E/E_clas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledEnergyCurve {
    pub n: usize,
    pub half_width: usize,
    pub samples: Vec<CurveSample>,
}

impl ScaledEnergyCurve {
    /// `samples` uniform points on `[0, r_max]`; `half_width > 0` gives the
    /// window-averaged curve.
    pub fn new(n: usize, half_width: usize, r_max: f64, samples: usize) -> crate::Result<Self> {
        if n == 0 {
            return Err(crate::Error::InvalidArgument("scaled-energy curves need n >= 1".into()));
        }
        if !(r_max.is_finite() && r_max > 0.0) || samples < 2 {
            return Err(crate::Error::InvalidArgument(format!(
                "need r_max > 0 and at least 2 samples, got {r_max} and {samples}"
            )));
        }
        let samples = crate::quad::linspace(0.0, r_max, samples)
            .into_iter()
            .map(|r| {
                let value = if half_width == 0 {
                    wigner_scaled_energy(n, r)
                } else {
                    wigner_scaled_energy_averaged(n, half_width, r)?
                };
                Ok(CurveSample { r, value })
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Self { n, half_width, samples })
    }

    /// Number of strict sign changes along the curve, samples exactly at zero
    /// skipped.
    pub fn sign_changes(&self) -> usize {
        count_sign_changes(self.samples.iter().map(|s| s.value))
    }
}

/// Number of sign changes in a sequence, skipping exact zeros.
pub fn count_sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}
