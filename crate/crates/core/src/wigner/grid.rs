//! Rectangular phase-space grids and Wigner functions sampled on them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::quad::trapezoid_weight;
use crate::state::{QuantumState, Support};

/// Default node count per axis for automatically sized grids.
pub const DEFAULT_NODES: usize = 501;

/// Boundary-to-peak ratio above which a grid is considered to truncate the
/// support of the integrand.
pub const TRUNCATION_RATIO: f64 = 1e-10;

/// Uniform grid on `[x_min, x_max] x [p_min, p_max]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64, nx: usize, np: usize) -> Result<Self> {
        let finite = [x_min, x_max, p_min, p_max].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if x_min >= x_max || p_min >= p_max {
            return Err(Error::InvalidGrid(format!(
                "need x_min < x_max and p_min < p_max, got [{x_min}, {x_max}] x [{p_min}, {p_max}]"
            )));
        }
        if nx < 2 || np < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes per axis, got {nx} x {np}")));
        }
        Ok(Self { x_min, x_max, p_min, p_max, nx, np })
    }

    /// Grid covering `support`, with at least `min_nodes` per axis and fine
    /// enough that the trapezoid rule does not alias a band-limited Wigner
    /// function of that support.
    pub fn covering(params: &OscillatorParams, support: &Support, min_nodes: usize) -> Self {
        let hbar = params.hbar();
        // Along X the Wigner function has spectral content up to 2 P_r / hbar,
        // along P up to 2 X_r / hbar; we keep half the aliasing-free step.
        let hx = 0.5 * PI * hbar / support.p_radius;
        let hp = 0.5 * PI * hbar / support.x_radius;
        let nx = ((2.0 * support.x_radius / hx).ceil() as usize + 1).max(min_nodes);
        let np = ((2.0 * support.p_radius / hp).ceil() as usize + 1).max(min_nodes);
        Self {
            x_min: support.center.x - support.x_radius,
            x_max: support.center.x + support.x_radius,
            p_min: support.center.p - support.p_radius,
            p_max: support.center.p + support.p_radius,
            nx,
            np,
        }
    }

    /// Default grid for a state: turning point plus eight length units on
    /// each side, [`DEFAULT_NODES`] nodes or more.
    pub fn auto(params: &OscillatorParams, state: &QuantumState) -> Self {
        Self::covering(params, &state.support(params), DEFAULT_NODES)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + self.dx() * i as f64
        }
    }

    pub fn p(&self, j: usize) -> f64 {
        if j + 1 == self.np {
            self.p_max
        } else {
            self.p_min + self.dp() * j as f64
        }
    }

    pub fn point(&self, i: usize, j: usize) -> PhaseSpacePoint {
        PhaseSpacePoint::new(self.x(i), self.p(j))
    }

    pub fn len(&self) -> usize {
        self.nx * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fixed-order 2D trapezoid sum of `f` over the grid.
    pub fn integrate<F: Fn(PhaseSpacePoint) -> f64>(&self, f: F) -> f64 {
        let mut total = 0.0;
        for i in 0..self.nx {
            let mut row = 0.0;
            for j in 0..self.np {
                row += trapezoid_weight(j, self.np) * f(self.point(i, j));
            }
            total += trapezoid_weight(i, self.nx) * row;
        }
        total * self.dx() * self.dp()
    }
}

/// How a [`WignerField`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactLaguerre,
    Quadrature,
    WkbClosed,
    WkbNumeric,
    Averaged,
    ClassicalSmeared,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ExactLaguerre => "exact-laguerre",
            Self::Quadrature => "quadrature",
            Self::WkbClosed => "wkb-closed",
            Self::WkbNumeric => "wkb-numeric",
            Self::Averaged => "averaged",
            Self::ClassicalSmeared => "classical-smeared",
        }
    }
}

/// A grid integral together with how much of the integrand sits on the grid
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Largest boundary magnitude divided by the largest interior magnitude.
    pub boundary_ratio: f64,
}

impl Estimate {
    pub fn truncated(&self) -> bool {
        self.boundary_ratio > TRUNCATION_RATIO
    }

    /// The value, or [`Error::SupportTruncated`] if the grid cut the support.
    pub fn strict(self) -> Result<f64> {
        if self.truncated() {
            Err(Error::SupportTruncated { ratio: self.boundary_ratio })
        } else {
            Ok(self.value)
        }
    }
}

/// Wigner function sampled on a [`PhaseGrid`].
///
/// `values[i * np + j]` is the value at `(x(i), p(j))`, i.e. X-major with P
/// varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    pub grid: PhaseGrid,
    pub values: Vec<f64>,
    pub method: Method,
    pub state: String,
}

impl WignerField {
    /// Evaluates `f` at every node. Rows are filled in parallel; each value only
    /// depends on its own point, so the result does not depend on scheduling.
    pub fn evaluate<F>(grid: PhaseGrid, method: Method, state: String, f: F) -> Result<Self>
    where
        F: Fn(PhaseSpacePoint) -> Result<f64> + Sync,
    {
        let rows: Vec<Vec<f64>> = (0..grid.nx)
            .into_par_iter()
            .map(|i| (0..grid.np).map(|j| f(grid.point(i, j))).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            let pt = grid.point(k / grid.np, k % grid.np);
            return Err(Error::InvalidArgument(format!(
                "non-finite Wigner value at X = {}, P = {}",
                pt.x, pt.p
            )));
        }
        Ok(Self { grid, values, method, state })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.np + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest magnitude on the grid boundary relative to the largest overall.
    pub fn boundary_ratio(&self) -> f64 {
        let (nx, np) = (self.grid.nx, self.grid.np);
        let mut edge = 0.0f64;
        for i in 0..nx {
            edge = edge.max(self.value(i, 0).abs()).max(self.value(i, np - 1).abs());
        }
        for j in 0..np {
            edge = edge.max(self.value(0, j).abs()).max(self.value(nx - 1, j).abs());
        }
        let peak = self.max_abs();
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// Trapezoid `int int g(X, P) W(X, P) dX dP` in fixed summation order.
    pub fn weighted_integral<G: Fn(PhaseSpacePoint) -> f64>(&self, g: G) -> Estimate {
        let (nx, np) = (self.grid.nx, self.grid.np);
        let mut total = 0.0;
        for i in 0..nx {
            let mut row = 0.0;
            for j in 0..np {
                row += trapezoid_weight(j, np) * g(self.grid.point(i, j)) * self.value(i, j);
            }
            total += trapezoid_weight(i, nx) * row;
        }
        Estimate { value: total * self.grid.dx() * self.grid.dp(), boundary_ratio: self.boundary_ratio() }
    }

    /// `int int W dX dP`.
    pub fn integral(&self) -> Estimate {
        self.weighted_integral(|_| 1.0)
    }

    /// Phase-space moment `int int X^k P^l W dX dP`, `k + l <= 4`.
    pub fn moment(&self, k: u32, l: u32) -> Result<Estimate> {
        check_moment_order(k, l)?;
        Ok(self.weighted_integral(|pt| pt.x.powi(k as i32) * pt.p.powi(l as i32)))
    }

    /// `int dP W(x_i, P)` for every `x_i` of the grid.
    pub fn marginal_position(&self) -> Vec<f64> {
        let (nx, np) = (self.grid.nx, self.grid.np);
        (0..nx)
            .map(|i| (0..np).map(|j| trapezoid_weight(j, np) * self.value(i, j)).sum::<f64>() * self.grid.dp())
            .collect()
    }

    /// `int dX W(X, p_j)` for every `p_j` of the grid.
    pub fn marginal_momentum(&self) -> Vec<f64> {
        let (nx, np) = (self.grid.nx, self.grid.np);
        (0..np)
            .map(|j| (0..nx).map(|i| trapezoid_weight(i, nx) * self.value(i, j)).sum::<f64>() * self.grid.dx())
            .collect()
    }
}

pub(crate) fn check_moment_order(k: u32, l: u32) -> Result<()> {
    if k + l > 4 {
        return Err(Error::MomentOrderTooHigh { order: k + l });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(PhaseGrid::new(0.0, 1.0, 0.0, 1.0, 2, 2).is_ok());
        assert!(PhaseGrid::new(1.0, 1.0, 0.0, 1.0, 5, 5).is_err());
        assert!(PhaseGrid::new(0.0, 1.0, 2.0, 1.0, 5, 5).is_err());
        assert!(PhaseGrid::new(0.0, 1.0, 0.0, 1.0, 1, 5).is_err());
        assert!(PhaseGrid::new(0.0, f64::NAN, 0.0, 1.0, 5, 5).is_err());
    }

    #[test]
    fn nodes_include_endpoints() {
        let g = PhaseGrid::new(-2.0, 3.0, -1.0, 1.0, 11, 7).unwrap();
        assert_eq!(g.x(0), -2.0);
        assert_eq!(g.x(10), 3.0);
        assert_eq!(g.p(6), 1.0);
        assert!((g.x(5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn auto_grid_covers_turning_point() {
        let params = OscillatorParams::new(1.0, 1.0, 0.25).unwrap();
        let g = PhaseGrid::auto(&params, &QuantumState::eigen(60));
        let xt = params.turning_point(params.eigen_energy(60));
        assert!(g.x_max >= xt + 8.0 * params.length_scale() - 1e-12);
        assert!(g.nx >= DEFAULT_NODES);
    }

    #[test]
    fn integral_of_constant() {
        let g = PhaseGrid::new(0.0, 2.0, -1.0, 2.0, 21, 31).unwrap();
        let f = WignerField::evaluate(g, Method::ExactLaguerre, "c".into(), |_| Ok(0.5)).unwrap();
        assert!((f.integral().value - 3.0).abs() < 1e-14);
        assert!(f.integral().truncated());
        assert!(matches!(f.moment(3, 2), Err(Error::MomentOrderTooHigh { order: 5 })));
    }
}
