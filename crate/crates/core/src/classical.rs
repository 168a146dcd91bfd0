//! Classical side of the oscillator: action-angle variables, the
//! microcanonical ensemble, and the harness that compares eigenstate averages
//! with their classical values as `hbar -> 0` at fixed energy.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::state::{QuantumState, Support};
use crate::wigner::{wigner_averaged, wigner_eigen_exact, wigner_scaled_energy, Estimate, Method, PhaseGrid, WignerField};

/// Tolerance on successive angle-quadrature estimates.
pub const ANGLE_TOL: f64 = 1e-12;

/// Half-widths of a test functional's window, in units of its widths.
pub const FUNCTIONAL_REACH: f64 = 9.0;

const MAX_ANGLE_NODES: usize = 1 << 22;

/// Action-angle coordinates of a point on an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionAngle {
    pub action: f64,
    pub angle: f64,
}

impl ActionAngle {
    pub fn new(action: f64, angle: f64) -> Result<Self> {
        if !(action >= 0.0 && action.is_finite()) || !angle.is_finite() {
            return Err(Error::InvalidArgument(format!("need action >= 0 and finite angle, got ({action}, {angle})")));
        }
        Ok(Self { action, angle: angle.rem_euclid(2.0 * PI) })
    }

    pub fn energy(&self, params: &OscillatorParams) -> f64 {
        self.action * params.omega()
    }
}

/// `x = sqrt(2I/(m omega)) cos phi`, `p = -m omega sqrt(2I/(m omega)) sin phi`.
pub fn action_angle_to_cartesian(params: &OscillatorParams, aa: ActionAngle) -> PhaseSpacePoint {
    let (m, w) = (params.mass(), params.omega());
    let amp = (2.0 * aa.action / (m * w)).sqrt();
    let (s, c) = aa.angle.sin_cos();
    PhaseSpacePoint::new(amp * c, -m * w * amp * s)
}

/// The action `E(X, P) / omega`.
pub fn action_of_point(params: &OscillatorParams, pt: PhaseSpacePoint) -> f64 {
    params.energy(pt) / params.omega()
}

/// Inverse of [`action_angle_to_cartesian`].
pub fn cartesian_to_action_angle(params: &OscillatorParams, pt: PhaseSpacePoint) -> ActionAngle {
    let mw = params.mass() * params.omega();
    let angle = (-pt.p / mw).atan2(pt.x).rem_euclid(2.0 * PI);
    ActionAngle { action: action_of_point(params, pt), angle }
}

/// Gaussian bump `exp(-(X-Xc)^2/2 sx^2 - (P-Pc)^2/2 sp^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctional {
    pub id: String,
    pub center: PhaseSpacePoint,
    pub sigma_x: f64,
    pub sigma_p: f64,
}

impl TestFunctional {
    pub fn new(id: impl Into<String>, center: PhaseSpacePoint, sigma_x: f64, sigma_p: f64) -> Result<Self> {
        let f = Self { id: id.into(), center, sigma_x, sigma_p };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.center.is_finite()
            && self.sigma_x > 0.0
            && self.sigma_p > 0.0
            && self.sigma_x.is_finite()
            && self.sigma_p.is_finite();
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "functional {:?} needs a finite center and positive widths",
                self.id
            )));
        }
        Ok(())
    }

    pub fn eval(&self, pt: PhaseSpacePoint) -> f64 {
        let dx = (pt.x - self.center.x) / self.sigma_x;
        let dp = (pt.p - self.center.p) / self.sigma_p;
        (-0.5 * (dx * dx + dp * dp)).exp()
    }

    /// Rectangle outside of which the bump is below `exp(-40)`.
    pub fn support(&self) -> Support {
        Support {
            center: self.center,
            x_radius: FUNCTIONAL_REACH * self.sigma_x,
            p_radius: FUNCTIONAL_REACH * self.sigma_p,
        }
    }
}

/// The five default bumps for an orbit of energy `energy`: on the shell at
/// `phi = 0` and `phi = pi/2`, at the origin, outside the shell at 1.5 orbit
/// radii, and a wide normalization probe of three orbit radii.
pub fn default_functionals(params: &OscillatorParams, energy: f64) -> Vec<TestFunctional> {
    let rx = params.turning_point(energy);
    let rp = params.peak_momentum(energy);
    let w = 0.35;
    let bump = |id: &str, x: f64, p: f64, s: f64| TestFunctional {
        id: id.to_string(),
        center: PhaseSpacePoint::new(x, p),
        sigma_x: s * rx,
        sigma_p: s * rp,
    };
    vec![
        bump("shell-phi0", rx, 0.0, w),
        bump("shell-phi90", 0.0, -rp, w),
        bump("origin", 0.0, 0.0, w),
        bump("outside", 1.5 * rx, 0.0, w),
        bump("wide", 0.0, 0.0, 3.0),
    ]
}

/// Angle average of `g` over the orbit of energy `energy`, by the periodic
/// trapezoid rule with the node count doubled until two successive
/// estimates differ by less than [`ANGLE_TOL`].
pub fn orbit_average<G: Fn(PhaseSpacePoint) -> f64>(params: &OscillatorParams, energy: f64, g: G) -> Result<f64> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::InvalidArgument(format!("orbit energy must be positive, got {energy}")));
    }
    let action = energy / params.omega();
    let sample = |k: usize, n: usize| {
        let angle = 2.0 * PI * k as f64 / n as f64;
        g(action_angle_to_cartesian(params, ActionAngle { action, angle }))
    };
    let mut n = 16;
    let mut sum: f64 = (0..n).map(|k| sample(k, n)).sum();
    let mut prev = sum / n as f64;
    while n < MAX_ANGLE_NODES {
        sum += (0..n).map(|k| sample(2 * k + 1, 2 * n)).sum::<f64>();
        n *= 2;
        let next = sum / n as f64;
        if (next - prev).abs() < ANGLE_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { a: 0.0, b: 2.0 * PI })
}

/// Microcanonical average of the bump `f` on the shell of energy `energy`.
pub fn classical_expectation(params: &OscillatorParams, energy: f64, f: &TestFunctional) -> Result<f64> {
    orbit_average(params, energy, |pt| f.eval(pt))
}

/// Microcanonical phase-space moment `<X^k P^l>`.
pub fn classical_moment(params: &OscillatorParams, energy: f64, k: u32, l: u32) -> Result<f64> {
    orbit_average(params, energy, |pt| pt.x.powi(k as i32) * pt.p.powi(l as i32))
}

/// `(1/T) g(E(X,P) - E)` with `g` a normalized Gaussian of width `sigma_e`.
pub fn classical_density_smeared(params: &OscillatorParams, energy: f64, pt: PhaseSpacePoint, sigma_e: f64) -> Result<f64> {
    if !(sigma_e > 0.0 && sigma_e.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma_e must be positive, got {sigma_e}")));
    }
    let d = (params.energy(pt) - energy) / sigma_e;
    Ok((-0.5 * d * d).exp() / ((2.0 * PI).sqrt() * sigma_e * params.period()))
}

/// Grid on which `W f` is non-negligible: the intersection of the state's
/// support with the functional's window, at the step the state's bandwidth
/// requires. `None` when the two do not overlap.
pub fn expectation_grid(params: &OscillatorParams, state: &QuantumState, f: &TestFunctional) -> Option<PhaseGrid> {
    let grid = PhaseGrid::auto(params, state);
    let fs = f.support();
    let x_min = grid.x_min.max(fs.center.x - fs.x_radius);
    let x_max = grid.x_max.min(fs.center.x + fs.x_radius);
    let p_min = grid.p_min.max(fs.center.p - fs.p_radius);
    let p_max = grid.p_max.min(fs.center.p + fs.p_radius);
    if x_min >= x_max || p_min >= p_max {
        return None;
    }
    let nx = (((x_max - x_min) / grid.dx()).ceil() as usize + 1).max(64);
    let np = (((p_max - p_min) / grid.dp()).ceil() as usize + 1).max(64);
    Some(PhaseGrid { x_min, x_max, p_min, p_max, nx, np })
}

/// `int int W f dX dP` on [`expectation_grid`], with `W` the closed-form
/// Wigner function of the state.
pub fn quantum_expectation(params: &OscillatorParams, state: &QuantumState, f: &TestFunctional) -> Result<Estimate> {
    f.validate()?;
    let Some(grid) = expectation_grid(params, state, f) else {
        return Ok(Estimate { value: 0.0, boundary_ratio: 0.0 });
    };
    weighted(grid, f, |pt| Ok(crate::wigner::wigner_exact(params, state, pt)))
}

/// As [`quantum_expectation`] for the uniform mixture of eigenstates
/// `n - half_width ..= n + half_width`.
pub fn averaged_expectation(params: &OscillatorParams, n: usize, half_width: usize, f: &TestFunctional) -> Result<Estimate> {
    f.validate()?;
    if half_width > n {
        return Err(Error::InvalidWindow { n, half_width });
    }
    let Some(grid) = expectation_grid(params, &QuantumState::eigen(n + half_width), f) else {
        return Ok(Estimate { value: 0.0, boundary_ratio: 0.0 });
    };
    weighted(grid, f, |pt| wigner_averaged(params, n, half_width, pt))
}

/// Trapezoid integral of `w f` with the boundary ratio of the product.
fn weighted<W>(grid: PhaseGrid, f: &TestFunctional, w: W) -> Result<Estimate>
where
    W: Fn(PhaseSpacePoint) -> Result<f64> + Sync,
{
    let field = WignerField::evaluate(grid, Method::ExactLaguerre, String::new(), |pt| Ok(w(pt)? * f.eval(pt)))?;
    let value = field.integral().value;
    Ok(Estimate { value, boundary_ratio: field.boundary_ratio() })
}

/// Expectation of a function of the energy alone, `g(E(X,P))`, in an
/// eigenstate, via the one-dimensional integral over `E`:
/// `int int W g dX dP = T int_0^inf W_n(E) g(E) dE`.
pub fn radial_expectation<G: Fn(f64) -> f64>(params: &OscillatorParams, n: usize, g: G) -> Result<f64> {
    let hw = params.hbar() * params.omega();
    let rho = (2.0 * n as f64 + 1.0).sqrt() + crate::state::TAIL_LENGTHS;
    let e_max = 0.5 * rho * rho * hw;
    let panels = 8 * (n + 4);
    let integrand = |e: f64| {
        let pt = PhaseSpacePoint::new((2.0 * e / hw).sqrt() * params.length_scale(), 0.0);
        wigner_eigen_exact(params, n, pt) * g(e)
    };
    let value = crate::quad::AdaptiveSimpson::new(1e-13).with_panels(panels).integrate(integrand, 0.0, e_max)?;
    Ok(params.period() * value)
}

/// Largest `|pi hbar W_n|` on the scaled-energy curve over `r in [0.5, 1.5]`.
pub fn shell_amplitude(n: usize) -> f64 {
    let samples = 4000;
    (0..=samples)
        .map(|k| wigner_scaled_energy(n, 0.5 + k as f64 / samples as f64).abs())
        .fold(0.0, f64::max)
}

/// Inputs of a convergence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Classical energy `n hbar omega`, held fixed.
    pub e_clas: f64,
    /// Mass and frequency; `hbar` is overridden per row.
    pub params: OscillatorParams,
    pub n_list: Vec<usize>,
    pub functionals: Vec<TestFunctional>,
    /// Additional averaged rows: `(n, half_width)`.
    pub windows: Vec<(usize, usize)>,
    /// Fail with [`Error::SupportTruncated`] instead of recording the ratio.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub hbar: f64,
    pub functional_id: String,
    /// Half-width of the averaging window, absent for single eigenstates.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<usize>,
    pub quantum: f64,
    pub classical: f64,
    pub abs_err: f64,
    pub boundary_ratio: f64,
}

/// Grid and shell amplitude used for one `(n, window)` case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseInfo {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<usize>,
    pub shell_amplitude: f64,
    /// Integration grids, one per functional whose window meets the support.
    #[serde(skip)]
    pub grids: Vec<PhaseGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub e_clas: f64,
    pub rows: Vec<ConvergenceRow>,
    pub cases: Vec<CaseInfo>,
}

impl ConvergenceReport {
    pub fn row(&self, n: usize, window: Option<usize>, functional_id: &str) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n == n && r.window == window && r.functional_id == functional_id)
    }
}

/// Runs the sweep: for every `n` sets `hbar = e_clas / (n omega)` and compares
/// eigenstate (and windowed) expectations with the microcanonical ones.
pub fn convergence_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport> {
    if cfg.n_list.is_empty() {
        return Err(Error::InvalidArgument("n list is empty".into()));
    }
    if cfg.n_list.iter().any(|&n| n == 0) || cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n list must be strictly ascending and >= 1".into()));
    }
    if !(cfg.e_clas > 0.0 && cfg.e_clas.is_finite()) {
        return Err(Error::InvalidArgument(format!("energy must be positive, got {}", cfg.e_clas)));
    }
    for f in &cfg.functionals {
        f.validate()?;
    }
    for &(n, hw) in &cfg.windows {
        if n == 0 || hw > n {
            return Err(Error::InvalidWindow { n, half_width: hw });
        }
    }
    let classical: Vec<f64> = cfg
        .functionals
        .iter()
        .map(|f| classical_expectation(&cfg.params, cfg.e_clas, f))
        .collect::<Result<_>>()?;
    let mut cases: Vec<(usize, Option<usize>)> = cfg.n_list.iter().map(|&n| (n, None)).collect();
    cases.extend(cfg.windows.iter().map(|&(n, hw)| (n, Some(hw))));
    cases.sort();
    let results: Vec<(Vec<ConvergenceRow>, CaseInfo)> = cases
        .par_iter()
        .map(|&(n, window)| run_case(cfg, &classical, n, window))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut infos = Vec::new();
    for (r, info) in results {
        rows.extend(r);
        infos.push(info);
    }
    Ok(ConvergenceReport { e_clas: cfg.e_clas, rows, cases: infos })
}

fn run_case(cfg: &SweepConfig, classical: &[f64], n: usize, window: Option<usize>) -> Result<(Vec<ConvergenceRow>, CaseInfo)> {
    let hbar = cfg.e_clas / (n as f64 * cfg.params.omega());
    let params = cfg.params.with_hbar(hbar)?;
    let mut rows = Vec::with_capacity(cfg.functionals.len());
    let mut grids = Vec::with_capacity(cfg.functionals.len());
    for (f, &cl) in cfg.functionals.iter().zip(classical) {
        let est = match window {
            None => quantum_expectation(&params, &QuantumState::eigen(n), f)?,
            Some(hw) => averaged_expectation(&params, n, hw, f)?,
        };
        if cfg.strict {
            est.strict()?;
        }
        let top = QuantumState::eigen(n + window.unwrap_or(0));
        grids.extend(expectation_grid(&params, &top, f));
        rows.push(ConvergenceRow {
            n,
            hbar,
            functional_id: f.id.clone(),
            window,
            quantum: est.value,
            classical: cl,
            abs_err: (est.value - cl).abs(),
            boundary_ratio: est.boundary_ratio,
        });
    }
    let amplitude = match window {
        None => shell_amplitude(n),
        Some(hw) => {
            let samples = 4000;
            (0..=samples)
                .map(|k| {
                    crate::wigner::wigner_scaled_energy_averaged(n, hw, 0.5 + k as f64 / samples as f64)
                        .map(f64::abs)
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max)
        }
    };
    Ok((rows, CaseInfo { n, window, grids, shell_amplitude: amplitude }))
}
