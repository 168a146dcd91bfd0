//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::classical::{classical_density_smeared, convergence_sweep, default_functionals, SweepConfig};
use crate::error::{Error, Result};
use crate::io;
use crate::params::{OscillatorParams, PhaseSpacePoint};
use crate::state::QuantumState;
use crate::wigner::{
    wigner_averaged, wigner_exact, wigner_quadrature, CurveSample, Method, PhaseGrid, ScaledEnergyCurve, WignerField,
    TRUNCATION_RATIO,
};
use crate::wkb::WkbContext;

#[derive(Debug, Parser)]
#[command(name = "wigner-ho", version, about = "Wigner functions of the harmonic oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a Wigner function on a phase-space grid.
    Grid(GridArgs),
    /// Eigenstate Wigner function against E(X,P)/E_clas.
    Curve(CurveArgs),
    /// Quantum against classical expectations at fixed n hbar omega.
    Converge(ConvergeArgs),
    /// Exact and semiclassical Wigner functions side by side.
    WkbCompare(WkbCompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Quadrature,
    Wkb,
    WkbNumeric,
    Averaged,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Ppm,
}

#[derive(Debug, Clone, Args)]
pub struct PhysArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

impl PhysArgs {
    fn params(&self) -> Result<OscillatorParams> {
        OscillatorParams::new(self.mass, self.omega, self.hbar)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Energy eigenstate.
    #[arg(long)]
    pub n: Option<usize>,
    /// Coherent state amplitude, real part.
    #[arg(long = "z-re", allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    /// Coherent state amplitude, imaginary part.
    #[arg(long = "z-im", allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    /// Superposition coefficients, one `n,re,im` per line.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
}

impl StateArgs {
    fn state(&self) -> Result<QuantumState> {
        let coherent = self.z_re.is_some() || self.z_im.is_some();
        let chosen = [self.n.is_some(), coherent, self.coeffs.is_some()].iter().filter(|&&b| b).count();
        if chosen != 1 {
            return Err(Error::InvalidArgument("give exactly one of --n, --z-re/--z-im, --coeffs".into()));
        }
        if let Some(n) = self.n {
            return Ok(QuantumState::eigen(n));
        }
        if coherent {
            return QuantumState::coherent(Complex64::new(self.z_re.unwrap_or(0.0), self.z_im.unwrap_or(0.0)));
        }
        let path = self.coeffs.as_ref().expect("one selector is set");
        let text = std::fs::read_to_string(path)?;
        QuantumState::superposition(parse_coeffs(&text)?)
    }
}

/// Parses `n,re,im` lines; blank lines and `#` comments are skipped.
pub fn parse_coeffs(text: &str) -> Result<Vec<(usize, Complex64)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Format(format!("coefficient line {}: expected n,re,im, got {line:?}", k + 1));
        if parts.len() != 3 {
            return Err(bad());
        }
        let n = parts[0].parse().map_err(|_| bad())?;
        let re = parts[1].parse().map_err(|_| bad())?;
        let im = parts[2].parse().map_err(|_| bad())?;
        out.push((n, Complex64::new(re, im)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct GridSpec {
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pmax: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub np: Option<usize>,
    /// Size the grid from the state's support.
    #[arg(long)]
    pub auto_grid: bool,
}

impl GridSpec {
    fn explicit(&self) -> [Option<f64>; 6] {
        [self.xmin, self.xmax, self.pmin, self.pmax, self.nx.map(|v| v as f64), self.np.map(|v| v as f64)]
    }

    fn resolve(&self, params: &OscillatorParams, state: &QuantumState) -> Result<PhaseGrid> {
        let given = self.explicit().iter().filter(|v| v.is_some()).count();
        if self.auto_grid && given > 0 {
            return Err(Error::InvalidGrid("--auto-grid cannot be combined with explicit bounds".into()));
        }
        if given == 0 {
            return Ok(PhaseGrid::auto(params, state));
        }
        match (self.xmin, self.xmax, self.pmin, self.pmax, self.nx, self.np) {
            (Some(x0), Some(x1), Some(p0), Some(p1), Some(nx), Some(np)) => PhaseGrid::new(x0, x1, p0, p1, nx, np),
            _ => Err(Error::InvalidGrid("an explicit grid needs all of --xmin --xmax --pmin --pmax --nx --np".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fail with exit code 3 if the grid truncates the support.
    #[arg(long)]
    pub strict: bool,
    /// Omit the metadata block from JSON output.
    #[arg(long)]
    pub no_meta: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridSpec,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    /// Averaging half-width N_W.
    #[arg(long)]
    pub window: Option<usize>,
    /// Energy width of the smeared classical density.
    #[arg(long)]
    pub sigma_e: Option<f64>,
    /// Shell energy of the classical density; defaults to the state's energy.
    #[arg(long)]
    pub energy: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = 1.5)]
    pub r_max: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Classical energy n hbar omega held fixed.
    #[arg(long)]
    pub energy: f64,
    /// Comma-separated ascending quantum numbers.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    /// JSON array of test functionals; the default bank when absent.
    #[arg(long)]
    pub functionals: Option<PathBuf>,
    /// Also report the window average of this half-width for each n >= N_W.
    #[arg(long)]
    pub window: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct WkbCompareArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridSpec,
    #[arg(long, value_enum, default_value_t = MethodArg::Wkb)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Exit status for an error: 3 for truncated support, 1 for i/o and numerical
/// failures, 2 for invalid input.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::SupportTruncated { .. } => 3,
        Error::Io(_) | Error::NonFinite(_) | Error::NonConvergence { .. } => 1,
        _ => 2,
    }
}

/// Parses `args` and runs the command, returning the process exit status.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Grid(a) => cmd_grid(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Converge(a) => cmd_converge(a),
        Command::WkbCompare(a) => cmd_wkb_compare(a),
    }
}

fn emit(out: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &out.out {
        Some(path) => io::write_atomic(Path::new(path), bytes),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn require_n(state: &QuantumState, method: MethodArg) -> Result<usize> {
    match state {
        QuantumState::Eigenstate { n } => Ok(*n),
        _ => Err(Error::InvalidArgument(format!("--method {method:?} requires --n").to_lowercase())),
    }
}

fn mean_energy(params: &OscillatorParams, state: &QuantumState) -> f64 {
    let hw = params.hbar() * params.omega();
    match state {
        QuantumState::Eigenstate { n } => params.eigen_energy(*n),
        QuantumState::Coherent { z } => hw * (z.norm_sqr() + 0.5),
        QuantumState::Superposition(s) => s.terms().iter().map(|(n, c)| c.norm_sqr() * params.eigen_energy(*n)).sum(),
    }
}

/// Builds the field selected by `args`.
pub fn grid_field(args: &GridArgs) -> Result<WignerField> {
    let params = args.phys.params()?;
    let state = args.state.state()?;
    if args.window.is_some() && args.method != MethodArg::Averaged {
        return Err(Error::InvalidArgument("--window only applies to --method averaged".into()));
    }
    if args.sigma_e.is_some() != (args.method == MethodArg::Classical) {
        return Err(Error::InvalidArgument("--method classical requires --sigma-e, and only it takes one".into()));
    }
    let grid_state = match (args.method, &state) {
        (MethodArg::Averaged, QuantumState::Eigenstate { n }) => QuantumState::eigen(n + args.window.unwrap_or(0)),
        _ => state.clone(),
    };
    let grid = args.grid.resolve(&params, &grid_state)?;
    let label = state.describe();
    match args.method {
        MethodArg::Exact => WignerField::evaluate(grid, Method::ExactLaguerre, label, |pt| Ok(wigner_exact(&params, &state, pt))),
        MethodArg::Quadrature => {
            WignerField::evaluate(grid, Method::Quadrature, label, |pt| wigner_quadrature(&params, &state, pt))
        }
        MethodArg::Wkb | MethodArg::WkbNumeric => {
            let n = require_n(&state, args.method)?;
            let ctx = WkbContext::new(params, n);
            let numeric = args.method == MethodArg::WkbNumeric;
            let method = if numeric { Method::WkbNumeric } else { Method::WkbClosed };
            WignerField::evaluate(grid, method, label, |pt| {
                if pt.x.abs() >= ctx.x_max() {
                    Ok(0.0)
                } else if numeric {
                    ctx.wigner_numeric(pt)
                } else {
                    ctx.wigner_closed(pt)
                }
            })
        }
        MethodArg::Averaged => {
            let n = require_n(&state, args.method)?;
            let hw = args
                .window
                .ok_or_else(|| Error::InvalidArgument("--method averaged requires --window".into()))?;
            if hw > n {
                return Err(Error::InvalidWindow { n, half_width: hw });
            }
            let label = format!("averaged(n={n},window={hw})");
            WignerField::evaluate(grid, Method::Averaged, label, |pt| wigner_averaged(&params, n, hw, pt))
        }
        MethodArg::Classical => {
            let sigma_e = args.sigma_e.expect("checked above");
            let energy = args.energy.unwrap_or_else(|| mean_energy(&params, &state));
            let label = format!("classical(E={energy})");
            WignerField::evaluate(grid, Method::ClassicalSmeared, label, |pt| {
                classical_density_smeared(&params, energy, pt, sigma_e)
            })
        }
    }
}

fn check_strict(out: &OutputArgs, ratio: f64) -> Result<()> {
    if out.strict && ratio > TRUNCATION_RATIO {
        return Err(Error::SupportTruncated { ratio });
    }
    Ok(())
}

pub fn cmd_grid(args: &GridArgs) -> Result<()> {
    let field = grid_field(args)?;
    check_strict(&args.output, field.boundary_ratio())?;
    let bytes = match args.format {
        Format::Csv => io::field_csv(&field)?,
        Format::Json => io::field_json(&field, !args.output.no_meta)?,
        Format::Ppm => io::field_ppm(&field)?,
    };
    emit(&args.output, &bytes)
}

pub fn curve_samples(args: &CurveArgs) -> Result<Vec<CurveSample>> {
    let half_width = match (args.method, args.window) {
        (MethodArg::Exact, None) => 0,
        (MethodArg::Averaged, Some(w)) => w,
        (MethodArg::Averaged, None) => return Err(Error::InvalidArgument("--method averaged requires --window".into())),
        (MethodArg::Exact, Some(_)) => return Err(Error::InvalidArgument("--window only applies to --method averaged".into())),
        (m, _) => return Err(Error::InvalidArgument(format!("curve supports exact and averaged, not {m:?}"))),
    };
    Ok(ScaledEnergyCurve::new(args.n, half_width, args.r_max, args.samples)?.samples)
}

pub fn cmd_curve(args: &CurveArgs) -> Result<()> {
    let samples = curve_samples(args)?;
    let bytes = match args.format {
        Format::Csv => io::curve_csv(&samples)?,
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&samples).map_err(|e| Error::Io(e.to_string()))?;
            v.push(b'\n');
            v
        }
        Format::Ppm => return Err(Error::InvalidArgument("curve output is csv or json".into())),
    };
    emit(&args.output, &bytes)
}

pub fn sweep_config(args: &ConvergeArgs) -> Result<SweepConfig> {
    let params = OscillatorParams::new(args.mass, args.omega, 1.0)?;
    let functionals = match &args.functionals {
        Some(path) => io::read_functionals(&std::fs::read(path)?)?,
        None => default_functionals(&params, args.energy),
    };
    let windows = match args.window {
        Some(w) => args.n_list.iter().filter(|&&n| n >= w).map(|&n| (n, w)).collect(),
        None => Vec::new(),
    };
    Ok(SweepConfig {
        e_clas: args.energy,
        params,
        n_list: args.n_list.clone(),
        functionals,
        windows,
        strict: args.output.strict,
    })
}

pub fn cmd_converge(args: &ConvergeArgs) -> Result<()> {
    let report = convergence_sweep(&sweep_config(args)?)?;
    emit(&args.output, &io::report_json(&report, !args.output.no_meta)?)
}

/// Rows of a WKB comparison, restricted to `|X| < x_max (1 - delta)`.
pub fn compare_rows(args: &WkbCompareArgs) -> Result<Vec<io::CompareRow>> {
    if args.n < 5 {
        return Err(Error::InvalidArgument(format!("wkb-compare needs --n >= 5, got {}", args.n)));
    }
    let numeric = match args.method {
        MethodArg::Wkb => false,
        MethodArg::WkbNumeric => true,
        m => return Err(Error::InvalidArgument(format!("wkb-compare supports wkb and wkb-numeric, not {m:?}"))),
    };
    let params = args.phys.params()?;
    let state = QuantumState::eigen(args.n);
    let grid = args.grid.resolve(&params, &state)?;
    let ctx = WkbContext::new(params, args.n);
    let limit = ctx.guard_limit();
    let cols: Vec<usize> = (0..grid.nx).filter(|&i| grid.x(i).abs() < limit).collect();
    use rayon::prelude::*;
    let rows: Vec<Vec<io::CompareRow>> = cols
        .par_iter()
        .map(|&i| {
            (0..grid.np)
                .map(|j| {
                    let pt: PhaseSpacePoint = grid.point(i, j);
                    let w_wkb = if numeric { ctx.wigner_numeric(pt)? } else { ctx.wigner_closed(pt)? };
                    Ok(io::CompareRow { x: pt.x, p: pt.p, w_exact: wigner_exact(&params, &state, pt), w_wkb })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn cmd_wkb_compare(args: &WkbCompareArgs) -> Result<()> {
    let rows = compare_rows(args)?;
    emit(&args.output, &io::compare_csv(&rows)?)
}
