use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid oscillator parameters: {0}")]
    InvalidParams(String),
    #[error("invalid phase-space grid: {0}")]
    InvalidGrid(String),
    #[error("superposition is not normalized: sum |c|^2 = {norm}")]
    NotNormalized { norm: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("coherent amplitude |z| = {modulus} exceeds the validated range |z| <= 30")]
    CoherentOutOfRange { modulus: f64 },
    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    NonConvergence { a: f64, b: f64 },
    #[error("x = {x} lies outside the classically allowed region |x| < {x_max}")]
    OutsideAllowedRegion { x: f64, x_max: f64 },
    #[error("x = {x} lies inside the turning-point guard band (|x| > {limit})")]
    TurningPointRegion { x: f64, limit: f64 },
    #[error("smoothing width {sigma} is below the local oscillation bound {bound}")]
    SmoothingTooNarrow { sigma: f64, bound: f64 },
    #[error("moment order k + l = {order} exceeds 4")]
    MomentOrderTooHigh { order: u32 },
    #[error("averaging window {half_width} exceeds level {n}")]
    InvalidWindow { n: usize, half_width: usize },
    #[error("support truncated: boundary/peak ratio {ratio:.3e} exceeds 1e-10")]
    SupportTruncated { ratio: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("non-finite value in output: {0}")]
    NonFinite(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
