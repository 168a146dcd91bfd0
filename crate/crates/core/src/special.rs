//! Special-function kernels: normalized Hermite functions and exponentially
//! scaled Laguerre polynomials.
//!
//! Both are evaluated by their three-term recurrences with the Gaussian (resp.
//! exponential) weight folded into the running values. The weight is kept as a
//! separate logarithm and the running pair is renormalized whenever it grows
//! past [`RESCALE`], so neither overflow nor premature underflow can occur for
//! large degree or argument.

/// Renormalization threshold for the running recurrence values.
const RESCALE: f64 = 1e150;

/// `pi^{-1/4}`.
pub const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// A number stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub(crate) mantissa: f64,
    pub(crate) log_scale: f64,
}

impl Scaled {
    pub(crate) fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        if self.log_scale > -700.0 && self.log_scale < 700.0 {
            self.mantissa * self.log_scale.exp()
        } else {
            self.mantissa.signum() * (self.mantissa.abs().ln() + self.log_scale).exp()
        }
    }
}

/// Normalized Hermite function `h_n(u) = H_n(u) e^{-u^2/2} / sqrt(2^n n! sqrt(pi))`.
///
/// Uses `h_{k+1} = sqrt(2/(k+1)) u h_k - sqrt(k/(k+1)) h_{k-1}`, so the
/// result is bounded by `pi^{-1/4}` and usable far beyond the degree where
/// `2^n n!` overflows.
pub fn hermite_function(n: usize, u: f64) -> f64 {
    hermite_scaled(n, u).value()
}

fn hermite_scaled(n: usize, u: f64) -> Scaled {
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER;
    let mut log_scale = -0.5 * u * u;
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    Scaled { mantissa: cur, log_scale }
}

/// All of `h_0(u), ..., h_{n_max}(u)` from a single recurrence pass.
pub fn hermite_functions(n_max: usize, u: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER;
    let mut log_scale = -0.5 * u * u;
    out.push(Scaled { mantissa: cur, log_scale }.value());
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out.push(Scaled { mantissa: cur, log_scale }.value());
    }
    out
}

/// `e^{-x/2} L_n(x)` for `x >= 0`.
pub fn laguerre_scaled(n: usize, x: f64) -> f64 {
    assoc_laguerre_scaled(n, 0, x)
}

/// `e^{-x/2} L_n^{(alpha)}(x)` for integer `alpha >= 0` and `x >= 0`.
pub fn assoc_laguerre_scaled(n: usize, alpha: usize, x: f64) -> f64 {
    let (mantissa, log_scale) = assoc_laguerre_scaled_log(n, alpha, x);
    Scaled { mantissa, log_scale }.value()
}

/// `e^{-x/2} L_n^{(alpha)}(x)` split as `(mantissa, log_scale)` with the
/// value equal to `mantissa * exp(log_scale)`.
pub(crate) fn assoc_laguerre_scaled_log(n: usize, alpha: usize, x: f64) -> (f64, f64) {
    let alpha = alpha as f64;
    let mut log_scale = -0.5 * x;
    // Carry the weight in the start values whenever it is representable.
    let (mut prev, mut cur) = if log_scale > -300.0 {
        let w = log_scale.exp();
        log_scale = 0.0;
        (w, w * (1.0 + alpha - x))
    } else {
        (1.0, 1.0 + alpha - x)
    };
    if n == 0 {
        return (prev, log_scale);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (cur, log_scale)
}

/// `e^{-x/2} L_m(x)` for every `m = 0..=n_max` from one recurrence pass.
pub fn laguerre_scaled_table(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut log_scale = -0.5 * x;
    let (mut prev, mut cur) = if log_scale > -300.0 {
        let w = log_scale.exp();
        log_scale = 0.0;
        (w, w * (1.0 - x))
    } else {
        (1.0, 1.0 - x)
    };
    out.push(Scaled { mantissa: prev, log_scale }.value());
    if n_max == 0 {
        return out;
    }
    out.push(Scaled { mantissa: cur, log_scale }.value());
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out.push(Scaled { mantissa: cur, log_scale }.value());
    }
    out
}

/// `ln(n! / m!)` for `n >= m`.
pub(crate) fn ln_factorial_ratio(n: usize, m: usize) -> f64 {
    debug_assert!(n >= m);
    ((m + 1)..=n).map(|j| (j as f64).ln()).sum()
}

/// `sin(x) / x`, with the removable singularity at zero filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
