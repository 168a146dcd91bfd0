//! Adaptive Simpson quadrature and fixed-order trapezoid sums.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }

    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Adaptive Simpson rule with Richardson correction.
///
/// The interval is first cut into `panels` equal pieces; each piece is then
/// bisected until the two-level Simpson estimates agree to its share of the
/// absolute tolerance.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson {
    pub abs_tol: f64,
    pub max_depth: u32,
    pub panels: usize,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self { abs_tol: 1e-12, max_depth: 48, panels: 8 }
    }
}

impl AdaptiveSimpson {
    pub fn new(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels.max(1);
        self
    }

    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> Result<T>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        if a == b {
            return Ok(T::zero());
        }
        let panels = self.panels.max(1);
        let width = (b - a) / panels as f64;
        let tol = self.abs_tol / panels as f64;
        let mut total = T::zero();
        let mut left = a;
        let mut f_left = f(a);
        for k in 0..panels {
            let right = if k + 1 == panels { b } else { a + width * (k + 1) as f64 };
            let mid = 0.5 * (left + right);
            let (f_mid, f_right) = (f(mid), f(right));
            let whole = simpson(left, right, f_left, f_mid, f_right);
            total = total + self.refine(&f, left, f_left, mid, f_mid, right, f_right, whole, tol, 0)?;
            left = right;
            f_left = f_right;
        }
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<T, F>(
        &self,
        f: &F,
        a: f64,
        fa: T,
        m: f64,
        fm: T,
        b: f64,
        fb: T,
        whole: T,
        tol: f64,
        depth: u32,
    ) -> Result<T>
    where
        T: QuadValue,
        F: Fn(f64) -> T,
    {
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        // Interval exhausted in floating point: nothing more to gain.
        let exhausted = !(a < lm && lm < m && m < rm && rm < b);
        if depth >= 2 && (delta.magnitude() <= 15.0 * tol || exhausted) {
            return Ok(left + right + delta * (1.0 / 15.0));
        }
        if depth >= self.max_depth {
            return Err(Error::NonConvergence { a, b });
        }
        let l = self.refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}

fn simpson<T: QuadValue>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

/// Trapezoid sum over uniformly spaced samples, accumulated left to right.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => (0.5 * (first + last) + inner.iter().sum::<f64>()) * step,
    }
}

/// Trapezoid weight of node `i` out of `n` uniformly spaced nodes.
pub fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// Uniform nodes `lo, ..., hi` (both endpoints included).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect()
        }
    }
}
