//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series for `x <= 30`, where every term is positive and the sum is
//! accurate to a few ulps; Hankel's asymptotic expansion above, evaluated in
//! exponentially scaled form so large arguments never overflow.

use crate::error::{domain, Result};

/// Series/asymptotic switchover.
const SERIES_LIMIT: f64 = 30.0;
const TERM_EPS: f64 = 1e-17;

/// `I0(x)` for `x >= 0`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_arg(x)?;
    unscale(x, i0_scaled(x))
}

/// `I1(x)` for `x >= 0`.
pub fn bessel_i1(x: f64) -> Result<f64> {
    check_arg(x)?;
    unscale(x, i1_scaled(x))
}

/// `exp(-x) * I0(x)` for `x >= 0`.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(i0_scaled(x))
}

/// `exp(-x) * I1(x)` for `x >= 0`.
pub fn bessel_i1_scaled(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(i1_scaled(x))
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return domain(format!("Bessel argument must be >= 0, got {x}"));
    }
    Ok(())
}

fn unscale(x: f64, scaled: f64) -> Result<f64> {
    let v = scaled * x.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        domain(format!("I(x) overflows f64 at x = {x}; use the scaled variant"))
    }
}

fn series_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term < TERM_EPS * sum {
            return sum;
        }
    }
}

/// `I1(x) / x` by its power series; finite at `x = 0` where it equals 1/2.
fn series_i1_over_x(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5;
    let mut sum = 0.5;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + 1.0));
        sum += term;
        if term < TERM_EPS * sum {
            return sum;
        }
    }
}

/// Hankel expansion of `sqrt(2 pi x) e^{-x} I_nu(x)` with `mu = 4 nu^2`.
fn asymptotic_scaled(x: f64, mu: f64) -> f64 {
    let mut term = 1.0;
    let mut sum: f64 = 1.0;
    let mut k = 1.0_f64;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (k * 8.0 * x);
        if next.abs() >= term.abs() || next.abs() < TERM_EPS * sum.abs() {
            sum += next;
            return sum / (2.0 * std::f64::consts::PI * x).sqrt();
        }
        sum += next;
        term = next;
        k += 1.0;
    }
}

pub(crate) fn i0_scaled(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        series_i0(x) * (-x).exp()
    } else {
        asymptotic_scaled(x, 0.0)
    }
}

pub(crate) fn i1_scaled(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        x * series_i1_over_x(x) * (-x).exp()
    } else {
        asymptotic_scaled(x, 4.0)
    }
}

/// `exp(-x) * I1(x) / x`, continuous at zero.
pub(crate) fn i1_over_x_scaled(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        series_i1_over_x(x) * (-x).exp()
    } else {
        asymptotic_scaled(x, 4.0) / x
    }
}
