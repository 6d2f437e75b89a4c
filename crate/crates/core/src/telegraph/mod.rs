//! The symmetric telegraph process `V(t) = V(0)(-1)^{N(t)}` and its integral
//! `W(t) = ∫₀ᵗ V(s) ds`.
//!
//! `V(0)` is `±c` with probability 1/2 each and `N` is a Poisson process with
//! rate `λ`, independent of `V(0)`. `W(t)` lives on `[-ct, ct]`: it has an
//! atom of mass `e^{-λt}/2` at each endpoint and a Bessel-type density in
//! between.

mod bessel;
mod path;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_i1, bessel_i1_scaled};
pub use path::{derive_seed, sample_path, sample_paths, sample_w_values, TelegraphPath, WPoint};

use bessel::{i0_scaled, i1_over_x_scaled};

use crate::error::{domain, Result};
use crate::quad::{integrate, QuadOptions};

/// Noise amplitude `c` and switching intensity `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphParams {
    c: f64,
    lambda: f64,
}

impl TelegraphParams {
    pub fn new(c: f64, lambda: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return domain(format!("amplitude c must be finite and > 0, got {c}"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return domain(format!("switching rate lambda must be finite and > 0, got {lambda}"));
        }
        Ok(Self { c, lambda })
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("time must be finite and >= 0, got {t}"));
    }
    Ok(())
}

/// Mass of each atom of `W(t)`, `P{W(t) = ct} = P{W(t) = -ct} = e^{-λt}/2`.
pub fn w_atom_prob(params: &TelegraphParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(0.5 * (-params.lambda * t).exp())
}

/// Density of `W(t)` on `(-ct, ct)` written in terms of the two factors
/// `ct + w` and `ct - w`, both strictly positive. Callers that can form the
/// factors without cancellation (the X-process does) should use this.
///
/// The time derivative of `I0((λ/c)√(c²t² − w²))` is `λ² t I1(z)/z`, which
/// has no singularity at the band edges.
pub(crate) fn w_density_factored(params: &TelegraphParams, t: f64, plus: f64, minus: f64) -> f64 {
    let (c, lambda) = (params.c, params.lambda);
    let z = (lambda / c) * (plus * minus).sqrt();
    // e^{-λt} I_k(z) = e^{z - λt} · (e^{-z} I_k(z)); z <= λt so no overflow.
    let decay = (z - lambda * t).exp();
    decay * (lambda * i0_scaled(z) + lambda * lambda * t * i1_over_x_scaled(z)) / (2.0 * c)
}

/// Density of the absolutely continuous part of `W(t)` at `x ∈ (-ct, ct)`.
pub fn w_density(params: &TelegraphParams, t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    let ct = params.c * t;
    if t == 0.0 || !(x.abs() < ct) {
        return domain(format!(
            "density of W({t}) is defined on the open interval (-{ct}, {ct}), got x = {x}"
        ));
    }
    Ok(w_density_factored(params, t, ct + x, ct - x))
}

/// `P{W(t) <= w}` including both atoms.
///
/// The continuous part is integrated from whichever endpoint is nearer, so
/// the result keeps full absolute accuracy in both tails.
pub fn w_cdf(params: &TelegraphParams, t: f64, w: f64) -> Result<f64> {
    check_time(t)?;
    if w.is_nan() {
        return domain("W-CDF evaluated at NaN");
    }
    let ct = params.c * t;
    if w < -ct {
        return Ok(0.0);
    }
    if w >= ct {
        return Ok(1.0);
    }
    let atom = w_atom_prob(params, t)?;
    if w == -ct {
        return Ok(atom);
    }
    let opts = QuadOptions::with_tolerance(1e-13, 1e-12);
    let density = |x: f64| w_density_factored(params, t, ct + x, ct - x);
    if w <= 0.0 {
        let mass = integrate(density, -ct, w, opts)?.value;
        Ok((atom + mass).clamp(0.0, 1.0))
    } else {
        let mass = integrate(density, w, ct, opts)?.value;
        Ok((1.0 - atom - mass).clamp(0.0, 1.0))
    }
}

/// `ln M(s, t)` where `M(s, t) = E[e^{sW(t)}]`.
///
/// Uses `ω − λ = s²c²/(ω + λ)` and factors out `e^{(ω−λ)t}` so the value is
/// exact for `s = 0` and finite for large `t`.
pub fn log_mgf(params: &TelegraphParams, s: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !s.is_finite() {
        return domain(format!("MGF argument must be finite, got {s}"));
    }
    let lambda = params.lambda;
    let sc2 = (s * params.c).powi(2);
    let omega = (lambda * lambda + sc2).sqrt();
    let growth = sc2 / (omega + lambda);
    let ratio = lambda / omega;
    let tail = (-2.0 * omega * t).exp();
    Ok(growth * t + (0.5 * ((1.0 + ratio) + (1.0 - ratio) * tail)).ln())
}

/// Moment generating function
/// `M(s,t) = e^{-λt}[cosh(tω) + (λ/ω) sinh(tω)]`, `ω = √(λ² + s²c²)`.
pub fn mgf(params: &TelegraphParams, s: f64, t: f64) -> Result<f64> {
    Ok(log_mgf(params, s, t)?.exp())
}

/// Mean and variance of `W(t)`.
///
/// The mean vanishes by symmetry. The variance is `∂²M/∂s²` at `s = 0`,
/// which in closed form is `(c²/λ)[t − (1 − e^{−2λt})/(2λ)]`.
pub fn w_mean_var(params: &TelegraphParams, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    let (c, lambda) = (params.c, params.lambda);
    let transient = -(-2.0 * lambda * t).exp_m1() / (2.0 * lambda);
    let var = (c * c / lambda) * (t - transient);
    Ok((0.0, var.max(0.0)))
}
