//! The random distribution function `X(t) = 1 − F̄(t) e^{−W(t)}` obtained by
//! perturbing a baseline hazard `r(t)` with telegraph noise of amplitude `c`.
//!
//! Almost surely `a(t) ≤ X(t) ≤ b(t)` where `a` and `b` are the distribution
//! functions with hazards `r − c` and `r + c`. `X(t)` has atoms of mass
//! `e^{−λt}/2` at both band edges and a density inside. All quantities are
//! computed from `R(t)` in log space, so they stay accurate when `F̄(t)` is
//! tiny.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::hazard::HazardSpec;
use crate::quad::{integrate_to_infinity, TailIntegral};
use crate::telegraph::{self, derive_seed, sample_path, TelegraphParams};

/// Partial excess hazard beyond which `ν` is treated as infinite.
pub const NU_DIVERGENCE_THRESHOLD: f64 = 700.0;

/// A baseline hazard paired with telegraph noise.
#[derive(Debug, Clone)]
pub struct PerturbedModel {
    hazard: HazardSpec,
    noise: TelegraphParams,
    nu: f64,
}

/// The almost-sure envelope `[a(t), b(t)]` of `X(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBand {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// `D(t) = b(t) − a(t) = 2 F̄(t) sinh(ct)`.
    pub width: f64,
    /// `ν = ∫₀^ℓ (r − c)`, possibly infinite.
    pub nu: f64,
}

/// One grid point of a sampled `X` path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XPoint {
    pub t: f64,
    pub w: f64,
    pub x: f64,
}

impl PerturbedModel {
    /// Pairs `hazard` with `noise`, requiring `r(t) > c` on the default
    /// dominance grid over `(0, horizon]`.
    pub fn new(hazard: HazardSpec, noise: TelegraphParams, horizon: f64) -> Result<Self> {
        let grid = hazard.dominance_grid(horizon)?;
        hazard.require_dominance(noise.c(), &grid)?;
        let nu = excess_hazard(&hazard, noise.c())?;
        Ok(Self { hazard, noise, nu })
    }

    pub fn hazard(&self) -> &HazardSpec {
        &self.hazard
    }

    pub fn noise(&self) -> &TelegraphParams {
        &self.noise
    }

    /// A copy of this model with a different noise amplitude.
    pub fn with_amplitude(&self, c: f64, horizon: f64) -> Result<Self> {
        let noise = TelegraphParams::new(c, self.noise.lambda())?;
        Self::new(self.hazard.clone(), noise, horizon)
    }

    /// `ν = ∫₀^ℓ [r(s) − c] ds`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `lim_{t→ℓ} D(t) = e^{−ν}`.
    pub fn terminal_width(&self) -> f64 {
        (-self.nu).exp()
    }

    fn check_t(&self, t: f64) -> Result<f64> {
        self.hazard.check_in_support(t)?;
        Ok(self.hazard.cumulative_unchecked(t))
    }

    pub fn band(&self, t: f64) -> Result<SupportBand> {
        let cum = self.check_t(t)?;
        let ct = self.noise.c() * t;
        Ok(SupportBand {
            t,
            a: -(-(cum - ct)).exp_m1(),
            b: -(-(cum + ct)).exp_m1(),
            width: (ct - cum).exp() * -(-2.0 * ct).exp_m1(),
            nu: self.nu,
        })
    }

    /// Whether `r(t) ≤ c coth(ct)`, the sufficient condition for `D` to be
    /// nondecreasing at `t`. Undefined at `t = 0`, where it holds in the limit.
    pub fn band_monotonicity_condition(&self, t: f64) -> Result<bool> {
        if t <= 0.0 {
            return domain("band monotonicity condition needs t > 0 (coth is singular at 0)");
        }
        let r = self.hazard.hazard_at(t)?;
        let c = self.noise.c();
        Ok(r <= c / (c * t).tanh())
    }

    /// `P{X(t) = a(t)} = P{X(t) = b(t)} = e^{−λt}/2`.
    pub fn x_atom_prob(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        telegraph::w_atom_prob(&self.noise, t)
    }

    /// Factors `ln((1−a)/(1−x))` and `ln((1−x)/(1−b))`, whose product is
    /// `u(x, t)`. Equal to `ct + w` and `ct − w` with `w = ln(F̄(t)/(1−x))`.
    fn log_factors(&self, cum: f64, ct: f64, x: f64) -> (f64, f64) {
        let log_tail = (-x).ln_1p();
        (ct - cum - log_tail, ct + cum + log_tail)
    }

    /// `u(x, t) = ln((1−a)/(1−x)) · ln((1−x)/(1−b))`; zero at both band
    /// edges and positive inside.
    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        let cum = self.check_t(t)?;
        let band = self.band(t)?;
        if !(x >= band.a && x <= band.b) {
            return domain(format!("x = {x} outside [a({t}), b({t})] = [{}, {}]", band.a, band.b));
        }
        let (lo, hi) = self.log_factors(cum, self.noise.c() * t, x);
        Ok((lo * hi).max(0.0))
    }

    /// Density of the continuous part of `X(t)` at `x ∈ (a(t), b(t))`.
    pub fn x_density(&self, x: f64, t: f64) -> Result<f64> {
        let cum = self.check_t(t)?;
        let band = self.band(t)?;
        if t == 0.0 || !(x > band.a && x < band.b) {
            return domain(format!(
                "density of X({t}) is defined on the open band ({}, {}), got x = {x}",
                band.a, band.b
            ));
        }
        let (plus, minus) = self.log_factors(cum, self.noise.c() * t, x);
        if !(plus > 0.0 && minus > 0.0) {
            return domain(format!("x = {x} is numerically on the edge of the band at t = {t}"));
        }
        Ok(telegraph::w_density_factored(&self.noise, t, plus, minus) / (1.0 - x))
    }

    /// `P{X(t) ≤ x}` via `P{W(t) ≤ ln(F̄(t)/(1−x))}`. Returns 0 below the
    /// band and 1 at or above its upper edge.
    pub fn x_cdf(&self, x: f64, t: f64) -> Result<f64> {
        let cum = self.check_t(t)?;
        if x.is_nan() {
            return domain("X-CDF evaluated at NaN");
        }
        let band = self.band(t)?;
        if x < band.a {
            return Ok(0.0);
        }
        if x >= band.b {
            return Ok(1.0);
        }
        if x == band.a {
            return self.x_atom_prob(t);
        }
        let w = -cum - (-x).ln_1p();
        telegraph::w_cdf(&self.noise, t, w)
    }

    /// `E[F̄(t) e^{−W(t)}] = F̄(t) M(−1, t) = 1 − E[X(t)]`.
    pub fn expected_survival(&self, t: f64) -> Result<f64> {
        let cum = self.check_t(t)?;
        Ok((telegraph::log_mgf(&self.noise, -1.0, t)? - cum).exp())
    }

    /// `E[X(t)] = 1 − F̄(t) M(−1, t)`.
    pub fn x_mean(&self, t: f64) -> Result<f64> {
        let cum = self.check_t(t)?;
        Ok(-(telegraph::log_mgf(&self.noise, -1.0, t)? - cum).exp_m1())
    }

    /// `Var X(t) = F̄²(t) [M(−2, t) − M(−1, t)²]`, evaluated as
    /// `(F̄ M₁)² · expm1(ln M₂ − 2 ln M₁)` to avoid cancellation.
    pub fn x_variance(&self, t: f64) -> Result<f64> {
        let cum = self.check_t(t)?;
        let l1 = telegraph::log_mgf(&self.noise, -1.0, t)?;
        let l2 = telegraph::log_mgf(&self.noise, -2.0, t)?;
        let v = (2.0 * (l1 - cum)).exp() * (l2 - 2.0 * l1).exp_m1();
        Ok(v.max(0.0))
    }

    /// Draws one noise path on `[0, horizon]` and evaluates `X` on `grid`,
    /// which must be nondecreasing inside `[0, min(horizon, ℓ))`.
    pub fn sample_x_path(&self, horizon: f64, grid: &[f64], seed: u64) -> Result<Vec<XPoint>> {
        for &t in grid {
            self.check_t(t)?;
        }
        let path = sample_path(&self.noise, horizon, seed)?;
        let ws = path.integrate_on_grid(&self.noise, grid)?;
        Ok(ws
            .into_iter()
            .map(|p| XPoint {
                t: p.t,
                w: p.value,
                x: -(-self.hazard.cumulative_unchecked(p.t) - p.value).exp_m1(),
            })
            .collect())
    }

    /// `n` independent draws of `X(t)` with per-path derived seeds.
    pub fn sample_x_values(&self, t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
        let cum = self.check_t(t)?;
        let ws = telegraph::sample_w_values(&self.noise, t, n, seed)?;
        Ok(ws.into_par_iter().map(|w| -(-cum - w).exp_m1()).collect())
    }

    /// `n` independent draws of the noise sign `V(t)/c`.
    pub fn sample_noise_signs(&self, t: f64, n: usize, seed: u64) -> Result<Vec<i8>> {
        if !(t.is_finite() && t > 0.0) {
            return domain(format!("time must be finite and > 0, got {t}"));
        }
        (0..n as u64)
            .into_par_iter()
            .map(|i| sample_path(&self.noise, t, derive_seed(seed, i))?.sign_at(t))
            .collect()
    }
}

/// `ν = ∫₀^ℓ (r − c)`: infinite for bounded support, otherwise integrated over
/// doubling windows until the tail contribution vanishes or the partial sum
/// passes [`NU_DIVERGENCE_THRESHOLD`].
fn excess_hazard(hazard: &HazardSpec, c: f64) -> Result<f64> {
    if hazard.support_end().is_finite() {
        return Ok(f64::INFINITY);
    }
    let excess = |s: f64| (hazard.rate_unchecked(s) - c).max(0.0);
    match integrate_to_infinity(excess, 0.0, 1e-12, NU_DIVERGENCE_THRESHOLD)? {
        TailIntegral::Finite(v) => Ok(v),
        TailIntegral::Divergent => Ok(f64::INFINITY),
    }
}
