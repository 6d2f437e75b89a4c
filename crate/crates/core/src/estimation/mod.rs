//! Kernel estimators of a lifetime density, distribution function and hazard
//! rate, pointwise asymptotic confidence bands for the hazard, and the test
//! of whether a noisy-hazard model is compatible with observed lifetimes.
//!
//! With `n` observations, bandwidth `h` and kernel `k`:
//!
//! ```text
//! f̂(t) = (1/nh) Σ k((t − Tᵢ)/h)
//! F̂(t) = (1/n)  Σ K((t − Tᵢ)/h)
//! r̂(t) = f̂(t) / (1 − F̂(t))
//! r̂±(t) = r̂(t) ± [𝒦 / (nh f̂(t))]^{1/2} r̂(t) z_α
//! ```
//!
//! A baseline `r` perturbed by noise of amplitude `c` is accepted when the
//! strip `r ± c` fits inside the band at every grid time, i.e.
//! `|r − r̂| ≤ half_width − c`.

mod kernel;
mod normal;

pub use kernel::{kernel_l2_constant, KernelKind, KernelSpec};
pub use normal::{erfc, normal_quantile, normal_upper_tail};

use crate::error::{domain, Error, Result};
use crate::hazard::HazardSpec;

/// Grid points used by [`BandConfig::uniform`].
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Estimated density values below this make a grid point unusable.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// Estimated distribution values above `1 − SURVIVAL_GUARD` make the hazard
/// estimate unusable.
pub const SURVIVAL_GUARD: f64 = 1e-12;

/// Observed lifetimes, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates (at least 3 values, all finite and positive) and sorts.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Validation(format!(
                "a sample needs at least 3 observations, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Validation(format!(
                "observations must be finite and > 0, got {bad}"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `j`-th smallest value, 1-based.
    pub fn order_statistic(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// `(t₍₁:ₙ₎, t₍ₙ₋₁:ₙ₎)`, the open interval on which the band test runs.
    pub fn test_interval(&self) -> (f64, f64) {
        (self.values[0], self.values[self.values.len() - 2])
    }
}

fn check_kde_args(data: &[f64], h: f64) -> Result<()> {
    if data.is_empty() {
        return domain("kernel estimate needs at least one observation");
    }
    if !(h.is_finite() && h > 0.0) {
        return domain(format!("bandwidth must be finite and > 0, got {h}"));
    }
    Ok(())
}

/// `f̂(t)`.
pub fn kde_density(data: &[f64], kernel: &KernelSpec, h: f64, t: f64) -> Result<f64> {
    check_kde_args(data, h)?;
    let sum: f64 = data.iter().map(|&ti| kernel.density((t - ti) / h)).sum();
    Ok(sum / (data.len() as f64 * h))
}

/// `F̂(t)`.
pub fn kde_cdf(data: &[f64], kernel: &KernelSpec, h: f64, t: f64) -> Result<f64> {
    check_kde_args(data, h)?;
    let sum: f64 = data.iter().map(|&ti| kernel.cdf((t - ti) / h)).sum();
    Ok((sum / data.len() as f64).min(1.0))
}

/// `r̂(t) = f̂(t)/(1 − F̂(t))`; refuses points where `F̂(t) ≥ 1 − 1e−12`.
pub fn hazard_estimate(data: &[f64], kernel: &KernelSpec, h: f64, t: f64) -> Result<f64> {
    let f = kde_density(data, kernel, h, t)?;
    let cdf = kde_cdf(data, kernel, h, t)?;
    let survival = 1.0 - cdf;
    if survival <= SURVIVAL_GUARD {
        return Err(Error::UpperTailUnstable { t, survival });
    }
    Ok(f / survival)
}

/// Bandwidth, tail level and evaluation grid for a confidence band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandConfig {
    h: f64,
    alpha: f64,
    grid: Vec<f64>,
}

impl BandConfig {
    /// The grid must be nonempty and lie strictly inside the sample's
    /// `(t₍₁:ₙ₎, t₍ₙ₋₁:ₙ₎)`.
    pub fn new(sample: &Sample, h: f64, alpha: f64, grid: Vec<f64>) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return domain(format!("bandwidth must be finite and > 0, got {h}"));
        }
        if !(alpha > 0.0 && alpha < 0.5) {
            return domain(format!("alpha must lie in (0, 0.5), got {alpha}"));
        }
        if grid.is_empty() {
            return domain("band grid is empty");
        }
        let (lo, hi) = sample.test_interval();
        if let Some(bad) = grid.iter().find(|&&t| !(t > lo && t < hi)) {
            return domain(format!("grid point {bad} outside the open interval ({lo}, {hi})"));
        }
        Ok(Self { h, alpha, grid })
    }

    /// [`DEFAULT_GRID_POINTS`] equally spaced points on
    /// `(t₍₁:ₙ₎, t₍ₙ₋₁:ₙ₎)`, one step in from each end.
    pub fn uniform(sample: &Sample, h: f64, alpha: f64) -> Result<Self> {
        Self::uniform_with_points(sample, h, alpha, DEFAULT_GRID_POINTS)
    }

    pub fn uniform_with_points(sample: &Sample, h: f64, alpha: f64, points: usize) -> Result<Self> {
        let (lo, hi) = sample.test_interval();
        if !(hi > lo) {
            return domain(format!(
                "degenerate test interval ({lo}, {hi}): the two smallest order statistics coincide with the largest"
            ));
        }
        let step = (hi - lo) / (points + 1) as f64;
        let grid = (1..=points).map(|k| lo + step * k as f64).collect();
        Self::new(sample, h, alpha, grid)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

/// Estimates and band limits at one grid time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub t: f64,
    pub f_hat: f64,
    pub cdf_hat: f64,
    pub r_hat: f64,
    /// `[𝒦/(nh f̂)]^{1/2} r̂ z_α`.
    pub half_width: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceBand {
    pub z_alpha: f64,
    pub points: Vec<BandPoint>,
    /// Grid times dropped because `f̂` vanished or `F̂` reached 1.
    pub unusable: Vec<f64>,
}

/// Pointwise band for the hazard with nominal coverage `1 − 2α`.
pub fn confidence_band(sample: &Sample, kernel: &KernelSpec, config: &BandConfig) -> Result<ConfidenceBand> {
    let data = sample.values();
    let h = config.h;
    let n = data.len() as f64;
    let z_alpha = normal_quantile(config.alpha)?;
    let l2 = kernel.l2_constant();
    let mut points = Vec::with_capacity(config.grid.len());
    let mut unusable = Vec::new();
    for &t in &config.grid {
        let f_hat = kde_density(data, kernel, h, t)?;
        let cdf_hat = kde_cdf(data, kernel, h, t)?;
        if f_hat < DENSITY_FLOOR || 1.0 - cdf_hat <= SURVIVAL_GUARD {
            unusable.push(t);
            continue;
        }
        let r_hat = f_hat / (1.0 - cdf_hat);
        let half_width = (l2 / (n * h * f_hat)).sqrt() * r_hat * z_alpha;
        points.push(BandPoint {
            t,
            f_hat,
            cdf_hat,
            r_hat,
            half_width,
            lower: r_hat - half_width,
            upper: r_hat + half_width,
        });
    }
    Ok(ConfidenceBand {
        z_alpha,
        points,
        unusable,
    })
}

/// One row of a defensibility table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefensibilityRow {
    pub t: f64,
    pub r_hat: f64,
    pub lower: f64,
    pub upper: f64,
    pub baseline: f64,
    /// `half_width − c − |r − r̂|`; nonnegative where the strip fits.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefensibilityReport {
    pub holds: bool,
    pub c: f64,
    /// Largest amplitude for which the test would hold:
    /// `max(0, min_t [half_width − |r − r̂|])`.
    pub max_admissible_c: f64,
    /// First grid time with a negative margin.
    pub violating_t: Option<f64>,
    pub rows: Vec<DefensibilityRow>,
    pub unusable: Vec<f64>,
}

/// Checks whether `baseline ± c` lies inside the confidence band at every
/// usable grid time.
///
/// `baseline` must dominate `c` on the grid; a violation is an error rather
/// than a failed test because the perturbed model is then undefined.
pub fn defensibility_test(
    sample: &Sample,
    kernel: &KernelSpec,
    config: &BandConfig,
    baseline: &HazardSpec,
    c: f64,
) -> Result<DefensibilityReport> {
    if !(c.is_finite() && c > 0.0) {
        return domain(format!("noise amplitude c must be finite and > 0, got {c}"));
    }
    baseline.require_dominance(c, config.grid())?;
    let band = confidence_band(sample, kernel, config)?;
    if band.points.is_empty() {
        return Err(Error::Validation(
            "no usable grid points: the density estimate vanishes everywhere on the grid".into(),
        ));
    }
    let mut rows = Vec::with_capacity(band.points.len());
    let mut min_slack = f64::INFINITY;
    for p in &band.points {
        let r = baseline.hazard_at(p.t)?;
        let slack = p.half_width - (r - p.r_hat).abs();
        min_slack = min_slack.min(slack);
        rows.push(DefensibilityRow {
            t: p.t,
            r_hat: p.r_hat,
            lower: p.lower,
            upper: p.upper,
            baseline: r,
            margin: slack - c,
        });
    }
    let violating_t = rows.iter().find(|r| r.margin < 0.0).map(|r| r.t);
    Ok(DefensibilityReport {
        holds: violating_t.is_none(),
        c,
        max_admissible_c: min_slack.max(0.0),
        violating_t,
        rows,
        unusable: band.unusable,
    })
}
