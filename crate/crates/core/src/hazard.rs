//! Deterministic baseline hazard rates `r(t)` with their cumulative hazards
//! `R(t) = ∫₀ᵗ r`, distribution functions `F = 1 − e^{−R}` and survival
//! functions `F̄ = e^{−R}`.

use std::fmt;
use std::sync::Arc;

use crate::config::KeyValues;
use crate::error::{domain, Error, Result};

/// Survival probabilities below this are reported as exactly zero.
pub const SURVIVAL_FLOOR: f64 = 1e-300;

/// Uniform points in the default dominance grid.
pub const DOMINANCE_GRID_POINTS: usize = 2048;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One linear piece `slope·t + intercept`, active from `start` (exclusive,
/// except for the first piece which starts at 0 inclusive) up to the next
/// piece's start (inclusive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPiece {
    pub start: f64,
    pub slope: f64,
    pub intercept: f64,
}

impl LinearPiece {
    fn rate(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }

    fn integral(&self, from: f64, to: f64) -> f64 {
        0.5 * self.slope * (to * to - from * from) + self.intercept * (to - from)
    }
}

/// A hazard supplied as a pair of closures `r(t)` and `R(t)`.
#[derive(Clone)]
pub struct CustomHazard {
    name: String,
    rate: ScalarFn,
    cumulative: ScalarFn,
    critical_points: Vec<f64>,
}

impl CustomHazard {
    /// `rate` and `cumulative` must be consistent (`cumulative' = rate`,
    /// `cumulative(0) = 0`); that is the caller's contract. `critical_points`
    /// are times worth checking explicitly in dominance tests (local minima
    /// of the rate, kinks).
    pub fn new<R, C>(name: impl Into<String>, rate: R, cumulative: C, critical_points: Vec<f64>) -> Self
    where
        R: Fn(f64) -> f64 + Send + Sync + 'static,
        C: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            rate: Arc::new(rate),
            cumulative: Arc::new(cumulative),
            critical_points,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomHazard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomHazard")
            .field("name", &self.name)
            .field("critical_points", &self.critical_points)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum HazardKind {
    /// `r(t) = rate`.
    Constant {
        rate: f64,
    },
    /// `r(t) = α t (t − 1)² + c_ref + β`: local maximum at `t = 1/3`,
    /// minimum `c_ref + β` at `t ∈ {0, 1}`.
    Polynomial {
        alpha: f64,
        beta: f64,
        c_ref: f64,
    },
    PiecewiseLinear(Vec<LinearPiece>),
    Custom(CustomHazard),
}

/// Result of checking `r(t) > c` on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceCheck {
    pub holds: bool,
    pub first_violation: Option<f64>,
}

/// A baseline hazard rate together with the right end `ℓ` of its support.
#[derive(Debug, Clone)]
pub struct HazardSpec {
    kind: HazardKind,
    support_end: f64,
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        domain(format!("{name} must be finite, got {v}"))
    }
}

impl HazardSpec {
    pub fn constant(rate: f64) -> Result<Self> {
        if !(finite("rate", rate)? > 0.0) {
            return domain(format!("constant hazard must be > 0, got {rate}"));
        }
        Ok(Self {
            kind: HazardKind::Constant { rate },
            support_end: f64::INFINITY,
        })
    }

    pub fn polynomial(alpha: f64, beta: f64, c_ref: f64) -> Result<Self> {
        if !(finite("alpha", alpha)? > 0.0 && finite("beta", beta)? > 0.0) {
            return domain(format!("alpha and beta must be > 0, got {alpha}, {beta}"));
        }
        if !(finite("c_ref", c_ref)? >= 0.0) {
            return domain(format!("c_ref must be >= 0, got {c_ref}"));
        }
        Ok(Self {
            kind: HazardKind::Polynomial { alpha, beta, c_ref },
            support_end: f64::INFINITY,
        })
    }

    /// Pieces must start at 0 with strictly increasing starts. The rate may
    /// touch zero at isolated points but must never be negative.
    pub fn piecewise_linear(pieces: Vec<LinearPiece>) -> Result<Self> {
        Self::piecewise_linear_with_support(pieces, f64::INFINITY)
    }

    pub fn piecewise_linear_with_support(pieces: Vec<LinearPiece>, support_end: f64) -> Result<Self> {
        check_support(support_end)?;
        let first = pieces
            .first()
            .ok_or_else(|| Error::Domain("piecewise hazard needs at least one piece".into()))?;
        if first.start != 0.0 {
            return domain(format!("first piece must start at 0, got {}", first.start));
        }
        for p in &pieces {
            finite("piece start", p.start)?;
            finite("piece slope", p.slope)?;
            finite("piece intercept", p.intercept)?;
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if w[1].start <= w[0].start {
                return domain(format!("piece {} does not start after piece {i}", i + 1));
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            let end = pieces.get(i + 1).map_or(support_end, |n| n.start);
            let at_start = p.rate(p.start);
            let at_end = if end.is_finite() {
                p.rate(end)
            } else if p.slope >= 0.0 {
                at_start
            } else {
                f64::NEG_INFINITY
            };
            if at_start < 0.0 || at_end < 0.0 {
                return domain(format!("piece {i} makes the hazard negative"));
            }
        }
        Ok(Self {
            kind: HazardKind::PiecewiseLinear(pieces),
            support_end,
        })
    }

    pub fn custom(hazard: CustomHazard, support_end: f64) -> Result<Self> {
        check_support(support_end)?;
        Ok(Self {
            kind: HazardKind::Custom(hazard),
            support_end,
        })
    }

    /// Restricts the support to `[0, support_end)`.
    pub fn with_support_end(mut self, support_end: f64) -> Result<Self> {
        check_support(support_end)?;
        self.support_end = support_end;
        Ok(self)
    }

    /// Builds a spec from `key = value` text.
    ///
    /// ```text
    /// kind = constant | polynomial | piecewise | preset
    /// rate = 0.0125                        # constant
    /// alpha = 15  beta = 0.001  c_ref = 1  # polynomial (one per line)
    /// segments = 0:3.5e-6:0, 650:-4.07143e-6:0.00492143, 1000:8e-6:-0.00715
    /// name = fig2c                         # preset
    /// support_end = inf                    # optional
    /// ```
    pub fn from_config(kv: &KeyValues) -> Result<Self> {
        let spec = match kv.require("kind")? {
            "constant" => Self::constant(kv.require_float("rate")?)?,
            "polynomial" => Self::polynomial(
                kv.require_float("alpha")?,
                kv.require_float("beta")?,
                kv.require_float("c_ref")?,
            )?,
            "piecewise" => Self::piecewise_linear(parse_segments(kv.require("segments")?)?)?,
            "preset" => crate::presets::hazard(kv.require("name")?)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown hazard kind `{other}` (expected constant, polynomial, piecewise or preset)"
                )))
            }
        };
        match kv.float("support_end")? {
            Some(end) => spec.with_support_end(end),
            None => Ok(spec),
        }
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        Self::from_config(&KeyValues::parse(text)?)
    }

    pub fn kind(&self) -> &HazardKind {
        &self.kind
    }

    /// `ℓ = sup{t : F(t) < 1}`.
    pub fn support_end(&self) -> f64 {
        self.support_end
    }

    pub(crate) fn check_in_support(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t < self.support_end) {
            return domain(format!("t = {t} outside support [0, {})", self.support_end));
        }
        Ok(())
    }

    pub(crate) fn rate_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            HazardKind::Constant { rate } => *rate,
            HazardKind::Polynomial { alpha, beta, c_ref } => alpha * t * (t - 1.0) * (t - 1.0) + c_ref + beta,
            HazardKind::PiecewiseLinear(pieces) => {
                let idx = pieces.partition_point(|p| p.start < t).saturating_sub(1);
                pieces[idx].rate(t)
            }
            HazardKind::Custom(h) => (h.rate)(t),
        }
    }

    pub(crate) fn cumulative_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            HazardKind::Constant { rate } => rate * t,
            HazardKind::Polynomial { alpha, beta, c_ref } => {
                let t2 = t * t;
                t * (alpha * (0.25 * t2 * t - (2.0 / 3.0) * t2 + 0.5 * t) + c_ref + beta)
            }
            HazardKind::PiecewiseLinear(pieces) => {
                let mut acc = 0.0;
                for (i, p) in pieces.iter().enumerate() {
                    if t <= p.start && i > 0 {
                        break;
                    }
                    let end = pieces.get(i + 1).map_or(t, |n| n.start.min(t));
                    acc += p.integral(p.start, end);
                }
                acc
            }
            HazardKind::Custom(h) => (h.cumulative)(t),
        }
    }

    /// `r(t)`.
    pub fn hazard_at(&self, t: f64) -> Result<f64> {
        self.check_in_support(t)?;
        Ok(self.rate_unchecked(t))
    }

    /// `R(t) = ∫₀ᵗ r(s) ds` in closed form.
    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        self.check_in_support(t)?;
        Ok(self.cumulative_unchecked(t))
    }

    /// `F̄(t) = e^{−R(t)}`, flushed to zero below [`SURVIVAL_FLOOR`].
    pub fn survival(&self, t: f64) -> Result<f64> {
        let s = (-self.cumulative_hazard(t)?).exp();
        Ok(if s < SURVIVAL_FLOOR { 0.0 } else { s })
    }

    /// `F(t) = 1 − e^{−R(t)}`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        let r = self.cumulative_hazard(t)?;
        Ok(-(-r).exp_m1())
    }

    /// Times at which the rate may attain a local minimum or has a kink.
    pub fn critical_points(&self) -> Vec<f64> {
        match &self.kind {
            HazardKind::Constant { .. } => vec![],
            HazardKind::Polynomial { .. } => vec![0.0, 1.0 / 3.0, 1.0],
            HazardKind::PiecewiseLinear(pieces) => pieces.iter().map(|p| p.start).collect(),
            HazardKind::Custom(h) => h.critical_points.clone(),
        }
    }

    /// Default grid for dominance checks on `(0, horizon]` (clipped below
    /// `ℓ`): [`DOMINANCE_GRID_POINTS`] uniform points plus every critical
    /// point in range. `t = 0` is excluded; see [`Self::validate_dominance`].
    pub fn dominance_grid(&self, horizon: f64) -> Result<Vec<f64>> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return domain(format!("dominance horizon must be finite and > 0, got {horizon}"));
        }
        let (upper, closed) = if horizon < self.support_end {
            (horizon, true)
        } else {
            (self.support_end, false)
        };
        let n = DOMINANCE_GRID_POINTS;
        let denom = if closed { n } else { n + 1 };
        let mut grid: Vec<f64> = (1..=n).map(|k| upper * k as f64 / denom as f64).collect();
        grid.extend(
            self.critical_points()
                .into_iter()
                .filter(|&p| p > 0.0 && (p < upper || (closed && p == upper))),
        );
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        Ok(grid)
    }

    /// Checks `r(t) > c` at every grid time and reports the first violation.
    ///
    /// Grid-based: the check is exact at the grid points only. Callers that
    /// want a proxy for "for all t" should use [`Self::dominance_grid`].
    pub fn validate_dominance(&self, c: f64, grid: &[f64]) -> Result<DominanceCheck> {
        if grid.is_empty() {
            return domain("dominance grid is empty");
        }
        for &t in grid {
            self.check_in_support(t)?;
        }
        let first_violation = grid.iter().copied().find(|&t| !(self.rate_unchecked(t) > c));
        Ok(DominanceCheck {
            holds: first_violation.is_none(),
            first_violation,
        })
    }

    /// Like [`Self::validate_dominance`] but turns a violation into an error.
    pub fn require_dominance(&self, c: f64, grid: &[f64]) -> Result<()> {
        match self.validate_dominance(c, grid)?.first_violation {
            None => Ok(()),
            Some(t) => Err(Error::Dominance {
                t,
                hazard: self.rate_unchecked(t),
                c,
            }),
        }
    }
}

fn check_support(support_end: f64) -> Result<()> {
    if !(support_end > 0.0) {
        return domain(format!("support end must be > 0 (or inf), got {support_end}"));
    }
    Ok(())
}

/// Parses `start:slope:intercept` triples separated by commas or semicolons.
pub fn parse_segments(text: &str) -> Result<Vec<LinearPiece>> {
    text.split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|seg| {
            let parts: Vec<&str> = seg.split(':').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!("segment `{seg}` must be start:slope:intercept")));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Config(format!("segment `{seg}`: `{s}` is not a number")))
            };
            Ok(LinearPiece {
                start: num(parts[0])?,
                slope: num(parts[1])?,
                intercept: num(parts[2])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::quad::{integrate, QuadOptions};

    #[test]
    fn constant_hazard() {
        let h = HazardSpec::constant(0.0125).unwrap();
        assert_eq!(h.hazard_at(50.0).unwrap(), 0.0125);
        assert_eq!(h.cumulative_hazard(8.0).unwrap(), 0.1);
        assert!((h.cdf(80.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((h.cdf(80.0).unwrap() - 0.632_120_558_828_557_7).abs() < 1e-12);
        assert!(HazardSpec::constant(0.0).is_err());
        assert!(HazardSpec::constant(f64::NAN).is_err());
    }

    #[test]
    fn polynomial_hazard() {
        let h = HazardSpec::polynomial(15.0, 0.001, 1.0).unwrap();
        assert!((h.hazard_at(1.0).unwrap() - 1.001).abs() < 1e-15);
        let t: f64 = 1.7;
        let want = 15.0 / 4.0 * t.powi(4) - 10.0 * t.powi(3) + 7.5 * t * t + 1.001 * t;
        assert!((h.cumulative_hazard(t).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn piecewise_breakpoints_use_left_piece() {
        let h = presets::service_baseline();
        assert!((h.hazard_at(650.0).unwrap() - 0.002_275).abs() < 1e-15);
        assert!((h.hazard_at(1000.0).unwrap() - (-4.07143e-6 * 1000.0 + 0.00492143)).abs() < 1e-15);
        assert!((h.hazard_at(1000.5).unwrap() - (8e-6 * 1000.5 - 0.00715)).abs() < 1e-15);
        assert_eq!(h.hazard_at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn support_is_enforced() {
        let h = HazardSpec::constant(1.0).unwrap().with_support_end(2.0).unwrap();
        assert!(h.hazard_at(-0.1).is_err());
        assert!(h.hazard_at(2.0).is_err());
        assert!(h.cdf(1.99).is_ok());
        assert!(HazardSpec::constant(1.0).unwrap().with_support_end(0.0).is_err());
    }

    #[test]
    fn survival_flushes_to_zero() {
        let h = HazardSpec::constant(1.0).unwrap();
        assert_eq!(h.survival(800.0).unwrap(), 0.0);
        assert!(h.survival(600.0).unwrap() > 0.0);
        assert_eq!(h.cdf(0.0).unwrap(), 0.0);
        assert_eq!(h.survival(0.0).unwrap(), 1.0);
    }

    #[test]
    fn cumulative_matches_quadrature_for_every_builtin() {
        let cases: Vec<(HazardSpec, f64)> = vec![
            (HazardSpec::constant(0.0125).unwrap(), 300.0),
            (HazardSpec::polynomial(15.0, 0.001, 1.0).unwrap(), 2.5),
            (presets::service_baseline(), 1700.0),
            (presets::fig2b_hazard(), 4.0),
            (presets::fig2c_hazard(), 12.0),
        ];
        let opts = QuadOptions::with_tolerance(1e-14, 1e-14);
        for (spec, end) in cases {
            // Integrate piece by piece across kinks.
            let mut knots: Vec<f64> = spec.critical_points().into_iter().filter(|&p| p < end).collect();
            knots.push(0.0);
            for k in 1..=10 {
                knots.push(end * k as f64 / 10.0);
            }
            knots.sort_by(f64::total_cmp);
            knots.dedup();
            let mut acc = 0.0;
            for w in knots.windows(2) {
                acc += integrate(|s| spec.hazard_at(s).unwrap(), w[0], w[1], opts)
                    .unwrap()
                    .value;
                let closed = spec.cumulative_hazard(w[1]).unwrap();
                assert!(
                    (closed - acc).abs() <= 1e-9 * closed.abs().max(1.0),
                    "{:?} at {}: {closed} vs {acc}",
                    spec.kind(),
                    w[1]
                );
            }
        }
    }

    #[test]
    fn dominance_examples() {
        let c = HazardSpec::constant(0.0125).unwrap();
        let grid = c.dominance_grid(300.0).unwrap();
        assert!(c.validate_dominance(0.0004, &grid).unwrap().holds);
        let bad = c.validate_dominance(0.02, &grid).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.first_violation, Some(grid[0]));
        assert!(c.validate_dominance(0.1, &[]).is_err());

        let p = HazardSpec::polynomial(15.0, 0.001, 1.0).unwrap();
        let grid = p.dominance_grid(3.0).unwrap();
        assert!(grid.contains(&1.0));
        assert!(p.validate_dominance(1.0, &grid).unwrap().holds);
        // The minimum of the rate is exactly c + beta.
        assert!(!p.validate_dominance(1.001, &grid).unwrap().holds);
    }

    #[test]
    fn dominance_grid_respects_finite_support() {
        let h = HazardSpec::constant(1.0).unwrap().with_support_end(5.0).unwrap();
        let g = h.dominance_grid(10.0).unwrap();
        assert!(g.iter().all(|&t| t > 0.0 && t < 5.0));
        assert_eq!(g.len(), DOMINANCE_GRID_POINTS);
        assert!(h.dominance_grid(0.0).is_err());
    }

    #[test]
    fn piecewise_validation() {
        let piece = |start, slope, intercept| LinearPiece {
            start,
            slope,
            intercept,
        };
        assert!(HazardSpec::piecewise_linear(vec![]).is_err());
        assert!(HazardSpec::piecewise_linear(vec![piece(1.0, 0.0, 1.0)]).is_err());
        assert!(HazardSpec::piecewise_linear(vec![piece(0.0, -1.0, 1.0)]).is_err());
        assert!(HazardSpec::piecewise_linear(vec![piece(0.0, 0.0, 1.0), piece(0.0, 0.0, 2.0)]).is_err());
        assert!(HazardSpec::piecewise_linear_with_support(vec![piece(0.0, -1.0, 1.0)], 0.5).is_ok());
    }

    #[test]
    fn config_round_trips_every_kind() {
        let c = HazardSpec::from_config_str("kind = constant\nrate = 0.0125").unwrap();
        assert_eq!(c.hazard_at(3.0).unwrap(), 0.0125);
        let p = HazardSpec::from_config_str("kind=polynomial\nalpha=15\nbeta=0.001\nc_ref=2").unwrap();
        assert!((p.hazard_at(1.0).unwrap() - 2.001).abs() < 1e-15);
        let s = HazardSpec::from_config_str(
            "kind = piecewise\nsegments = 0:3.5e-6:0, 650:-4.07143e-6:0.00492143; 1000:8e-6:-0.00715",
        )
        .unwrap();
        let eq7 = presets::service_baseline();
        for t in [0.0, 100.0, 650.0, 800.0, 1000.0, 1500.0] {
            assert_eq!(s.hazard_at(t).unwrap(), eq7.hazard_at(t).unwrap());
            assert_eq!(s.cumulative_hazard(t).unwrap(), eq7.cumulative_hazard(t).unwrap());
        }
        let f = HazardSpec::from_config_str("kind = preset\nname = fig2c\nsupport_end = inf").unwrap();
        assert!(f.support_end().is_infinite());
        assert!(HazardSpec::from_config_str("kind = weibull").is_err());
        assert!(HazardSpec::from_config_str("kind = constant").is_err());
        assert!(HazardSpec::from_config_str("kind = piecewise\nsegments = 0:1").is_err());
    }
}
