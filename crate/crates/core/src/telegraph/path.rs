use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use super::TelegraphParams;
use crate::error::{domain, Result};

/// One realisation of the telegraph noise on `[0, horizon]`: the sign of
/// `V(0)` and the jump epochs of `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TelegraphPath {
    initial_sign: i8,
    event_times: Vec<f64>,
    horizon: f64,
}

/// A sampled value of `W` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WPoint {
    pub t: f64,
    pub value: f64,
}

impl TelegraphPath {
    /// Builds a path from explicit data. Event times must be strictly
    /// increasing and lie in `(0, horizon]`.
    pub fn new(initial_sign: i8, event_times: Vec<f64>, horizon: f64) -> Result<Self> {
        if initial_sign != 1 && initial_sign != -1 {
            return domain(format!("initial sign must be +1 or -1, got {initial_sign}"));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return domain(format!("horizon must be finite and > 0, got {horizon}"));
        }
        let mut prev = 0.0;
        for &e in &event_times {
            if !(e > prev && e <= horizon) {
                return domain(format!(
                    "event times must be strictly increasing in (0, {horizon}], found {e} after {prev}"
                ));
            }
            prev = e;
        }
        Ok(Self {
            initial_sign,
            event_times,
            horizon,
        })
    }

    pub fn initial_sign(&self) -> i8 {
        self.initial_sign
    }

    pub fn event_times(&self) -> &[f64] {
        &self.event_times
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(0.0..=self.horizon).contains(&t) {
            return domain(format!("t = {t} outside path horizon [0, {}]", self.horizon));
        }
        Ok(())
    }

    /// Sign of `V(t)/c`; right-continuous at event times.
    pub fn sign_at(&self, t: f64) -> Result<i8> {
        self.check_t(t)?;
        let flips = self.event_times.partition_point(|&e| e <= t);
        Ok(if flips % 2 == 0 {
            self.initial_sign
        } else {
            -self.initial_sign
        })
    }

    /// `W(t)`: the exact integral of the piecewise-constant noise.
    pub fn integrate(&self, params: &TelegraphParams, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(params.c() * self.signed_time(t))
    }

    /// `∫₀ᵗ V(s)/c ds` for `t` already known to be in range.
    fn signed_time(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut start = 0.0;
        let mut sign = f64::from(self.initial_sign);
        for &e in &self.event_times {
            if e >= t {
                break;
            }
            acc += sign * (e - start);
            start = e;
            sign = -sign;
        }
        let v = acc + sign * (t - start);
        // Rounding may push |v| a hair past t.
        v.clamp(-t, t)
    }

    /// `W` on a nondecreasing grid, swept in a single pass.
    pub fn integrate_on_grid(&self, params: &TelegraphParams, grid: &[f64]) -> Result<Vec<WPoint>> {
        let mut out = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        let mut start = 0.0;
        let mut sign = f64::from(self.initial_sign);
        let mut next = 0;
        let mut last = f64::NEG_INFINITY;
        for &t in grid {
            self.check_t(t)?;
            if t < last {
                return domain("evaluation grid must be nondecreasing");
            }
            last = t;
            while next < self.event_times.len() && self.event_times[next] < t {
                let e = self.event_times[next];
                acc += sign * (e - start);
                start = e;
                sign = -sign;
                next += 1;
            }
            let v = (acc + sign * (t - start)).clamp(-t, t);
            out.push(WPoint {
                t,
                value: params.c() * v,
            });
        }
        Ok(out)
    }
}

/// Mixes a base seed with a stream index (SplitMix64 finaliser), giving
/// independent per-path seeds that do not depend on thread scheduling.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws one path on `[0, horizon]` by exact event-driven construction:
/// a fair coin for `V(0)` and exponential inter-arrival times with rate `λ`.
pub fn sample_path(params: &TelegraphParams, horizon: f64, seed: u64) -> Result<TelegraphPath> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return domain(format!("horizon must be finite and > 0, got {horizon}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial_sign = if rng.random_bool(0.5) { 1 } else { -1 };
    let gap = Exp::new(params.lambda()).expect("lambda validated positive");
    let mut event_times = Vec::new();
    let mut t = 0.0;
    loop {
        t += gap.sample(&mut rng);
        if t > horizon {
            break;
        }
        // A zero gap is possible only through underflow; skip it to keep times strict.
        if event_times.last().is_some_and(|&last| t <= last) || t <= 0.0 {
            continue;
        }
        event_times.push(t);
    }
    Ok(TelegraphPath {
        initial_sign,
        event_times,
        horizon,
    })
}

/// `n` independent paths; path `i` uses `derive_seed(seed, i)`, so the batch
/// is identical whether it is generated serially or in parallel.
pub fn sample_paths(params: &TelegraphParams, horizon: f64, n: usize, seed: u64) -> Result<Vec<TelegraphPath>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_path(params, horizon, derive_seed(seed, i)))
        .collect()
}

/// `n` independent draws of `W(t)`, path `i` seeded with `derive_seed(seed, i)`.
pub fn sample_w_values(params: &TelegraphParams, t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return domain(format!("time must be finite and >= 0, got {t}"));
    }
    if t == 0.0 {
        return Ok(vec![0.0; n]);
    }
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_path(params, t, derive_seed(seed, i))?.integrate(params, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> TelegraphParams {
        TelegraphParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn constant_path_integrates_linearly() {
        let params = TelegraphParams::new(2.0, 3.0).unwrap();
        let path = TelegraphPath::new(1, vec![], 1.0).unwrap();
        assert_eq!(path.integrate(&params, 0.5).unwrap(), 1.0);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((path.integrate(&params, t).unwrap() - 2.0 * t).abs() < 1e-15);
        }
    }

    #[test]
    fn single_flip_cancels() {
        let path = TelegraphPath::new(1, vec![0.5], 1.0).unwrap();
        assert_eq!(path.integrate(&unit(), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn two_flips_by_hand() {
        // sign -1 on [0, .25], +1 on [.25, .75], -1 on [.75, 1]: -0.25 + 0.5 - 0.25
        let path = TelegraphPath::new(-1, vec![0.25, 0.75], 1.0).unwrap();
        assert!((path.integrate(&unit(), 1.0).unwrap() - 0.0).abs() < 1e-15);
        assert!((path.integrate(&unit(), 0.5).unwrap() - 0.0).abs() < 1e-15);
        assert!((path.integrate(&unit(), 0.25).unwrap() + 0.25).abs() < 1e-15);
        assert_eq!(path.sign_at(0.1).unwrap(), -1);
        assert_eq!(path.sign_at(0.25).unwrap(), 1);
        assert_eq!(path.sign_at(0.9).unwrap(), -1);
    }

    #[test]
    fn rejects_bad_construction_and_queries() {
        assert!(TelegraphPath::new(0, vec![], 1.0).is_err());
        assert!(TelegraphPath::new(1, vec![0.5, 0.5], 1.0).is_err());
        assert!(TelegraphPath::new(1, vec![0.0], 1.0).is_err());
        assert!(TelegraphPath::new(1, vec![1.5], 1.0).is_err());
        let path = TelegraphPath::new(1, vec![0.5], 1.0).unwrap();
        assert!(path.integrate(&unit(), 1.1).is_err());
        assert!(path.integrate(&unit(), -0.1).is_err());
        assert!(sample_path(&unit(), 0.0, 1).is_err());
        assert!(sample_path(&unit(), -1.0, 1).is_err());
    }

    #[test]
    fn grid_sweep_matches_pointwise() {
        let params = TelegraphParams::new(1.5, 15.0).unwrap();
        let path = sample_path(&params, 2.0, 99).unwrap();
        let grid: Vec<f64> = (0..=200).map(|k| k as f64 / 100.0).collect();
        let swept = path.integrate_on_grid(&params, &grid).unwrap();
        for p in swept {
            let direct = path.integrate(&params, p.t).unwrap();
            assert!((p.value - direct).abs() < 1e-12);
            assert!(p.value.abs() <= params.c() * p.t);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let params = TelegraphParams::new(2.0, 15.0).unwrap();
        assert_eq!(
            sample_path(&params, 1.0, 7).unwrap(),
            sample_path(&params, 1.0, 7).unwrap()
        );
        let a = sample_paths(&params, 1.0, 64, 3).unwrap();
        let b: Vec<_> = (0..64)
            .map(|i| sample_path(&params, 1.0, derive_seed(3, i)).unwrap())
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let mut seeds: Vec<u64> = (0..10_000).map(|i| derive_seed(42, i)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 10_000);
    }
}
