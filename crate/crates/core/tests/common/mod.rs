//! Reference routines shared by the integration suites. They are written
//! independently of the library so the two can be checked against each other.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh quadrature on `[a, b]`; never evaluates the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    // Contribution of the abscissa pair at parameter s (and s = 0 once).
    let pair = |s: f64| -> f64 {
        let u = FRAC_PI_2 * s.sinh();
        let w = FRAC_PI_2 * s.cosh() / (u.cosh() * u.cosh());
        // Distance of the node from the nearer endpoint, in units of `half`.
        let d = 2.0 / (1.0 + (2.0 * u).exp());
        let lo = a + half * d;
        let hi = b - half * d;
        let mut sum = 0.0;
        if lo > a && lo < b {
            sum += f(lo);
        }
        if hi < b && hi > a {
            sum += f(hi);
        }
        w * sum
    };
    let s_max = 3.5;
    let mut h = 0.5;
    let mut total = FRAC_PI_2 * f(mid);
    let mut k = 1.0;
    while k * h <= s_max {
        total += pair(k * h);
        k += 1.0;
    }
    let mut estimate = total * h * half;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1.0;
        while k * h <= s_max {
            total += pair(k * h);
            k += 2.0;
        }
        let next = total * h * half;
        if (next - estimate).abs() <= tol * next.abs().max(1.0) {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample variance and an asymptotic standard error for it,
/// `sqrt((m4 − s⁴)/n)`.
pub fn var_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    (m2 * n / (n - 1.0), ((m4 - m2 * m2) / n).sqrt())
}

/// Kolmogorov–Smirnov distance between the sample and a CDF. Sorts `xs`.
pub fn ks_distance<F: Fn(f64) -> f64>(xs: &mut [f64], cdf: F) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max((j as f64 / n - f).abs());
        // Just below x the empirical CDF is i/n; the model CDF is at most f.
        d = d.max(f - i as f64 / n - atom_allowance(&cdf, x, f));
        i = j;
    }
    d
}

fn atom_allowance<F: Fn(f64) -> f64>(cdf: &F, x: f64, f: f64) -> f64 {
    let below = cdf(x - x.abs().max(1.0) * 1e-12);
    (f - below).max(0.0)
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_6 / (n as f64).sqrt()
}
