//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Used for the cumulative distribution of the integrated telegraph process,
//! for the excess cumulative hazard over an unbounded support, and by the
//! normalisation checks in the test suites.

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-interval |Kronrod - Gauss| estimates.
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_tolerance(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Kronrod estimate of the integral of |f|.
    magnitude: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (lo, hi) = (f(center - dx), f(center + dx));
        let pair = lo + hi;
        kronrod += WGK[j] * pair;
        magnitude += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        magnitude: magnitude * half.abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the total
/// estimate meets `max(abs_tol, rel_tol * |value|)`, or falls to the rounding
/// level `50 ε ∫|f|`. Reversed bounds flip the
/// sign of the result; equal bounds give zero.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Integral> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        let r = integrate(f, b, a, opts)?;
        return Ok(Integral { value: -r.value, ..r });
    }

    let mut segments = vec![gauss_kronrod(&f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() {
            return Err(Error::Quadrature { a, b, error });
        }
        let magnitude: f64 = segments.iter().map(|s| s.magnitude).sum();
        // Below this floor the estimate is dominated by rounding in f itself.
        let roundoff = 50.0 * f64::EPSILON * magnitude;
        let target = opts.abs_tol.max(opts.rel_tol * value.abs()).max(roundoff);
        if error <= target {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::Quadrature { a, b, error });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("segment list is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval collapsed to adjacent floats; accept what we have.
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        segments.push(gauss_kronrod(&f, seg.a, mid));
        segments.push(gauss_kronrod(&f, mid, seg.b));
        evaluations += 30;
    }
}

/// Outcome of integrating a nonnegative function over `[a, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailIntegral {
    Finite(f64),
    /// The partial integral exceeded the divergence threshold.
    Divergent,
}

/// Integrates a nonnegative `f` over `[a, ∞)` by doubling windows.
///
/// Windows `[a, a+1], [a+1, a+2], [a+2, a+4], ...` are added until a window
/// contributes less than `tail_tol`, or the running total passes
/// `divergence_threshold` (reported as [`TailIntegral::Divergent`]). A series
/// that never settles within the representable range is also divergent.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tail_tol: f64,
    divergence_threshold: f64,
) -> Result<TailIntegral> {
    let opts = QuadOptions::with_tolerance(tail_tol * 1e-2, 1e-13);
    let mut total = 0.0;
    let mut lo = a;
    let mut width = 1.0_f64;
    let mut quiet_windows = 0;
    while lo.is_finite() && width.is_finite() {
        let hi = lo + width;
        let piece = integrate(&f, lo, hi, opts)?.value;
        total += piece;
        if total > divergence_threshold {
            return Ok(TailIntegral::Divergent);
        }
        if piece.abs() < tail_tol {
            quiet_windows += 1;
            if quiet_windows >= 2 {
                return Ok(TailIntegral::Finite(total));
            }
        } else {
            quiet_windows = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Ok(TailIntegral::Divergent)
}
