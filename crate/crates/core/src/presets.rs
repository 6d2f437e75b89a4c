//! Named parameter sets for the standard figures and the two case studies.
//!
//! | id      | hazard                                  | c       | λ  |
//! |---------|-----------------------------------------|---------|----|
//! | `fig1`  | `15 t (t−1)² + 2.001`                   | 2       | 15 |
//! | `fig2a` | `15 t (t−1)² + 1.001` (also fig3, fig4) | 1       | 15 |
//! | `fig2b` | `1 + eᵗ`                                | 1       | 1  |
//! | `fig2c` | `1 + 3(1 − e⁻ᵗ)/(eᵗ + e⁻ᵗ)`             | 1       | 1  |
//! | `app1`  | `0.0125`, melanoma data, h = 6          | 0.0004  | –  |
//! | `app2`  | three linear pieces, service data, h=75 | 0.00025 | –  |

use crate::error::{Error, Result};
use crate::hazard::{CustomHazard, HazardSpec, LinearPiece};
use crate::telegraph::TelegraphParams;

pub const POLY_ALPHA: f64 = 15.0;
pub const POLY_BETA: f64 = 0.001;

/// `15 t (t−1)² + c + 0.001`.
pub fn polynomial_hazard(c: f64) -> HazardSpec {
    HazardSpec::polynomial(POLY_ALPHA, POLY_BETA, c).expect("valid preset")
}

/// Constant baseline of the melanoma case study.
pub fn melanoma_baseline() -> HazardSpec {
    HazardSpec::constant(0.0125).expect("valid preset")
}

/// Piecewise-linear baseline of the service-time case study, taken verbatim
/// (the pieces are only approximately continuous at 650 and 1000).
pub fn service_baseline() -> HazardSpec {
    HazardSpec::piecewise_linear(vec![
        LinearPiece {
            start: 0.0,
            slope: 3.5e-6,
            intercept: 0.0,
        },
        LinearPiece {
            start: 650.0,
            slope: -4.07143e-6,
            intercept: 0.004_921_43,
        },
        LinearPiece {
            start: 1000.0,
            slope: 8e-6,
            intercept: -0.007_15,
        },
    ])
    .expect("valid preset")
}

/// `r(t) = 1 + eᵗ`, `R(t) = t + eᵗ − 1`.
pub fn fig2b_hazard() -> HazardSpec {
    let h = CustomHazard::new("1+exp(t)", |t: f64| 1.0 + t.exp(), |t: f64| t + t.exp_m1(), vec![]);
    HazardSpec::custom(h, f64::INFINITY).expect("valid preset")
}

/// `r(t) = 1 + 3(1 − e⁻ᵗ)/(eᵗ + e⁻ᵗ)` with
/// `R(t) = t + 3[atan(tanh(t/2)) + ½ ln(1 + (e^{−2t} − 1)/2)]`.
pub fn fig2c_hazard() -> HazardSpec {
    let rate = |t: f64| 1.0 - 3.0 * (-t).exp_m1() / (t.exp() + (-t).exp());
    let cumulative = |t: f64| t + 3.0 * ((0.5 * t).tanh().atan() + 0.5 * (0.5 * (-2.0 * t).exp_m1()).ln_1p());
    let h = CustomHazard::new("1+3(1-exp(-t))/(exp(t)+exp(-t))", rate, cumulative, vec![]);
    HazardSpec::custom(h, f64::INFINITY).expect("valid preset")
}

/// Hazard for a preset id.
pub fn hazard(id: &str) -> Result<HazardSpec> {
    Ok(match id {
        "fig1" => polynomial_hazard(2.0),
        "fig2a" | "fig3" | "fig4" => polynomial_hazard(1.0),
        "fig2b" => fig2b_hazard(),
        "fig2c" => fig2c_hazard(),
        "app1" => melanoma_baseline(),
        "app2" => service_baseline(),
        other => {
            return Err(Error::Unknown {
                kind: "preset",
                name: other.to_string(),
            })
        }
    })
}

/// Telegraph noise for a figure preset.
pub fn noise(id: &str) -> Result<TelegraphParams> {
    let (c, lambda) = match id {
        "fig1" => (2.0, 15.0),
        "fig2a" | "fig3" | "fig4" => (1.0, 15.0),
        "fig2b" | "fig2c" => (1.0, 1.0),
        other => {
            return Err(Error::Unknown {
                kind: "figure preset",
                name: other.to_string(),
            })
        }
    };
    TelegraphParams::new(c, lambda)
}

/// Settings of a case study: dataset, bandwidth, tail level and the noise
/// amplitude reported as defensible.
#[derive(Debug, Clone)]
pub struct Application {
    pub id: &'static str,
    pub dataset: &'static str,
    pub bandwidth: f64,
    pub alpha: f64,
    pub c: f64,
    pub baseline: HazardSpec,
}

pub fn application(id: &str) -> Result<Application> {
    match id {
        "app1" => Ok(Application {
            id: "app1",
            dataset: "melanoma_46",
            bandwidth: 6.0,
            alpha: 0.025,
            c: 0.0004,
            baseline: melanoma_baseline(),
        }),
        "app2" => Ok(Application {
            id: "app2",
            dataset: "service_86",
            bandwidth: 75.0,
            alpha: 0.025,
            c: 0.00025,
            baseline: service_baseline(),
        }),
        other => Err(Error::Unknown {
            kind: "application",
            name: other.to_string(),
        }),
    }
}
