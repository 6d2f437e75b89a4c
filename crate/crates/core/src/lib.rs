//! Hazard rates perturbed by a telegraph process.
//!
//! The lifetime distribution is `F(t) = 1 − exp(−R(t) − W(t))`, where `R` is
//! a baseline cumulative hazard and `W` the integral of a symmetric
//! telegraph process with amplitude `c` and switching rate `λ`. The crate
//! provides:
//!
//! - [`telegraph`]: exact simulation, law and moments of `W(t)`;
//! - [`hazard`] and [`presets`]: baseline hazards and the dominance `r ≥ c`;
//! - [`perturbed`]: the random distribution function `X(t)`, its support,
//!   atoms, density and moments;
//! - [`estimation`]: kernel estimates of the hazard, confidence bands and the
//!   defensibility test against observed lifetimes;
//! - [`datasets`]: the two bundled lifetime samples and a text loader.

pub mod config;
pub mod datasets;
pub mod error;
pub mod estimation;
pub mod hazard;
pub mod perturbed;
pub mod presets;
pub mod quad;
pub mod telegraph;

pub use datasets::NamedDataset;
pub use error::{Error, Result};
pub use estimation::{
    BandConfig, BandPoint, ConfidenceBand, DefensibilityReport, DefensibilityRow, KernelKind, KernelSpec, Sample,
};
pub use hazard::{CustomHazard, DominanceCheck, HazardKind, HazardSpec, LinearPiece};
pub use perturbed::{PerturbedModel, SupportBand, XPoint};
pub use telegraph::{TelegraphParams, TelegraphPath, WPoint};
