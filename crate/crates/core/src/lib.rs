//! Reliability analysis and maintenance simulation for instrument-transformer
//! fleets.
//!
//! The crate is `no_std` (with `alloc`) and holds the pure algorithmic core:
//!
//! * [`fleet`]: asset records, right-censored lifetime tables, fleet
//!   summaries and seeded synthetic fleets.
//! * [`survival`]: Kaplan-Meier product-limit estimation and quantiles.
//! * [`weibull`]: Weibull reliability laws, censored maximum-likelihood and
//!   rank-regression fitting, conditional next-window failure probability.
//! * [`health`]: asset health index scoring and apparent-age modelling.
//! * [`sim`]: seeded Monte-Carlo simulation of replacement and inspection
//!   policies under workforce constraints.
//!
//! File formats, parallel execution and the command-line front end live in
//! the `itfleet` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod fleet;
pub mod health;
pub mod money;
pub mod sim;
pub mod survival;
pub mod weibull;

pub use error::{Error, Result};
pub use fleet::{AssetRecord, LifetimeObservation, PerClass, VoltageClass};
pub use money::Money;
pub use survival::{Quantile, SurvivalCurve};
pub use weibull::{FitDiagnostics, WeibullLaw};

/// Days per year used for all calendar-to-years conversions.
pub const DAYS_PER_YEAR: f64 = 365.25;

/// Hours per year, consistent with [`DAYS_PER_YEAR`].
pub const HOURS_PER_YEAR: f64 = DAYS_PER_YEAR * 24.0;
