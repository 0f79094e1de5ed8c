//! Valuation engine for future discretionary benefits of with-profit life
//! portfolios: closed-form lower/upper bounds with a midpoint estimator,
//! market calibration from public aggregates, and an independent Monte Carlo
//! asset-liability simulator used to validate the bounds.

pub mod almsim;
pub mod bachelier;
pub mod bounds;
pub mod calibration;
pub mod config;
pub mod curves;
pub mod data;
pub mod error;
pub mod reference;
pub mod report;
pub mod runoff;

pub use error::{Error, Result};
