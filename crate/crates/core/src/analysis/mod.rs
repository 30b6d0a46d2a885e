//! Curve fitting, basis-set extrapolation and scans.

pub mod cbs;
pub mod lm;
pub mod morse;
pub mod scan;

pub use cbs::{cardinal, cbs_corr, cbs_rhf, composite_energy, ExtrapolationKind, ExtrapolationResult};
pub use morse::{morse, morse_fit, morse_fit_window, MorseFit};
pub use scan::{run_scan, scan_csv, FlatConfig, ScanConfig, ScanRow};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("{0}")]
    Input(String),
    #[error("no bracketed minimum in the data")]
    NoMinimum,
    #[error("singular normal equations")]
    Singular,
    #[error("{0}")]
    Numerical(String),
}
