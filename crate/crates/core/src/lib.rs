//! Exact q-series arithmetic for eta quotients and related certificates.

pub mod elliptic;
pub mod error;
pub mod etaforms;
pub mod exactnum;
pub mod puiseux;
pub mod qseries;
pub mod ubdcert;

pub use error::{Error, Result};
