//! Truncated exact Puiseux series and formal roots.

pub mod pochhammer;
pub mod series;

pub use pochhammer::{binomial, binomial_root_coeffs, Pochhammer};
pub use series::{PuiseuxSeries, RationalSeries};
