//! Division polynomials and the torsion screening pipeline.

pub mod curve;
pub mod divpoly;
pub mod factor;
pub mod newton;
pub mod screen;

pub use curve::{ShortModel, WeierstrassCurve};
pub use divpoly::{division_poly, division_poly_any, DivisionPolynomial};
pub use factor::{factor_degree_pattern, irreducibility_certificate, BadReduction, IrreducibilityCertificate, IrreducibleEvidence};
pub use newton::{newton_polygon, NewtonPolygon, Segment};
pub use screen::{screen_primes, torsion_divisor_consistency, PrimeReport, ScreenOptions, ScreenReport, SURJECTIVITY_BOUND};
