//! Exact arithmetic: rationals, p-adic valuations, polynomials, number fields.

pub mod field;
pub mod numberfield;
pub mod poly;
pub mod rational;
pub mod roots;

pub use field::{FieldElement, ModP};
pub use numberfield::{adjoin_root, field_arith, AlgebraicNumber, FieldOp, IrreducibilityEvidence, ModularIrreducibility, NumberField};
pub use poly::Polynomial;
pub use rational::{is_prime, primes_between, valuation_p, Rational, Valuation};
pub use roots::{primitive_integer_coeffs, rational_roots};
