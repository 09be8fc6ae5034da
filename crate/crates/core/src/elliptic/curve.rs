use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{Polynomial, Rational};

/// `y^2 = x^3 + A x + B` over the rationals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeierstrassCurve {
    #[serde(rename = "A")]
    pub a: Rational,
    #[serde(rename = "B")]
    pub b: Rational,
}

/// A curve in general form `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
/// together with its short model.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortModel {
    pub curve: WeierstrassCurve,
    /// `x_short = x + shift`.
    pub x_shift: Rational,
}

impl WeierstrassCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        let c = WeierstrassCurve { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::InvalidInput("singular curve: 4A^3 + 27B^2 = 0".into()));
        }
        Ok(c)
    }

    /// `-16 (4 A^3 + 27 B^2)`.
    pub fn discriminant(&self) -> Rational {
        let four_a3 = Rational::from_i64(4) * self.a.pow(3);
        let b2 = Rational::from_i64(27) * self.b.pow(2);
        Rational::from_i64(-16) * (four_a3 + b2)
    }

    /// `x^3 + A x + B`, whose roots are the 2-torsion x-coordinates.
    pub fn two_torsion_cubic(&self) -> Polynomial<Rational> {
        Polynomial::from_rationals(vec![self.b.clone(), self.a.clone(), Rational::zero(), Rational::one()])
    }

    /// Complete the square and the cube:
    /// `b2 = a1^2 + 4 a2`, `b4 = 2 a4 + a1 a3`, `b6 = a3^2 + 4 a6`,
    /// `A = b4/2 - b2^2/48`, `B = b6/4 - b2 b4/24 + b2^3/864`, and
    /// `x_short = x + b2/12`.
    pub fn from_general(coeffs: [Rational; 5]) -> Result<ShortModel> {
        let [a1, a2, a3, a4, a6] = coeffs;
        let r = Rational::from_i64;
        let b2 = &a1 * &a1 + r(4) * &a2;
        let b4 = r(2) * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + r(4) * &a6;
        let a = &b4 / &r(2) - &(&b2 * &b2) / &r(48);
        let b = &b6 / &r(4) - &(&b2 * &b4) / &r(24) + &b2.pow(3) / &r(864);
        Ok(ShortModel { curve: WeierstrassCurve::new(a, b)?, x_shift: &b2 / &r(12) })
    }

    /// Whether `(x, y)` lies on the curve.
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        y * y == x.pow(3) + &self.a * x + self.b.clone()
    }
}
