use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Element of an exact field. `Ctx` carries whatever is needed to build
/// constants of the field (nothing for the rationals, the number field for
/// algebraic numbers, the modulus for prime fields).
///
/// Binary operations assume both operands live in the same field; callers
/// that cannot guarantee this go through the checked wrappers of the
/// concrete types.
pub trait FieldElement: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;

    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// The element as a rational, when it is one.
    fn as_rational(&self) -> Option<Rational>;

    /// An exact n-th root inside the field, when one can be found.
    fn nth_root(&self, n: u32) -> Option<Self> {
        let r = self.as_rational()?.nth_root(n)?;
        Some(Self::from_rational(&self.ctx(), &r))
    }

    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_rational(ctx, &Rational::from_i64(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn divide(&self, other: &Self) -> Result<Self> {
        Ok(self.times(&other.inverse().ok_or(Error::DivisionByZero)?))
    }

    fn scale_rational(&self, r: &Rational) -> Self {
        self.times(&Self::from_rational(&self.ctx(), r))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

impl FieldElement for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Rational::zero()
    }
    fn one(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.recip()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn nth_root(&self, n: u32) -> Option<Self> {
        Rational::nth_root(self, n)
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
}

/// Residue class modulo a prime `modulus` (< 2^32 so products fit in u64).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModP {
    value: u64,
    modulus: u64,
}

impl ModP {
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        ModP { value: value.rem_euclid(m) as u64, modulus }
    }

    /// Reduce a rational modulo the prime; `None` when the denominator
    /// vanishes mod p.
    pub fn from_rational_checked(r: &Rational, modulus: u64) -> Option<Self> {
        let m = BigInt::from(modulus);
        let num = r.numer().mod_floor(&m).to_u64()?;
        let den = r.denom().mod_floor(&m).to_u64()?;
        if den == 0 {
            return None;
        }
        let den = ModP { value: den, modulus };
        Some(ModP { value: num, modulus }.times(&den.inverse()?))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl FieldElement for ModP {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.modulus
    }
    fn zero(m: &u64) -> Self {
        ModP { value: 0, modulus: *m }
    }
    fn one(m: &u64) -> Self {
        ModP { value: 1 % *m, modulus: *m }
    }
    fn from_rational(m: &u64, r: &Rational) -> Self {
        ModP::from_rational_checked(r, *m).expect("denominator divisible by the modulus")
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn plus(&self, o: &Self) -> Self {
        ModP { value: (self.value + o.value) % self.modulus, modulus: self.modulus }
    }
    fn minus(&self, o: &Self) -> Self {
        ModP { value: (self.value + self.modulus - o.value) % self.modulus, modulus: self.modulus }
    }
    fn times(&self, o: &Self) -> Self {
        ModP { value: (self.value * o.value) % self.modulus, modulus: self.modulus }
    }
    fn negate(&self) -> Self {
        ModP { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
    fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i64).extended_gcd(&(self.modulus as i64));
        if g.gcd != 1 {
            return None;
        }
        Some(ModP::new(g.x, self.modulus))
    }
    fn as_rational(&self) -> Option<Rational> {
        None
    }
    fn nth_root(&self, _n: u32) -> Option<Self> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_p_arith() {
        let a = ModP::new(3, 7);
        let b = ModP::new(-2, 7);
        assert_eq!(b.value(), 5);
        assert_eq!(a.plus(&b).value(), 1);
        assert_eq!(a.times(&a.inverse().unwrap()).value(), 1);
        assert_eq!(ModP::from_rational_checked(&Rational::from_frac(1, 2), 7).unwrap().value(), 4);
        assert!(ModP::from_rational_checked(&Rational::from_frac(1, 7), 7).is_none());
        assert_eq!(a.pow_u(6).value(), 1);
    }
}
