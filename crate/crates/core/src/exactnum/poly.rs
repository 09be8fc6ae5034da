use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use super::field::FieldElement;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients stored low-to-high degree with
/// no trailing zeros.
#[derive(Clone)]
pub struct Polynomial<C: FieldElement> {
    coeffs: Vec<C>,
    ctx: C::Ctx,
}

impl<C: FieldElement> PartialEq for Polynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<C: FieldElement> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<C: FieldElement> Polynomial<C> {
    pub fn new(ctx: C::Ctx, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs, ctx }
    }

    pub fn zero(ctx: C::Ctx) -> Self {
        Polynomial { coeffs: Vec::new(), ctx }
    }

    pub fn constant(c: C) -> Self {
        let ctx = c.ctx();
        Polynomial::new(ctx, vec![c])
    }

    pub fn one(ctx: C::Ctx) -> Self {
        let one = C::one(&ctx);
        Polynomial::new(ctx, vec![one])
    }

    /// `c * x^k`
    pub fn monomial(c: C, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![C::zero(&ctx); k];
        coeffs.push(c);
        Polynomial::new(ctx, coeffs)
    }

    pub fn x(ctx: C::Ctx) -> Self {
        let one = C::one(&ctx);
        Polynomial::monomial(one, 1)
    }

    /// `x - c`
    pub fn linear_root(c: &C) -> Self {
        let ctx = c.ctx();
        Polynomial::new(ctx.clone(), vec![c.negate(), C::one(&ctx)])
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn map<D: FieldElement>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::new(ctx, self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        Polynomial::new(self.ctx.clone(), self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs, ctx: self.ctx.clone() }
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&C::from_i64(&self.ctx, i as i64)))
            .collect();
        Polynomial::new(self.ctx.clone(), coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Taylor shift: the polynomial `z -> self(c + z)`.
    pub fn taylor_shift(&self, c: &C) -> Self {
        // Horner in the ring of polynomials in z.
        let mut acc = Polynomial::zero(self.ctx.clone());
        let lin = Polynomial::new(self.ctx.clone(), vec![c.clone(), C::one(&self.ctx)]);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Polynomial::constant(a.clone());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one(self.ctx.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.leading().unwrap().inverse().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(self.ctx.clone()), self.clone()));
        }
        let mut quot = vec![C::zero(&self.ctx); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].minus(&c.times(dc));
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(self.ctx.clone(), quot), Polynomial::new(self.ctx.clone(), rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient when `d` divides `self` exactly, otherwise `None`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let ctx = self.ctx.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Polynomial::one(ctx.clone()), Polynomial::zero(ctx.clone()));
        let (mut t0, mut t1) = (Polynomial::zero(ctx.clone()), Polynomial::one(ctx.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inverse().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Squarefree part `f / gcd(f, f')`, monic. Valid in characteristic zero
    /// and for the separable inputs used mod p.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.make_monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").make_monic()
    }

    /// Resultant via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> C {
        let ctx = self.ctx.clone();
        let (Some(mut da), Some(mut db)) = (self.degree(), other.degree()) else {
            return C::zero(&ctx);
        };
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = C::one(&ctx);
        loop {
            if db == 0 {
                return acc.times(&b.coeffs[0].pow_u(da as u64));
            }
            let r = a.rem(&b).expect("nonzero divisor");
            let Some(dr) = r.degree() else {
                return C::zero(&ctx);
            };
            if (da * db) % 2 == 1 {
                acc = acc.negate();
            }
            acc = acc.times(&b.leading().unwrap().pow_u((da - dr) as u64));
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }

    /// Formats with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let needs_parens = s.contains(['+', ' ']) || (s[1..].contains('-'));
            if needs_parens {
                s = format!("({s})");
            }
            let (sign, body) = match s.strip_prefix('-') {
                Some(rest) if !needs_parens => ("-", rest.to_string()),
                _ => ("+", s),
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl Polynomial<Rational> {
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Polynomial::new((), coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Polynomial::new((), coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }
}

impl<C: FieldElement> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl<C: FieldElement + Serialize> Serialize for Polynomial<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<C: FieldElement> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).plus(&rhs.coeff(i))).collect();
        Polynomial::new(self.ctx.clone(), coeffs)
    }
}

impl<C: FieldElement> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).minus(&rhs.coeff(i))).collect();
        Polynomial::new(self.ctx.clone(), coeffs)
    }
}

impl<C: FieldElement> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.ctx.clone());
        }
        let mut out = vec![C::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Polynomial::new(self.ctx.clone(), out)
    }
}

impl<C: FieldElement> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::new(self.ctx.clone(), self.coeffs.iter().map(|c| c.negate()).collect())
    }
}
