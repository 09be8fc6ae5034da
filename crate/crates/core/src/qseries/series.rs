use std::fmt;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, Polynomial, Rational};

/// Truncated series `sum_k c_k q^(k/w)`, known modulo `q^(t/w)`.
///
/// Coefficients are stored densely from the lowest index `v` up to (but
/// excluding) the truncation index `t`. When the series is zero to the known
/// precision, `coeffs` is empty and `v == t`.
#[derive(Clone)]
pub struct PuiseuxSeries<C: FieldElement> {
    ctx: C::Ctx,
    w: u64,
    v: i64,
    coeffs: Vec<C>,
    t: i64,
}

impl<C: FieldElement> fmt::Debug for PuiseuxSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: FieldElement> PartialEq for PuiseuxSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        let w = self.w.lcm(&other.w);
        let a = self.rescale(w);
        let b = other.rescale(w);
        a.v == b.v && a.t == b.t && a.coeffs == b.coeffs
    }
}

impl<C: FieldElement> PuiseuxSeries<C> {
    /// Series with coefficient `coeffs[k]` at `q^((v + k)/w)`, known to
    /// `q^(t/w)`. Missing coefficients below `t` are zero; extra ones are
    /// dropped.
    pub fn from_coeffs(ctx: C::Ctx, w: u64, v: i64, mut coeffs: Vec<C>, t: i64) -> Self {
        assert!(w >= 1, "ramification must be positive");
        let len = (t - v).max(0) as usize;
        coeffs.resize(len, C::zero(&ctx));
        let mut s = PuiseuxSeries { ctx, w, v: v.min(t), coeffs, t };
        s.normalize();
        s
    }

    /// Series from `(index, coefficient)` pairs in units of `1/w`.
    pub fn from_terms(ctx: C::Ctx, w: u64, terms: &[(i64, C)], t: i64) -> Self {
        let v = terms.iter().map(|(i, _)| *i).filter(|&i| i < t).min().unwrap_or(t);
        let mut coeffs = vec![C::zero(&ctx); (t - v).max(0) as usize];
        for (i, c) in terms {
            if *i < t {
                let k = (*i - v) as usize;
                coeffs[k] = coeffs[k].plus(c);
            }
        }
        PuiseuxSeries::from_coeffs(ctx, w, v, coeffs, t)
    }

    pub fn zero(ctx: C::Ctx, w: u64, t: i64) -> Self {
        PuiseuxSeries { ctx, w, v: t, coeffs: Vec::new(), t }
    }

    pub fn one(ctx: C::Ctx, t: i64) -> Self {
        let one = C::one(&ctx);
        PuiseuxSeries::from_coeffs(ctx, 1, 0, vec![one], t)
    }

    /// `c * q^(index/w)` known to `q^(t/w)`.
    pub fn monomial(c: C, w: u64, index: i64, t: i64) -> Self {
        let ctx = c.ctx();
        PuiseuxSeries::from_coeffs(ctx, w, index, vec![c], t)
    }

    /// A polynomial in `q` viewed as a series known to `q^t`.
    pub fn from_polynomial(p: &Polynomial<C>, t: i64) -> Self {
        PuiseuxSeries::from_coeffs(p.ctx().clone(), 1, 0, p.coeffs().to_vec(), t)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.v += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.v = self.t;
            }
        }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    /// Ramification index: exponents are multiples of `1/w`.
    pub fn w(&self) -> u64 {
        self.w
    }

    /// Index of the leading term in units of `1/w` (equal to `t` for zero).
    pub fn v(&self) -> i64 {
        self.v
    }

    /// Truncation index in units of `1/w`.
    pub fn t(&self) -> i64 {
        self.t
    }

    /// Coefficients from index `v` up to `t - 1`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Number of known coefficients counted from the leading term.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// True when the series vanishes to its known precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Order of vanishing as an exact rational exponent.
    pub fn valuation(&self) -> Option<Rational> {
        if self.is_zero() {
            None
        } else {
            Some(Rational::from_frac(self.v, self.w as i64))
        }
    }

    /// Truncation as an exact rational exponent.
    pub fn truncation(&self) -> Rational {
        Rational::from_frac(self.t, self.w as i64)
    }

    /// Coefficient at `q^(index/w)`; `None` beyond the truncation.
    pub fn coeff(&self, index: i64) -> Option<C> {
        if index >= self.t {
            None
        } else if index < self.v {
            Some(C::zero(&self.ctx))
        } else {
            Some(self.coeffs[(index - self.v) as usize].clone())
        }
    }

    /// Coefficient at the rational exponent `e`, if `e` is a multiple of
    /// `1/w` below the truncation.
    pub fn coeff_at(&self, e: &Rational) -> Option<C> {
        let scaled = e * &Rational::from_i64(self.w as i64);
        self.coeff(scaled.to_i64()?)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &C)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| {
            (Rational::from_frac(self.v + k as i64, self.w as i64), c)
        })
    }

    /// Same value with ramification `new_w`, a multiple of `w`.
    pub fn rescale(&self, new_w: u64) -> Self {
        assert!(new_w.is_multiple_of(self.w), "rescale target must be a multiple of w");
        let k = new_w / self.w;
        if k == 1 {
            return self.clone();
        }
        let ki = k as i64;
        let mut coeffs = vec![C::zero(&self.ctx); (self.t - self.v) as usize * k as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        PuiseuxSeries { ctx: self.ctx.clone(), w: new_w, v: self.v * ki, coeffs, t: self.t * ki }
    }

    /// Smallest ramification that represents the same value and truncation.
    pub fn reduce_ramification(&self) -> Self {
        let mut g = self.w.gcd(&(self.t.unsigned_abs()));
        for (k, c) in self.coeffs.iter().enumerate() {
            if g == 1 {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&(self.v + k as i64).unsigned_abs());
            }
        }
        if g <= 1 {
            return self.clone();
        }
        let gi = g as i64;
        let terms: Vec<(i64, C)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| ((self.v + k as i64) / gi, c.clone()))
            .collect();
        PuiseuxSeries::from_terms(self.ctx.clone(), self.w / g, &terms, self.t / gi)
    }

    /// Forget everything from `q^(t/w)` on.
    pub fn truncate(&self, t: i64) -> Self {
        if t >= self.t {
            return self.clone();
        }
        PuiseuxSeries::from_coeffs(self.ctx.clone(), self.w, self.v, self.coeffs.clone(), t)
    }

    /// Multiply by `q^(k/w)`.
    pub fn shift(&self, k: i64) -> Self {
        PuiseuxSeries { ctx: self.ctx.clone(), w: self.w, v: self.v + k, coeffs: self.coeffs.clone(), t: self.t + k }
    }

    pub fn map<D: FieldElement>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> PuiseuxSeries<D> {
        let coeffs = self.coeffs.iter().map(f).collect();
        PuiseuxSeries::from_coeffs(ctx, self.w, self.v, coeffs, self.t)
    }

    pub fn scale(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.times(c)).collect();
        PuiseuxSeries::from_coeffs(self.ctx.clone(), self.w, self.v, coeffs, self.t)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(C::negate).collect();
        PuiseuxSeries { ctx: self.ctx.clone(), w: self.w, v: self.v, coeffs, t: self.t }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let w = self.w.lcm(&other.w);
        (self.rescale(w), other.rescale(w))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = self.common(other);
        let t = a.t.min(b.t);
        let v = a.v.min(b.v).min(t);
        let mut coeffs = vec![C::zero(&a.ctx); (t - v) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            let idx = a.v + i as i64;
            if idx < t {
                coeffs[(idx - v) as usize] = c.clone();
            }
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let idx = b.v + i as i64;
            if idx < t {
                let slot = &mut coeffs[(idx - v) as usize];
                *slot = if negate { slot.minus(c) } else { slot.plus(c) };
            }
        }
        PuiseuxSeries::from_coeffs(a.ctx, a.w, v, coeffs, t)
    }

    /// Product; valid to `min(t1 + v2, t2 + v1)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let t = (a.t + b.v).min(b.t + a.v);
        let v = a.v + b.v;
        let n = (t - v).max(0) as usize;
        let mut coeffs = vec![C::zero(&a.ctx); n];
        for (i, x) in a.coeffs.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    coeffs[i + j] = coeffs[i + j].plus(&x.times(y));
                }
            }
        }
        PuiseuxSeries::from_coeffs(a.ctx, a.w, v, coeffs, t)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Non-negative integer power.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc.unwrap_or_else(|| {
            // relative precision of the base bounds the precision of f^0
            let prec = self.t - self.v;
            PuiseuxSeries::from_coeffs(self.ctx.clone(), self.w, 0, vec![C::one(&self.ctx)], prec)
        })
    }

    /// Coefficients of `1 / (1 + x)` style unit inversion: returns `h` with
    /// `h * g = 1` where `g[0] = 1`.
    fn unit_inverse(g: &[C], ctx: &C::Ctx) -> Vec<C> {
        let mut h: Vec<C> = Vec::with_capacity(g.len());
        for k in 0..g.len() {
            if k == 0 {
                h.push(C::one(ctx));
                continue;
            }
            let mut acc = C::zero(ctx);
            for j in 1..=k {
                if !g[j].is_zero() {
                    acc = acc.plus(&g[j].times(&h[k - j]));
                }
            }
            h.push(acc.negate());
        }
        h
    }

    /// Multiplicative inverse, keeping the relative precision.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.leading().ok_or(Error::DivisionByZero)?;
        let cinv = c.inverse().ok_or(Error::DivisionByZero)?;
        let g: Vec<C> = self.coeffs.iter().map(|x| x.times(&cinv)).collect();
        let h: Vec<C> = Self::unit_inverse(&g, &self.ctx).into_iter().map(|x| x.times(&cinv)).collect();
        let n = h.len() as i64;
        Ok(PuiseuxSeries::from_coeffs(self.ctx.clone(), self.w, -self.v, h, -self.v + n))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `n`-th root on the principal branch: for `f = c q^(v/w) (1 + x)` the
    /// result is `r q^(v/(wn)) (1 + x)^(1/n)` where `r^n = c`. The root `r`
    /// is taken from `leading_root` or found in the coefficient field.
    pub fn nth_root(&self, n: u32, leading_root: Option<&C>) -> Result<Self> {
        self.rational_power(&Rational::from_frac(1, n as i64), n, leading_root)
    }

    /// `f^alpha` for rational `alpha` with denominator dividing `n`; the
    /// leading coefficient's root handling follows `nth_root`.
    fn rational_power(&self, alpha: &Rational, n: u32, leading_root: Option<&C>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("root of order 0".into()));
        }
        let c = self.leading().ok_or_else(|| Error::Precondition("root of a series that vanishes to its precision".into()))?;
        let r = match leading_root {
            Some(r) => {
                if r.pow_u(n as u64) != *c {
                    return Err(Error::InvalidInput(format!("supplied root {r} does not satisfy x^{n} = {c}")));
                }
                r.clone()
            }
            None => c
                .nth_root(n)
                .ok_or_else(|| Error::NeedsAdjunction(format!("x^{n} - ({c})")))?,
        };
        let cinv = c.inverse().ok_or(Error::DivisionByZero)?;
        let g: Vec<C> = self.coeffs.iter().map(|x| x.times(&cinv)).collect();
        let h = unit_power(&g, alpha, &self.ctx);
        let numer = alpha.numer().clone();
        let numer = i64::try_from(numer).map_err(|_| Error::Unsupported("exponent too large".into()))?;
        let lead = r.pow_u(numer.unsigned_abs());
        let lead = if numer < 0 { lead.inverse().ok_or(Error::DivisionByZero)? } else { lead };
        let h: Vec<C> = h.into_iter().map(|x| x.times(&lead)).collect();
        // leading exponent v/w * alpha in units of 1/(w n)
        let nw = self.w * n as u64;
        let scaled = alpha * &Rational::from_i64(n as i64);
        let k = scaled.to_i64().ok_or_else(|| Error::InvalidInput("exponent denominator must divide n".into()))?;
        let base = PuiseuxSeries::from_coeffs(self.ctx.clone(), self.w, 0, h, self.t - self.v);
        let mut out = base.rescale(nw);
        out = out.shift(self.v * k);
        Ok(out.reduce_ramification())
    }

    /// Term-wise `d/dq`.
    pub fn derivative(&self) -> Self {
        let w = self.w as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale_rational(&Rational::from_frac(self.v + k as i64, w)))
            .collect();
        PuiseuxSeries::from_coeffs(self.ctx.clone(), self.w, self.v - w, coeffs, self.t - w)
    }

    /// Substitute `q -> q^k`.
    pub fn substitute_power(&self, k: u64) -> Self {
        assert!(k >= 1);
        let s = self.rescale(self.w * k);
        PuiseuxSeries { ctx: s.ctx, w: self.w, v: s.v, coeffs: s.coeffs, t: s.t }
    }

    /// Substitute `q -> q^(1/k)`.
    pub fn substitute_root(&self, k: u64) -> Self {
        assert!(k >= 1);
        PuiseuxSeries { ctx: self.ctx.clone(), w: self.w * k, v: self.v, coeffs: self.coeffs.clone(), t: self.t }
            .reduce_ramification()
    }

    /// Evaluate a polynomial at this series by Horner's rule.
    pub fn compose_polynomial(p: &Polynomial<C>, x: &Self) -> Self {
        let constant = |c: &C, t: i64| PuiseuxSeries::from_coeffs(x.ctx.clone(), x.w, 0, vec![c.clone()], t.max(1));
        let coeffs = p.coeffs();
        let Some((lead, rest)) = coeffs.split_last() else {
            return PuiseuxSeries::zero(x.ctx.clone(), x.w, x.t.max(1));
        };
        if rest.is_empty() {
            return constant(lead, x.t);
        }
        let mut acc = x.scale(lead);
        for (i, c) in rest.iter().enumerate().rev() {
            acc = acc.add(&constant(c, acc.t));
            if i > 0 {
                acc = acc.mul(x);
            }
        }
        acc
    }

    /// `q^(v/w)*(c0 + c1*q^(1/w) + ...) + O(q^(t/w))`.
    pub fn factored(&self) -> String {
        let mut s = String::new();
        if self.is_zero() {
            return format!("O({})", exponent_str(self.t, self.w));
        }
        if self.v != 0 {
            s.push_str(&exponent_str(self.v, self.w));
            s.push('*');
        }
        s.push('(');
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            push_term(&mut s, c, k as i64, self.w, first);
            first = false;
        }
        s.push_str(&format!(") + O({})", exponent_str(self.t, self.w)));
        s
    }
}

/// `g^alpha` for a unit series `g` with `g[0] = 1`.
pub(crate) fn unit_power<C: FieldElement>(g: &[C], alpha: &Rational, ctx: &C::Ctx) -> Vec<C> {
    let mut h: Vec<C> = Vec::with_capacity(g.len());
    let ap1 = alpha + &Rational::one();
    for k in 0..g.len() {
        if k == 0 {
            h.push(C::one(ctx));
            continue;
        }
        // k h_k = sum_{j=1}^k ((alpha + 1) j - k) g_j h_{k-j}
        let mut acc = C::zero(ctx);
        for j in 1..=k {
            if g[j].is_zero() {
                continue;
            }
            let w = &(&ap1 * &Rational::from_i64(j as i64)) - &Rational::from_i64(k as i64);
            if w.is_zero() {
                continue;
            }
            acc = acc.plus(&g[j].times(&h[k - j]).scale_rational(&w));
        }
        h.push(acc.scale_rational(&Rational::from_frac(1, k as i64)));
    }
    h
}

fn exponent_str(index: i64, w: u64) -> String {
    let e = Rational::from_frac(index, w as i64);
    if e.is_one() {
        "q".to_string()
    } else if e.is_integer() && !e.is_negative() {
        format!("q^{e}")
    } else {
        format!("q^({e})")
    }
}

fn push_term<C: FieldElement>(s: &mut String, c: &C, index: i64, w: u64, first: bool) {
    let text = c.to_string();
    let compound = text.contains(['+', ' ']) || text[1..].contains('-');
    let (neg, body) = if !compound && text.starts_with('-') { (true, &text[1..]) } else { (false, text.as_str()) };
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    let body = if compound { format!("({body})") } else { body.to_string() };
    if index == 0 {
        s.push_str(&body);
    } else if body == "1" {
        s.push_str(&exponent_str(index, w));
    } else {
        s.push_str(&format!("{body}*{}", exponent_str(index, w)));
    }
}

impl<C: FieldElement> fmt::Display for PuiseuxSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            push_term(&mut s, c, self.v + k as i64, self.w, first);
            first = false;
        }
        let o = format!("O({})", exponent_str(self.t, self.w));
        if first {
            f.write_str(&o)
        } else {
            write!(f, "{s} + {o}")
        }
    }
}

impl<C: FieldElement + Serialize> Serialize for PuiseuxSeries<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PuiseuxSeries", 4)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("v", &self.v)?;
        st.serialize_field("T", &self.t)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

pub type RationalSeries = PuiseuxSeries<Rational>;

impl RationalSeries {
    /// Integer-exponent series with rational coefficients starting at `q^v`.
    pub fn from_rationals(v: i64, coeffs: Vec<Rational>, t: i64) -> Self {
        PuiseuxSeries::from_coeffs((), 1, v, coeffs, t)
    }

    pub fn from_i64s(v: i64, coeffs: &[i64], t: i64) -> Self {
        Self::from_rationals(v, coeffs.iter().map(|&c| Rational::from_i64(c)).collect(), t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64, c: &[i64], t: i64) -> RationalSeries {
        RationalSeries::from_i64s(v, c, t)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn products_and_sums() {
        assert_eq!(s(0, &[1, 1], 10).mul(&s(0, &[1, -1], 10)), s(0, &[1, 0, -1], 10));
        let f = s(0, &[2, 3, 5], 6);
        assert_eq!(f.add(&RationalSeries::zero((), 1, 6)), f);
        let half = PuiseuxSeries::monomial(Rational::one(), 2, 1, 20);
        assert_eq!(half.mul(&half), PuiseuxSeries::monomial(Rational::one(), 2, 2, 21));
    }

    #[test]
    fn truncation_bookkeeping() {
        // (q + O(q^5)) (q^2 + O(q^4)) = q^3 + O(q^5)
        let p = s(1, &[1], 5).mul(&s(2, &[1], 4));
        assert_eq!(p.v(), 3);
        assert_eq!(p.t(), 5);
    }

    #[test]
    fn inversion() {
        assert_eq!(s(0, &[1, -1], 6).inverse().unwrap(), s(0, &[1, 1, 1, 1, 1, 1], 6));
        assert_eq!(s(1, &[1], 5).inverse().unwrap(), s(-1, &[1], 3));
        assert_eq!(RationalSeries::zero((), 1, 5).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn roots() {
        let r = s(0, &[1, 1], 8).nth_root(2, None).unwrap();
        assert_eq!(r.coeff(1), Some(q(1, 2)));
        assert_eq!(r.coeff(2), Some(q(-1, 8)));
        assert_eq!(r.square(), s(0, &[1, 1], 8));
        assert_eq!(s(2, &[1], 10).nth_root(2, None).unwrap(), s(1, &[1], 9));
        assert_eq!(s(0, &[1], 10).nth_root(7, None).unwrap(), s(0, &[1], 10));
        let sqrt_q = s(1, &[1, 1], 10).nth_root(2, None).unwrap();
        assert_eq!(sqrt_q.w(), 2);
        assert_eq!(sqrt_q.v(), 1);
        assert!(matches!(s(0, &[2, 1], 8).nth_root(2, None), Err(Error::NeedsAdjunction(_))));
        let with_root = s(0, &[4, 4], 8).nth_root(2, Some(&q(-2, 1))).unwrap();
        assert_eq!(with_root.coeff(0), Some(q(-2, 1)));
        assert_eq!(with_root.square(), s(0, &[4, 4], 8));
    }

    #[test]
    fn derivative_and_substitution() {
        assert_eq!(s(3, &[1], 10).derivative(), s(2, &[3], 9));
        assert!(s(0, &[5], 10).derivative().is_zero());
        let half = PuiseuxSeries::monomial(Rational::one(), 2, 1, 20);
        assert_eq!(half.derivative().coeff_at(&q(-1, 2)), Some(q(1, 2)));
        assert_eq!(s(0, &[1, 1], 5).substitute_power(2), s(0, &[1, 0, 1], 10));
        assert_eq!(half.substitute_power(2), s(1, &[1], 20));
        let f = s(0, &[1, 2, 3], 3);
        assert_eq!(f.substitute_power(3).substitute_root(3), f);
    }

    #[test]
    fn display_forms() {
        let r = s(0, &[1, 1], 4).nth_root(2, None).unwrap();
        assert_eq!(r.to_string(), "1 + 1/2*q - 1/8*q^2 + 1/16*q^3 + O(q^4)");
        let h = PuiseuxSeries::from_coeffs((), 2, 1, vec![q(1, 1), q(0, 1), q(-3, 1)], 6);
        assert_eq!(h.to_string(), "q^(1/2) - 3*q^(3/2) + O(q^3)");
        assert_eq!(h.factored(), "q^(1/2)*(1 - 3*q) + O(q^3)");
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v, serde_json::json!({"w": 2, "v": 1, "T": 6, "coeffs": ["1", "0", "-3", "0", "0"]}));
    }
}
