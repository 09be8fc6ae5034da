use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::eta::EtaQuotient;
use crate::error::{Error, Result};
use crate::exactnum::{FieldElement, Rational};
use crate::qseries::PuiseuxSeries;

/// `q^r prod_{n>=1} (1 - q^n)^(c(n))`, with `c(n)` known for `1 <= n <= t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductForm<C: FieldElement> {
    pub r: Rational,
    /// `c[n - 1]` is the exponent of `(1 - q^n)`.
    pub c: Vec<C>,
    pub ctx: C::Ctx,
}

impl<C: FieldElement> ProductForm<C> {
    /// Highest `n` with known exponent.
    pub fn t(&self) -> usize {
        self.c.len()
    }

    /// Exponent of `(1 - q^n)`, `n >= 1`.
    pub fn exponent(&self, n: usize) -> Option<&C> {
        if n == 0 {
            None
        } else {
            self.c.get(n - 1)
        }
    }
}

impl ProductForm<Rational> {
    pub fn rational(r: Rational, c: Vec<Rational>) -> Self {
        ProductForm { r, c, ctx: () }
    }
}

impl<C: FieldElement + Serialize> Serialize for ProductForm<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ProductForm", 3)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("T", &self.t())?;
        st.end()
    }
}

/// Product-form exponents of `f = q^r (1 + ...)` from the logarithmic
/// derivative: `q f'/f = r - sum_N (sum_{n | N} n c(n)) q^N`.
///
/// The unit part of `f` must lie in integral powers of `q` and have leading
/// coefficient 1.
pub fn series_to_product_form<C: FieldElement>(f: &PuiseuxSeries<C>) -> Result<ProductForm<C>> {
    let lead = f.leading().ok_or_else(|| Error::Precondition("series vanishes to its precision".into()))?;
    if !lead.is_one() {
        return Err(Error::Precondition(format!(
            "leading coefficient is {lead}; divide by it before extracting the product form"
        )));
    }
    let r = f.valuation().expect("nonzero series");
    let w = f.w() as usize;
    let rel = f.precision();
    // integral-exponent coefficients g_0 .. g_{n-1} of the unit part
    let n = rel.div_ceil(w);
    let mut g = Vec::with_capacity(n);
    for (k, c) in f.coeffs().iter().enumerate() {
        if k % w == 0 {
            g.push(c.clone());
        } else if !c.is_zero() {
            return Err(Error::Unsupported(format!(
                "unit part has a fractional exponent {}/{w}; substitute q -> q^{w} first",
                k
            )));
        }
    }
    let ctx = f.ctx().clone();
    // L = q g'/g, from g L = q g'
    let mut l: Vec<C> = vec![C::zero(&ctx); n];
    for k in 1..n {
        let mut acc = g[k].scale_rational(&Rational::from_i64(k as i64));
        for j in 1..k {
            if !g[j].is_zero() {
                acc = acc.minus(&g[j].times(&l[k - j]));
            }
        }
        l[k] = acc;
    }
    let mut c: Vec<C> = Vec::with_capacity(n.saturating_sub(1));
    for big_n in 1..n {
        let mut acc = l[big_n].negate();
        for d in 1..big_n {
            if big_n % d == 0 {
                acc = acc.minus(&c[d - 1].scale_rational(&Rational::from_i64(d as i64)));
            }
        }
        c.push(acc.scale_rational(&Rational::from_frac(1, big_n as i64)));
    }
    Ok(ProductForm { r, c, ctx })
}

/// Expand `q^r prod (1 - q^n)^(c(n))` through `q^(r + t)` exclusive, where
/// `t = P.t() + 1` terms of the unit part are determined.
pub fn product_form_to_series<C: FieldElement>(p: &ProductForm<C>) -> Result<PuiseuxSeries<C>> {
    let terms = p.t() + 1;
    let ctx = &p.ctx;
    let mut acc = vec![C::zero(ctx); terms];
    acc[0] = C::one(ctx);
    for (idx, e) in p.c.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let n = idx + 1;
        // (1 - q^n)^e = sum_j binom(e, j) (-1)^j q^(nj)
        let mut factor = vec![C::one(ctx)];
        let mut b = C::one(ctx);
        let mut j = 1;
        while n * j < terms {
            let num = e.minus(&C::from_i64(ctx, j as i64 - 1));
            b = b.times(&num).scale_rational(&Rational::from_frac(-1, j as i64));
            factor.push(b.clone());
            j += 1;
        }
        for i in (0..terms).rev() {
            let mut sum = C::zero(ctx);
            for (j, fj) in factor.iter().enumerate() {
                if n * j > i {
                    break;
                }
                if !fj.is_zero() && !acc[i - n * j].is_zero() {
                    sum = sum.plus(&fj.times(&acc[i - n * j]));
                }
            }
            acc[i] = sum;
        }
    }
    let w = u64::try_from(p.r.denom()).map_err(|_| Error::Unsupported("exponent denominator too large".into()))?;
    let v = i64::try_from(p.r.numer()).map_err(|_| Error::Unsupported("leading exponent too large".into()))?;
    let unit = PuiseuxSeries::from_coeffs(ctx.clone(), 1, 0, acc, terms as i64);
    Ok(unit.rescale(w).shift(v))
}

/// Outcome of trying to read a product form as an eta quotient.
#[derive(Clone, Debug, PartialEq)]
pub enum Recognition {
    /// Matches the quotient through `q^t` in the product.
    Eta { quotient: EtaQuotient, t: usize },
    NotEta { index: usize, reason: String },
}

/// Solve `e_a = c(a) - sum_{d | a, d < a} e_d` for successive `a` and
/// check the leading exponent.
pub fn eta_recognize(p: &ProductForm<Rational>) -> Recognition {
    let t = p.t();
    let mut e: Vec<Rational> = Vec::with_capacity(t);
    for a in 1..=t {
        let mut val = p.c[a - 1].clone();
        for d in 1..a {
            if a % d == 0 {
                val = &val - &e[d - 1];
            }
        }
        if !val.is_integer() {
            return Recognition::NotEta { index: a, reason: format!("exponent {val} of eta({a}) is not an integer") };
        }
        e.push(val);
    }
    let mut terms = Vec::new();
    let mut weighted = BigInt::from(0);
    for (i, x) in e.iter().enumerate() {
        if !x.is_zero() {
            let ex = x.to_i64().expect("exponent fits");
            terms.push((i as u64 + 1, ex));
            weighted += BigInt::from(i as u64 + 1) * ex;
        }
    }
    let expected = Rational::new(weighted, BigInt::from(24)).expect("nonzero");
    if expected != p.r {
        return Recognition::NotEta {
            index: 0,
            reason: format!("leading exponent {} differs from sum a*e/24 = {expected}", p.r),
        };
    }
    Recognition::Eta { quotient: EtaQuotient::new(terms).expect("sorted nonzero terms"), t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaforms::eta_expand;
    use crate::qseries::RationalSeries;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn delta_product_form() {
        let d = eta_expand(&EtaQuotient::new(vec![(1, 24)]).unwrap(), 30).unwrap();
        let p = series_to_product_form(&d).unwrap();
        assert_eq!(p.r, q(1));
        assert_eq!(p.t(), 29);
        assert!(p.c.iter().all(|c| *c == q(24)));
        assert_eq!(product_form_to_series(&p).unwrap(), d);
    }

    #[test]
    fn constant_series() {
        let p = series_to_product_form(&RationalSeries::one((), 10)).unwrap();
        assert!(p.r.is_zero());
        assert!(p.c.iter().all(Rational::is_zero));
    }

    #[test]
    fn eta1_eta2() {
        let e = EtaQuotient::new(vec![(1, 1), (2, 1)]).unwrap();
        let s = eta_expand(&e, 20).unwrap();
        let p = series_to_product_form(&s).unwrap();
        assert_eq!(p.r, Rational::from_frac(1, 8));
        for n in 1..=p.t() {
            assert_eq!(p.c[n - 1], q(if n % 2 == 0 { 2 } else { 1 }));
        }
        assert_eq!(eta_recognize(&p), Recognition::Eta { quotient: e, t: 19 });
    }

    #[test]
    fn recognition_failures() {
        let p = ProductForm::rational(q(0), vec![Rational::from_frac(2, 3), q(0)]);
        assert!(matches!(eta_recognize(&p), Recognition::NotEta { index: 1, .. }));
        let p = ProductForm::rational(q(5), vec![q(24)]);
        assert!(matches!(eta_recognize(&p), Recognition::NotEta { index: 0, .. }));
    }

    #[test]
    fn leading_coefficient_must_be_one() {
        let s = RationalSeries::from_i64s(0, &[2, 1], 5);
        assert!(matches!(series_to_product_form(&s), Err(Error::Precondition(_))));
    }
}
