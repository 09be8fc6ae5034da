use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{AlgebraicNumber, FieldElement, Polynomial, Rational};
use crate::qseries::{PuiseuxSeries, RationalSeries};

/// `g(x, q) = sum c x^i q^e` with rational `e`, exact or known below
/// q-exponent `precision`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePoly {
    terms: BTreeMap<(usize, Rational), Rational>,
    precision: Option<Rational>,
}

impl BivariatePoly {
    /// Exact polynomial from `(x-degree, q-exponent, coefficient)` terms.
    pub fn new(terms: impl IntoIterator<Item = (usize, Rational, Rational)>) -> Self {
        let mut map: BTreeMap<(usize, Rational), Rational> = BTreeMap::new();
        for (i, e, c) in terms {
            let slot = map.entry((i, e)).or_insert_with(Rational::zero);
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !c.is_zero());
        BivariatePoly { terms: map, precision: None }
    }

    /// Polynomial in `x` whose coefficients are the given series.
    pub fn from_x_view(coeffs: &[RationalSeries]) -> Self {
        let mut terms = Vec::new();
        let mut precision: Option<Rational> = None;
        for (i, s) in coeffs.iter().enumerate() {
            for (e, c) in s.terms() {
                terms.push((i, e, c.clone()));
            }
            let t = s.truncation();
            precision = Some(match precision {
                Some(p) if p <= t => p,
                _ => t,
            });
        }
        let g = BivariatePoly::new(terms);
        match precision {
            Some(p) => g.with_precision(p),
            None => g,
        }
    }

    /// Mark every coefficient as known only below `q^p`.
    pub fn with_precision(mut self, p: Rational) -> Self {
        self.terms.retain(|(_, e), _| *e < p);
        self.precision = Some(match self.precision {
            Some(old) if old <= p => old,
            _ => p,
        });
        self
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn precision(&self) -> Option<&Rational> {
        self.precision.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational, &Rational)> + '_ {
        self.terms.iter().map(|((i, e), c)| (*i, e, c))
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    /// Least common denominator of the q-exponents.
    pub fn ramification(&self) -> u64 {
        self.terms.keys().fold(1u64, |acc, (_, e)| {
            let d: u64 = e.denom().try_into().expect("exponent denominator fits u64");
            acc.lcm(&d)
        })
    }

    /// q-adic order of the coefficient of `x^i`.
    pub fn order(&self, i: usize) -> Option<Rational> {
        self.terms.keys().filter(|(k, _)| *k == i).map(|(_, e)| e.clone()).min()
    }

    /// `h_e(x)`, the coefficient of `q^e`.
    pub fn q_view(&self, e: &Rational) -> Polynomial<Rational> {
        let n = self.degree_x().map_or(0, |d| d + 1);
        let mut c = vec![Rational::zero(); n];
        for ((i, ee), v) in &self.terms {
            if ee == e {
                c[*i] = v.clone();
            }
        }
        Polynomial::from_rationals(c)
    }

    /// `g_i(q)` known below `min(bound, precision)`.
    pub fn x_view(&self, i: usize, bound: &Rational) -> RationalSeries {
        let t = match &self.precision {
            Some(p) if p < bound => p.clone(),
            _ => bound.clone(),
        };
        let td: u64 = t.denom().try_into().expect("exponent denominator fits u64");
        let w = self.ramification().lcm(&td);
        let scale = Rational::from_i64(w as i64);
        let t_idx = (&t * &scale).ceil();
        let t_idx = i64::try_from(t_idx).expect("truncation fits i64");
        let terms: Vec<(i64, Rational)> = self
            .terms
            .iter()
            .filter(|((k, e), _)| *k == i && *e < t)
            .map(|((_, e), c)| ((e * &scale).to_i64().expect("integral index"), c.clone()))
            .collect();
        RationalSeries::from_terms((), w, &terms, t_idx)
    }

    /// Multiply by `q^s`.
    pub fn shift_q(&self, s: &Rational) -> Self {
        BivariatePoly {
            terms: self.terms.iter().map(|((i, e), c)| ((*i, e + s), c.clone())).collect(),
            precision: self.precision.as_ref().map(|p| p + s),
        }
    }

    /// `g(q^s x, q)`.
    pub fn scale_x(&self, s: &Rational) -> Self {
        let n = self.degree_x().unwrap_or(0);
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|((i, e), c)| ((*i, e + &(s * &Rational::from_i64(*i as i64))), c.clone()))
                .collect(),
            // unknown terms of every x-degree move by at least min(0, n s)
            precision: self.precision.as_ref().map(|p| {
                let ns = s * &Rational::from_i64(n as i64);
                if ns.is_negative() {
                    p + &ns
                } else {
                    p.clone()
                }
            }),
        }
    }

    /// `sum_i g_i(q) y^i` with each `g_i` kept to the relative precision of `y`.
    pub fn substitute(&self, y: &PuiseuxSeries<AlgebraicNumber>) -> Result<PuiseuxSeries<AlgebraicNumber>> {
        let field = y.ctx().clone();
        let Some(n) = self.degree_x() else {
            return Ok(PuiseuxSeries::zero(field, 1, UNBOUNDED));
        };
        if y.is_zero() {
            return Err(Error::Precondition("substituted series vanishes to its precision".into()));
        }
        let rel = Rational::from_frac(y.precision() as i64, y.w() as i64);
        let mut power: Option<PuiseuxSeries<AlgebraicNumber>> = None;
        let mut acc: Option<PuiseuxSeries<AlgebraicNumber>> = None;
        for i in 0..=n {
            if i > 0 {
                power = Some(match power {
                    None => y.clone(),
                    Some(p) => p.mul(y),
                });
            }
            let Some(v) = self.order(i) else { continue };
            let gi = self.x_view(i, &(&v + &rel));
            let gi = gi.map(field.clone(), |c| AlgebraicNumber::from_rational(&field, c));
            let term = match &power {
                None => gi,
                Some(p) => gi.mul(p),
            };
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        Ok(acc.unwrap_or_else(|| PuiseuxSeries::zero(field, 1, UNBOUNDED)))
    }
}

/// Truncation standing in for an exact zero or one.
const UNBOUNDED: i64 = 1 << 32;

fn format_exponent(e: &Rational) -> String {
    if e.is_integer() && !e.is_negative() {
        format!("q^{e}")
    } else {
        format!("q^({e})")
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        let mut first = true;
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by(|((i1, e1), _), ((i2, e2), _)| i2.cmp(i1).then(e1.cmp(e2)));
        for ((i, e), c) in order {
            let mut parts = Vec::new();
            if *i == 1 {
                parts.push("x".to_string());
            } else if *i > 1 {
                parts.push(format!("x^{i}"));
            }
            if *e == Rational::one() {
                parts.push("q".to_string());
            } else if !e.is_zero() {
                parts.push(format_exponent(e));
            }
            let neg = c.is_negative();
            let a = c.abs();
            if !a.is_one() || parts.is_empty() {
                let s = a.to_string();
                parts.insert(0, s);
            }
            let body = parts.join("*");
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if let Some(p) = &self.precision {
            write!(f, " + O({})", format_exponent(p))?;
        }
        Ok(())
    }
}

impl Serialize for BivariatePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(usize, &Rational, &Rational)> = self.terms().collect();
        let mut st = serializer.serialize_struct("BivariatePoly", 2)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("precision", &self.precision)?;
        st.end()
    }
}
