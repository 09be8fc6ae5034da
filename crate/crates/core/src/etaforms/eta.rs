use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::qseries::RationalSeries;

/// `prod_j eta(a_j z)^(e_j)` with strictly increasing `a_j` and nonzero `e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EtaJson", into = "EtaJson")]
pub struct EtaQuotient {
    terms: Vec<(u64, i64)>,
}

#[derive(Serialize, Deserialize)]
struct EtaJson {
    terms: Vec<(u64, i64)>,
}

impl TryFrom<EtaJson> for EtaQuotient {
    type Error = Error;
    fn try_from(j: EtaJson) -> Result<Self> {
        EtaQuotient::new(j.terms)
    }
}

impl From<EtaQuotient> for EtaJson {
    fn from(e: EtaQuotient) -> Self {
        EtaJson { terms: e.terms }
    }
}

impl EtaQuotient {
    /// Validated constructor: arguments strictly increasing and positive,
    /// exponents nonzero.
    pub fn new(terms: Vec<(u64, i64)>) -> Result<Self> {
        for (i, &(a, e)) in terms.iter().enumerate() {
            if a == 0 {
                return Err(Error::InvalidInput("eta argument must be positive".into()));
            }
            if e == 0 {
                return Err(Error::InvalidInput(format!("zero exponent on eta({a})")));
            }
            if i > 0 && terms[i - 1].0 >= a {
                return Err(Error::InvalidInput("eta arguments must be strictly increasing".into()));
            }
        }
        Ok(EtaQuotient { terms })
    }

    /// Sort by argument, merge repeated arguments and drop zero exponents.
    pub fn from_factors(factors: &[(u64, i64)]) -> Result<Self> {
        let mut sorted = factors.to_vec();
        sorted.sort_by_key(|&(a, _)| a);
        let mut terms: Vec<(u64, i64)> = Vec::new();
        for (a, e) in sorted {
            if a == 0 {
                return Err(Error::InvalidInput("eta argument must be positive".into()));
            }
            match terms.last_mut() {
                Some(last) if last.0 == a => last.1 += e,
                _ => terms.push((a, e)),
            }
        }
        terms.retain(|&(_, e)| e != 0);
        EtaQuotient::new(terms)
    }

    pub fn unit() -> Self {
        EtaQuotient { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    pub fn is_unit(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of eta factors.
    pub fn factor_count(&self) -> usize {
        self.terms.len()
    }

    /// `(sum e_j) / 2`.
    pub fn weight(&self) -> Rational {
        Rational::from_frac(self.terms.iter().map(|t| t.1).sum(), 2)
    }

    /// Order at infinity, `(sum a_j e_j) / 24`.
    pub fn leading_exponent(&self) -> Rational {
        let s: BigInt = self.terms.iter().map(|&(a, e)| BigInt::from(a) * e).sum();
        Rational::new(s, BigInt::from(24)).expect("nonzero denominator")
    }

    /// `gcd(|e_j|)`, zero for the unit quotient.
    pub fn exponent_gcd(&self) -> u64 {
        self.terms.iter().fold(0u64, |g, &(_, e)| g.gcd(&e.unsigned_abs()))
    }

    /// `E^(1/k)` when `k` divides every exponent.
    pub fn root(&self, k: u64) -> Option<Self> {
        if k == 0 || self.terms.iter().any(|&(_, e)| e.unsigned_abs() % k != 0) {
            return None;
        }
        let terms = self.terms.iter().map(|&(a, e)| (a, e / k as i64)).collect();
        Some(EtaQuotient { terms })
    }

    /// Exponent of `(1 - q^m)` in the product: `sum_{a_j | m} e_j`.
    pub fn product_exponent(&self, m: u64) -> i64 {
        self.terms.iter().filter(|&&(a, _)| m.is_multiple_of(a)).map(|t| t.1).sum()
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(a, e)| if e == 1 { format!("eta({a})") } else { format!("eta({a})^{e}") })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

/// Expansion of `E` with `t` coefficients counted from the leading term
/// `q^r`, `r = sum a_j e_j / 24`; the ramification is the denominator of `r`.
pub fn eta_expand(e: &EtaQuotient, t: usize) -> Result<RationalSeries> {
    if t == 0 {
        return Err(Error::InvalidInput("truncation must be at least 1".into()));
    }
    let mut c = vec![BigInt::zero(); t];
    c[0] = BigInt::from(1);
    for &(a, ex) in e.terms() {
        let a = a as usize;
        let mut k = a;
        while k < t {
            for _ in 0..ex.unsigned_abs() {
                if ex > 0 {
                    for i in (k..t).rev() {
                        let sub = c[i - k].clone();
                        c[i] -= sub;
                    }
                } else {
                    for i in k..t {
                        let add = c[i - k].clone();
                        c[i] += add;
                    }
                }
            }
            k += a;
        }
    }
    let r = e.leading_exponent();
    let w = r.denom().clone();
    let w_u = u64::try_from(&w).expect("denominator divides 24");
    let v = i64::try_from(r.numer()).map_err(|_| Error::Unsupported("leading exponent too large".into()))?;
    let series = RationalSeries::from_rationals(0, c.into_iter().map(Rational::from_bigint).collect(), t as i64);
    let rescaled = series.rescale(w_u);
    Ok(rescaled.shift(v))
}
