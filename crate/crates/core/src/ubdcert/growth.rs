use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, Rational, Valuation};
use crate::qseries::{PuiseuxSeries, RationalSeries};

/// Outcome of checking `ord_p c(2n) = -n r` for `(x - alpha)^(-1)`, where
/// `c(k)` is the coefficient `k` steps above the leading term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthLawReport {
    pub p: u64,
    pub r: i64,
    /// `(n, ord_p c(2n))` for every `2n` within the truncation.
    pub valuations: Vec<(usize, Option<i64>)>,
    /// First `n` where the law fails.
    #[serde(rename = "firstDeviation")]
    pub first_deviation: Option<usize>,
    /// The inverse series that was examined.
    #[serde(skip)]
    pub inverse: RationalSeries,
}

impl GrowthLawReport {
    pub fn holds(&self) -> bool {
        self.first_deviation.is_none()
    }
}

/// Expand `(x - alpha)^(-1)` for `x = q^(-2/w) + ...` with `p`-integral
/// coefficients and `ord_p alpha = -r`, and check the valuation law on the
/// even-offset coefficients.
pub fn verify_inverse_growth_law(x: &RationalSeries, alpha: &Rational, p: u64, r: i64) -> Result<GrowthLawReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r < 1 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    if x.v() != -2 || !x.leading().is_some_and(Rational::is_one) {
        return Err(Error::Precondition("x must start with q^(-2/w) with coefficient 1".into()));
    }
    if let Some(k) = x.coeffs().iter().position(|c| !c.is_p_integral(p)) {
        return Err(Error::Precondition(format!("coefficient {k} of x is not {p}-integral")));
    }
    if alpha.valuation(p) != Valuation::Finite(-r) {
        return Err(Error::Precondition(format!("ord_{p}(alpha) is {}, not -{r}", alpha.valuation(p))));
    }
    let shifted = x.sub(&PuiseuxSeries::monomial(alpha.clone(), x.w(), 0, x.t().max(1)));
    let inverse = shifted.inverse()?;
    let base = inverse.v();
    let mut valuations = Vec::new();
    let mut first_deviation = None;
    let mut n = 0usize;
    while let Some(c) = inverse.coeff(base + 2 * n as i64) {
        let ord = c.valuation(p).finite();
        if first_deviation.is_none() && ord != Some(-(n as i64) * r) {
            first_deviation = Some(n);
        }
        valuations.push((n, ord));
        n += 1;
    }
    Ok(GrowthLawReport { p, r, valuations, first_deviation, inverse })
}
