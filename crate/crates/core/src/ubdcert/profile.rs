use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, Rational};
use crate::qseries::RationalSeries;

/// `-ord_p` of every nonzero coefficient, indexed from the leading term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenominatorProfile {
    pub p: u64,
    /// `(m, -ord_p b(m))` for each nonzero coefficient `b(m)`.
    pub samples: Vec<(usize, i64)>,
    /// Cumulative maximum of `-ord_p` over the samples so far.
    #[serde(rename = "runningMax")]
    pub running_max: Vec<i64>,
    #[serde(rename = "T")]
    pub t: usize,
}

impl DenominatorProfile {
    pub fn max(&self) -> Option<i64> {
        self.running_max.last().copied()
    }

    /// Number of samples at which the running maximum strictly increases.
    pub fn strict_increases(&self) -> usize {
        self.running_max.windows(2).filter(|w| w[1] > w[0]).count()
    }

    /// Running maximum over all samples with index at most `m`.
    pub fn max_through(&self, m: usize) -> Option<i64> {
        let k = self.samples.partition_point(|s| s.0 <= m);
        if k == 0 {
            None
        } else {
            Some(self.running_max[k - 1])
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn denominator_profile(f: &RationalSeries, p: u64) -> Result<DenominatorProfile> {
    check_prime(p)?;
    let mut samples = Vec::new();
    let mut running_max = Vec::new();
    let mut best = i64::MIN;
    for (m, c) in f.coeffs().iter().enumerate() {
        if let Some(v) = c.valuation(p).finite() {
            best = best.max(-v);
            samples.push((m, -v));
            running_max.push(best);
        }
    }
    Ok(DenominatorProfile { p, samples, running_max, t: f.precision() })
}

/// First coefficient (relative index) that is not p-integral, if any.
pub fn first_nonintegral(f: &RationalSeries, p: u64) -> Result<Option<usize>> {
    check_prime(p)?;
    Ok(f.coeffs().iter().position(|c| !c.is_p_integral(p)))
}

/// Least common denominator of the known coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedDenominatorReport {
    #[serde(rename = "A", serialize_with = "crate::ubdcert::profile::ser_biguint")]
    pub a: BigUint,
    #[serde(rename = "T")]
    pub t: usize,
}

pub(crate) fn ser_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl BoundedDenominatorReport {
    /// Exponent of the prime `p` in `A`.
    pub fn prime_exponent(&self, p: u64) -> u64 {
        let mut a = self.a.clone();
        let p = BigUint::from(p);
        let mut k = 0;
        while (&a % &p) == BigUint::default() {
            a /= &p;
            k += 1;
        }
        k
    }

    /// `A` with all factors of `p` removed.
    pub fn prime_to_part(&self, p: u64) -> BigUint {
        &self.a / BigUint::from(p).pow(self.prime_exponent(p) as u32)
    }
}

/// `A = lcm` of coefficient denominators through the truncation; `A * f`
/// is integral to that order. Boundedness beyond it is not certified.
pub fn clear_denominators(f: &RationalSeries) -> BoundedDenominatorReport {
    let mut a = BigInt::one();
    for c in f.coeffs() {
        a = a.lcm(c.denom());
    }
    BoundedDenominatorReport { a: a.magnitude().clone(), t: f.precision() }
}

/// Exact `-ord_p` of a rational, `None` for zero.
pub fn neg_ord(x: &Rational, p: u64) -> Option<i64> {
    x.valuation(p).finite().map(|v| -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_two() {
        let c: Vec<Rational> = (0..10).map(|m| Rational::from_frac(1, 1 << m)).collect();
        let f = RationalSeries::from_rationals(0, c, 10);
        let prof = denominator_profile(&f, 2).unwrap();
        for (m, neg) in &prof.samples {
            assert_eq!(*neg, *m as i64);
        }
        assert_eq!(first_nonintegral(&f, 2).unwrap(), Some(1));
        assert_eq!(clear_denominators(&f.truncate(3)).a, BigUint::from(4u32));
    }

    #[test]
    fn integral_series() {
        let f = RationalSeries::from_i64s(0, &[1, -24, 252], 3);
        let prof = denominator_profile(&f, 3).unwrap();
        assert!(prof.running_max.iter().all(|&x| x <= 0));
        assert_eq!(clear_denominators(&f).a, BigUint::one());
        assert!(denominator_profile(&f, 9).is_err());
    }
}
