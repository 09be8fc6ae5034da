use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::profile::{denominator_profile, DenominatorProfile};
use crate::error::{Error, Result};
use crate::etaforms::{eta_expand, series_to_product_form, EtaQuotient};
use crate::exactnum::{is_prime, Rational, Valuation};
use crate::qseries::RationalSeries;

/// Evidence that a series has unbounded denominators at `p`.
#[derive(Clone, Debug, PartialEq)]
pub enum UbdCertificate {
    /// The `p^e`-th root has product-form exponent `value` at `position`
    /// with negative `p`-adic order. This is a proof, not an observation.
    ProductFormNonIntegral { p: u64, e: u32, position: u64, value: Rational },
    /// A coefficient profile whose running maximum reached `threshold`.
    /// Empirical only: a truncated series cannot prove unboundedness.
    GrowthWitness { profile: DenominatorProfile, threshold: i64 },
}

impl UbdCertificate {
    pub fn is_proof(&self) -> bool {
        matches!(self, UbdCertificate::ProductFormNonIntegral { .. })
    }
}

impl Serialize for UbdCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            UbdCertificate::ProductFormNonIntegral { p, e, position, value } => {
                let mut st = serializer.serialize_struct("UbdCertificate", 6)?;
                st.serialize_field("v", &1)?;
                st.serialize_field("kind", "product-form-nonintegral")?;
                st.serialize_field("p", p)?;
                st.serialize_field("e", e)?;
                st.serialize_field("position", position)?;
                st.serialize_field("value", value)?;
                st.end()
            }
            UbdCertificate::GrowthWitness { profile, threshold } => {
                let mut st = serializer.serialize_struct("UbdCertificate", 4)?;
                st.serialize_field("v", &1)?;
                st.serialize_field("kind", "growth-witness")?;
                st.serialize_field("threshold", threshold)?;
                st.serialize_field("profile", profile)?;
                st.end()
            }
        }
    }
}

/// Result of examining the `p^e`-th root of an eta quotient.
#[derive(Clone, Debug, PartialEq)]
pub enum EtaRootOutcome {
    Certified(UbdCertificate),
    /// `p^e` divides every exponent, so the root is again an eta quotient.
    EtaRootIsEtaQuotient(EtaQuotient),
}

fn prime_power(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or_else(|| Error::Unsupported(format!("{p}^{e} is too large")))
}

/// Certificate that the `p^e`-th root of `E` has unbounded denominators,
/// or the quotient `E^(1/p^e)` when no such certificate exists.
///
/// With `p^k` the largest power of `p` dividing all exponents and `k < e`,
/// the first factor whose reduced exponent `e_j / p^k` is prime to `p` sits
/// at argument `a`; every `a_i | a` comes no later in the list, so the
/// product-form exponent `c(a) / p^e = (sum_{a_i | a} e_i) / p^e` has
/// `p`-adic order `k - e < 0`.
pub fn certify_eta_root_ubd(quotient: &EtaQuotient, p: u64, e: u32) -> Result<EtaRootOutcome> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidInput("e must be positive".into()));
    }
    let pe = prime_power(p, e)?;
    if let Some(root) = quotient.root(pe) {
        return Ok(EtaRootOutcome::EtaRootIsEtaQuotient(root));
    }
    let g = quotient.exponent_gcd();
    let mut pk = 1u64;
    while g.is_multiple_of(pk * p) {
        pk *= p;
    }
    let reduced = quotient.root(pk).expect("p^k divides the gcd");
    let (position, _) = *reduced
        .terms()
        .iter()
        .find(|&&(_, ex)| ex.unsigned_abs() % p != 0)
        .expect("gcd of reduced exponents is prime to p");
    let value = Rational::from_frac(quotient.product_exponent(position), pe as i64);
    debug_assert!(matches!(value.valuation(p), Valuation::Finite(v) if v < 0));
    Ok(EtaRootOutcome::Certified(UbdCertificate::ProductFormNonIntegral { p, e, position, value }))
}

/// Recompute the product form of the `p^e`-th root of the expansion of `E`
/// and confirm the certified exponent and its negative order.
pub fn reconfirm_certificate(quotient: &EtaQuotient, cert: &UbdCertificate) -> Result<bool> {
    let UbdCertificate::ProductFormNonIntegral { p, e, position, value } = cert else {
        return Err(Error::InvalidInput("only product-form certificates can be reconfirmed".into()));
    };
    let pe = prime_power(*p, *e)?;
    let n = u32::try_from(pe).map_err(|_| Error::Unsupported("root order too large".into()))?;
    let expansion = eta_expand(quotient, *position as usize + 1)?;
    let root = expansion.nth_root(n, None)?;
    let form = series_to_product_form(&root)?;
    let Some(c) = form.exponent(*position as usize) else {
        return Ok(false);
    };
    let negative = matches!(c.valuation(*p), Valuation::Finite(v) if v < 0);
    Ok(c == value && negative)
}

/// Scan for the first non-`p`-integral coefficient; once one exists the
/// denominators grow without bound, and the profile up to truncation is
/// returned as a witness with its maximum as threshold.
pub fn growth_witness(f: &RationalSeries, p: u64) -> Result<Option<UbdCertificate>> {
    let profile = denominator_profile(f, p)?;
    match profile.max() {
        Some(m) if m > 0 => Ok(Some(UbdCertificate::GrowthWitness { threshold: m, profile })),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta(t: &[(u64, i64)]) -> EtaQuotient {
        EtaQuotient::new(t.to_vec()).unwrap()
    }

    #[test]
    fn eta_squared_eta2_cube_root() {
        let e = eta(&[(1, 2), (2, 1)]);
        let out = certify_eta_root_ubd(&e, 3, 1).unwrap();
        let EtaRootOutcome::Certified(cert) = out else { panic!("expected certificate") };
        assert_eq!(
            cert,
            UbdCertificate::ProductFormNonIntegral { p: 3, e: 1, position: 1, value: Rational::from_frac(2, 3) }
        );
        assert!(reconfirm_certificate(&e, &cert).unwrap());
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"v": 1, "kind": "product-form-nonintegral", "p": 3, "e": 1, "position": 1, "value": "2/3"})
        );
    }

    #[test]
    fn root_that_is_eta_quotient() {
        let out = certify_eta_root_ubd(&eta(&[(1, 24)]), 2, 1).unwrap();
        assert_eq!(out, EtaRootOutcome::EtaRootIsEtaQuotient(eta(&[(1, 12)])));
    }

    #[test]
    fn reduction_by_common_power() {
        // gcd 2: the fourth root reduces to the square root of eta(1) eta(2)^3
        let e = eta(&[(1, 2), (2, 6)]);
        let EtaRootOutcome::Certified(cert) = certify_eta_root_ubd(&e, 2, 2).unwrap() else { panic!() };
        assert_eq!(
            cert,
            UbdCertificate::ProductFormNonIntegral { p: 2, e: 2, position: 1, value: Rational::from_frac(1, 2) }
        );
        assert!(reconfirm_certificate(&e, &cert).unwrap());
    }

    #[test]
    fn eta1_eta2_square_root() {
        let e = eta(&[(1, 1), (2, 1)]);
        let EtaRootOutcome::Certified(cert) = certify_eta_root_ubd(&e, 2, 1).unwrap() else { panic!() };
        assert_eq!(
            cert,
            UbdCertificate::ProductFormNonIntegral { p: 2, e: 1, position: 1, value: Rational::from_frac(1, 2) }
        );
    }
}
