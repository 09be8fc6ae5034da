use qeta_core::etaforms::EtaQuotient;
use qeta_core::exactnum::{Rational, Valuation};
use qeta_core::qseries::RationalSeries;
use qeta_core::ubdcert::*;

/// All quotients with at most three factors, arguments in 1..=4 and
/// nonzero exponents in -6..=6.
fn small_quotients() -> Vec<EtaQuotient> {
    let exps: Vec<i64> = (-6..=6).filter(|&e| e != 0).collect();
    let mut out = Vec::new();
    for mask in 1u32..16 {
        let args: Vec<u64> = (1..=4).filter(|a| mask & (1 << (a - 1)) != 0).collect();
        if args.len() > 3 {
            continue;
        }
        let mut idx = vec![0usize; args.len()];
        loop {
            let terms = args.iter().zip(&idx).map(|(&a, &i)| (a, exps[i])).collect();
            out.push(EtaQuotient::new(terms).unwrap());
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < exps.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

#[test]
fn dichotomy_and_soundness() {
    let quotients = small_quotients();
    assert_eq!(quotients.len(), 4 * 12 + 6 * 144 + 4 * 1728);
    for e in &quotients {
        for (p, k) in [(2u64, 1u32), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)] {
            let pe = p.pow(k);
            match certify_eta_root_ubd(e, p, k).unwrap() {
                EtaRootOutcome::EtaRootIsEtaQuotient(root) => {
                    assert_eq!(e.exponent_gcd() % pe, 0, "{e} at {p}^{k}");
                    let back: Vec<(u64, i64)> = root.terms().iter().map(|&(a, x)| (a, x * pe as i64)).collect();
                    assert_eq!(back, e.terms());
                }
                EtaRootOutcome::Certified(cert) => {
                    assert_ne!(e.exponent_gcd() % pe, 0, "{e} at {p}^{k}");
                    assert!(cert.is_proof());
                    assert!(reconfirm_certificate(e, &cert).unwrap(), "{e} at {p}^{k}");
                }
            }
        }
    }
}

#[test]
fn growth_witness_for_square_root() {
    let f = RationalSeries::from_i64s(0, &[1, 1], 101).nth_root(2, None).unwrap();
    let Some(UbdCertificate::GrowthWitness { profile, threshold }) = growth_witness(&f, 2).unwrap() else {
        panic!("expected a witness");
    };
    assert!(!UbdCertificate::GrowthWitness { profile: profile.clone(), threshold }.is_proof());
    assert!(profile.running_max.windows(2).all(|w| w[0] <= w[1]));
    assert!(profile.strict_increases() >= profile.t / 20);
    assert!(profile.max_through(64).unwrap() > 50);
    // -ord_2 binom(1/2, m) = 2m - ord_2(m!) - ... computed directly
    for &(m, v) in &profile.samples {
        let b = qeta_core::qseries::binomial(&Rational::from_frac(1, 2), m as u64);
        assert_eq!(Valuation::Finite(-v), b.valuation(2));
    }
}

#[test]
fn integral_series_has_no_witness() {
    let f = RationalSeries::from_i64s(0, &[1, 2, 3, 4], 4);
    assert!(growth_witness(&f, 3).unwrap().is_none());
}

#[test]
fn inverse_growth_law() {
    // x = q^(-2), alpha = 1/9, p = 3, r = 2
    let x = RationalSeries::from_i64s(-2, &[1], 120);
    let rep = verify_inverse_growth_law(&x, &Rational::from_frac(1, 9), 3, 2).unwrap();
    assert!(rep.holds());
    assert!(rep.valuations.len() > 50);
    for &(n, v) in rep.valuations.iter().take(51) {
        assert_eq!(v, Some(-2 * n as i64));
    }
}
