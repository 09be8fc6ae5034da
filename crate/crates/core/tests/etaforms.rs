use num_bigint::BigUint;
use proptest::prelude::*;
use qeta_core::etaforms::*;
use qeta_core::exactnum::Rational;

fn quotient() -> impl Strategy<Value = EtaQuotient> {
    prop::collection::vec((1u64..9, -6i64..7), 1..5).prop_map(|f| EtaQuotient::from_factors(&f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn divisor_sum_law(e in quotient()) {
        let t = 100;
        let s = eta_expand(&e, t).unwrap();
        let p = series_to_product_form(&s).unwrap();
        let weighted: i64 = e.terms().iter().map(|&(a, x)| a as i64 * x).sum();
        prop_assert_eq!(&p.r, &Rational::from_frac(weighted, 24));
        prop_assert_eq!(p.t(), t - 1);
        for m in 1..=p.t() {
            let expected: i64 = e.terms().iter().filter(|&&(a, _)| (m as u64).is_multiple_of(a)).map(|t| t.1).sum();
            prop_assert_eq!(p.exponent(m).unwrap(), &Rational::from_i64(expected));
        }
        prop_assert_eq!(eta_recognize(&p), Recognition::Eta { quotient: e.clone(), t: t - 1 });
    }

    #[test]
    fn series_product_series(e in quotient()) {
        let s = eta_expand(&e, 100).unwrap();
        let back = product_form_to_series(&series_to_product_form(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn product_series_product(c in prop::collection::vec(-5i64..6, 1..60), r in -30i64..30) {
        let p = ProductForm::rational(Rational::from_frac(r, 24), c.iter().map(|&x| Rational::from_i64(x)).collect());
        let back = series_to_product_form(&product_form_to_series(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn counting_identity() {
    for t in 2..=6u32 {
        for p in [2u64, 3, 5] {
            for e in 1..=3u32 {
                let n = count_type_ia_groups(t, p, e).unwrap();
                let pe = BigUint::from(p).pow(e);
                assert_eq!(n * (&pe - 1u32), pe.pow(t - 1) - 1u32);
            }
        }
    }
}

#[test]
fn delta_golden_values() {
    let d = eta_expand(&EtaQuotient::new(vec![(1, 24)]).unwrap(), 10).unwrap();
    let c: Vec<i64> = d.coeffs().iter().map(|x| x.to_i64().unwrap()).collect();
    assert_eq!(c, vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]);
}
