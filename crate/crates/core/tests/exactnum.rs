use std::sync::Arc;

use proptest::prelude::*;
use qeta_core::exactnum::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(primes_between(2, 97))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| r(n, d))
}

fn cubic_field() -> Arc<NumberField> {
    // r^3 - r - 1 has no rational root
    adjoin_root(
        &NumberField::rationals(),
        &Polynomial::from_i64s(&[-1, -1, 0, 1]),
        "r",
        Some(&IrreducibilityEvidence::RationalRootExclusion),
    )
    .unwrap()
}

fn element(field: Arc<NumberField>) -> impl Strategy<Value = AlgebraicNumber> {
    prop::collection::vec((-20i64..20, 1i64..8), 3)
        .prop_map(move |c| AlgebraicNumber::new(&field, c.into_iter().map(|(n, d)| r(n, d)).collect()).unwrap())
}

/// Rational roots of an integer polynomial by the rational root theorem.
fn divisor_search(f: &[i64]) -> Vec<Rational> {
    let divisors = |n: i64| -> Vec<i64> { (1..=n.abs()).filter(|d| n % d == 0).collect() };
    let lo = f.iter().position(|&c| c != 0).unwrap();
    let mut out = Vec::new();
    if lo > 0 {
        out.push(r(0, 1));
    }
    let poly = Polynomial::from_i64s(f);
    for a in divisors(f[lo]) {
        for b in divisors(*f.last().unwrap()) {
            for cand in [r(a, b), r(-a, b)] {
                if poly.eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out
}

proptest! {
    #[test]
    fn valuation_laws(x in rational(), y in rational(), p in small_prime()) {
        prop_assert_eq!((&x * &y).valuation(p), x.valuation(p) + y.valuation(p));
        let (vx, vy, vs) = (x.valuation(p), y.valuation(p), (&x + &y).valuation(p));
        prop_assert!(vs >= vx.min(vy));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn field_axioms(
        (a, b, c) in (element(cubic_field()), element(cubic_field()), element(cubic_field()))
    ) {
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.times(&b), b.times(&a));
        if !a.is_zero() {
            prop_assert!(a.times(&a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_roots_match_divisor_search(
        roots in prop::collection::vec((-6i64..7, 1i64..4), 0..4),
        extra in prop::sample::select(vec![vec![1i64], vec![1, 0, 1], vec![2, 1, 3], vec![-2, 0, 0, 1]]),
    ) {
        let mut f = Polynomial::from_i64s(&extra);
        for &(n, d) in &roots {
            f = &f * &Polynomial::from_i64s(&[-n, d]);
        }
        let ints: Vec<i64> = primitive_integer_coeffs(&f).iter().map(|c| i64::try_from(c).unwrap()).collect();
        let found: Vec<Rational> = rational_roots(&f).into_iter().map(|(x, m)| {
            assert!(m >= 1);
            x
        }).collect();
        for x in &found {
            prop_assert!(f.eval(x).is_zero());
        }
        prop_assert_eq!(found, divisor_search(&ints));
    }
}

#[test]
fn multiplicities_are_exact() {
    let f = &Polynomial::from_i64s(&[1, -1]).pow(3) * &Polynomial::from_i64s(&[0, 0, 1]);
    assert_eq!(rational_roots(&f), vec![(r(0, 1), 2), (r(1, 1), 3)]);
}

#[test]
fn adjunction_requires_evidence() {
    let f = Polynomial::from_i64s(&[-2, 0, 1]);
    assert!(adjoin_root(&NumberField::rationals(), &f, "s", None).is_err());
    let reducible = Polynomial::from_i64s(&[-4, 0, 1]);
    assert!(adjoin_root(&NumberField::rationals(), &reducible, "s", Some(&IrreducibilityEvidence::RationalRootExclusion)).is_err());
    let k = adjoin_root(&NumberField::rationals(), &f, "s", Some(&IrreducibilityEvidence::RationalRootExclusion)).unwrap();
    let s = k.generator();
    assert_eq!(s.times(&s), AlgebraicNumber::from_rational(&k, &r(2, 1)));
    assert!(adjoin_root(&k, &f, "t", Some(&IrreducibilityEvidence::RationalRootExclusion)).is_err());
}
