use qeta_core::elliptic::*;
use proptest::prelude::*;
use qeta_core::exactnum::{Polynomial, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

/// Short model of y^2 + y = x^3 - x^2 - 10x - 20.
fn curve_11a() -> ShortModel {
    WeierstrassCurve::from_general([q(0, 1), q(-1, 1), q(1, 1), q(-10, 1), q(-20, 1)]).unwrap()
}

/// Affine chord-and-tangent addition on a short model; `None` is the point
/// at infinity.
fn add(c: &WeierstrassCurve, p: Option<(Rational, Rational)>, r: Option<(Rational, Rational)>) -> Option<(Rational, Rational)> {
    let (Some((x1, y1)), Some((x2, y2))) = (p.clone(), r.clone()) else {
        return p.or(r);
    };
    let lambda = if x1 == x2 {
        if (&y1 + &y2).is_zero() {
            return None;
        }
        (q(3, 1) * &x1 * &x1 + c.a.clone()) / (q(2, 1) * &y1)
    } else {
        (&y2 - &y1) / (&x2 - &x1)
    };
    let x3 = &lambda * &lambda - &x1 - &x2;
    let y3 = &lambda * &(&x1 - &x3) - &y1;
    Some((x3, y3))
}

#[test]
fn eleven_a_has_rational_five_torsion() {
    let m = curve_11a();
    let c = &m.curve;
    // (5, 5) on the general model; y_short = y + 1/2
    let p0 = Some((q(5, 1) + m.x_shift.clone(), q(11, 2)));
    let mut acc = p0.clone();
    let mut multiples = vec![acc.clone()];
    for _ in 0..4 {
        acc = add(c, acc, p0.clone());
        multiples.push(acc.clone());
    }
    assert!(multiples[4].is_none(), "5P should be the identity");
    let psi5 = division_poly(c, 5).unwrap();
    for pt in multiples.iter().take(4) {
        let (x, y) = pt.clone().unwrap();
        assert!(c.contains(&x, &y));
        assert!(psi5.poly.eval(&x).is_zero());
    }
    let xs: Vec<Rational> = multiples.iter().take(4).map(|p| p.clone().unwrap().0).collect();
    assert!(xs.contains(&q(14, 3)) && xs.contains(&q(47, 3)));
}

#[test]
fn screening_slice() {
    let m = curve_11a();
    let rep = screen_primes(&m.curve, 13, &ScreenOptions::default()).unwrap();
    assert!(rep.primes.iter().all(|r| r.shape_ok));
    assert!(rep.primes.iter().filter(|r| r.p != 5).all(|r| r.certificate.is_irreducible()));
    assert_eq!(rep.exceptional, vec![5]);
}

#[test]
fn psi3_closed_form() {
    for (a, b) in [(2, 3), (-1, 0), (0, 7), (-10, 20)] {
        let c = WeierstrassCurve::new(q(a, 1), q(b, 1)).unwrap();
        // 3x^4 + 6Ax^2 + 12Bx - A^2
        let expected = Polynomial::from_i64s(&[-a * a, 12 * b, 6 * a, 0, 3]);
        assert_eq!(division_poly(&c, 3).unwrap().poly, expected);
    }
}

#[test]
fn three_adic_quadratic_witness() {
    // 3x^2 + x + 3: roots have 3-adic valuations -1 and 1
    let f = Polynomial::from_i64s(&[3, 1, 3]);
    let np = newton_polygon(&f, 3).unwrap();
    let w = np.nonintegral_root_witness().unwrap();
    assert_eq!(w.root_valuation(), q(-1, 1));
    let mut vals = np.root_valuations();
    vals.sort();
    assert_eq!(vals, vec![(q(-1, 1), 1), (q(1, 1), 1)]);
}

fn curve() -> impl Strategy<Value = WeierstrassCurve> {
    (-20i64..20, -20i64..20, 1i64..4)
        .prop_filter_map("singular", |(a, b, d)| WeierstrassCurve::new(q(a, d), q(b, 1)).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn division_polynomial_shape(c in curve()) {
        for p in [3u64, 5, 7, 11, 13] {
            let psi = division_poly(&c, p).unwrap().poly;
            prop_assert_eq!(psi.degree(), Some(((p * p - 1) / 2) as usize));
            prop_assert_eq!(psi.leading().unwrap(), &q(p as i64, 1));
        }
    }

    /// Newton-polygon slopes against the valuations of known rational roots.
    #[test]
    fn newton_matches_root_valuations(
        roots in prop::collection::vec((-60i64..60, 1i64..60), 2..4),
        lead in 1i64..30,
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        prop_assume!(roots.iter().all(|&(n, _)| n != 0));
        let mut f = Polynomial::from_i64s(&[lead]);
        let mut expected = Vec::new();
        for &(n, d) in &roots {
            let r = q(n, d);
            f = &f * &Polynomial::linear_root(&r);
            expected.push(q(r.valuation(p).finite().unwrap(), 1));
        }
        let np = newton_polygon(&f, p).unwrap();
        let mut got: Vec<Rational> = Vec::new();
        for (v, m) in np.root_valuations() {
            for _ in 0..m {
                got.push(v.clone());
            }
        }
        got.sort();
        expected.sort();
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(np.nonintegral_root_witness().is_some(), expected.iter().any(|v| v.is_negative()));
    }

    #[test]
    fn degree_pattern_sums_to_degree(c in curve(), qi in 0usize..10) {
        let aux = [11u64, 13, 17, 19, 23, 29, 31, 37, 41, 43][qi];
        let psi = division_poly(&c, 5).unwrap().poly;
        if let Ok(pattern) = factor_degree_pattern(&psi, aux) {
            prop_assert_eq!(pattern.iter().sum::<usize>(), 12);
        }
    }
}
