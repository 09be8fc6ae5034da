use std::collections::HashMap;

use serde::Serialize;

use super::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, Polynomial, Rational};

/// The x-polynomial of `psi_p`: degree `(p^2 - 1)/2`, leading coefficient `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisionPolynomial {
    pub p: u64,
    pub poly: Polynomial<Rational>,
    pub curve: WeierstrassCurve,
}

/// Division polynomials with the factor `y` stripped from even indices, so
/// that every entry is a polynomial in `x` alone.
struct Table<'a> {
    curve: &'a WeierstrassCurve,
    f: Polynomial<Rational>,
    memo: HashMap<u64, Polynomial<Rational>>,
}

impl<'a> Table<'a> {
    fn new(curve: &'a WeierstrassCurve) -> Self {
        let (a, b) = (&curve.a, &curve.b);
        let r = Rational::from_i64;
        let mut memo = HashMap::new();
        memo.insert(0, Polynomial::from_i64s(&[]));
        memo.insert(1, Polynomial::from_i64s(&[1]));
        memo.insert(2, Polynomial::from_i64s(&[2]));
        memo.insert(
            3,
            Polynomial::from_rationals(vec![-(a * a), r(12) * b, r(6) * a, Rational::zero(), r(3)]),
        );
        let psi4 = vec![
            -(a * a * a) - r(8) * b * b,
            r(-4) * a * b,
            r(-5) * a * a,
            r(20) * b,
            r(5) * a,
            Rational::zero(),
            r(1),
        ];
        memo.insert(4, Polynomial::from_rationals(psi4.into_iter().map(|c| r(4) * c).collect()));
        Table { curve, f: curve.two_torsion_cubic(), memo }
    }

    fn get(&mut self, n: u64) -> Polynomial<Rational> {
        if let Some(p) = self.memo.get(&n) {
            return p.clone();
        }
        let m = n / 2;
        let out = if n % 2 == 1 {
            let a = &self.get(m + 2) * &self.get(m).pow(3);
            let b = &self.get(m - 1) * &self.get(m + 1).pow(3);
            let f2 = self.f.pow(2);
            if m.is_multiple_of(2) {
                &(&a * &f2) - &b
            } else {
                &a - &(&b * &f2)
            }
        } else {
            let inner = &(&self.get(m + 2) * &self.get(m - 1).pow(2)) - &(&self.get(m - 2) * &self.get(m + 1).pow(2));
            (&self.get(m) * &inner).scale(&Rational::from_frac(1, 2))
        };
        self.memo.insert(n, out.clone());
        out
    }
}

/// `psi_p` for an odd prime `p`, checked against the expected degree and
/// leading coefficient.
pub fn division_poly(curve: &WeierstrassCurve, p: u64) -> Result<DivisionPolynomial> {
    if p == 2 {
        return Err(Error::InvalidInput("p = 2: use the two-torsion cubic x^3 + Ax + B".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut table = Table::new(curve);
    let poly = table.get(p);
    let expected = ((p * p - 1) / 2) as usize;
    if poly.degree() != Some(expected) || poly.leading() != Some(&Rational::from_i64(p as i64)) {
        return Err(Error::Precondition(format!("psi_{p} has unexpected shape")));
    }
    Ok(DivisionPolynomial { p, poly, curve: table.curve.clone() })
}

/// `psi_n` with the `y` factor removed for even `n`, any `n >= 0`.
pub fn division_poly_any(curve: &WeierstrassCurve, n: u64) -> Polynomial<Rational> {
    Table::new(curve).get(n)
}
