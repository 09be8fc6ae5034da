use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{FieldElement, ModP};
use super::poly::Polynomial;
use super::rational::{is_prime, Rational};

/// Integer coefficients of a rational polynomial scaled to be primitive.
pub fn primitive_integer_coeffs(f: &Polynomial<Rational>) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return ints;
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// `lc^(n-1) s(y / lc)`: monic with integer coefficients, and its integer
/// roots are `lc` times the rational roots of `s`.
fn monic_transform(s: &[BigInt]) -> Vec<BigInt> {
    let n = s.len() - 1;
    let lc = &s[n];
    (0..=n)
        .map(|i| if i == n { BigInt::one() } else { &s[i] * num_traits::pow(lc.clone(), n - 1 - i) })
        .collect()
}

fn reduce_mod(coeffs: &[BigInt], q: u64) -> Polynomial<ModP> {
    let qb = BigInt::from(q);
    let c = coeffs.iter().map(|c| ModP::new(c.mod_floor(&qb).to_i64().unwrap(), q)).collect();
    Polynomial::new(q, c)
}

/// A prime modulo which the monic integer polynomial `g` stays squarefree.
fn squarefree_prime(g: &[BigInt], limit: usize) -> Option<u64> {
    let deriv: Vec<BigInt> = (1..g.len()).map(|i| &g[i] * BigInt::from(i)).collect();
    (3u64..)
        .filter(|&q| is_prime(q))
        .take(limit)
        .find(|&q| reduce_mod(g, q).gcd(&reduce_mod(&deriv, q)).degree() == Some(0))
}

/// Integer roots of a monic integer polynomial that is squarefree modulo `q`.
fn monic_integer_roots(g: &[BigInt], q: u64) -> Vec<BigInt> {
    let n = g.len() - 1;
    let bound = g[..n].iter().map(|c| c.abs()).max().unwrap_or_default() + 1u32;
    let deriv: Vec<BigInt> = (1..=n).map(|i| &g[i] * BigInt::from(i)).collect();
    let qb = BigInt::from(q);
    let gq = reduce_mod(g, q);
    let residues: Vec<u64> = (0..q).filter(|&r| gq.eval(&ModP::new(r as i64, q)).is_zero()).collect();
    let target = &bound * 2u32;
    let mut roots = Vec::new();
    for r in residues {
        let mut r = BigInt::from(r);
        let mut m = qb.clone();
        while m <= target {
            m = &m * &m;
            let num = eval_mod(g, &r, &m);
            let den = eval_mod(&deriv, &r, &m);
            let inv = inverse_mod(&den, &m).expect("simple root stays a unit");
            r = (r - num * inv).mod_floor(&m);
        }
        if &r * 2u32 > m {
            r -= &m;
        }
        if exact_root(g, &r) {
            roots.push(r);
        }
    }
    roots
}

fn exact_root(g: &[BigInt], r: &BigInt) -> bool {
    let mut acc = BigInt::zero();
    for c in g.iter().rev() {
        acc = acc * r + c;
    }
    acc.is_zero()
}

/// All rational roots of `f` with multiplicities, in increasing order.
///
/// The squarefree part is made monic over the integers, its integer roots
/// are found by lifting simple roots modulo a small prime, and each
/// candidate is verified exactly.
pub fn rational_roots(f: &Polynomial<Rational>) -> Vec<(Rational, usize)> {
    let Some(deg) = f.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let mut candidates = Vec::new();
    let mut base = f.clone();
    if base.coeff(0).is_zero() {
        candidates.push(Rational::zero());
        while base.coeff(0).is_zero() {
            base = base.exact_div(&Polynomial::x(())).expect("x divides");
        }
    }
    if base.degree() > Some(0) {
        let mut s = primitive_integer_coeffs(&base);
        let mut g = monic_transform(&s);
        // Certifying squarefreeness modulo a small prime avoids the exact
        // gcd over Q, whose coefficients grow quickly with the degree.
        let q = match squarefree_prime(&g, 20) {
            Some(q) => q,
            None => {
                s = primitive_integer_coeffs(&base.squarefree_part());
                g = monic_transform(&s);
                squarefree_prime(&g, usize::MAX).expect("squarefree polynomial has good primes")
            }
        };
        let lc = s.last().expect("nonconstant").clone();
        if g.len() > 1 {
            for y in monic_integer_roots(&g, q) {
                candidates.push(Rational::new(y, lc.clone()).expect("nonzero leading coefficient"));
            }
        }
    }
    candidates.sort();
    candidates
        .into_iter()
        .map(|r| {
            let lin = Polynomial::linear_root(&r);
            let mut mult = 0;
            let mut rest = f.clone();
            while let Some(q) = rest.exact_div(&lin) {
                rest = q;
                mult += 1;
            }
            (r, mult)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    #[test]
    fn roots_with_multiplicity() {
        // (2x - 1)^2 (x + 3) x
        let f = &(&Polynomial::from_i64s(&[-1, 2]).pow(2) * &Polynomial::from_i64s(&[3, 1])) * &Polynomial::from_i64s(&[0, 1]);
        assert_eq!(rational_roots(&f), vec![(q(-3, 1), 1), (q(0, 1), 1), (q(1, 2), 2)]);
        assert!(rational_roots(&Polynomial::from_i64s(&[-2, 0, 1])).is_empty());
        assert!(rational_roots(&Polynomial::from_i64s(&[5])).is_empty());
    }

    #[test]
    fn large_root() {
        let r = q(123456789, 1024);
        let f = &Polynomial::linear_root(&r) * &Polynomial::from_i64s(&[1, 0, 1]);
        assert_eq!(rational_roots(&f), vec![(r, 1)]);
    }
}
