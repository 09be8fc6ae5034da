use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, rational_roots, IrreducibilityEvidence, ModularIrreducibility, Polynomial, Rational};

/// Dense polynomial over `F_q`, low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fq {
    c: Vec<u64>,
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let g = (a as i64).extended_gcd(&(q as i64));
    g.x.rem_euclid(q as i64) as u64
}

impl Fq {
    fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Fq { c }
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn x() -> Self {
        Fq { c: vec![0, 1] }
    }

    fn monic(&self, q: u64) -> Self {
        let inv = inv_mod(*self.c.last().expect("nonzero"), q);
        Fq::new(self.c.iter().map(|x| x * inv % q).collect())
    }

    fn sub(&self, o: &Self, q: u64) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + q - b) % q
            })
            .collect();
        Fq::new(c)
    }

    fn mul(&self, o: &Self, q: u64) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Fq { c: Vec::new() };
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % q;
            }
        }
        Fq::new(c)
    }

    fn div_rem(&self, d: &Self, q: u64) -> (Self, Self) {
        let dd = d.deg().expect("division by zero polynomial");
        let inv = inv_mod(d.c[dd], q);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Fq { c: Vec::new() }, self.clone());
        }
        let mut quo = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = r[i] * inv % q;
            if coef == 0 {
                continue;
            }
            quo[i - dd] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + q - coef * b % q) % q;
            }
        }
        (Fq::new(quo), Fq::new(r))
    }

    fn rem(&self, d: &Self, q: u64) -> Self {
        self.div_rem(d, q).1
    }

    fn gcd(&self, o: &Self, q: u64) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.c.is_empty() {
            let r = a.rem(&b, q);
            a = b;
            b = r;
        }
        if a.c.is_empty() {
            a
        } else {
            a.monic(q)
        }
    }

    fn derivative(&self, q: u64) -> Self {
        Fq::new(self.c.iter().enumerate().skip(1).map(|(i, &a)| (i as u64 % q) * a % q).collect())
    }

    /// `self^e mod m`.
    fn pow_mod(&self, mut e: u64, m: &Self, q: u64) -> Self {
        let mut base = self.rem(m, q);
        let mut acc = Fq { c: vec![1] }.rem(m, q);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, q).rem(m, q);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, q).rem(m, q);
            }
        }
        acc
    }
}

/// Why a prime could not be used for reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BadReduction {
    NotPrime,
    DenominatorDivisible,
    LeadingCoefficientVanishes,
    NotSquarefree,
}

fn reduce(f: &Polynomial<Rational>, q: u64) -> std::result::Result<Fq, BadReduction> {
    let qb = BigInt::from(q);
    let mut c = Vec::with_capacity(f.coeffs().len());
    for x in f.coeffs() {
        let den = x.denom().mod_floor(&qb).to_u64().expect("small residue");
        if den == 0 {
            return Err(BadReduction::DenominatorDivisible);
        }
        let num = x.numer().mod_floor(&qb).to_u64().expect("small residue");
        c.push(num * inv_mod(den, q) % q);
    }
    if c.last() == Some(&0) {
        return Err(BadReduction::LeadingCoefficientVanishes);
    }
    Ok(Fq::new(c))
}

/// Degrees of the irreducible factors of `f mod q`, ascending, via
/// distinct-degree factorization of the squarefree reduction.
pub fn factor_degree_pattern(f: &Polynomial<Rational>, q: u64) -> std::result::Result<Vec<usize>, BadReduction> {
    if !is_prime(q) || q >= 1 << 31 {
        return Err(BadReduction::NotPrime);
    }
    let fq = reduce(f, q)?;
    if fq.gcd(&fq.derivative(q), q).deg() != Some(0) {
        return Err(BadReduction::NotSquarefree);
    }
    let mut rest = fq.monic(q);
    let mut degrees = Vec::new();
    let mut h = Fq::x();
    let mut i = 1;
    while let Some(d) = rest.deg() {
        if d < 2 * i {
            if d > 0 {
                degrees.push(d);
            }
            break;
        }
        h = h.pow_mod(q, &rest, q);
        let g = rest.gcd(&h.sub(&Fq::x(), q), q);
        let gd = g.deg().unwrap_or(0);
        if gd > 0 {
            degrees.extend(std::iter::repeat_n(i, gd / i));
            rest = rest.div_rem(&g, q).0;
            h = h.rem(&rest, q);
        }
        i += 1;
    }
    degrees.sort_unstable();
    Ok(degrees)
}

/// Degrees `1..n-1` that a rational factor could have given a mod-q pattern.
fn subset_sums(pattern: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in pattern {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum IrreducibleEvidence {
    /// The reduction modulo `q` is irreducible.
    FullDegree { q: u64 },
    /// No proper factor degree is compatible with every sampled pattern.
    DegreeSieve { patterns: Vec<(u64, Vec<usize>)> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum IrreducibilityCertificate {
    Irreducible { evidence: IrreducibleEvidence },
    Reducible { root: Rational },
    Inconclusive {
        #[serde(rename = "allowedFactorDegrees")]
        allowed_factor_degrees: Vec<usize>,
        patterns: Vec<(u64, Vec<usize>)>,
    },
}

impl IrreducibilityCertificate {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrreducibilityCertificate::Irreducible { .. })
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, IrreducibilityCertificate::Reducible { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            IrreducibilityCertificate::Irreducible { .. } => "Irreducible",
            IrreducibilityCertificate::Reducible { .. } => "Reducible",
            IrreducibilityCertificate::Inconclusive { .. } => "Inconclusive",
        }
    }

    /// Evidence accepted by `adjoin_root` for adjoining a root of `f`.
    pub fn adjunction_evidence(&self, f: &Polynomial<Rational>) -> Option<IrreducibilityEvidence> {
        match self {
            IrreducibilityCertificate::Irreducible { evidence: IrreducibleEvidence::FullDegree { q } } => {
                Some(IrreducibilityEvidence::ModularFullDegree(ModularIrreducibility { prime: *q, poly: f.clone() }))
            }
            _ => None,
        }
    }
}

/// Decide irreducibility over the rationals as far as the given auxiliary
/// primes allow. Patterns are computed for every usable prime; a
/// full-degree pattern at the smallest such prime is reported.
pub fn irreducibility_certificate(f: &Polynomial<Rational>, primes: &[u64]) -> Result<IrreducibilityCertificate> {
    let patterns: Vec<(u64, Vec<usize>)> = primes
        .iter()
        .filter_map(|&q| factor_degree_pattern(f, q).ok().map(|p| (q, p)))
        .collect();
    certificate_from_patterns(f, primes, patterns)
}

pub(crate) fn certificate_from_patterns(
    f: &Polynomial<Rational>,
    primes: &[u64],
    patterns: Vec<(u64, Vec<usize>)>,
) -> Result<IrreducibilityCertificate> {
    if primes.is_empty() {
        return Err(Error::InvalidInput("no auxiliary primes given".into()));
    }
    let n = f.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    if n >= 2 {
        if let Some((root, _)) = rational_roots(f).into_iter().next() {
            debug_assert!(f.eval(&root).is_zero());
            return Ok(IrreducibilityCertificate::Reducible { root });
        }
    }
    if let Some((q, _)) = patterns.iter().find(|(_, p)| p.as_slice() == [n]) {
        return Ok(IrreducibilityCertificate::Irreducible { evidence: IrreducibleEvidence::FullDegree { q: *q } });
    }
    let mut allowed = vec![true; n + 1];
    for (_, p) in &patterns {
        for (d, ok) in subset_sums(p, n).into_iter().enumerate() {
            allowed[d] &= ok;
        }
    }
    let allowed: Vec<usize> = (1..n).filter(|&d| allowed[d]).collect();
    if allowed.is_empty() && !patterns.is_empty() {
        return Ok(IrreducibilityCertificate::Irreducible { evidence: IrreducibleEvidence::DegreeSieve { patterns } });
    }
    Ok(IrreducibilityCertificate::Inconclusive { allowed_factor_degrees: allowed, patterns })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::from_i64s(c)
    }

    #[test]
    fn patterns() {
        assert_eq!(factor_degree_pattern(&p(&[1, 0, 1]), 3), Ok(vec![2]));
        assert_eq!(factor_degree_pattern(&p(&[-1, 0, 1]), 5), Ok(vec![1, 1]));
        assert_eq!(factor_degree_pattern(&p(&[1, 0, 0, 0, 1]), 3), Ok(vec![2, 2]));
        assert_eq!(factor_degree_pattern(&p(&[1, 2, 1]), 7), Err(BadReduction::NotSquarefree));
        assert_eq!(factor_degree_pattern(&p(&[1, 3]), 3), Err(BadReduction::LeadingCoefficientVanishes));
        let half = Polynomial::from_rationals(vec![Rational::from_frac(1, 2), Rational::one()]);
        assert_eq!(factor_degree_pattern(&half, 2), Err(BadReduction::DenominatorDivisible));
    }

    #[test]
    fn certificates() {
        assert_eq!(
            irreducibility_certificate(&p(&[1, 0, 1]), &[3]).unwrap(),
            IrreducibilityCertificate::Irreducible { evidence: IrreducibleEvidence::FullDegree { q: 3 } }
        );
        assert_eq!(
            irreducibility_certificate(&p(&[-1, 0, 1]), &[3]).unwrap(),
            IrreducibilityCertificate::Reducible { root: Rational::from_i64(-1) }
        );
        // x^4 + 1 is irreducible but splits modulo every prime
        let c = irreducibility_certificate(&p(&[1, 0, 0, 0, 1]), &[3, 5, 7, 11, 13]).unwrap();
        assert!(matches!(c, IrreducibilityCertificate::Inconclusive { .. }));
        assert!(irreducibility_certificate(&p(&[1, 0, 1]), &[]).is_err());
    }
}
