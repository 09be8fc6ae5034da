use crate::exactnum::Rational;

/// Falling factorial `(1/n)(1/n - 1)...(1/n - m + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pochhammer {
    pub n: u32,
    pub m: u32,
    pub value: Rational,
}

impl Pochhammer {
    pub fn new(n: u32, m: u32) -> Self {
        assert!(n >= 1, "n must be positive");
        let inv = Rational::from_frac(1, n as i64);
        let mut value = Rational::one();
        for k in 0..m {
            value = value * (&inv - &Rational::from_i64(k as i64));
        }
        Pochhammer { n, m, value }
    }

    /// The next value via `value(m + 1) = value(m) (1/n - m)`.
    pub fn step(&self) -> Self {
        let inv = Rational::from_frac(1, self.n as i64);
        let value = &self.value * &(&inv - &Rational::from_i64(self.m as i64));
        Pochhammer { n: self.n, m: self.m + 1, value }
    }
}

/// Coefficients of `(1 + q)^(1/n)` up to `q^(len - 1)`: `(1/n)_m / m!`.
pub fn binomial_root_coeffs(n: u32, len: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(len);
    let mut p = Pochhammer::new(n, 0);
    let mut fact = Rational::one();
    for m in 0..len {
        if m > 0 {
            p = p.step();
            fact = fact * Rational::from_i64(m as i64);
        }
        out.push(&p.value / &fact);
    }
    out
}

/// Generalized binomial coefficient `binom(alpha, m)`.
pub fn binomial(alpha: &Rational, m: u64) -> Rational {
    let mut acc = Rational::one();
    for k in 0..m {
        acc = acc * (alpha - &Rational::from_i64(k as i64)) / Rational::from_i64(k as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_matches_definition() {
        assert!(Pochhammer::new(3, 0).value.is_one());
        let p = Pochhammer::new(2, 3);
        assert_eq!(p.value, Rational::from_frac(3, 8));
        assert_eq!(p.step(), Pochhammer::new(2, 4));
    }

    #[test]
    fn square_root_binomials() {
        let c = binomial_root_coeffs(2, 4);
        let expected = [(1, 1), (1, 2), (-1, 8), (1, 16)].map(|(a, b)| Rational::from_frac(a, b));
        assert_eq!(c, expected);
        assert_eq!(binomial(&Rational::from_frac(1, 2), 3), Rational::from_frac(1, 16));
    }
}
