//! Text grammars for eta quotients, series and polynomials.
//!
//! Errors carry the 1-based column of the offending character.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use qeta_core::etaforms::EtaQuotient;
use qeta_core::exactnum::{Polynomial, Rational};
use qeta_core::puiseux::BivariatePoly;
use qeta_core::qseries::RationalSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> PResult<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Num(s.parse().expect("digits")), col));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if "+-*/^()·".contains(c) {
                toks.push((Tok::Sym(if c == '·' { '*' } else { c }), col));
                i += 1;
            } else {
                return Err(err(col, format!("unexpected character '{c}'")));
            }
        }
        Ok(Lexer { toks, end: chars.len() + 1, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.col(), format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> PResult<(BigInt, usize)> {
        match self.next() {
            Some((Tok::Num(n), col)) => Ok((n, col)),
            Some((_, col)) => Err(err(col, "expected an integer")),
            None => Err(err(self.end, "expected an integer")),
        }
    }

    /// `['-'] int ['/' int]`, optionally in parentheses.
    fn exponent(&mut self) -> PResult<(Rational, usize)> {
        let col = self.col();
        let paren = self.eat('(');
        let neg = self.eat('-');
        let (n, _) = self.integer()?;
        let mut r = Rational::from_bigint(if neg { -n } else { n });
        if self.eat('/') {
            let (d, dcol) = self.integer()?;
            if d.is_zero() {
                return Err(err(dcol, "zero denominator"));
            }
            r = &r * &Rational::new(BigInt::one(), d).expect("nonzero");
        }
        if paren {
            self.expect(')')?;
        }
        Ok((r, col))
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

fn err(column: usize, message: impl Into<String>) -> ParseError {
    ParseError { column, message: message.into() }
}

/// One term `c * v1^e1 * v2^e2 ...` of a monomial sum.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Rational,
    pub exps: BTreeMap<char, Rational>,
}

/// A sum of monomials, optionally followed by `+ O(q^e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialSum {
    pub terms: Vec<Monomial>,
    pub big_o: Option<Rational>,
}

/// Parse `c * x^i * q^j + ...` over the single-letter variables in `vars`.
/// Exponents may be negative or rational; juxtaposition like `3q` also
/// multiplies, and parenthesised sums are distributed, so the display form
/// `q*(1 - 24*q + ...) + O(q^3)` reads back.
pub fn parse_monomial_sum(text: &str, vars: &[char]) -> PResult<MonomialSum> {
    let mut lx = Lexer::new(text)?;
    if lx.done() {
        return Err(err(1, "empty expression"));
    }
    let (terms, big_o) = sum(&mut lx, vars, true)?;
    Ok(MonomialSum { terms, big_o })
}

fn sum(lx: &mut Lexer, vars: &[char], top: bool) -> PResult<(Vec<Monomial>, Option<Rational>)> {
    let mut terms = Vec::new();
    let mut big_o = None;
    let mut first = true;
    loop {
        if lx.done() || (!top && lx.peek() == Some(&Tok::Sym(')'))) {
            if first {
                return Err(err(lx.col(), "empty expression"));
            }
            break;
        }
        let neg = if lx.eat('-') {
            true
        } else {
            if !lx.eat('+') && !first {
                return Err(err(lx.col(), "expected '+' or '-'"));
            }
            false
        };
        first = false;
        if big_o.is_some() {
            return Err(err(lx.col(), "terms after the O-term"));
        }
        if top && lx.peek() == Some(&Tok::Ident("O".into())) {
            let col = lx.col();
            if neg {
                return Err(err(col, "O-term cannot be negated"));
            }
            lx.next();
            lx.expect('(')?;
            let (var, vcol) = match lx.next() {
                Some((Tok::Ident(s), c)) => (s, c),
                _ => return Err(err(col + 2, "expected q inside O(...)")),
            };
            if var != "q" {
                return Err(err(vcol, "O-term must be in q"));
            }
            let e = if lx.eat('^') { lx.exponent()?.0 } else { Rational::one() };
            lx.expect(')')?;
            big_o = Some(e);
            continue;
        }
        let mut t = term(lx, vars)?;
        if neg {
            for m in &mut t {
                m.coeff = -&m.coeff;
            }
        }
        terms.extend(t);
    }
    Ok((terms, big_o))
}

/// Combine monomials with equal exponents and drop zeros.
fn collect(terms: Vec<Monomial>) -> Vec<Monomial> {
    let mut acc: Vec<Monomial> = Vec::new();
    for m in terms {
        match acc.iter_mut().find(|a| a.exps == m.exps) {
            Some(a) => a.coeff = &a.coeff + &m.coeff,
            None => acc.push(m),
        }
    }
    acc.retain(|m| !m.coeff.is_zero());
    acc
}

fn multiply(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let mut exps = x.exps.clone();
            for (v, e) in &y.exps {
                let slot = exps.entry(*v).or_insert_with(Rational::zero);
                *slot = &*slot + e;
            }
            exps.retain(|_, e| !e.is_zero());
            out.push(Monomial { coeff: &x.coeff * &y.coeff, exps });
        }
    }
    collect(out)
}

fn term(lx: &mut Lexer, vars: &[char]) -> PResult<Vec<Monomial>> {
    let mut acc = factor(lx, vars)?;
    loop {
        if lx.eat('/') {
            let (d, dcol) = lx.integer()?;
            if d.is_zero() {
                return Err(err(dcol, "zero denominator"));
            }
            let inv = Rational::new(BigInt::one(), d).expect("nonzero");
            for m in &mut acc {
                m.coeff = &m.coeff * &inv;
            }
            continue;
        }
        if !lx.eat('*') {
            match lx.peek() {
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')) => {}
                _ => return Ok(acc),
            }
        }
        let f = factor(lx, vars)?;
        acc = multiply(&acc, &f);
        if acc.len() > 100_000 {
            return Err(err(lx.col(), "expression expands to too many terms"));
        }
    }
}

fn factor(lx: &mut Lexer, vars: &[char]) -> PResult<Vec<Monomial>> {
    let col = lx.col();
    let one = |coeff: Rational, exps: BTreeMap<char, Rational>| vec![Monomial { coeff, exps }];
    match lx.next() {
        Some((Tok::Num(n), _)) => {
            let mut c = Rational::from_bigint(n);
            if lx.eat('/') {
                let (d, dcol) = lx.integer()?;
                if d.is_zero() {
                    return Err(err(dcol, "zero denominator"));
                }
                c = &c * &Rational::new(BigInt::one(), d).expect("nonzero");
            }
            Ok(one(c, BTreeMap::new()))
        }
        Some((Tok::Ident(s), _)) => {
            let mut chars = s.chars();
            let v = match (chars.next(), chars.next()) {
                (Some(v), None) if vars.contains(&v) => v,
                _ => {
                    let allowed: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
                    return Err(err(col, format!("unknown symbol '{s}' (expected {})", allowed.join(" or "))));
                }
            };
            let e = if lx.eat('^') { lx.exponent()?.0 } else { Rational::one() };
            let mut exps = BTreeMap::new();
            if !e.is_zero() {
                exps.insert(v, e);
            }
            Ok(one(Rational::one(), exps))
        }
        Some((Tok::Sym('('), _)) => {
            let (inner, _) = sum(lx, vars, false)?;
            lx.expect(')')?;
            Ok(collect(inner))
        }
        Some((Tok::Sym(c), _)) => Err(err(col, format!("unexpected '{c}'"))),
        None => Err(err(col, "unexpected end of input")),
    }
}

/// A rational number `[-]n[/d]`.
pub fn parse_rational(text: &str) -> PResult<Rational> {
    let mut lx = Lexer::new(text)?;
    let neg = lx.eat('-');
    let (n, _) = lx.integer()?;
    let mut r = Rational::from_bigint(if neg { -n } else { n });
    if lx.eat('/') {
        let (d, dcol) = lx.integer()?;
        if d.is_zero() {
            return Err(err(dcol, "zero denominator"));
        }
        r = &r * &Rational::new(BigInt::one(), d).expect("nonzero");
    }
    if !lx.done() {
        return Err(err(lx.col(), "trailing input after number"));
    }
    Ok(r)
}

/// Comma-separated rationals.
pub fn parse_rational_list(text: &str) -> PResult<Vec<Rational>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let lead = part.len() - part.trim_start().len();
        out.push(parse_rational(part.trim()).map_err(|e| err(e.column + offset + lead, e.message))?);
        offset += part.chars().count() + 1;
    }
    Ok(out)
}

/// A series in `q` with rational exponents. The truncation is `O(q^(v+t))`
/// for leading exponent `v`, or the explicit `O`-term if that is smaller.
pub fn parse_series(text: &str, t: usize) -> PResult<RationalSeries> {
    let sum = parse_monomial_sum(text, &['q'])?;
    let mut w = BigInt::one();
    let exps: Vec<Rational> =
        sum.terms.iter().map(|m| m.exps.get(&'q').cloned().unwrap_or_else(Rational::zero)).collect();
    for e in exps.iter().chain(sum.big_o.iter()) {
        w = w.lcm(e.denom());
    }
    let w = w.to_u64().filter(|&w| w <= 1000).ok_or_else(|| err(1, "ramification index too large"))?;
    let wr = Rational::from_i64(w as i64);
    let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
    for (m, e) in sum.terms.iter().zip(&exps) {
        let k = (e * &wr).to_i64().filter(|k| k.abs() < 1 << 40).ok_or_else(|| err(1, "exponent out of range"))?;
        let slot = coeffs.entry(k).or_insert_with(Rational::zero);
        *slot = &*slot + &m.coeff;
    }
    coeffs.retain(|_, c| !c.is_zero());
    let v = coeffs.keys().next().copied().unwrap_or(0);
    let span = i64::try_from(t).ok().and_then(|t| t.checked_mul(w as i64)).ok_or_else(|| err(1, "truncation too large"))?;
    let mut trunc = v + span;
    if let Some(o) = &sum.big_o {
        let k = (o * &wr).to_i64().filter(|k| k.abs() < 1 << 40).ok_or_else(|| err(1, "exponent out of range"))?;
        trunc = trunc.min(k);
    }
    if trunc - v > 1_000_000 {
        return Err(err(1, "series spans too many coefficients"));
    }
    let terms: Vec<(i64, Rational)> = coeffs.into_iter().filter(|(k, _)| *k < trunc).collect();
    Ok(RationalSeries::from_terms((), w, &terms, trunc))
}

/// `g(x, q)`: nonnegative integer powers of `x`, rational powers of `q`,
/// with an optional `O(q^e)` marking the precision.
pub fn parse_bivariate(text: &str) -> PResult<BivariatePoly> {
    let sum = parse_monomial_sum(text, &['x', 'q'])?;
    let mut terms = Vec::new();
    for m in &sum.terms {
        let i = x_power(m, 64)?;
        let j = m.exps.get(&'q').cloned().unwrap_or_else(Rational::zero);
        if j.abs() > Rational::from_i64(1000) || j.denom() > &BigInt::from(1000) {
            return Err(err(1, format!("power of q out of range: {j}")));
        }
        terms.push((i, j, m.coeff.clone()));
    }
    let g = BivariatePoly::new(terms);
    Ok(match sum.big_o {
        Some(p) => g.with_precision(p),
        None => g,
    })
}

fn x_power(m: &Monomial, max: i64) -> PResult<usize> {
    let e = m.exps.get(&'x').cloned().unwrap_or_else(Rational::zero);
    match e.to_i64() {
        Some(i) if e.is_integer() && (0..=max).contains(&i) => Ok(i as usize),
        _ => Err(err(1, format!("power of x must be an integer in 0..={max}, got {e}"))),
    }
}

/// A polynomial in `x` with rational coefficients.
pub fn parse_polynomial(text: &str) -> PResult<Polynomial<Rational>> {
    let sum = parse_monomial_sum(text, &['x'])?;
    if sum.big_o.is_some() {
        return Err(err(1, "O-term not allowed in a polynomial"));
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    for m in &sum.terms {
        let i = x_power(m, 4096)?;
        if coeffs.len() <= i {
            coeffs.resize(i + 1, Rational::zero());
        }
        coeffs[i] = &coeffs[i] + &m.coeff;
    }
    Ok(Polynomial::from_rationals(coeffs))
}

/// `eta(a)^e * ...`. Terms come back sorted with equal arguments merged;
/// the second value holds warnings.
pub fn parse_eta_expr(text: &str) -> PResult<(EtaQuotient, Vec<String>)> {
    if text.trim() == "1" {
        return Ok((EtaQuotient::unit(), Vec::new()));
    }
    let mut lx = Lexer::new(text)?;
    let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
    let mut warnings = Vec::new();
    loop {
        let col = lx.col();
        match lx.next() {
            Some((Tok::Ident(s), _)) if s == "eta" => {}
            _ => return Err(err(col, "expected eta(<positive integer>)")),
        }
        lx.expect('(')?;
        let (a, acol) = lx.integer()?;
        let a = a.to_u64().filter(|&a| a > 0 && a <= 1_000_000).ok_or_else(|| err(acol, "argument must be a positive integer"))?;
        lx.expect(')')?;
        let mut e = 1i64;
        if lx.eat('^') {
            let (r, ecol) = lx.exponent()?;
            e = r
                .to_i64()
                .filter(|_| r.is_integer())
                .filter(|e| e.abs() <= 1000)
                .ok_or_else(|| err(ecol, "exponent must be an integer of moderate size"))?;
            if e == 0 {
                return Err(err(ecol, "exponent must be nonzero"));
            }
        }
        *merged.entry(a).or_insert(0) += e;
        if lx.done() {
            break;
        }
        lx.expect('*')?;
    }
    let terms: Vec<(u64, i64)> = merged.into_iter().filter(|&(_, e)| e != 0).collect();
    if terms.is_empty() {
        warnings.push("exponents cancel; the quotient is the unit 1".to_string());
    }
    let q = EtaQuotient::new(terms).map_err(|e| err(1, e.to_string()))?;
    Ok((q, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_examples() {
        assert_eq!(parse_eta_expr("eta(1)^24").unwrap().0.terms(), &[(1, 24)]);
        assert_eq!(parse_eta_expr("eta(2)*eta(1)").unwrap().0.terms(), &[(1, 1), (2, 1)]);
        let (u, warn) = parse_eta_expr("eta(1)^2*eta(1)^-2").unwrap();
        assert!(u.is_unit());
        assert_eq!(warn.len(), 1);
        assert_eq!(parse_eta_expr("eta(1)^(-3) * eta(4)^2").unwrap().0.terms(), &[(1, -3), (4, 2)]);
    }

    #[test]
    fn eta_errors_point_at_column() {
        assert_eq!(parse_eta_expr("eta(0)").unwrap_err().column, 5);
        assert_eq!(parse_eta_expr("eta(1)^0").unwrap_err().column, 8);
        assert_eq!(parse_eta_expr("eta(1)*zeta(2)").unwrap_err().column, 8);
        assert_eq!(parse_eta_expr("eta(1").unwrap_err().column, 6);
    }

    #[test]
    fn series_and_bivariate() {
        let s = parse_series("1 + q", 8).unwrap();
        assert_eq!((s.w(), s.v(), s.t()), (1, 0, 8));
        let s = parse_series("q^(1/2) - 3q^2", 4).unwrap();
        assert_eq!((s.w(), s.v(), s.t()), (2, 1, 9));
        let s = parse_series("1 + q + O(q^3)", 10).unwrap();
        assert_eq!(s.t(), 3);
        let g = parse_bivariate("x^2 - q*(1/2) - q^-1 + O(q^5)").unwrap();
        assert_eq!(g.to_string(), "x^2 - q^(-1) - 1/2*q + O(q^5)");
        assert_eq!(parse_bivariate("x^2 - y").unwrap_err().column, 7);
        let d = parse_series("q*(1 - 24*q + 252*q^2) + O(q^4)", 100).unwrap();
        assert_eq!(d.factored(), "q*(1 - 24*q + 252*q^2) + O(q^4)");
        let p = parse_series("(1 + q)(1 - q) + 2*(q^2)", 5).unwrap();
        assert_eq!(p.to_string(), "1 + q^2 + O(q^5)");
        let f = parse_polynomial("3x^2 + x + 3").unwrap();
        assert_eq!(f, Polynomial::from_i64s(&[3, 1, 3]));
    }

    #[test]
    fn rational_lists() {
        assert_eq!(parse_rational_list("0, -1,1/2").unwrap()[2], Rational::from_frac(1, 2));
        assert_eq!(parse_rational_list("0,1/0").unwrap_err().column, 5);
        assert_eq!(parse_rational("12x").unwrap_err().column, 3);
    }
}
