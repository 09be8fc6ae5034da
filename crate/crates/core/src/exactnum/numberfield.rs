use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::field::FieldElement;
use super::poly::Polynomial;
use super::rational::Rational;
use super::roots::rational_roots;
use crate::error::{Error, Result};

/// A simple extension `Q(theta)` given by the monic irreducible minimal
/// polynomial of `theta`. Degree one is the rationals themselves.
#[derive(Clone)]
pub struct NumberField {
    minpoly: Polynomial<Rational>,
    name: String,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}: {})", self.name, self.minpoly.display_with(&self.name))
    }
}

impl NumberField {
    pub fn rationals() -> Arc<NumberField> {
        Arc::new(NumberField { minpoly: Polynomial::from_i64s(&[0, 1]), name: "1".into() })
    }

    pub fn minpoly(&self) -> &Polynomial<Rational> {
        &self.minpoly
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(1)
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// The generator as an element of the field.
    pub fn generator(self: &Arc<Self>) -> AlgebraicNumber {
        if self.is_rationals() {
            // theta is the root of the linear minimal polynomial
            let root = -self.minpoly.coeff(0);
            return AlgebraicNumber::from_rational(self, &root);
        }
        let mut coords = vec![Rational::zero(); self.degree()];
        coords[1] = Rational::one();
        AlgebraicNumber { field: self.clone(), coords }
    }
}

#[derive(Serialize)]
struct FieldJson<'a> {
    minpoly: &'a [Rational],
}

impl Serialize for NumberField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldJson { minpoly: self.minpoly.coeffs() }.serialize(serializer)
    }
}

/// Evidence that a polynomial is irreducible over the rationals, required
/// before its root may be adjoined.
#[derive(Clone, Debug, PartialEq)]
pub enum IrreducibilityEvidence {
    /// Degree at most three and no rational root.
    RationalRootExclusion,
    /// The reduction modulo `prime` is irreducible of full degree. Only the
    /// finite-field factorizer constructs this.
    ModularFullDegree(ModularIrreducibility),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularIrreducibility {
    pub(crate) prime: u64,
    pub(crate) poly: Polynomial<Rational>,
}

impl ModularIrreducibility {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn poly(&self) -> &Polynomial<Rational> {
        &self.poly
    }
}

/// Adjoin a formal root of `f` to the rationals.
pub fn adjoin_root(
    base: &Arc<NumberField>,
    f: &Polynomial<Rational>,
    name: &str,
    evidence: Option<&IrreducibilityEvidence>,
) -> Result<Arc<NumberField>> {
    if !base.is_rationals() {
        return Err(Error::Unsupported("tower extensions are not supported".into()));
    }
    let deg = f.degree().ok_or_else(|| Error::InvalidInput("cannot adjoin a root of 0".into()))?;
    if deg == 0 {
        return Err(Error::InvalidInput("cannot adjoin a root of a constant".into()));
    }
    let monic = f.make_monic();
    if deg == 1 {
        // Q(root) = Q; keep the linear polynomial so the generator is the root.
        return Ok(Arc::new(NumberField { minpoly: monic, name: name.into() }));
    }
    match evidence {
        None => {
            return Err(Error::Precondition(format!(
                "refusing to adjoin a root of {f} without an irreducibility certificate"
            )))
        }
        Some(IrreducibilityEvidence::RationalRootExclusion) => {
            if deg > 3 {
                return Err(Error::Precondition(
                    "rational-root exclusion only certifies degree <= 3".into(),
                ));
            }
            if !rational_roots(&monic).is_empty() {
                return Err(Error::Precondition(format!("{f} has a rational root")));
            }
        }
        Some(IrreducibilityEvidence::ModularFullDegree(cert)) => {
            if cert.poly.make_monic() != monic {
                return Err(Error::Precondition("certificate is for a different polynomial".into()));
            }
        }
    }
    Ok(Arc::new(NumberField { minpoly: monic, name: name.into() }))
}

/// Element of a number field in power-basis coordinates.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_field(&self.field, &other.field)
    }
}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic between two algebraic numbers.
pub fn field_arith(a: &AlgebraicNumber, b: &AlgebraicNumber, op: FieldOp) -> Result<AlgebraicNumber> {
    if !same_field(&a.field, &b.field) {
        return Err(Error::FieldMismatch(format!("{:?} vs {:?}", a.field, b.field)));
    }
    Ok(match op {
        FieldOp::Add => a.plus(b),
        FieldOp::Sub => a.minus(b),
        FieldOp::Mul => a.times(b),
        FieldOp::Div => a.divide(b)?,
    })
}

impl AlgebraicNumber {
    pub fn new(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() > field.degree() {
            return Err(Error::InvalidInput(format!(
                "{} coordinates for a degree {} field",
                coords.len(),
                field.degree()
            )));
        }
        let mut coords = coords;
        coords.resize(field.degree(), Rational::zero());
        Ok(AlgebraicNumber { field: field.clone(), coords })
    }

    pub fn rational(r: Rational) -> Self {
        AlgebraicNumber { field: NumberField::rationals(), coords: vec![r] }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Image of a rational-field element in `target`.
    pub fn embed(&self, target: &Arc<NumberField>) -> Result<Self> {
        if same_field(&self.field, target) {
            return Ok(AlgebraicNumber { field: target.clone(), coords: self.coords.clone() });
        }
        match self.as_rational() {
            Some(r) => Ok(AlgebraicNumber::from_rational(target, &r)),
            None => Err(Error::FieldMismatch("only rational elements embed".into())),
        }
    }

    fn as_poly(&self) -> Polynomial<Rational> {
        Polynomial::from_rationals(self.coords.clone())
    }

    fn from_poly(field: &Arc<NumberField>, p: &Polynomial<Rational>) -> Self {
        let mut coords = p.coeffs().to_vec();
        coords.resize(field.degree(), Rational::zero());
        AlgebraicNumber { field: field.clone(), coords }
    }
}

impl FieldElement for AlgebraicNumber {
    type Ctx = Arc<NumberField>;

    fn ctx(&self) -> Arc<NumberField> {
        self.field.clone()
    }

    fn zero(ctx: &Arc<NumberField>) -> Self {
        AlgebraicNumber { field: ctx.clone(), coords: vec![Rational::zero(); ctx.degree()] }
    }

    fn one(ctx: &Arc<NumberField>) -> Self {
        AlgebraicNumber::from_rational(ctx, &Rational::one())
    }

    fn from_rational(ctx: &Arc<NumberField>, r: &Rational) -> Self {
        let mut coords = vec![Rational::zero(); ctx.degree()];
        coords[0] = r.clone();
        AlgebraicNumber { field: ctx.clone(), coords }
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    fn plus(&self, o: &Self) -> Self {
        debug_assert!(same_field(&self.field, &o.field));
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        AlgebraicNumber { field: self.field.clone(), coords }
    }

    fn minus(&self, o: &Self) -> Self {
        debug_assert!(same_field(&self.field, &o.field));
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        AlgebraicNumber { field: self.field.clone(), coords }
    }

    fn times(&self, o: &Self) -> Self {
        debug_assert!(same_field(&self.field, &o.field));
        if self.coords.len() == 1 {
            return AlgebraicNumber { field: self.field.clone(), coords: vec![&self.coords[0] * &o.coords[0]] };
        }
        let prod = &self.as_poly() * &o.as_poly();
        let red = prod.rem(&self.field.minpoly).expect("monic modulus");
        AlgebraicNumber::from_poly(&self.field, &red)
    }

    fn negate(&self) -> Self {
        AlgebraicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coords.len() == 1 {
            return Some(AlgebraicNumber { field: self.field.clone(), coords: vec![self.coords[0].recip()?] });
        }
        // s*a + t*m = 1 since m is irreducible and a != 0 mod m
        let (g, s, _) = self.as_poly().xgcd(&self.field.minpoly);
        debug_assert_eq!(g.degree(), Some(0));
        Some(AlgebraicNumber::from_poly(&self.field, &s.rem(&self.field.minpoly).ok()?))
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Rational::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let name = self.field.name();
        let p = Polynomial::from_rationals(self.coords.clone());
        f.write_str(&p.display_with(name))
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AlgebraicNumber", 2)?;
        s.serialize_field("field", &*self.field)?;
        s.serialize_field("coords", &self.coords)?;
        s.end()
    }
}

/// JSON form `{"field": {"minpoly": [...]}, "coords": [...]}`.
#[derive(Deserialize)]
pub struct AlgebraicNumberJson {
    pub field: MinpolyJson,
    pub coords: Vec<Rational>,
}

#[derive(Deserialize)]
pub struct MinpolyJson {
    pub minpoly: Vec<Rational>,
}

impl AlgebraicNumberJson {
    /// Rebuild the number; the minimal polynomial is trusted as given.
    pub fn into_number(self, name: &str) -> Result<AlgebraicNumber> {
        let minpoly = Polynomial::from_rationals(self.field.minpoly);
        if !minpoly.is_monic() {
            return Err(Error::InvalidInput("minimal polynomial must be monic".into()));
        }
        let field = Arc::new(NumberField { minpoly, name: name.into() });
        AlgebraicNumber::new(&field, self.coords)
    }
}
