use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::curve::WeierstrassCurve;
use super::divpoly::division_poly;
use super::factor::{certificate_from_patterns, factor_degree_pattern, IrreducibilityCertificate};
use super::newton::{newton_polygon, Segment};
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, primes_between, Rational};
use crate::ubdcert::{verify_inverse_growth_law, GrowthLawReport};
use crate::qseries::RationalSeries;

/// Above this prime the mod-p Galois representation of a non-CM curve is
/// known to be surjective; recorded in reports, not recomputed.
pub const SURJECTIVITY_BOUND: u64 = 37;

#[derive(Clone, Debug)]
pub struct ScreenOptions {
    pub aux_primes: Vec<u64>,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl Default for ScreenOptions {
    fn default() -> Self {
        ScreenOptions { aux_primes: primes_between(2, 200), jobs: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeReport {
    pub p: u64,
    pub degree: usize,
    #[serde(rename = "leadingCoefficient")]
    pub leading_coefficient: Rational,
    /// Degree `(p^2 - 1)/2` and leading coefficient `p`.
    #[serde(rename = "shapeOk")]
    pub shape_ok: bool,
    /// Index of some coefficient that is a `p`-adic unit.
    #[serde(rename = "unitCoefficient")]
    pub unit_coefficient: Option<usize>,
    /// Newton-polygon edge proving a torsion x-coordinate is not p-integral.
    #[serde(rename = "nonintegralWitness")]
    pub nonintegral_witness: Option<Segment>,
    pub certificate: IrreducibilityCertificate,
    pub millis: u128,
}

impl PrimeReport {
    pub fn is_exceptional(&self) -> bool {
        !self.certificate.is_irreducible()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScreenReport {
    pub curve: WeierstrassCurve,
    #[serde(rename = "pMax")]
    pub p_max: u64,
    pub primes: Vec<PrimeReport>,
    /// Primes whose division polynomial was not certified irreducible.
    pub exceptional: Vec<u64>,
    #[serde(rename = "surjectivityBound")]
    pub surjectivity_bound: u64,
}

fn screen_one(curve: &WeierstrassCurve, p: u64, aux: &[u64]) -> Result<PrimeReport> {
    let start = Instant::now();
    let d = division_poly(curve, p)?;
    let f = &d.poly;
    let degree = f.degree().expect("nonzero");
    let leading_coefficient = f.leading().expect("nonzero").clone();
    let shape_ok = degree as u64 == (p * p - 1) / 2 && leading_coefficient == Rational::from_i64(p as i64);
    let unit_coefficient = f.coeffs().iter().position(|c| c.valuation(p).finite() == Some(0));
    let nonintegral_witness = newton_polygon(f, p)?.nonintegral_root_witness().cloned();
    let patterns: Vec<(u64, Vec<usize>)> = aux
        .par_iter()
        .filter_map(|&q| factor_degree_pattern(f, q).ok().map(|pat| (q, pat)))
        .collect();
    let certificate = certificate_from_patterns(f, aux, patterns)?;
    Ok(PrimeReport {
        p,
        degree,
        leading_coefficient,
        shape_ok,
        unit_coefficient,
        nonintegral_witness,
        certificate,
        millis: start.elapsed().as_millis(),
    })
}

/// Screen every odd prime `p <= p_max`: shape of `psi_p`, a Newton-polygon
/// witness at `p`, and an irreducibility certificate from the auxiliary
/// primes. Output order is by `p` regardless of the worker count.
pub fn screen_primes(curve: &WeierstrassCurve, p_max: u64, opts: &ScreenOptions) -> Result<ScreenReport> {
    if opts.aux_primes.is_empty() {
        return Err(Error::InvalidInput("no auxiliary primes given".into()));
    }
    let primes: Vec<u64> = primes_between(3, p_max);
    let run = || -> Result<Vec<PrimeReport>> {
        primes.par_iter().map(|&p| screen_one(curve, p, &opts.aux_primes)).collect()
    };
    let reports = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let exceptional = reports.iter().filter(|r| r.is_exceptional()).map(|r| r.p).collect();
    Ok(ScreenReport {
        curve: curve.clone(),
        p_max,
        primes: reports,
        exceptional,
        surjectivity_bound: SURJECTIVITY_BOUND,
    })
}

/// The product `(f_P f_{-P})^(1/p)` agrees with `(x - x(P))^(-1)` up to a
/// scalar, so unbounded denominators of the latter at `p` follow from the
/// inverse growth law. `alpha = x(P)` must not be `p`-integral.
pub fn torsion_divisor_consistency(x: &RationalSeries, alpha: &Rational, p: u64) -> Result<GrowthLawReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let r = match alpha.valuation(p).finite() {
        Some(v) if v < 0 => -v,
        _ => return Err(Error::Precondition(format!("x(P) = {alpha} is {p}-integral"))),
    };
    verify_inverse_growth_law(x, alpha, p, r)
}
