use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, Polynomial, Rational};

/// Edge of the lower convex hull of `(i, ord_p c_i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub from: (usize, i64),
    pub to: (usize, i64),
    pub slope: Rational,
}

impl Segment {
    /// Valuation shared by the roots this edge accounts for.
    pub fn root_valuation(&self) -> Rational {
        -&self.slope
    }

    pub fn length(&self) -> usize {
        self.to.0 - self.from.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonPolygon {
    pub p: u64,
    pub points: Vec<(usize, i64)>,
    #[serde(rename = "lowerHull")]
    pub lower_hull: Vec<Segment>,
}

impl NewtonPolygon {
    /// Root valuations with multiplicity, from the lowest slope upwards.
    pub fn root_valuations(&self) -> Vec<(Rational, usize)> {
        self.lower_hull.iter().map(|s| (s.root_valuation(), s.length())).collect()
    }

    /// A positive-slope edge: its roots have negative valuation, so they are
    /// not `p`-integral.
    pub fn nonintegral_root_witness(&self) -> Option<&Segment> {
        self.lower_hull.iter().find(|s| s.slope > Rational::zero())
    }
}

fn cross(o: (usize, i64), a: (usize, i64), b: (usize, i64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

pub fn newton_polygon(f: &Polynomial<Rational>, p: u64) -> Result<NewtonPolygon> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("Newton polygon of the zero polynomial".into()));
    }
    let points: Vec<(usize, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation(p).finite().map(|v| (i, v)))
        .collect();
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let lower_hull = hull
        .windows(2)
        .map(|w| Segment {
            from: w[0],
            to: w[1],
            slope: Rational::from_frac(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64),
        })
        .collect();
    Ok(NewtonPolygon { p, points, lower_hull })
}
