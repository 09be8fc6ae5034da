use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Partition `d_1 + ... + d_n = d` with parts in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn d(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// `#(i in p)`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&x| x == i).count()
    }

    /// `1 / prod_i #(i in p)!`.
    pub fn symmetry_weight(&self) -> Rational {
        let mut denom: i64 = 1;
        let mut run = 0i64;
        for (k, &x) in self.parts.iter().enumerate() {
            if k > 0 && self.parts[k - 1] == x {
                run += 1;
            } else {
                run = 1;
            }
            denom *= run;
        }
        Rational::from_frac(1, denom)
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * Rational::from_i64(k))
}

/// `binom(M, d) d! / (d_1! ... d_n!) / prod #(i in p)!`, the number of times
/// the term for `p` appears in the `M`-th derivative of `g(f(q), q)`.
pub fn c_p_constant(p: &Partition, m: usize) -> Result<Rational> {
    let d = p.d();
    if d > m {
        return Err(Error::InvalidInput(format!("partition of {d} exceeds M = {m}")));
    }
    let binom = factorial(m) / (factorial(d) * factorial(m - d));
    let mut multinomial = factorial(d);
    for &x in p.parts() {
        multinomial = multinomial / factorial(x);
    }
    Ok(binom * multinomial * p.symmetry_weight())
}

/// Partitions of `d` into at most `max_parts` parts, memoized per `(d, max_parts)`.
#[derive(Default)]
pub struct PartitionCache {
    memo: HashMap<(usize, usize), Arc<Vec<Partition>>>,
}

impl PartitionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, d: usize, max_parts: usize) -> Arc<Vec<Partition>> {
        if let Some(v) = self.memo.get(&(d, max_parts)) {
            return v.clone();
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill(d, d, max_parts, &mut cur, &mut out);
        let v = Arc::new(out);
        self.memo.insert((d, max_parts), v.clone());
        v
    }
}

fn fill(rest: usize, max_part: usize, parts_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if parts_left == 0 {
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        // the remaining parts can hold at most part * (parts_left - 1)
        if part * parts_left < rest {
            break;
        }
        cur.push(part);
        fill(rest - part, part, parts_left - 1, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(c_p_constant(&Partition::empty(), 0).unwrap(), Rational::one());
        assert_eq!(c_p_constant(&Partition::new(vec![1, 1]).unwrap(), 2).unwrap(), Rational::one());
        assert_eq!(c_p_constant(&Partition::new(vec![2, 1, 1]).unwrap(), 4).unwrap(), Rational::from_i64(6));
        assert!(c_p_constant(&Partition::new(vec![3]).unwrap(), 2).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let mut cache = PartitionCache::new();
        // p(1..=8) = 1, 2, 3, 5, 7, 11, 15, 22
        let counts: Vec<usize> = (1..=8).map(|d| cache.get(d, d).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(cache.get(6, 2).len(), 4);
        assert_eq!(cache.get(0, 3).len(), 1);
    }
}
