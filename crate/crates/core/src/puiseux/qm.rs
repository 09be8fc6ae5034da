use std::fmt;

use super::partition::{Partition, PartitionCache};
use crate::exactnum::{FieldElement, Rational};

/// One summand `coeff * h_j^(n)(a_0) * prod a_(d_i)` of `Q_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct QmTerm {
    pub coeff: Rational,
    pub partition: Partition,
    /// `j = M - d`.
    pub h_index: usize,
}

impl QmTerm {
    /// Order of the x-derivative of `h_j`, the number of parts.
    pub fn derivative(&self) -> usize {
        self.partition.n()
    }
}

impl fmt::Display for QmTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if !self.coeff.is_one() {
            factors.push(self.coeff.to_string());
        }
        let parts = self.partition.parts();
        let mut k = 0;
        while k < parts.len() {
            let run = parts[k..].iter().take_while(|&&x| x == parts[k]).count();
            factors.push(if run == 1 { format!("a_{}", parts[k]) } else { format!("a_{}^{run}", parts[k]) });
            k += run;
        }
        let n = self.derivative();
        let h = if n <= 4 { format!("h{}", "'".repeat(n)) } else { format!("h^({n})") };
        factors.push(format!("{h}_{}(a_0)", self.h_index));
        f.write_str(&factors.join("*"))
    }
}

/// Symbolic `Q_M`: the coefficient of `q^M` in `g(a_0 + a_1 q + ..., q)`
/// when `g = sum_j h_j(x) q^j`. Partitions with more than `max_parts` parts
/// are dropped, since `h_j^(n) = 0` once `n` exceeds the x-degree.
pub fn qm_terms(m: usize, max_parts: Option<usize>, cache: &mut PartitionCache) -> Vec<QmTerm> {
    let mut out = Vec::new();
    for d in 0..=m {
        for p in cache.get(d, max_parts.unwrap_or(d)).iter() {
            out.push(QmTerm { coeff: p.symmetry_weight(), partition: p.clone(), h_index: m - d });
        }
    }
    out.sort_by(|a, b| b.partition.parts().cmp(a.partition.parts()));
    out
}

/// Numeric `Q_M` from `a_0..a_(k-1)` (later `a_i` count as zero) and
/// `h(j, n) = h_j^(n)(a_0)`.
pub fn qm_value<C: FieldElement>(
    m: usize,
    a: &[C],
    h: impl Fn(usize, usize) -> C,
    max_parts: usize,
    cache: &mut PartitionCache,
) -> C {
    let ctx = a[0].ctx();
    let mut acc = C::zero(&ctx);
    for d in 0..=m {
        for p in cache.get(d, max_parts.min(d)).iter() {
            if p.parts().iter().any(|&i| i >= a.len() || a[i].is_zero()) {
                continue;
            }
            let hv = h(m - d, p.n());
            if hv.is_zero() {
                continue;
            }
            let mut term = hv.scale_rational(&p.symmetry_weight());
            for &i in p.parts() {
                term = term.times(&a[i]);
            }
            acc = acc.plus(&term);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q4_has_twelve_terms() {
        let mut cache = PartitionCache::new();
        let shown: Vec<String> = qm_terms(4, None, &mut cache).iter().map(|t| t.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "a_4*h'_0(a_0)",
                "a_3*a_1*h''_0(a_0)",
                "a_3*h'_1(a_0)",
                "1/2*a_2^2*h''_0(a_0)",
                "1/2*a_2*a_1^2*h'''_0(a_0)",
                "a_2*a_1*h''_1(a_0)",
                "a_2*h'_2(a_0)",
                "1/24*a_1^4*h''''_0(a_0)",
                "1/6*a_1^3*h'''_1(a_0)",
                "1/2*a_1^2*h''_2(a_0)",
                "a_1*h'_3(a_0)",
                "h_4(a_0)",
            ]
        );
        assert_eq!(qm_terms(4, Some(2), &mut cache).len(), 9);
    }
}
