use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::is_prime;

/// Number of index-`p^e` character groups of type I(A) on a group with
/// `cusp_count` cusps: `p^(e(t-2)) + p^(e(t-3)) + ... + 1`.
pub fn count_type_ia_groups(cusp_count: u32, p: u64, e: u32) -> Result<BigUint> {
    if cusp_count < 2 {
        return Err(Error::InvalidInput("cusp count must be at least 2".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidInput("exponent e must be positive".into()));
    }
    let step = BigUint::from(p).pow(e);
    let mut term = BigUint::one();
    let mut sum = BigUint::zero();
    for _ in 0..cusp_count - 1 {
        sum += &term;
        term *= &step;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(count_type_ia_groups(2, 7, 3).unwrap(), BigUint::one());
        assert_eq!(count_type_ia_groups(3, 2, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(count_type_ia_groups(4, 3, 1).unwrap(), BigUint::from(13u32));
        assert!(count_type_ia_groups(1, 2, 1).is_err());
        assert_eq!(count_type_ia_groups(3, 4, 1), Err(Error::NotPrime(4)));
    }
}
