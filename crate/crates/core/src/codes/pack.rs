use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{LinearCode, Semantics, WeightDistribution};
use crate::error::{Error, Result};

/// `w_C(2^n)` for a code of length `n`.
///
/// Every coefficient satisfies `A_i ≤ C(n, i) < 2^n` (for `n ≥ 1`), so the
/// base-`2^n` digits of the result are exactly the coefficients.
pub fn pack_eval(c: &LinearCode) -> Result<BigUint> {
    let dist = c.weight_distribution(Semantics::Codeword)?;
    let n = c.length();
    let mut acc = BigUint::zero();
    for (i, a) in dist.counts().iter().enumerate() {
        acc += a << (n * i);
    }
    Ok(acc)
}

/// Reads `n + 1` base-`2^n` digits of `v` as `A_0..A_n`.
///
/// Fails when `v` has a nonzero digit beyond position `n`, i.e. when it is
/// not the packed enumerator of any length-`n` code.
pub fn unpack_coefficients(v: &BigUint, n: usize) -> Result<WeightDistribution> {
    if n == 0 {
        if !v.is_one() {
            return Err(Error::Format(format!(
                "a length-0 code packs to 1, got {v}"
            )));
        }
        return Ok(WeightDistribution::new(vec![BigUint::one()], Semantics::Codeword));
    }
    let mask = (BigUint::one() << n) - 1u32;
    let mut rest = v.clone();
    let mut counts = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        counts.push(&rest & &mask);
        rest >>= n;
    }
    if !rest.is_zero() {
        return Err(Error::Format(format!(
            "{v} has a base-2^{n} digit beyond position {n}; it is not a packed enumerator of length {n}"
        )));
    }
    if counts[0].is_zero() {
        return Err(Error::Format(format!(
            "{v} has A_0 = 0; every code contains the zero word"
        )));
    }
    Ok(WeightDistribution::new(counts, Semantics::Codeword))
}
