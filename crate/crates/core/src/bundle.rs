//! Ranks and degrees of tensor and symmetric powers of vector bundles on a
//! curve.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::{Error, Result};

/// A bundle known only by rank and degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BundleDescriptor {
    pub rank: u64,
    pub degree: i64,
}

impl BundleDescriptor {
    pub fn new(rank: u64, degree: i64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("bundle rank must be at least 1".into()));
        }
        Ok(BundleDescriptor { rank, degree })
    }
}

/// `C(r, k)`, zero for `k < 0` or `k > r`.
pub fn binom(r: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > r {
        return BigUint::zero();
    }
    let k = (k as u64).min(r - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (r - i) / (i + 1);
    }
    acc
}

/// `deg(E ⊗ F) = rank F · deg E + rank E · deg F`.
pub fn tensor_degree(e: BundleDescriptor, f: BundleDescriptor) -> i128 {
    f.rank as i128 * e.degree as i128 + e.rank as i128 * f.degree as i128
}

/// Rank of `Sⁿ E` for `E` of rank `r`: `C(n+r-1, r-1)`.
pub fn symm_rank(n: u64, r: u64) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    Ok(binom(n + r - 1, r as i64 - 1))
}

/// Degree of `Sⁿ E`: `(d n / r) · C(n+r-1, r-1)`.
pub fn symm_degree(n: u64, r: u64, d: i64) -> Result<BigInt> {
    let rank = BigInt::from(symm_rank(n, r)?);
    let v = BigRational::new(BigInt::from(d) * n, BigInt::from(r)) * BigRational::from_integer(rank);
    if !v.is_integer() {
        return Err(Error::NonIntegral(format!("deg S^{n} of rank {r}, degree {d} = {v}")));
    }
    Ok(v.to_integer())
}

/// Whether summands of ranks `parts` can add up to `Sⁿ` of a rank `r` bundle.
pub fn atiyah_rank_sum_check(n: u64, r: u64, parts: &[u64]) -> Result<bool> {
    if parts.contains(&0) {
        return Err(Error::InvalidArgument("summand ranks must be at least 1".into()));
    }
    let total: BigUint = parts.iter().map(|&p| BigUint::from(p)).sum();
    Ok(total == symm_rank(n, r)?)
}

/// `symm_rank` as `u64`, for callers that know the value is small.
pub fn symm_rank_u64(n: u64, r: u64) -> Result<u64> {
    symm_rank(n, r)?.to_u64().ok_or_else(|| Error::Range(format!("S^{n} rank {r} does not fit in 64 bits")))
}
