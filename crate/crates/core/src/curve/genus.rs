//! Genus bounds from point counts and from the plane model.

use num_integer::Roots;

use crate::{Error, Result};

/// `floor(2 sqrt(q))`, exactly.
pub fn two_sqrt_floor(q: u64) -> u64 {
    (4 * q).sqrt()
}

/// Upper bound on the number of rational points of a genus-`g` curve.
pub fn serre_bound(q: u64, g: u64) -> u64 {
    q + 1 + g * two_sqrt_floor(q)
}

/// Smallest `g` whose bound admits `p` points.
pub fn serre_genus_lower(p: u64, q: u64) -> u64 {
    if p <= q + 1 {
        return 0;
    }
    (p - q - 1).div_ceil(two_sqrt_floor(q))
}

/// `(d-1)(d-2)/2 - r`, floored at 0.
pub fn plane_genus_upper(d: u32, r: u32) -> u32 {
    let g = (d.saturating_sub(1)) * (d.saturating_sub(2)) / 2;
    g.saturating_sub(r)
}

/// Bound on the sum of multiplicities of `r >= 2` singular points on an
/// irreducible plane curve of degree `d`.
pub fn multiplicity_sum_bound(d: u32, r: u32) -> Result<u32> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "multiplicity sum bound needs at least 2 singular points, got {r}"
        )));
    }
    Ok(d / 2 * r + d % 2)
}
