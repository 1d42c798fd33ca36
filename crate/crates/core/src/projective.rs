//! Rational points of P¹ and P² over GF(q) in normalized coordinates.
//!
//! A point is normalized when its first nonzero coordinate is 1. Enumeration
//! order is lexicographic on the normalized coordinate bits, which puts
//! `(0:0:1)` first, then `(0:1:z)`, then `(1:y:z)`.

use serde::Serialize;

use crate::field::{FieldElement, FieldSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProjPoint2 {
    pub x: FieldElement,
    pub y: FieldElement,
    pub z: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProjPoint1 {
    pub s: FieldElement,
    pub t: FieldElement,
}

impl ProjPoint2 {
    pub fn coords(&self) -> [u16; 3] {
        [self.x.0, self.y.0, self.z.0]
    }
}

impl std::fmt::Display for ProjPoint2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{}:{})", self.x, self.y, self.z)
    }
}

impl std::fmt::Display for ProjPoint1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{})", self.s, self.t)
    }
}

/// Scales `(x, y, z)` so the first nonzero coordinate is 1.
pub fn normalize(field: &FieldSpec, x: FieldElement, y: FieldElement, z: FieldElement) -> Result<ProjPoint2> {
    let lead = [x, y, z].into_iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let inv = field.inv(lead)?;
    Ok(ProjPoint2 { x: field.mul(x, inv)?, y: field.mul(y, inv)?, z: field.mul(z, inv)? })
}

pub fn normalize_p1(field: &FieldSpec, s: FieldElement, t: FieldElement) -> Result<ProjPoint1> {
    let lead = [s, t].into_iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let inv = field.inv(lead)?;
    Ok(ProjPoint1 { s: field.mul(s, inv)?, t: field.mul(t, inv)? })
}

/// All `q^2 + q + 1` points of P²(GF(q)).
pub fn enumerate_p2(field: &FieldSpec) -> Vec<ProjPoint2> {
    let q = field.q() as u16;
    let mut out = Vec::with_capacity((q as usize).pow(2) + q as usize + 1);
    out.push(ProjPoint2 { x: FieldElement(0), y: FieldElement(0), z: FieldElement(1) });
    for z in 0..q {
        out.push(ProjPoint2 { x: FieldElement(0), y: FieldElement(1), z: FieldElement(z) });
    }
    for y in 0..q {
        for z in 0..q {
            out.push(ProjPoint2 { x: FieldElement(1), y: FieldElement(y), z: FieldElement(z) });
        }
    }
    out
}

/// All `q + 1` points of P¹(GF(q)): `(0:1)` first, then `(1:t)`.
pub fn enumerate_p1(field: &FieldSpec) -> Vec<ProjPoint1> {
    let q = field.q() as u16;
    let mut out = Vec::with_capacity(q as usize + 1);
    out.push(ProjPoint1 { s: FieldElement(0), t: FieldElement(1) });
    for t in 0..q {
        out.push(ProjPoint1 { s: FieldElement(1), t: FieldElement(t) });
    }
    out
}
