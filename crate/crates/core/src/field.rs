//! Arithmetic in GF(2^m) for `1 <= m <= 11`.
//!
//! Elements use the polynomial basis: bit `i` of an element is the
//! coefficient of `x^i`. Every field is built from the smallest (by bit
//! value) monic irreducible polynomial of its degree, so that element
//! encodings are reproducible. Multiplication goes through discrete log
//! tables built over a primitive element; the tables are checked against
//! schoolbook multiplication when the field is constructed.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::{Error, Result};

pub const MAX_DEGREE: u32 = 11;

/// An element of GF(2^m), stored as its polynomial-basis bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    // log[0] is unused
    log: Vec<u16>,
    // exp has length 2(q-1) so log a + log b never needs a reduction
    exp: Vec<u16>,
}

/// Arithmetic context for GF(2^m). Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec {
    m: u32,
    q: u32,
    reduction: u32,
    generator: u16,
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("m", &self.m)
            .field("q", &self.q)
            .field("reduction", &format_args!("{:#x}", self.reduction))
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.reduction == other.reduction
    }
}

impl Eq for FieldSpec {}

/// Carry-less product of two GF(2) polynomials.
pub(crate) fn clmul(mut a: u32, mut b: u32) -> u32 {
    let mut r = 0;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` over GF(2).
pub(crate) fn poly_rem(mut a: u32, b: u32) -> u32 {
    debug_assert!(b != 0);
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible_gf2(p: u32) -> bool {
    let d = poly_degree(p);
    if d < 1 {
        return false;
    }
    for dd in 1..=d / 2 {
        for cand in (1u32 << dd)..(1u32 << (dd + 1)) {
            if poly_rem(p, cand) == 0 {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `m` over GF(2), by bit value.
pub fn smallest_irreducible(m: u32) -> u32 {
    ((1u32 << m)..(1u32 << (m + 1)))
        .find(|&p| is_irreducible_gf2(p))
        .expect("irreducible polynomials exist in every degree")
}

fn schoolbook_mul(a: u32, b: u32, m: u32, reduction: u32) -> u32 {
    if m == 1 {
        return a & b;
    }
    poly_rem(clmul(a, b), reduction)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn schoolbook_pow(a: u32, mut e: u32, m: u32, reduction: u32) -> u32 {
    let mut base = a;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = schoolbook_mul(acc, base, m, reduction);
        }
        base = schoolbook_mul(base, base, m, reduction);
        e >>= 1;
    }
    acc
}

impl FieldSpec {
    /// Builds GF(2^m) from the smallest irreducible polynomial of degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::DegreeOutOfRange(m));
        }
        let q = 1u32 << m;
        let reduction = smallest_irreducible(m);
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&p| order == 1 || schoolbook_pow(g, order / p, m, reduction) != 1))
            .expect("the multiplicative group is cyclic");

        let mut log = vec![0u16; q as usize];
        let mut exp = vec![0u16; 2 * order as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x as u16;
            exp[i + order as usize] = x as u16;
            log[x as usize] = i as u16;
            x = schoolbook_mul(x, generator, m, reduction);
        }
        let field = FieldSpec { m, q, reduction, generator: generator as u16, tables: Arc::new(Tables { log, exp }) };
        field.validate_tables()?;
        Ok(field)
    }

    /// Shared instance for GF(2^m); fields are immutable so one copy suffices.
    pub fn cached(m: u32) -> Result<Self> {
        static CACHE: [OnceLock<FieldSpec>; MAX_DEGREE as usize] = [const { OnceLock::new() }; MAX_DEGREE as usize];
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::DegreeOutOfRange(m));
        }
        let slot = &CACHE[m as usize - 1];
        if let Some(f) = slot.get() {
            return Ok(f.clone());
        }
        let f = FieldSpec::new(m)?;
        Ok(slot.get_or_init(|| f).clone())
    }

    fn validate_tables(&self) -> Result<()> {
        let t = &self.tables;
        for a in 1..self.q {
            if t.exp[t.log[a as usize] as usize] as u32 != a {
                return Err(Error::TableValidation(format!("antilog(log({a})) != {a}")));
            }
        }
        // spot-check the table product against the schoolbook product
        let step = (self.q / 64).max(1);
        for a in (0..self.q).step_by(step as usize) {
            for b in (0..self.q).step_by(step as usize) {
                let table = self.mul_raw(a as u16, b as u16) as u32;
                if table != schoolbook_mul(a, b, self.m, self.reduction) {
                    return Err(Error::TableValidation(format!("product {a}*{b} disagrees")));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// The reduction polynomial as bits (`x^m` is bit `m`).
    #[inline]
    pub fn reduction(&self) -> u32 {
        self.reduction
    }

    /// The primitive element the log tables are built on.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    /// Reduction polynomial rendered as `x^8+x^4+x^3+x+1`.
    pub fn reduction_string(&self) -> String {
        let mut terms = Vec::new();
        for i in (0..=self.m).rev() {
            if self.reduction >> i & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                });
            }
        }
        terms.join("+")
    }

    /// Checked conversion from raw bits.
    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits < self.q {
            Ok(FieldElement(bits as u16))
        } else {
            Err(Error::NotInField { bits, q: self.q })
        }
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if (a.0 as u32) < self.q {
            Ok(())
        } else {
            Err(Error::NotInField { bits: a.0 as u32, q: self.q })
        }
    }

    /// Checked addition; both operands must lie in this field.
    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement(a.0 ^ b.0))
    }

    /// Checked multiplication; both operands must lie in this field.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement(self.mul_raw(a.0, b.0)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement(self.inv_raw(a.0)))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let bi = self.inv(b)?;
        self.mul(a, bi)
    }

    /// Square-and-multiply exponentiation; `pow(a, 0) = 1` including `a = 0`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.pow_raw(a.0, e))
    }

    /// All `q` elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|b| FieldElement(b as u16))
    }

    /// Absolute trace to GF(2), `a + a^2 + ... + a^(2^(m-1))`.
    pub fn trace(&self, a: u16) -> u16 {
        let mut t = a;
        let mut s = a;
        for _ in 1..self.m {
            s = self.mul_raw(s, s);
            t ^= s;
        }
        t
    }

    // Unchecked hot-path operations on raw bits.

    #[inline]
    pub fn mul_raw(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.tables;
        t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
    }

    #[inline]
    pub fn sqr_raw(&self, a: u16) -> u16 {
        self.mul_raw(a, a)
    }

    #[inline]
    pub fn inv_raw(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        let t = &*self.tables;
        let order = self.q as usize - 1;
        t.exp[(order - t.log[a as usize] as usize) % order]
    }

    pub fn pow_raw(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = 1u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Smallest `m'` such that the element lies in the subfield GF(2^m').
    pub fn subfield_degree(&self, a: u16) -> u32 {
        (1..=self.m).filter(|d| self.m.is_multiple_of(*d)).find(|&d| self.pow_raw(a, 1u64 << d) == a).unwrap_or(self.m)
    }
}

/// `field-table` rendering: header lines and, for `m <= 4`, the CSV product table.
pub fn multiplication_table_csv(field: &FieldSpec) -> String {
    let mut out = String::new();
    out.push('*');
    for b in 0..field.q() {
        out.push_str(&format!(",{b}"));
    }
    out.push('\n');
    for a in 0..field.q() {
        out.push_str(&a.to_string());
        for b in 0..field.q() {
            out.push_str(&format!(",{}", field.mul_raw(a as u16, b as u16)));
        }
        out.push('\n');
    }
    out
}
