//! Irreducibility over GF(2) by trial division, and a sufficient test for
//! absolute irreducibility via simple points over small extensions.

use serde::{Serialize, Serializer};

use super::{monomial_count, Form, PlaneCurve};
use crate::field::FieldSpec;
use crate::projective::enumerate_p2;

use super::singular::is_simple_point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbsIrreducible {
    Yes,
    No,
    Unknown,
    /// Not computed (search only tests tally candidates).
    Untested,
}

impl AbsIrreducible {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbsIrreducible::Yes => "yes",
            AbsIrreducible::No => "no",
            AbsIrreducible::Unknown => "unknown",
            AbsIrreducible::Untested => "untested",
        }
    }
}

impl std::fmt::Display for AbsIrreducible {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for AbsIrreducible {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Exact division of homogeneous forms in the packed layout.
///
/// Lex order with `x > y > z` on forms of one degree is the order of the
/// packed bit positions, so the leading term is the highest set bit, and
/// multiplying by a monomial of the complementary degree stays in the layout.
fn divides_form(f: &Form, g: &Form) -> bool {
    if g.degree > f.degree {
        return false;
    }
    let (fd, gd) = (f.dense(), g.dense());
    // z-exponent of the leading terms: k = deg - i - j
    let lg = 63 - gd.leading_zeros();
    let kg = g.degree - lg / 8 - lg % 8;
    let mut r = fd;
    while r != 0 {
        let lr = 63 - r.leading_zeros();
        let (ir, jr) = (lr / 8, lr % 8);
        let kr = f.degree - ir - jr;
        if ir < lg / 8 || jr < lg % 8 || kr < kg {
            return false;
        }
        r ^= gd << (lr - lg);
    }
    true
}

/// True iff no form of degree `1..=d/2` over GF(2) divides `f`.
pub fn is_irreducible_over_f2(curve: &PlaneCurve) -> bool {
    let f = curve.form();
    for e in 1..=f.degree / 2 {
        for mask in 1..(1u32 << monomial_count(e)) {
            if divides_form(f, &Form { degree: e, mask }) {
                return false;
            }
        }
    }
    true
}

/// Sufficient test for absolute irreducibility.
///
/// If `f` is irreducible over GF(2), its geometric components are `s`
/// conjugates of equal degree, so `s | d`. A simple point over GF(2^k) lies on
/// exactly one component, which Frobenius^k must then fix, so `s | k`. Simple
/// points are sought over GF(2), GF(4) and GF(8) in that order until the
/// divisibility constraints force `s = 1`.
pub fn is_absolutely_irreducible(curve: &PlaneCurve) -> AbsIrreducible {
    if !is_irreducible_over_f2(curve) {
        return AbsIrreducible::No;
    }
    let mut s_bound = curve.degree();
    for m in 1..=3 {
        let field = FieldSpec::cached(m).expect("small fields are valid");
        if enumerate_p2(&field).iter().any(|p| is_simple_point(curve, p, &field)) {
            s_bound = num_integer::gcd(s_bound, m);
            if s_bound == 1 {
                return AbsIrreducible::Yes;
            }
        }
    }
    AbsIrreducible::Unknown
}
