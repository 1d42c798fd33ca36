//! Homogeneous polynomials in GF(2)[x, y, z] of degree at most 6.
//!
//! A polynomial of degree `d` is a bit mask over the `C(d+2, 2)` monomials
//! `x^i y^j z^k`, `i + j + k = d`. Monomials are ranked lexicographically on
//! `(i, j)` with `i` descending, then `j` descending, so bit 0 is `x^d`,
//! bit 1 is `x^(d-1) y`, bit 2 is `x^(d-1) z`, and the last bit is `z^d`.
//! The mask is the integer identifier of the curve.

mod count;
mod genus;
mod irreducible;
mod report;
mod singular;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::field::{FieldElement, FieldSpec};
use crate::projective::ProjPoint2;
use crate::{Error, Result};

pub use count::{count_points, count_points_exhaustive, singular_points};
pub use genus::{multiplicity_sum_bound, plane_genus_upper, serre_bound, serre_genus_lower, two_sqrt_floor};
pub use irreducible::{is_absolutely_irreducible, is_irreducible_over_f2, AbsIrreducible};
pub use report::{analyze_curve, analyze_with, CurveReport};
pub use singular::{
    analyze_singularity, blowup_bonus, is_simple_point, singularity_records, BlowupBonus, LinearForm, SingularityRecord,
};

pub const MAX_CURVE_DEGREE: u32 = 6;

/// Number of monomials of degree `d` in three variables.
pub const fn monomial_count(d: u32) -> u32 {
    (d + 1) * (d + 2) / 2
}

pub(crate) struct MonomialTable {
    /// `(i, j, k)` by bit index.
    pub exps: Vec<(u8, u8, u8)>,
    /// Position `8i + j` in the dense layout, by bit index.
    pub dense_pos: Vec<u8>,
    /// Inverse of `dense_pos`; `u8::MAX` where unused.
    pub rank_of_dense: [u8; 64],
}

pub(crate) fn monomial_table(d: u32) -> &'static MonomialTable {
    static TABLES: [OnceLock<MonomialTable>; 13] = [const { OnceLock::new() }; 13];
    TABLES[d as usize].get_or_init(|| {
        let mut exps = Vec::new();
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                exps.push((i as u8, j as u8, (d - i - j) as u8));
            }
        }
        let dense_pos: Vec<u8> = exps.iter().map(|&(i, j, _)| 8 * i + j).collect();
        let mut rank_of_dense = [u8::MAX; 64];
        if d <= 6 {
            for (r, &p) in dense_pos.iter().enumerate() {
                rank_of_dense[p as usize] = r as u8;
            }
        }
        MonomialTable { exps, dense_pos, rank_of_dense }
    })
}

/// Bit index of `x^i y^j z^(d-i-j)`.
pub fn monomial_index(d: u32, i: u32, j: u32) -> u32 {
    // rows for i' > i come first: sum_{i'=i+1}^{d} (d - i' + 1)
    let before: u32 = (i + 1..=d).map(|ii| d - ii + 1).sum();
    before + (d - i - j)
}

/// A homogeneous form that may be zero; partial derivatives and products
/// live here. Degrees up to 6 are supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub degree: u32,
    pub mask: u32,
}

impl Form {
    pub fn new(degree: u32, mask: u32) -> Result<Self> {
        if degree > MAX_CURVE_DEGREE {
            return Err(Error::CurveDegree(degree));
        }
        let bits = monomial_count(degree);
        if bits < 32 && mask >> bits != 0 {
            return Err(Error::CurveMask { degree, mask: mask as u64 });
        }
        Ok(Form { degree, mask })
    }

    pub fn zero(degree: u32) -> Self {
        Form { degree, mask: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn monomials(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        let t = monomial_table(self.degree);
        (0..monomial_count(self.degree)).filter(move |b| self.mask >> b & 1 == 1).map(move |b| {
            let (i, j, k) = t.exps[b as usize];
            (i as u32, j as u32, k as u32)
        })
    }

    pub fn from_monomials(degree: u32, monos: &[(u32, u32, u32)]) -> Result<Self> {
        let mut mask = 0u32;
        for &(i, j, k) in monos {
            if i + j + k != degree {
                return Err(Error::Parse(format!("monomial x^{i}y^{j}z^{k} is not of degree {degree}")));
            }
            mask ^= 1 << monomial_index(degree, i, j);
        }
        Form::new(degree, mask)
    }

    /// `f(x, y, 1)` packed with `x^i y^j` at bit `8i + j`.
    pub(crate) fn dense(&self) -> u64 {
        let t = monomial_table(self.degree);
        let mut out = 0u64;
        let mut m = self.mask;
        while m != 0 {
            let b = m.trailing_zeros();
            out |= 1 << t.dense_pos[b as usize];
            m &= m - 1;
        }
        out
    }

    pub(crate) fn from_dense(degree: u32, dense: u64) -> Form {
        let t = monomial_table(degree);
        let mut mask = 0u32;
        let mut m = dense;
        while m != 0 {
            let p = m.trailing_zeros();
            let r = t.rank_of_dense[p as usize];
            debug_assert!(r != u8::MAX, "dense bit {p} invalid for degree {degree}");
            mask |= 1 << r;
            m &= m - 1;
        }
        Form { degree, mask }
    }

    /// Product of two forms; the result degree must not exceed 6.
    pub fn mul(&self, other: &Form) -> Form {
        let degree = self.degree + other.degree;
        assert!(degree <= MAX_CURVE_DEGREE, "product degree {degree} exceeds 6");
        Form::from_dense(degree, dense_mul(self.dense(), other.dense()))
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.degree, other.degree);
        Form { degree: self.degree, mask: self.mask ^ other.mask }
    }

    /// Formal partial derivatives `(f_x, f_y, f_z)`. In characteristic 2 a
    /// monomial survives differentiation in a variable iff that exponent is odd.
    pub fn partials(&self) -> [Form; 3] {
        if self.degree == 0 {
            return [Form::zero(0); 3];
        }
        let d = self.degree - 1;
        let mut out = [Form::zero(d); 3];
        for (i, j, k) in self.monomials() {
            if i % 2 == 1 {
                out[0].mask ^= 1 << monomial_index(d, i - 1, j);
            }
            if j % 2 == 1 {
                out[1].mask ^= 1 << monomial_index(d, i, j - 1);
            }
            if k % 2 == 1 {
                out[2].mask ^= 1 << monomial_index(d, i, j);
            }
        }
        out
    }

    /// Value at a point of P²(GF(q)) (or any representative vector).
    pub fn eval_raw(&self, field: &FieldSpec, x: u16, y: u16, z: u16) -> u16 {
        let d = self.degree as usize;
        let mut px = [1u16; 7];
        let mut py = [1u16; 7];
        let mut pz = [1u16; 7];
        for e in 1..=d {
            px[e] = field.mul_raw(px[e - 1], x);
            py[e] = field.mul_raw(py[e - 1], y);
            pz[e] = field.mul_raw(pz[e - 1], z);
        }
        let mut acc = 0;
        for (i, j, k) in self.monomials() {
            acc ^= field.mul_raw(field.mul_raw(px[i as usize], py[j as usize]), pz[k as usize]);
        }
        acc
    }

    /// `f(L0, L1, L2)` where `rows[r]` holds the GF(2) coefficients of `L_r`
    /// on `(x, y, z)` as bits 2, 1, 0.
    pub fn substitute(&self, rows: [u8; 3]) -> Form {
        let lin: Vec<Form> = rows
            .iter()
            .map(|&r| {
                let mut mask = 0;
                if r & 4 != 0 {
                    mask |= 1 << monomial_index(1, 1, 0);
                }
                if r & 2 != 0 {
                    mask |= 1 << monomial_index(1, 0, 1);
                }
                if r & 1 != 0 {
                    mask |= 1 << monomial_index(1, 0, 0);
                }
                Form { degree: 1, mask }
            })
            .collect();
        let mut acc = Form::zero(self.degree);
        for (i, j, k) in self.monomials() {
            let mut term = Form { degree: 0, mask: 1 };
            for _ in 0..i {
                term = term.mul(&lin[0]);
            }
            for _ in 0..j {
                term = term.mul(&lin[1]);
            }
            for _ in 0..k {
                term = term.mul(&lin[2]);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Whether the variable (`0 = x`, `1 = y`, `2 = z`) divides the form.
    pub fn divisible_by_variable(&self, var: usize) -> bool {
        self.monomials().all(|e| [e.0, e.1, e.2][var] > 0)
    }

    /// A square in GF(2)[x,y,z] is exactly a form with all exponents even.
    pub fn is_square(&self) -> bool {
        self.monomials().all(|(i, j, k)| i % 2 == 0 && j % 2 == 0 && k % 2 == 0)
    }

    pub fn term_count(&self) -> u32 {
        self.mask.count_ones()
    }
}

/// Product of two packed dense forms over GF(2).
pub(crate) fn dense_mul(a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    let mut m = a;
    while m != 0 {
        let p = m.trailing_zeros();
        out ^= b << p;
        m &= m - 1;
    }
    out
}

fn fmt_monomial(i: u32, j: u32, k: u32) -> String {
    let mut parts = Vec::new();
    for (v, e) in [("x", i), ("y", j), ("z", k)] {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.monomials().map(|(i, j, k)| fmt_monomial(i, j, k)).collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// A plane curve: a nonzero homogeneous polynomial over GF(2), degree 1..=6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneCurve {
    form: Form,
}

impl PlaneCurve {
    pub fn new(degree: u32, mask: u32) -> Result<Self> {
        if !(1..=MAX_CURVE_DEGREE).contains(&degree) {
            return Err(Error::CurveDegree(degree));
        }
        if mask == 0 {
            return Err(Error::CurveMask { degree, mask: 0 });
        }
        Ok(PlaneCurve { form: Form::new(degree, mask)? })
    }

    pub fn from_form(form: Form) -> Result<Self> {
        Self::new(form.degree, form.mask)
    }

    pub fn from_monomials(degree: u32, monos: &[(u32, u32, u32)]) -> Result<Self> {
        Self::from_form(Form::from_monomials(degree, monos)?)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.form.degree
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.form.mask
    }

    #[inline]
    pub fn form(&self) -> &Form {
        &self.form
    }

    /// The integer identifier of the curve (its monomial mask).
    pub fn alpha_encode(&self) -> u32 {
        self.form.mask
    }

    /// Inverse of [`alpha_encode`](Self::alpha_encode); `n` must be in `1..2^M`.
    pub fn alpha_decode(degree: u32, n: u64) -> Result<Self> {
        if !(1..=MAX_CURVE_DEGREE).contains(&degree) {
            return Err(Error::CurveDegree(degree));
        }
        let limit = 1u64 << monomial_count(degree);
        if n == 0 || n >= limit {
            return Err(Error::CurveMask { degree, mask: n });
        }
        Self::new(degree, n as u32)
    }

    pub fn monomials(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.form.monomials()
    }

    pub fn partials(&self) -> [Form; 3] {
        self.form.partials()
    }

    pub fn evaluate(&self, p: &ProjPoint2, field: &FieldSpec) -> FieldElement {
        FieldElement(self.form.eval_raw(field, p.x.0, p.y.0, p.z.0))
    }

    pub fn substitute(&self, rows: [u8; 3]) -> Form {
        self.form.substitute(rows)
    }

    /// Divisible by `x`, `y` or `z` (and not itself a line).
    pub fn has_variable_factor(&self) -> bool {
        self.degree() > 1 && (0..3).any(|v| self.form.divisible_by_variable(v))
    }

    pub fn is_square(&self) -> bool {
        self.degree() > 1 && self.form.is_square()
    }

    /// Klein quartic `x^3 y + y^3 z + x z^3`.
    pub fn klein_quartic() -> Self {
        Self::from_monomials(4, &[(3, 1, 0), (0, 3, 1), (1, 0, 3)]).unwrap()
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}; f={}", self.degree(), self.form)
    }
}

fn parse_monomial(term: &str) -> Result<(u32, u32, u32)> {
    let mut e = [0u32; 3];
    if term == "1" {
        return Ok((0, 0, 0));
    }
    for factor in term.split('*') {
        let factor = factor.trim();
        let (var, exp) = match factor.split_once('^') {
            Some((v, x)) => {
                let exp: u32 = x.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                (v.trim(), exp)
            }
            None => (factor, 1),
        };
        let idx = match var {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            _ => return Err(Error::Parse(format!("unknown variable '{var}' in '{term}'"))),
        };
        e[idx] += exp;
    }
    Ok((e[0], e[1], e[2]))
}

/// Parses `d=4; f=x^3*y+y^3*z+x*z^3`. The `d=` part may be omitted, in which
/// case the degree is taken from the first monomial. Repeated monomials cancel.
impl FromStr for PlaneCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (declared, body) = match s.split_once(';') {
            Some((head, tail)) => {
                let head = head.trim();
                let deg = head
                    .strip_prefix("d=")
                    .ok_or_else(|| Error::Parse(format!("expected 'd=<degree>', got '{head}'")))?
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad degree in '{head}'")))?;
                let tail = tail.trim();
                let body = tail
                    .strip_prefix("f=")
                    .ok_or_else(|| Error::Parse(format!("expected 'f=<polynomial>', got '{tail}'")))?;
                (Some(deg), body)
            }
            None => (None, s.strip_prefix("f=").unwrap_or(s)),
        };
        let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        if body.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let monos = body.split('+').map(parse_monomial).collect::<Result<Vec<_>>>()?;
        let degree = declared.unwrap_or_else(|| {
            let (i, j, k) = monos[0];
            i + j + k
        });
        PlaneCurve::from_monomials(degree, &monos)
    }
}
