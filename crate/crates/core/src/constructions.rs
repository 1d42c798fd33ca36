//! Concrete code families and parameter calculators.
//!
//! Explicit generator matrices exist for extended Reed–Solomon codes, their
//! direct products, and the codes on P¹×P¹. For ruled surfaces over curves of
//! positive genus only `[n, k, d]` parameters are computed.

use num_rational::Ratio;
use serde::Serialize;

use crate::code::{CodeParams, Distance, GeneratorMatrix};
use crate::field::FieldSpec;
use crate::projective::enumerate_p1;
use crate::{Error, Result};

/// Extended Reed–Solomon code: the forms `s^i t^(k-1-i)` evaluated at all
/// `q + 1` points of P¹. It is MDS, `[q+1, k, q+2-k]`.
pub fn ext_rs(field: &FieldSpec, k: usize) -> Result<GeneratorMatrix> {
    let q = field.q() as usize;
    if k == 0 || k > q + 1 {
        return Err(Error::Range(format!("extended RS dimension must be in 1..={}, got {k}", q + 1)));
    }
    let pts = enumerate_p1(field);
    let rows = (0..k)
        .map(|i| {
            pts.iter()
                .map(|p| {
                    // 0^0 = 1
                    field.mul_raw(field.pow_raw(p.s.0, i as u64), field.pow_raw(p.t.0, (k - 1 - i) as u64))
                })
                .collect()
        })
        .collect();
    GeneratorMatrix::new(field, rows)
}

/// Direct product: row `(i, j)`, column `(u, v)` holds `G1[i][u] · G2[j][v]`.
pub fn product_code(g1: &GeneratorMatrix, g2: &GeneratorMatrix) -> Result<GeneratorMatrix> {
    let (f1, f2) = (g1.field(), g2.field());
    if f1.q() != f2.q() {
        return Err(Error::FieldMismatch { left: f1.q(), right: f2.q() });
    }
    let mut rows = Vec::with_capacity(g1.k() * g2.k());
    for r1 in g1.rows() {
        for r2 in g2.rows() {
            let mut row = Vec::with_capacity(g1.n() * g2.n());
            for &x in r1 {
                for &y in r2 {
                    row.push(f1.mul_raw(x, y));
                }
            }
            rows.push(row);
        }
    }
    GeneratorMatrix::new(f1, rows)
}

/// Bihomogeneous forms of bidegree `(a, b)` on all `(q+1)^2` points of
/// P¹×P¹, columns ordered by the first factor then the second.
pub fn lomont1_generator(field: &FieldSpec, a: usize, b: usize) -> Result<GeneratorMatrix> {
    let q = field.q() as usize;
    if a > q || b > q {
        return Err(Error::Range(format!("need 0 <= a, b <= {q}, got a={a}, b={b}")));
    }
    let pts = enumerate_p1(field);
    let mono = |i: usize, deg: usize, s: u16, t: u16| {
        field.mul_raw(field.pow_raw(s, i as u64), field.pow_raw(t, (deg - i) as u64))
    };
    let mut rows = Vec::with_capacity((a + 1) * (b + 1));
    for i in 0..=a {
        for j in 0..=b {
            let mut row = Vec::with_capacity(pts.len() * pts.len());
            for p in &pts {
                let x = mono(i, a, p.s.0, p.t.0);
                for r in &pts {
                    row.push(field.mul_raw(x, mono(j, b, r.s.0, r.t.0)));
                }
            }
            rows.push(row);
        }
    }
    GeneratorMatrix::new(field, rows)
}

/// Parameters of the codes on ruled surfaces over P¹ with invariant `e`.
pub fn lomont1_params(q: u64, a: u64, b: u64, e: u64) -> Result<CodeParams> {
    if a > q || b > q {
        return Err(Error::Range(format!("need 0 <= a, b <= q = {q}, got a={a}, b={b}")));
    }
    let k: u64 = (0..=a).take_while(|&j| j * e <= b).map(|j| b - j * e + 1).sum();
    let d = (q + 1 - a) * (q + 1 - b);
    CodeParams::new((q + 1) * (q + 1), k, Distance::LowerBound(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Dimension {
    Exact(u64),
    /// Some Riemann–Roch correction terms were not certified to vanish.
    AtLeast(u64),
    /// No closed form; the string names the space whose dimension is `k`.
    Unknown(String),
}

impl Dimension {
    pub fn known(&self) -> Option<u64> {
        match self {
            Dimension::Exact(k) | Dimension::AtLeast(k) => Some(*k),
            Dimension::Unknown(_) => None,
        }
    }
}

/// Parameters with a possibly partial dimension and bookkeeping values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub n: u64,
    pub k: Dimension,
    /// Lower bound on the minimum distance.
    pub d: u64,
    pub l: Option<i64>,
    pub kappa: Option<String>,
    pub flags: Vec<String>,
}

impl FamilyParams {
    /// Singleton `n + 1 >= k + d` where `k` is known.
    pub fn singleton_ok(&self) -> bool {
        self.k.known().is_none_or(|k| self.n + 1 >= k + self.d)
    }

    pub fn to_code_params(&self) -> Option<CodeParams> {
        let k = self.k.known()?;
        CodeParams::new(self.n, k, Distance::LowerBound(self.d)).ok()
    }
}

/// Which closed form, if any, gives the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    Generic,
    /// A sum of two line bundles of degrees 0 and `-e`.
    Decomposable,
    /// The indecomposable degree-0 bundle over an elliptic curve.
    AtiyahDegreeZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuledInputs {
    pub q: u64,
    /// Genus of the base curve.
    pub g: u64,
    /// Number of rational points of the base curve.
    pub aleph: u64,
    /// Invariant of the normalized bundle.
    pub e: i64,
    /// Field characteristic.
    pub p: u64,
    pub ample: bool,
    pub a: u64,
    pub b: u64,
    pub kind: BundleKind,
}

impl RuledInputs {
    pub fn new(q: u64, g: u64, aleph: u64, e: i64, a: u64, b: u64) -> Self {
        RuledInputs { q, g, aleph, e, p: 2, ample: false, a, b, kind: BundleKind::Generic }
    }
}

/// The ampleness threshold κ.
pub fn kappa(e: i64, g: u64, p: u64) -> Ratio<i64> {
    if e >= 0 {
        Ratio::from_integer(e)
    } else if g < 2 {
        Ratio::new(e, 2)
    } else {
        Ratio::new(e, 2) + Ratio::new(g as i64 - 1, p as i64)
    }
}

/// Codes on a ruled surface over a curve of genus `g` with `ℵ` rational points.
pub fn ruled_params(inp: &RuledInputs) -> Result<FamilyParams> {
    let g = inp.g as i64;
    if inp.e < -g {
        return Err(Error::NotNormalized { e: inp.e, g });
    }
    if inp.aleph == 0 {
        return Err(Error::Range("the base curve needs a rational point".into()));
    }
    if inp.p == 0 {
        return Err(Error::Range("characteristic must be positive".into()));
    }
    let (a, b, e) = (inp.a as i64, inp.b as i64, inp.e);
    let kap = kappa(e, inp.g, inp.p);
    let l = if inp.ample { b - a * e } else { a * (kap.ceil().to_integer() - e) + b };
    let aleph = inp.aleph as i64;
    if l >= aleph {
        return Err(Error::TooManyFibers { l, aleph });
    }
    let n = (inp.q as i64 + 1) * aleph;
    let d = n - (aleph - l) * a - (inp.q as i64 + 1) * l;
    if d <= 0 {
        return Err(Error::NonPositiveDistance(d as i128));
    }
    let mut flags = Vec::new();
    let k = if inp.g == 0 {
        if e < 0 {
            return Err(Error::NotNormalized { e, g });
        }
        Dimension::Exact(decomposable_dimension(0, e as u64, inp.a, inp.b).0)
    } else {
        match inp.kind {
            BundleKind::Generic => Dimension::Unknown("h0(C, Sym^a(E) (x) O_C(b P0))".into()),
            BundleKind::Decomposable => {
                if e < 0 {
                    return Err(Error::Range("a decomposable normalized bundle has e >= 0".into()));
                }
                let (k, certified) = decomposable_dimension(inp.g, e as u64, inp.a, inp.b);
                if certified {
                    Dimension::Exact(k)
                } else {
                    flags.push("zeta unknown: k is a lower bound".into());
                    Dimension::AtLeast(k)
                }
            }
            BundleKind::AtiyahDegreeZero => {
                if inp.g != 1 || e != 0 {
                    return Err(Error::Range("the degree-0 indecomposable bundle needs g = 1, e = 0".into()));
                }
                if inp.b == 0 {
                    return Err(Error::Range("b = 0 has no closed-form dimension".into()));
                }
                Dimension::Exact((inp.a + 1) * inp.b)
            }
        }
    };
    Ok(FamilyParams { n: n as u64, k, d: d as u64, l: Some(l), kappa: Some(kap.to_string()), flags })
}

/// Per-summand Riemann–Roch: `Σ_j max(b - je - g + 1, 0)`, and whether every
/// summand has degree above `2g - 2` so its correction term vanishes.
fn decomposable_dimension(g: u64, e: u64, a: u64, b: u64) -> (u64, bool) {
    let mut k = 0u64;
    let mut certified = true;
    for j in (0..=a).take_while(|&j| j * e <= b) {
        let deg = (b - j * e) as i64;
        k += (deg - g as i64 + 1).max(0) as u64;
        if deg <= 2 * g as i64 - 2 {
            certified = false;
        }
    }
    (k, certified)
}

/// Codes from a decomposable bundle `O ⊕ O(-e)` over a curve of genus `g`.
pub fn decomposable_params(q: u64, g: u64, e: i64, aleph: u64, a: u64, b: u64) -> Result<FamilyParams> {
    if e < 0 {
        return Err(Error::Range(format!("decomposable case needs e >= 0, got {e}")));
    }
    if b >= aleph {
        return Err(Error::TooManyFibers { l: b as i64, aleph: aleph as i64 });
    }
    if a > q {
        return Err(Error::NonPositiveDistance((q as i128 + 1 - a as i128) * (aleph - b) as i128));
    }
    let (k, certified) = decomposable_dimension(g, e as u64, a, b);
    let mut flags = Vec::new();
    let k = if certified {
        Dimension::Exact(k)
    } else {
        flags.push("zeta unknown: k is a lower bound".into());
        Dimension::AtLeast(k)
    };
    Ok(FamilyParams { n: aleph * (q + 1), k, d: (q + 1 - a) * (aleph - b), l: Some(b as i64), kappa: None, flags })
}

/// Codes on the ruled surface of the degree-0 indecomposable bundle over an
/// elliptic curve with `ℵ` rational points.
pub fn lomont2_params(q: u64, aleph: u64, a: u64, b: u64) -> Result<CodeParams> {
    if b == 0 {
        return Err(Error::Range("b = 0 has no closed-form dimension".into()));
    }
    if b >= aleph {
        return Err(Error::TooManyFibers { l: b as i64, aleph: aleph as i64 });
    }
    if a > q {
        return Err(Error::Range(format!("need a <= q = {q}, got {a}")));
    }
    CodeParams::new((q + 1) * aleph, (a + 1) * b, Distance::LowerBound((q + 1 - a) * (aleph - b)))
}

/// One-point Goppa codes on an elliptic curve with `ℵ` points: `[ℵ-1, k2, ℵ-1-k2]`.
pub fn goppa_params(aleph: u64, k2: u64) -> Result<CodeParams> {
    if k2 == 0 || k2 + 1 >= aleph {
        return Err(Error::Range(format!("need 0 < k2 < {}, got {k2}", aleph.saturating_sub(1))));
    }
    CodeParams::new(aleph - 1, k2, Distance::LowerBound(aleph - 1 - k2))
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeierstrassCurve {
    pub a1: u16,
    pub a2: u16,
    pub a3: u16,
    pub a4: u16,
    pub a6: u16,
}

impl WeierstrassCurve {
    /// Discriminant in characteristic 2.
    pub fn discriminant(&self, f: &FieldSpec) -> u16 {
        let m = |x, y| f.mul_raw(x, y);
        let (a1, a2, a3, a4, a6) = (self.a1, self.a2, self.a3, self.a4, self.a6);
        let b8 = m(m(a1, a1), a6) ^ m(m(a1, a3), a4) ^ m(a2, m(a3, a3)) ^ m(a4, a4);
        let a1_4 = f.pow_raw(a1, 4);
        let a3_4 = f.pow_raw(a3, 4);
        let a13_3 = f.pow_raw(m(a1, a3), 3);
        m(a1_4, b8) ^ a3_4 ^ a13_3
    }

    fn check(&self, f: &FieldSpec) -> Result<()> {
        for c in [self.a1, self.a2, self.a3, self.a4, self.a6] {
            f.element(c as u32)?;
        }
        Ok(())
    }
}

/// Number of GF(q)-points including the point at infinity.
///
/// For fixed `x`, put `c = a1 x + a3` and `r` the right-hand side. If `c = 0`
/// there is one `y` (squaring is bijective); otherwise `y = c w` turns the
/// equation into `w^2 + w = r / c^2`, with two solutions iff the trace is 0.
pub fn elliptic_point_count(field: &FieldSpec, w: &WeierstrassCurve) -> Result<u64> {
    w.check(field)?;
    if w.discriminant(field) == 0 {
        return Err(Error::SingularCurve);
    }
    let m = |x, y| field.mul_raw(x, y);
    let mut count = 1u64;
    for x in 0..field.q() as u16 {
        let c = m(w.a1, x) ^ w.a3;
        let x2 = m(x, x);
        let r = m(x2, x) ^ m(w.a2, x2) ^ m(w.a4, x) ^ w.a6;
        if c == 0 {
            count += 1;
        } else {
            let t = m(r, field.inv_raw(m(c, c)));
            if field.trace(t) == 0 {
                count += 2;
            }
        }
    }
    Ok(count)
}

/// First nonsingular curve in a scan of small coefficients with exactly
/// `target` points. Coefficients run over `0..bound` (`a1` over `{0, 1}`).
pub fn find_weierstrass_with_count(field: &FieldSpec, target: u64, bound: u16) -> Option<WeierstrassCurve> {
    let bound = bound.min(field.q() as u16);
    for a1 in 0..2u16 {
        for a3 in 0..bound {
            for a2 in 0..bound {
                for a4 in 0..bound {
                    for a6 in 0..bound {
                        let w = WeierstrassCurve { a1, a2, a3, a4, a6 };
                        if w.discriminant(field) != 0 && elliptic_point_count(field, &w).ok() == Some(target) {
                            return Some(w);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Outcome of feeding `O(t) ⊕ O(u)` over P¹ to the dimension formula without
/// normalizing it first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuardReport {
    pub t: i64,
    pub u: i64,
    /// `-deg ∧²E` of the bundle as given.
    pub raw_e: i64,
    /// `e` after twisting so that the larger summand is trivial.
    pub normalized_e: i64,
    pub normalized: bool,
    pub accepted: bool,
    pub reason: Option<String>,
    /// The unnormalized dimension grows without bound in `t`.
    pub k_grows_with_t: bool,
    /// `(a, b, k, n, d)` where the unnormalized `k` contradicts `n` or the
    /// Singleton bound.
    pub witness: Option<(u64, u64, u64, u64, u64)>,
}

/// `h0(Sym^a(O(t) ⊕ O(u)) ⊗ O(b))` over P¹.
fn unnormalized_k(t: i64, u: i64, a: i64, b: i64) -> u64 {
    (0..=a).map(|j| (a - j) * t + j * u + b).filter(|&deg| deg >= 0).map(|deg| deg as u64 + 1).sum()
}

/// Rejects unnormalized bundles and exhibits why they must be rejected.
pub fn counterexample_guard(t: i64, u: i64, q: u64) -> Result<GuardReport> {
    if t < u {
        return Err(Error::InvalidArgument(format!("expected t >= u, got t={t}, u={u}")));
    }
    let raw_e = -(t + u);
    let normalized_e = t - u;
    let normalized = t == 0;
    let reason = if raw_e < 0 {
        Some(format!("deg of the determinant is {}: e = {raw_e} violates e >= -g = 0", t + u))
    } else if !normalized {
        Some(format!("unnormalized: twisting by O({}) gives e = {normalized_e}", -t))
    } else {
        None
    };
    let n = (q + 1) * (q + 1);
    let mut witness = None;
    'scan: for a in 0..=q {
        for b in 0..=q {
            let k = unnormalized_k(t, u, a as i64, b as i64);
            let d = (q + 1 - a) * (q + 1 - b);
            if k > n || k + d > n + 1 {
                witness = Some((a, b, k, n, d));
                break 'scan;
            }
        }
    }
    let k_grows_with_t = t > 0 && unnormalized_k(t + 1, u, 1, 0) > unnormalized_k(t, u, 1, 0);
    Ok(GuardReport {
        t,
        u,
        raw_e,
        normalized_e,
        normalized,
        accepted: reason.is_none(),
        reason,
        k_grows_with_t,
        witness,
    })
}

/// `n + 1 - k - d` for the codes on P¹×P¹ with `e = 0`: `q(a+b) - 2ab`,
/// nonnegative for `a, b <= q`.
pub fn lomont1_singleton_slack(q: i64, a: i64, b: i64) -> i64 {
    q * (a + b) - 2 * a * b
}
