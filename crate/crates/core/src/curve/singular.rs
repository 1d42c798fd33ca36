//! Multiplicity and tangent cone at a rational singular point.
//!
//! The point is moved to the origin of an affine chart:
//! `(1:y0:z0)` uses `f(1, y0+u, z0+v)`, `(0:1:z0)` uses `f(u, 1, z0+v)` and
//! `(0:0:1)` uses `f(u, v, 1)`. The lowest-degree homogeneous part of the
//! expansion in `(u, v)` is the tangent cone.

use std::fmt;

use serde::Serialize;

use super::count::singular_points;
use super::PlaneCurve;
use crate::field::FieldSpec;
use crate::projective::ProjPoint2;
use crate::univariate::Poly;

/// `a*u + b*v` with coefficients in the analysis field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinearForm {
    pub u: u16,
    pub v: u16,
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (c, name) in [(self.u, "u"), (self.v, "v")] {
            match c {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{c}*{name}")),
            }
        }
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityRecord {
    pub point: ProjPoint2,
    pub multiplicity: u32,
    /// Coefficient of `u^a v^(m-a)` at index `a`.
    pub tangent_cone: Vec<u16>,
    /// Rational linear factors with their exponents.
    pub tangent_cone_factors: Vec<(LinearForm, u32)>,
    /// Degree of the part of the cone with no rational linear factor.
    pub residual_degree: u32,
    pub ordinary: bool,
    pub rational_direction_count: u32,
    /// The cone written out, e.g. `u^2+u*v+v^2`.
    pub cone: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupBonus {
    pub estimate: u32,
    pub exact: bool,
}

/// Points gained on the smooth model above one singularity. Only ordinary
/// singularities give a trusted count; the rest are flagged.
pub fn blowup_bonus(record: &SingularityRecord) -> BlowupBonus {
    BlowupBonus { estimate: record.rational_direction_count, exact: record.ordinary }
}

pub fn is_simple_point(curve: &PlaneCurve, p: &ProjPoint2, field: &FieldSpec) -> bool {
    let [x, y, z] = p.coords();
    curve.form().eval_raw(field, x, y, z) == 0 && curve.partials().iter().any(|g| g.eval_raw(field, x, y, z) != 0)
}

/// Binomial expansion of `(c + w)^e` in characteristic 2, by power of `w`.
fn shifted_power(field: &FieldSpec, c: u16, e: u32) -> [u16; 7] {
    let mut out = [0u16; 7];
    for s in 0..=e {
        // Lucas: C(e, s) is odd iff the bits of s are a subset of those of e
        if s & e == s {
            out[s as usize] = field.pow_raw(c, (e - s) as u64);
        }
    }
    out
}

/// Coefficients of the local expansion, indexed `[a][b]` for `u^a v^b`.
fn local_expansion(curve: &PlaneCurve, p: &ProjPoint2, field: &FieldSpec) -> [[u16; 7]; 7] {
    let [x0, y0, z0] = p.coords();
    // (constant, local variable) per coordinate; 0 = u, 1 = v
    let coords: [(u16, Option<usize>); 3] = if x0 == 1 {
        [(1, None), (y0, Some(0)), (z0, Some(1))]
    } else if y0 == 1 {
        [(0, Some(0)), (1, None), (z0, Some(1))]
    } else {
        [(0, Some(0)), (0, Some(1)), (1, None)]
    };
    let mut out = [[0u16; 7]; 7];
    for (i, j, k) in curve.monomials() {
        let mut konst = 1u16;
        let mut series = [[0u16; 7], [0u16; 7]];
        series[0][0] = 1;
        series[1][0] = 1;
        for (&(c, var), e) in coords.iter().zip([i, j, k]) {
            match var {
                None => konst = field.mul_raw(konst, field.pow_raw(c, e as u64)),
                Some(w) => series[w] = shifted_power(field, c, e),
            }
        }
        for a in 0..7 {
            if series[0][a] == 0 {
                continue;
            }
            let ca = field.mul_raw(konst, series[0][a]);
            for b in 0..7 {
                out[a][b] ^= field.mul_raw(ca, series[1][b]);
            }
        }
    }
    out
}

fn cone_string(cone: &[u16]) -> String {
    let m = cone.len() - 1;
    let mut terms = Vec::new();
    for a in (0..=m).rev() {
        let c = cone[a];
        if c == 0 {
            continue;
        }
        let mut parts = Vec::new();
        if c != 1 {
            parts.push(c.to_string());
        }
        for (name, e) in [("u", a), ("v", m - a)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        terms.push(parts.join("*"));
    }
    terms.join("+")
}

/// The singularity record at `p`, or `None` if `p` is not a singular point.
pub fn analyze_singularity(curve: &PlaneCurve, p: &ProjPoint2, field: &FieldSpec) -> Option<SingularityRecord> {
    let loc = local_expansion(curve, p, field);
    let m = (0..=12usize)
        .find(|&t| (0..=t.min(6)).any(|a| t - a <= 6 && loc[a][t - a] != 0))
        .expect("nonzero curve has a nonzero expansion") as u32;
    if m < 2 {
        return None;
    }
    let tangent_cone: Vec<u16> = (0..=m as usize).map(|a| loc[a][m as usize - a]).collect();
    let phi = Poly::new(tangent_cone.clone());
    let deg_phi = phi.degree().expect("cone is nonzero") as u32;

    let mut factors = Vec::new();
    let mut residual = phi.clone();
    for r in phi.roots(field) {
        let lin = Poly::new(vec![r, 1]);
        let mut mult = 0;
        loop {
            let (q, rem) = residual.div_rem(field, &lin);
            if !rem.is_zero() {
                break;
            }
            residual = q;
            mult += 1;
        }
        factors.push((LinearForm { u: 1, v: r }, mult));
    }
    let at_v = m - deg_phi;
    if at_v > 0 {
        factors.push((LinearForm { u: 0, v: 1 }, at_v));
    }
    factors.sort();
    let residual_degree = residual.degree().unwrap_or(0) as u32;
    let residual_squarefree = residual_degree == 0 || {
        let d = residual.derivative();
        !d.is_zero() && Poly::gcd(field, &residual, &d).degree() == Some(0)
    };
    let ordinary = residual_squarefree && factors.iter().all(|&(_, e)| e == 1);
    Some(SingularityRecord {
        point: *p,
        multiplicity: m,
        cone: cone_string(&tangent_cone),
        tangent_cone,
        rational_direction_count: factors.len() as u32,
        tangent_cone_factors: factors,
        residual_degree,
        ordinary,
    })
}

/// Records for every rational singular point, in enumeration order.
pub fn singularity_records(curve: &PlaneCurve, field: &FieldSpec) -> Vec<SingularityRecord> {
    singular_points(curve, field)
        .iter()
        .map(|p| analyze_singularity(curve, p, field).expect("singular point has multiplicity >= 2"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;

    fn pt(x: u16, y: u16, z: u16) -> ProjPoint2 {
        ProjPoint2 { x: FieldElement(x), y: FieldElement(y), z: FieldElement(z) }
    }

    #[test]
    fn nodal_cubic() {
        // y^2 z = x^3 + x^2 z has a node at (0:0:1) with cone v^2 + u^2 + ... over GF(2)
        let c: PlaneCurve = "y^2*z+x^3+x^2*z+x*y*z".parse().unwrap();
        let f = FieldSpec::new(1).unwrap();
        let p = pt(0, 0, 1);
        assert!(!is_simple_point(&c, &p, &f));
        let r = analyze_singularity(&c, &p, &f).unwrap();
        assert_eq!(r.multiplicity, 2);
        // u^2 + uv + v^2 is irreducible over GF(2), splits over GF(4)
        assert_eq!(r.rational_direction_count, 0);
        assert_eq!(r.residual_degree, 2);
        assert!(r.ordinary);
        let f4 = FieldSpec::new(2).unwrap();
        let r4 = analyze_singularity(&c, &p, &f4).unwrap();
        assert_eq!(r4.rational_direction_count, 2);
        assert_eq!(blowup_bonus(&r4), BlowupBonus { estimate: 2, exact: true });
    }

    #[test]
    fn simple_point_examples() {
        let f = FieldSpec::new(1).unwrap();
        let line: PlaneCurve = "x+y+z".parse().unwrap();
        assert!(is_simple_point(&line, &pt(1, 1, 0), &f));
        assert!(!is_simple_point(&line, &pt(1, 0, 0), &f));
        assert!(analyze_singularity(&line, &pt(1, 1, 0), &f).is_none());
    }

    #[test]
    fn cusp_is_not_ordinary() {
        // y^2 z = x^3: cusp at (0:0:1) with cone v^2
        let c: PlaneCurve = "y^2*z+x^3".parse().unwrap();
        let f = FieldSpec::new(3).unwrap();
        let r = analyze_singularity(&c, &pt(0, 0, 1), &f).unwrap();
        assert_eq!(r.multiplicity, 2);
        assert_eq!(r.cone, "v^2");
        assert_eq!(r.tangent_cone_factors, vec![(LinearForm { u: 0, v: 1 }, 2)]);
        assert!(!r.ordinary);
        assert_eq!(blowup_bonus(&r), BlowupBonus { estimate: 1, exact: false });
    }

    #[test]
    fn exponent_sum_is_multiplicity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut seen = 0;
        for _ in 0..400 {
            let d = rng.gen_range(3..=6);
            let mask = rng.gen_range(1..(1u64 << super::super::monomial_count(d))) as u32;
            let c = PlaneCurve::new(d, mask).unwrap();
            let f = FieldSpec::cached(rng.gen_range(1..=4)).unwrap();
            for r in singularity_records(&c, &f) {
                seen += 1;
                let s: u32 = r.tangent_cone_factors.iter().map(|&(_, e)| e).sum();
                assert_eq!(s + r.residual_degree, r.multiplicity);
                assert!(r.multiplicity >= 2 && r.multiplicity <= d);
            }
        }
        assert!(seen > 20);
    }
}
