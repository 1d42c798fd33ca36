//! Rational point counts and singular point location.
//!
//! P²(GF(q)) splits into the lines `(1:y:z)` for each `y`, the line
//! `(0:1:z)`, and the point `(0:0:1)`. On each line the curve restricts to a
//! univariate polynomial in `z` whose distinct roots in GF(q) are the points
//! on the curve; their number is `deg gcd(g, z^q - z)`. Singular points are
//! the common roots of the restrictions of `f` and its three partials.

use super::{monomial_count, monomial_table, Form, PlaneCurve};
use crate::field::{FieldElement, FieldSpec};
use crate::projective::{enumerate_p2, ProjPoint2};
use crate::univariate::Poly;

/// Restriction of a form to the lines `x = 1, y = const` and `(0:1:z)`.
struct Slicer {
    degree: usize,
    /// For each power of `z`: the powers of `y` that contribute with `x = 1`.
    by_z: Vec<Vec<u8>>,
    /// Coefficient of `z^k` on the line `x = 0, y = 1`.
    at_infinity: Vec<u16>,
}

impl Slicer {
    fn new(form: &Form) -> Self {
        let d = form.degree as usize;
        let mut by_z = vec![Vec::new(); d + 1];
        let mut at_infinity = vec![0u16; d + 1];
        let t = monomial_table(form.degree);
        for b in 0..monomial_count(form.degree) {
            if form.mask >> b & 1 == 1 {
                let (i, j, k) = t.exps[b as usize];
                by_z[k as usize].push(j);
                if i == 0 {
                    at_infinity[k as usize] ^= 1;
                }
            }
        }
        Slicer { degree: d, by_z, at_infinity }
    }

    /// `f(1, y, z)` as a polynomial in `z`, given the powers of `y`.
    fn affine(&self, ypow: &[u16]) -> Poly {
        let c = self.by_z.iter().map(|js| js.iter().fold(0u16, |acc, &j| acc ^ ypow[j as usize])).collect();
        Poly::new(c)
    }

    fn infinity(&self) -> Poly {
        Poly::new(self.at_infinity.clone())
    }

    /// `f(0, 0, 1)`.
    fn corner(&self) -> u16 {
        self.at_infinity[self.degree]
    }
}

fn powers(field: &FieldSpec, y: u16, d: usize) -> [u16; 7] {
    let mut p = [1u16; 7];
    for e in 1..=d.min(6) {
        p[e] = field.mul_raw(p[e - 1], y);
    }
    p
}

/// Number of points of P²(GF(q)) on the curve.
pub fn count_points(curve: &PlaneCurve, field: &FieldSpec) -> u64 {
    let s = Slicer::new(curve.form());
    let d = curve.degree() as usize;
    let mut total = 0u64;
    for y in 0..field.q() as u16 {
        total += s.affine(&powers(field, y, d)).count_roots(field) as u64;
    }
    total += s.infinity().count_roots(field) as u64;
    if s.corner() == 0 {
        total += 1;
    }
    total
}

/// Reference count by evaluating at every point of P²(GF(q)).
pub fn count_points_exhaustive(curve: &PlaneCurve, field: &FieldSpec) -> u64 {
    enumerate_p2(field).iter().filter(|p| curve.evaluate(p, field) == FieldElement::ZERO).count() as u64
}

fn common_roots(field: &FieldSpec, polys: &[Poly]) -> Vec<u16> {
    let mut g = Poly::default();
    for p in polys {
        g = if g.is_zero() { p.clone() } else { Poly::gcd(field, &g, p) };
        if g.degree() == Some(0) {
            return Vec::new();
        }
    }
    g.roots(field)
}

/// All GF(q)-rational singular points, in enumeration order.
pub fn singular_points(curve: &PlaneCurve, field: &FieldSpec) -> Vec<ProjPoint2> {
    let f = curve.form();
    let parts = f.partials();
    let slicers: Vec<Slicer> = std::iter::once(f).chain(parts.iter()).map(Slicer::new).collect();
    let d = curve.degree() as usize;
    let mut out = Vec::new();
    if slicers.iter().all(|s| s.corner() == 0) {
        out.push(ProjPoint2 { x: FieldElement(0), y: FieldElement(0), z: FieldElement(1) });
    }
    let inf: Vec<Poly> = slicers.iter().map(|s| s.infinity()).collect();
    for z in common_roots(field, &inf) {
        out.push(ProjPoint2 { x: FieldElement(0), y: FieldElement(1), z: FieldElement(z) });
    }
    for y in 0..field.q() as u16 {
        let yp = powers(field, y, d);
        let first = slicers[0].affine(&yp);
        // quick exit: most lines meet the curve only in smooth points
        if !first.is_zero() && first.degree() == Some(0) {
            continue;
        }
        let polys: Vec<Poly> = std::iter::once(first).chain(slicers[1..].iter().map(|s| s.affine(&yp))).collect();
        for z in common_roots(field, &polys) {
            out.push(ProjPoint2 { x: FieldElement(1), y: FieldElement(y), z: FieldElement(z) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::is_simple_point;

    #[test]
    fn klein_quartic_over_gf8() {
        let f = FieldSpec::new(3).unwrap();
        let k = PlaneCurve::klein_quartic();
        assert_eq!(count_points(&k, &f), 24);
        assert_eq!(count_points_exhaustive(&k, &f), 24);
        assert!(singular_points(&k, &f).is_empty());
    }

    #[test]
    fn hermitian_over_gf16() {
        let f = FieldSpec::new(4).unwrap();
        let h: PlaneCurve = "x^5+y^5+z^5".parse().unwrap();
        assert_eq!(count_points(&h, &f), 65);
    }

    #[test]
    fn lines_have_q_plus_one_points() {
        let line: PlaneCurve = "x+y+z".parse().unwrap();
        for m in 1..=9 {
            let f = FieldSpec::cached(m).unwrap();
            assert_eq!(count_points(&line, &f), f.q() as u64 + 1);
        }
    }

    #[test]
    fn fast_count_matches_exhaustive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let d = rng.gen_range(1..=6);
            let mask = rng.gen_range(1..(1u64 << monomial_count(d))) as u32;
            let c = PlaneCurve::new(d, mask).unwrap();
            let m = rng.gen_range(1..=5);
            let f = FieldSpec::cached(m).unwrap();
            assert_eq!(count_points(&c, &f), count_points_exhaustive(&c, &f), "{c} over GF(2^{m})");
        }
    }

    #[test]
    fn singular_points_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..150 {
            let d = rng.gen_range(2..=6);
            let mask = rng.gen_range(1..(1u64 << monomial_count(d))) as u32;
            let c = PlaneCurve::new(d, mask).unwrap();
            let m = rng.gen_range(1..=4);
            let f = FieldSpec::cached(m).unwrap();
            let brute: Vec<ProjPoint2> = enumerate_p2(&f)
                .into_iter()
                .filter(|p| c.evaluate(p, &f).is_zero() && !is_simple_point(&c, p, &f))
                .collect();
            assert_eq!(singular_points(&c, &f), brute, "{c} over GF(2^{m})");
        }
    }

    #[test]
    fn smooth_conic_has_no_singularities() {
        let c: PlaneCurve = "x^2+y*z".parse().unwrap();
        for m in 1..=6 {
            let f = FieldSpec::cached(m).unwrap();
            assert!(singular_points(&c, &f).is_empty());
        }
    }
}
