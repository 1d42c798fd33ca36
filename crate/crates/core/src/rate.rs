//! Rate/distance trade-offs for the surface codes against product codes.
//!
//! Table scans are exact: every rate and relative distance is a rational
//! built from integer parameters. Only the continuous optima use `f64`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::code::ratio_to_f64;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// RS ⊗ RS on `(q-1)^2` points.
    RsProduct,
    /// Codes on P¹×P¹.
    Lomont1,
    /// RS ⊗ one-point Goppa code on an elliptic curve.
    GoppaProduct,
    /// Codes on the ruled surface over an elliptic curve.
    Lomont2,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::RsProduct, Family::Lomont1, Family::GoppaProduct, Family::Lomont2];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::RsProduct => "rs-product",
            Family::Lomont1 => "lomont1",
            Family::GoppaProduct => "goppa-product",
            Family::Lomont2 => "lomont2",
        }
    }

    /// Column names of the integer pair.
    pub fn pair_labels(&self) -> (&'static str, &'static str) {
        match self {
            Family::GoppaProduct => ("k1", "k2"),
            _ => ("a", "b"),
        }
    }

    pub fn needs_aleph(&self) -> bool {
        matches!(self, Family::GoppaProduct | Family::Lomont2)
    }

    /// Inclusive ranges of the two parameters.
    fn ranges(&self, q: u64, aleph: u64) -> ((u64, u64), (u64, u64)) {
        match self {
            Family::RsProduct => ((0, q - 1), (0, q - 1)),
            Family::Lomont1 => ((0, q), (0, q)),
            Family::GoppaProduct => ((0, q - 1), (1, aleph.saturating_sub(2))),
            Family::Lomont2 => ((0, q), (1, aleph.saturating_sub(1))),
        }
    }

    /// `(n, k, d)` for a legal pair, `None` otherwise.
    pub fn params(&self, q: u64, aleph: u64, x: u64, y: u64) -> Option<(u64, u64, u64)> {
        let ((x0, x1), (y0, y1)) = self.ranges(q, aleph);
        if x < x0 || x > x1 || y < y0 || y > y1 {
            return None;
        }
        Some(match self {
            Family::RsProduct => ((q - 1) * (q - 1), x * y, (q - x) * (q - y)),
            Family::Lomont1 => ((q + 1) * (q + 1), (x + 1) * (y + 1), (q + 1 - x) * (q + 1 - y)),
            Family::GoppaProduct => ((q - 1) * (aleph - 1), x * y, (aleph - 1 - y) * (q - x)),
            Family::Lomont2 => ((q + 1) * aleph, (x + 1) * y, (q + 1 - x) * (aleph - y)),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}' (rs-product, lomont1, goppa-product, lomont2)")))
    }
}

/// One row of a comparison table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatePoint {
    pub family: Family,
    pub target: Ratio<u64>,
    pub pair: (u64, u64),
    pub n: u64,
    pub k: u64,
    pub d: u64,
}

impl RatePoint {
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k, self.n)
    }

    pub fn delta(&self) -> Ratio<u64> {
        Ratio::new(self.d, self.n)
    }

    pub fn rate_f64(&self) -> f64 {
        ratio_to_f64(self.rate())
    }

    pub fn delta_f64(&self) -> f64 {
        ratio_to_f64(self.delta())
    }
}

impl Serialize for RatePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RatePoint", 10)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("target", &ratio_to_f64(self.target))?;
        st.serialize_field("pair", &[self.pair.0, self.pair.1])?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("rate", &self.rate().to_string())?;
        st.serialize_field("delta", &self.delta().to_string())?;
        st.serialize_field("rate_decimal", &format_sig(self.rate_f64(), 6))?;
        st.serialize_field("delta_decimal", &format_sig(self.delta_f64(), 6))?;
        st.end()
    }
}

fn check_q_aleph(family: Family, q: u64, aleph: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::Range(format!("q must be at least 2, got {q}")));
    }
    if family.needs_aleph() && aleph < 3 {
        return Err(Error::Range(format!("{family} needs aleph >= 3, got {aleph}")));
    }
    Ok(())
}

/// Best pair for one target rate: largest distance with `k/n >= target`,
/// then larger `k`, then the lexicographically smallest pair.
pub fn best_pair(family: Family, q: u64, aleph: u64, target: Ratio<u64>) -> Result<RatePoint> {
    check_q_aleph(family, q, aleph)?;
    let ((x0, x1), (y0, y1)) = family.ranges(q, aleph);
    let mut best: Option<RatePoint> = None;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let (n, k, d) = family.params(q, aleph, x, y).expect("in range");
            if (k as u128) * (*target.denom() as u128) < (*target.numer() as u128) * (n as u128) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => (d, k) > (b.d, b.k),
            };
            if better {
                best = Some(RatePoint { family, target, pair: (x, y), n, k, d });
            }
        }
    }
    best.ok_or_else(|| Error::Range(format!("no {family} pair reaches rate {target}")))
}

pub fn best_pair_table(q: u64, aleph: u64, family: Family, targets: &[Ratio<u64>]) -> Result<Vec<RatePoint>> {
    for t in targets {
        if t.is_zero() || *t >= Ratio::from_integer(1) {
            return Err(Error::Range(format!("target rate {t} is not in (0, 1)")));
        }
    }
    targets.iter().map(|&t| best_pair(family, q, aleph, t)).collect()
}

/// The nine targets 0.1, 0.2, ..., 0.9.
pub fn decile_targets() -> Vec<Ratio<u64>> {
    (1..10).map(|i| Ratio::new(i, 10)).collect()
}

/// Legal pair with the largest `k` among those with `d >= delta * n`; ties
/// go to larger `d`, then the smaller pair.
pub fn best_for_delta(family: Family, q: u64, aleph: u64, delta: f64) -> Option<(u64, u64)> {
    let ((x0, x1), (y0, y1)) = family.ranges(q, aleph);
    let mut best: Option<((u64, u64), (u64, u64))> = None;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let (n, k, d) = family.params(q, aleph, x, y)?;
            if (d as f64) < delta * n as f64 {
                continue;
            }
            if best.is_none_or(|(bk, _)| (k, d) > bk) {
                best = Some(((k, d), (x, y)));
            }
        }
    }
    best.map(|(_, pair)| pair)
}

/// Continuous optimum of the surface code on the elliptic ruled surface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lomont2Optimum {
    pub b0: f64,
    pub a0: f64,
    pub rate: f64,
    /// Integer neighbours of `(a0, b0)` whose distance still reaches `delta`.
    pub candidates: Vec<(u64, u64)>,
    /// Highest-rate legal pair reaching `delta`, found by a full scan. It
    /// need not be among `candidates`.
    pub best_integer: Option<(u64, u64)>,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Range(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

pub fn lomont2_optimum(q: u64, aleph: u64, delta: f64) -> Result<Lomont2Optimum> {
    check_delta(delta)?;
    check_q_aleph(Family::Lomont2, q, aleph)?;
    let (qf, al) = (q as f64, aleph as f64);
    let t = ((qf + 1.0) * delta / (qf + 2.0)).sqrt();
    let b0 = al * (1.0 - t);
    let a0 = (qf + 1.0) * (al * delta - al + b0) / (b0 - al);
    let rate = (qf + 2.0) * (1.0 - t) * (1.0 - t) / (qf + 1.0);
    let (af, ac) = (a0.floor().max(0.0) as u64, a0.ceil().max(0.0) as u64);
    let (bf, bc) = (b0.floor().max(0.0) as u64, b0.ceil().max(0.0) as u64);
    let mut candidates = Vec::new();
    for pair in [(af, bf), (ac, bf), (af, bc)] {
        if candidates.contains(&pair) {
            continue;
        }
        if let Some((n, _, d)) = Family::Lomont2.params(q, aleph, pair.0, pair.1) {
            if d as f64 >= delta * n as f64 {
                candidates.push(pair);
            }
        }
    }
    let best_integer = best_for_delta(Family::Lomont2, q, aleph, delta);
    Ok(Lomont2Optimum { b0, a0, rate, candidates, best_integer })
}

/// Continuous optimum of the RS ⊗ Goppa product code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductOptimum {
    pub k1: f64,
    pub k2: f64,
    pub rate: f64,
    pub candidates: Vec<(u64, u64)>,
    pub best_integer: Option<(u64, u64)>,
}

/// Maximizes `k1 k2` subject to `(ℵ-1-k2)(q-k1) = δ (q-1)(ℵ-1)`:
/// `k2 = (ℵ-1)(1-s)`, `k1 = q(1-s)` with `s = √((q-1)δ/q)`.
pub fn product_optimum(q: u64, aleph: u64, delta: f64) -> Result<ProductOptimum> {
    check_delta(delta)?;
    check_q_aleph(Family::GoppaProduct, q, aleph)?;
    let (qf, n2) = (q as f64, (aleph - 1) as f64);
    let s = ((qf - 1.0) * delta / qf).sqrt();
    let k2 = n2 * (1.0 - s);
    let k1 = qf * (1.0 - s);
    let rate = qf * (1.0 - s) * (1.0 - s) / (qf - 1.0);
    let mut candidates = Vec::new();
    for x in [k1.floor(), k1.ceil()] {
        for y in [k2.floor(), k2.ceil()] {
            let pair = (x.max(0.0) as u64, y.max(0.0) as u64);
            if candidates.contains(&pair) {
                continue;
            }
            if let Some((n, _, d)) = Family::GoppaProduct.params(q, aleph, pair.0, pair.1) {
                if d as f64 >= delta * n as f64 {
                    candidates.push(pair);
                }
            }
        }
    }
    let best_integer = best_for_delta(Family::GoppaProduct, q, aleph, delta);
    Ok(ProductOptimum { k1, k2, rate, candidates, best_integer })
}

/// `k2 = (ℵ-1)(1 - √(((q-1)δ-1)/q))`, the variant with the shifted radicand.
/// It is undefined for `δ < 1/(q-1)` and does not maximize the rate; kept
/// for comparison with [`product_optimum`].
pub fn product_k2_shifted(q: u64, aleph: u64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    check_q_aleph(Family::GoppaProduct, q, aleph)?;
    let rad = ((q - 1) as f64 * delta - 1.0) / q as f64;
    if rad < 0.0 {
        return Err(Error::Domain(format!("radicand {rad} is negative: need delta >= 1/(q-1)")));
    }
    Ok((aleph - 1) as f64 * (1.0 - rad.sqrt()))
}

/// `err(q, δ) = c0 + c1 √δ`, the optimal surface rate minus the optimal
/// product rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrGap {
    pub q: u64,
    /// `-2/(q²-1)` as a reduced fraction.
    pub constant_exact: String,
    pub constant: f64,
    /// `2(√(q/(q-1)) - √((q+2)/(q+1)))`.
    pub sqrt_coefficient: f64,
}

pub fn err_terms(q: u64) -> Result<ErrGap> {
    if q < 2 {
        return Err(Error::Range(format!("q must exceed 1, got {q}")));
    }
    let q2 = q as i128 * q as i128 - 1;
    let c0 = Ratio::new(-2i128, q2);
    let qf = q as f64;
    let sa = (qf / (qf - 1.0)).sqrt();
    let sb = ((qf + 2.0) / (qf + 1.0)).sqrt();
    // √A - √B = (A - B)/(√A + √B) and A - B = 2/(q²-1); avoids cancellation
    let c1 = 4.0 / ((qf * qf - 1.0) * (sa + sb));
    Ok(ErrGap { q, constant_exact: c0.to_string(), constant: -2.0 / (qf * qf - 1.0), sqrt_coefficient: c1 })
}

pub fn err_gap(q: u64, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Range(format!("delta must lie in [0, 1], got {delta}")));
    }
    let t = err_terms(q)?;
    Ok(t.constant + t.sqrt_coefficient * delta.sqrt())
}

/// Exact sign test: `err(q, δ) < 0` iff `2√δ < √A + √B` with `A = q/(q-1)`,
/// `B = (q+2)/(q+1)`, decided by squaring in rational arithmetic.
pub fn err_negative_exact(q: u64, delta: Ratio<u64>) -> bool {
    assert!(q >= 2, "q must exceed 1");
    let big = |n: u64| BigInt::from(n);
    let a = BigRational::new(big(q), big(q - 1));
    let b = BigRational::new(big(q + 2), big(q + 1));
    let d = BigRational::new(big(*delta.numer()), big(*delta.denom()));
    let lhs = BigRational::from_integer(BigInt::from(4)) * d - &a - &b;
    if lhs.is_negative() {
        return true;
    }
    // both sides nonnegative: compare squares, 4δ - A - B < 2√(AB)
    &lhs * &lhs < BigRational::from_integer(BigInt::from(4)) * a * b
}

/// Checks `err(q, δ) < 0` on `δ = 0, step, 2 step, ..., 1` for every `q`.
/// Returns the first failing `(q, δ)`.
pub fn certify_err_negative(qs: &[u64], step: Ratio<u64>) -> std::result::Result<usize, (u64, Ratio<u64>)> {
    let mut checked = 0;
    for &q in qs {
        let mut d = Ratio::from_integer(0);
        while d <= Ratio::from_integer(1) {
            if !err_negative_exact(q, d) {
                return Err((q, d));
            }
            checked += 1;
            d += step;
        }
    }
    Ok(checked)
}

/// Tsfasman–Vlăduţ–Zink line `1 - δ - 1/(√q - 1)`; may be negative.
pub fn tvz_rate(q: u64, delta: f64) -> f64 {
    1.0 - delta - 1.0 / ((q as f64).sqrt() - 1.0)
}

/// q-ary entropy.
pub fn entropy_q(q: u64, x: f64) -> f64 {
    let qf = q as f64;
    let lg = |v: f64| if v <= 0.0 { 0.0 } else { v.ln() / qf.ln() };
    x * lg(qf - 1.0) - x * lg(x) - (1.0 - x) * lg(1.0 - x)
}

/// Gilbert–Varshamov rate `1 - H_q(δ)` for `δ <= 1 - 1/q`, else 0.
pub fn gv_rate(q: u64, delta: f64) -> f64 {
    if delta >= 1.0 - 1.0 / q as f64 {
        return 0.0;
    }
    1.0 - entropy_q(q, delta)
}

/// `%g`-style rendering with `sig` significant figures.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= sig as i32 {
        let mant = trim_zeros(mant);
        return format!("{mant}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_matches_printf_g() {
        assert_eq!(format_sig(0.100900, 6), "0.1009");
        assert_eq!(format_sig(0.0876586, 6), "0.0876586");
        assert_eq!(format_sig(0.002962, 6), "0.002962");
        assert_eq!(format_sig(123456789.0, 6), "1.23457e+08");
        assert_eq!(format_sig(0.00001234, 3), "1.23e-05");
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(-0.5, 6), "-0.5");
    }

    #[test]
    fn family_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("rs".parse::<Family>().is_err());
    }

    #[test]
    fn small_table_by_brute_force() {
        // q = 4: compare against a direct filter/sort over all pairs
        for fam in Family::ALL {
            for t in decile_targets() {
                let got = best_pair(fam, 4, 7, t);
                let mut all = Vec::new();
                for x in 0..=10 {
                    for y in 0..=10 {
                        if let Some((n, k, d)) = fam.params(4, 7, x, y) {
                            if Ratio::new(k, n) >= t {
                                all.push((std::cmp::Reverse(d), std::cmp::Reverse(k), (x, y)));
                            }
                        }
                    }
                }
                all.sort();
                match got {
                    Ok(p) => assert_eq!(p.pair, all[0].2, "{fam} {t}"),
                    Err(_) => assert!(all.is_empty()),
                }
            }
        }
    }

    #[test]
    fn optimal_rates_differ_by_err() {
        for q in [4u64, 16, 256] {
            for d in [0.05, 0.3, 0.8] {
                let l = lomont2_optimum(q, 100, d).unwrap();
                let p = product_optimum(q, 100, d).unwrap();
                let e = err_gap(q, d).unwrap();
                assert!((l.rate - p.rate - e).abs() < 1e-9, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn product_optimum_is_a_maximum() {
        let (q, n2, d) = (256.0f64, 254.0f64, 0.1f64);
        let p = product_optimum(256, 255, d).unwrap();
        let c = d * (q - 1.0) * n2;
        let r = |k2: f64| {
            let k1 = q - c / (n2 - k2);
            k1 * k2 / ((q - 1.0) * n2)
        };
        assert!(r(p.k2) >= r(p.k2 - 0.5) && r(p.k2) >= r(p.k2 + 0.5));
        assert!((r(p.k2) - p.rate).abs() < 1e-12);
    }

    #[test]
    fn shifted_radicand_domain() {
        assert!(matches!(product_k2_shifted(256, 255, 0.001), Err(Error::Domain(_))));
        let k2 = product_k2_shifted(256, 255, 1.0 / 255.0).unwrap();
        assert!((k2 - 254.0).abs() < 1e-9);
    }

    #[test]
    fn err_sign() {
        for q in [2u64, 3, 4, 256, 2048] {
            assert!(err_negative_exact(q, Ratio::new(0, 1)));
            assert!(err_negative_exact(q, Ratio::new(1, 1)));
            assert!(err_gap(q, 1.0).unwrap() < 0.0);
        }
        // the exact test does flip past the real root, δ > 1
        assert!(!err_negative_exact(4, Ratio::new(2, 1)));
    }

    #[test]
    fn gv_and_tvz() {
        assert!((gv_rate(2, 0.11) - (1.0 - entropy_q(2, 0.11))).abs() < 1e-15);
        assert_eq!(gv_rate(4, 0.75), 0.0);
        assert!((tvz_rate(49, 0.5) - (0.5 - 1.0 / 6.0)).abs() < 1e-15);
    }
}
