//! Feasibility of code families built by repeatedly blowing up rational
//! points of a surface.
//!
//! At step `i` the surface `X_i` carries `H_i`, `L_i` and curves `C_i^j`;
//! blowing up `t_i` points gives `H_{i+1} = h π*H_i - ΣE`, and likewise for
//! `L`. Only the case where no blown-up point lies on two curves is modelled.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyConfig {
    pub q: u64,
    /// Lift multiplier.
    pub h: u64,
    /// `H_0.L_0`.
    pub h0l0: u64,
    /// `Σ_j L_0.C_0^j`.
    pub s0l0c0: u64,
    /// Rational points of `X_0`.
    pub n0: u64,
    /// Points blown up per step. Steps past the end reuse the last entry.
    pub t: Vec<u64>,
    /// Most points blown up on a single curve at step 0.
    pub lambda_max: u64,
}

impl FamilyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t.is_empty() {
            return Err(Error::InvalidArgument("t must list at least one step".into()));
        }
        if self.t.contains(&0) {
            return Err(Error::InvalidArgument("every t_i must be at least 1".into()));
        }
        if self.h < 2 {
            return Err(Error::InvalidArgument(format!("h must be at least 2, got {}", self.h)));
        }
        Ok(())
    }

    pub fn t_at(&self, i: usize) -> u64 {
        *self.t.get(i).unwrap_or_else(|| self.t.last().expect("nonempty t"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub ok: bool,
    /// `h > max(q+1, λ_max)`.
    pub h_large_enough: bool,
    /// `t_0 >= h² H_0.L_0`.
    pub t0_large_enough: bool,
    pub diagnostics: Vec<String>,
}

pub fn check_conditions(cfg: &FamilyConfig) -> ConditionReport {
    let mut diagnostics = Vec::new();
    let need_h = (cfg.q + 1).max(cfg.lambda_max);
    let h_ok = cfg.h > need_h;
    if !h_ok {
        diagnostics.push(format!("h = {} must exceed max(q+1, lambda_max) = {need_h}", cfg.h));
    }
    let t0 = cfg.t.first().copied().unwrap_or(0) as u128;
    let need_t0 = (cfg.h as u128).pow(2) * cfg.h0l0 as u128;
    let t0_ok = t0 >= need_t0;
    if !t0_ok {
        diagnostics.push(format!("t0 = {t0} is below h^2 * H0.L0 = {need_t0}"));
    }
    ConditionReport { ok: h_ok && t0_ok, h_large_enough: h_ok, t0_large_enough: t0_ok, diagnostics }
}

/// `H_i.L_i = h^{2i} H_0.L_0 - Σ_{j<i} (h²)^{i-1-j} t_j` for `i = 0..=steps`.
pub fn hl_sequence(cfg: &FamilyConfig, steps: usize) -> Result<Vec<BigInt>> {
    cfg.validate()?;
    let h2 = BigInt::from(cfg.h).pow(2);
    Ok((0..=steps)
        .map(|i| {
            let mut acc = h2.pow(i as u32) * cfg.h0l0;
            for j in 0..i {
                acc -= h2.pow((i - 1 - j) as u32) * cfg.t_at(j);
            }
            acc
        })
        .collect())
}

fn big_str<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub i: usize,
    #[serde(serialize_with = "big_str")]
    pub hl: BigInt,
    #[serde(serialize_with = "big_str")]
    pub m: BigInt,
    #[serde(serialize_with = "big_str")]
    pub n: BigInt,
    /// `0 <= m_i < n_i`.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyTrace {
    pub conditions: ConditionReport,
    pub steps: Vec<StepRecord>,
    pub first_failure: Option<usize>,
}

/// Closed form for `m_i = Σ_j L_i.C_i^j`:
///
/// `m_i = h^i/(h-1) · ((h-1)S + (1-2/h) Σ_{k<i} t_k/h^k + h^{-i} Σ_{k<i} t_k - t_0(1-h^{-i}))`.
pub fn m_closed_form(cfg: &FamilyConfig, i: usize) -> Result<BigInt> {
    cfg.validate()?;
    let h = BigRational::from_integer(BigInt::from(cfg.h));
    let one = BigRational::one();
    let hi = h.pow(i as i32);
    let inv_hi = one.clone() / &hi;
    let mut weighted = BigRational::zero();
    let mut plain = BigRational::zero();
    for k in 0..i {
        let tk = BigRational::from_integer(BigInt::from(cfg.t_at(k)));
        weighted += &tk / h.pow(k as i32);
        plain += tk;
    }
    let s = BigRational::from_integer(BigInt::from(cfg.s0l0c0));
    let t0 = BigRational::from_integer(BigInt::from(cfg.t_at(0)));
    let two = BigRational::from_integer(BigInt::from(2));
    let hm1 = &h - &one;
    let inner = &hm1 * s + (&one - two / &h) * weighted + &inv_hi * plain - t0 * (&one - &inv_hi);
    let m = hi / hm1 * inner;
    if !m.is_integer() {
        return Err(Error::NonIntegral(format!("m_{i} = {m}")));
    }
    Ok(m.to_integer())
}

/// Curve-by-curve bookkeeping of `m_i` with the strict transforms of the
/// original curves losing `t_k` at step `k` and each exceptional curve
/// losing one point per later step. Agrees with [`m_closed_form`] when all
/// `t_k` are equal.
pub fn m_by_curves(cfg: &FamilyConfig, i: usize) -> Result<BigInt> {
    cfg.validate()?;
    let h = BigInt::from(cfg.h);
    let mut originals = BigInt::from(cfg.s0l0c0);
    // L.E for each batch of exceptional curves, with batch sizes
    let mut batches: Vec<(BigInt, u64)> = Vec::new();
    for k in 0..i {
        originals = &h * originals - cfg.t_at(k);
        for (deg, _) in batches.iter_mut() {
            *deg = &h * &*deg - 1;
        }
        batches.push((BigInt::one(), cfg.t_at(k)));
    }
    Ok(batches.into_iter().fold(originals, |acc, (deg, count)| acc + deg * count))
}

/// One-step form of the closed form: `m_0 = S`,
/// `m_{i+1} = h m_i - t_0 + t_i - Σ_{k<i} t_k`.
pub fn m_recurrence(cfg: &FamilyConfig, steps: usize) -> Result<Vec<BigInt>> {
    cfg.validate()?;
    let mut out = vec![BigInt::from(cfg.s0l0c0)];
    let mut prefix = 0u128;
    for i in 0..steps {
        let next = &out[i] * cfg.h - cfg.t_at(0) + cfg.t_at(i) - BigInt::from(prefix);
        prefix += cfg.t_at(i) as u128;
        out.push(next);
    }
    Ok(out)
}

/// `n_i = n_0 + (q+1) Σ_{k<i} t_k`.
pub fn n_at(cfg: &FamilyConfig, i: usize) -> BigInt {
    let s: BigInt = (0..i).map(|k| BigInt::from(cfg.t_at(k))).sum();
    BigInt::from(cfg.n0) + s * (cfg.q + 1)
}

pub fn m_sequence(cfg: &FamilyConfig, steps: usize) -> Result<FamilyTrace> {
    let hl = hl_sequence(cfg, steps)?;
    let mut records = Vec::with_capacity(steps + 1);
    let mut first_failure = None;
    for (i, hl_i) in hl.into_iter().enumerate() {
        let m = m_closed_form(cfg, i)?;
        let n = n_at(cfg, i);
        let ok = !m.is_negative() && m < n;
        if !ok && first_failure.is_none() {
            first_failure = Some(i);
        }
        records.push(StepRecord { i, hl: hl_i, m, n, ok });
    }
    Ok(FamilyTrace { conditions: check_conditions(cfg), steps: records, first_failure })
}

/// `m_{i+1} / m_i` as a float.
pub fn ratio_to_h(trace: &FamilyTrace, i: usize) -> Option<f64> {
    let a = &trace.steps.get(i)?.m;
    let b = &trace.steps.get(i + 1)?.m;
    if a.is_zero() {
        return None;
    }
    let (q, r) = b.div_rem(a);
    let q: f64 = q.to_string().parse().ok()?;
    let r: f64 = r.to_string().parse().ok()?;
    let a: f64 = a.to_string().parse().ok()?;
    Some(q + r / a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(h: u64, t: Vec<u64>) -> FamilyConfig {
        FamilyConfig { q: 4, h, h0l0: 1, s0l0c0: 10, n0: 25, t, lambda_max: 3 }
    }

    #[test]
    fn conditions() {
        assert!(check_conditions(&cfg(6, vec![36])).ok);
        assert!(!check_conditions(&cfg(5, vec![36])).ok);
        let mut c = cfg(7, vec![97]);
        c.h0l0 = 2;
        let r = check_conditions(&c);
        assert!(r.h_large_enough && !r.t0_large_enough);
    }

    #[test]
    fn hl_matches_recurrence() {
        let c = cfg(6, vec![36, 40, 41, 7]);
        let hl = hl_sequence(&c, 10).unwrap();
        assert_eq!(hl[1], BigInt::from(36 - 36));
        for i in 0..10 {
            assert_eq!(hl[i + 1], &hl[i] * 36 - c.t_at(i));
        }
    }

    #[test]
    fn closed_form_first_step() {
        let c = cfg(6, vec![36, 50]);
        assert_eq!(m_closed_form(&c, 0).unwrap(), BigInt::from(10));
        // originals: 6*10 - 36, plus 36 new exceptional curves of degree 1
        assert_eq!(m_closed_form(&c, 1).unwrap(), BigInt::from(60 - 36 + 36));
    }

    #[test]
    fn closed_form_matches_curve_bookkeeping_for_constant_t() {
        let c = cfg(7, vec![49]);
        for i in 0..15 {
            assert_eq!(m_closed_form(&c, i).unwrap(), m_by_curves(&c, i).unwrap(), "i={i}");
        }
    }

    #[test]
    fn unit_t_fails_eventually() {
        let mut c = cfg(6, vec![1]);
        c.h0l0 = 0;
        let tr = m_sequence(&c, 20).unwrap();
        assert!(tr.first_failure.is_some());
    }

    #[test]
    fn growth_ratio_tends_to_h() {
        let c = cfg(6, vec![36, 36, 40]);
        let tr = m_sequence(&c, 30).unwrap();
        let r = ratio_to_h(&tr, 29).unwrap();
        assert!((r - 6.0).abs() < 1e-6, "{r}");
    }
}
