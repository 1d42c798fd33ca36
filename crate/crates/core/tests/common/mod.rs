#![allow(dead_code)]

use agcodes::blowup::{hl_sequence, m_closed_form, m_recurrence, FamilyConfig};
use agcodes::bundle::{atiyah_rank_sum_check, binom, symm_degree, symm_rank, tensor_degree, BundleDescriptor};
use agcodes::curve::{count_points, Form, PlaneCurve};
use agcodes::search::gl3_matrices;
use agcodes::{FieldElement, FieldSpec};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($fmt)+));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

pub fn field_axioms(m: u32) -> Check {
    let f = FieldSpec::new(m).map_err(|e| e.to_string())?;
    let els: Vec<FieldElement> = f.elements().collect();
    let zero = f.element(0).unwrap();
    let one = f.element(1).unwrap();
    let add = |a, b| f.add(a, b).unwrap();
    let mul = |a, b| f.mul(a, b).unwrap();
    for &a in &els {
        ensure!(add(a, zero) == a && mul(a, one) == a, "identities fail at {a:?}");
        ensure!(add(a, a) == zero, "characteristic is not 2 at {a:?}");
        if a != zero {
            ensure!(mul(a, f.inv(a).unwrap()) == one, "inverse fails at {a:?}");
        }
        for &b in &els {
            ensure!(add(a, b) == add(b, a) && mul(a, b) == mul(b, a), "commutativity fails");
            for &c in &els {
                ensure!(add(add(a, b), c) == add(a, add(b, c)), "additive associativity fails");
                ensure!(mul(mul(a, b), c) == mul(a, mul(b, c)), "multiplicative associativity fails");
                ensure!(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), "distributivity fails");
            }
        }
    }
    Ok(())
}

/// Point count is unchanged by a change of coordinates in GL₃(F₂).
pub fn gl3_invariance(curve: &PlaneCurve, matrix: usize, m: u32) -> Check {
    let f = FieldSpec::cached(m).unwrap();
    let rows = gl3_matrices()[matrix];
    let moved = PlaneCurve::from_form(curve.substitute(rows)).map_err(|e| e.to_string())?;
    let (a, b) = (count_points(curve, &f), count_points(&moved, &f));
    ensure!(a == b, "{curve} has {a} points over GF(2^{m}) but its image {moved} has {b}");
    Ok(())
}

/// `x f_x + y f_y + z f_z = d f` in characteristic 2.
pub fn euler_identity(curve: &PlaneCurve) -> Check {
    let d = curve.degree();
    let vars = [(1, 0, 0), (0, 1, 0), (0, 0, 1)];
    let mut sum = Form::zero(d);
    for (p, v) in curve.partials().iter().zip(vars) {
        let var = Form::from_monomials(1, &[v]).unwrap();
        sum = sum.add(&var.mul(p));
    }
    let expect = if d % 2 == 1 { *curve.form() } else { Form::zero(d) };
    ensure!(sum == expect, "Euler identity fails for {curve}");
    Ok(())
}

/// Closed forms against step recurrences.
pub fn blowup_consistency(cfg: &FamilyConfig, steps: usize) -> Check {
    let hl = hl_sequence(cfg, steps).map_err(|e| e.to_string())?;
    let h2 = BigInt::from(cfg.h).pow(2);
    for i in 0..steps {
        ensure!(hl[i + 1] == &h2 * &hl[i] - cfg.t_at(i), "H.L recurrence fails at step {i} for {cfg:?}");
    }
    let rec = m_recurrence(cfg, steps).map_err(|e| e.to_string())?;
    for (i, r) in rec.iter().enumerate() {
        let c = m_closed_form(cfg, i).map_err(|e| e.to_string())?;
        ensure!(&c == r, "m_{i}: closed form {c} vs recurrence {r} for {cfg:?}");
    }
    Ok(())
}

/// Appendix identities on the grid `0 <= n <= nmax`, `1 <= r <= rmax`.
pub fn bundle_identities(nmax: u64, rmax: u64) -> Check {
    for top in 0..=nmax + rmax {
        for k in 0..=top.min(nmax) {
            // upper summation: Σ_{j=k}^{top} C(j, k) = C(top+1, k+1)
            let s: BigUint = (k..=top).map(|j| binom(j, k as i64)).sum();
            ensure!(s == binom(top + 1, k as i64 + 1), "upper summation fails at top={top}, k={k}");
        }
    }
    for n in 0..=nmax {
        for r in 1..=rmax {
            let rank = symm_rank(n, r).unwrap();
            ensure!(rank == binom(n + r - 1, r as i64 - 1), "symm_rank({n}, {r})");
            let rank_u = u64::try_from(rank.clone()).unwrap();
            ensure!(atiyah_rank_sum_check(n, r, &vec![1; rank_u as usize]).unwrap(), "rank sum of line bundles");
            let bad = rank_u + 1;
            ensure!(!atiyah_rank_sum_check(n, r, &[bad]).unwrap(), "rank sum accepts {bad}");
            for d in -10i64..=10 {
                let deg = symm_degree(n, r, d).map_err(|e| e.to_string())?;
                // slope scaling: deg/rank = n d / r
                let lhs = BigRational::new(deg, BigInt::from(rank.clone()));
                let rhs = BigRational::new(BigInt::from(n as i64 * d), BigInt::from(r));
                ensure!(lhs == rhs, "slope scaling fails at n={n}, r={r}, d={d}");
                if n == 1 {
                    let e = BundleDescriptor::new(r, d).unwrap();
                    let l = BundleDescriptor::new(1, 0).unwrap();
                    ensure!(BigInt::from(tensor_degree(e, l)) == symm_degree(1, r, d).unwrap(), "S^1 degree");
                }
            }
        }
    }
    Ok(())
}
