//! Per-curve, per-field summary.

use serde::Serialize;

use super::count::count_points;
use super::genus::{multiplicity_sum_bound, plane_genus_upper, serre_genus_lower};
use super::irreducible::{is_absolutely_irreducible, AbsIrreducible};
use super::singular::{blowup_bonus, singularity_records, SingularityRecord};
use super::PlaneCurve;
use crate::field::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveReport {
    pub curve: String,
    pub degree: u32,
    pub q: u32,
    pub plane_points: u64,
    pub smooth_plane_points: u64,
    pub singularities: Vec<SingularityRecord>,
    pub blowup_bonus_estimate: u64,
    /// False when some singularity was not ordinary.
    pub blowup_bonus_exact: bool,
    pub estimated_smooth_model_points: u64,
    pub genus_lower: u64,
    pub genus_upper: u64,
    pub abs_irreducible: AbsIrreducible,
}

impl CurveReport {
    pub fn genus_resolved(&self) -> Option<u64> {
        (self.genus_lower == self.genus_upper).then_some(self.genus_lower)
    }
}

/// Full analysis, including the absolute irreducibility test.
pub fn analyze_curve(curve: &PlaneCurve, field: &FieldSpec) -> CurveReport {
    analyze_with(curve, field, true)
}

/// Analysis with the (comparatively slow) irreducibility test optional.
pub fn analyze_with(curve: &PlaneCurve, field: &FieldSpec, test_irreducible: bool) -> CurveReport {
    let plane_points = count_points(curve, field);
    let singularities = singularity_records(curve, field);
    let r = singularities.len() as u32;
    let mut bonus = 0u64;
    let mut exact = true;
    for s in &singularities {
        let b = blowup_bonus(s);
        bonus += b.estimate as u64;
        exact &= b.exact;
    }
    if r >= 2 {
        let cap = multiplicity_sum_bound(curve.degree(), r).expect("r >= 2") as u64;
        if bonus > cap {
            bonus = cap;
            exact = false;
        }
    }
    let smooth = plane_points - r as u64;
    let estimated = smooth + bonus;
    let q = field.q();
    CurveReport {
        curve: curve.to_string(),
        degree: curve.degree(),
        q,
        plane_points,
        smooth_plane_points: smooth,
        singularities,
        blowup_bonus_estimate: bonus,
        blowup_bonus_exact: exact,
        estimated_smooth_model_points: estimated,
        genus_lower: serre_genus_lower(estimated, q as u64),
        genus_upper: plane_genus_upper(curve.degree(), r) as u64,
        abs_irreducible: if test_irreducible { is_absolutely_irreducible(curve) } else { AbsIrreducible::Untested },
    }
}
