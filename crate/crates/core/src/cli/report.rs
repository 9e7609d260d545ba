use serde::ser::SerializeMap;
use serde::Serialize;

use super::spec_io::spec_to_json;
use crate::error::{Error, Result};
use crate::fullgroup::{ah_certificate, AhCertificate, AhLevel};
use crate::homology::{odometer_homology, HomologyReport, DEFAULT_MAX_DEGREE};
use crate::ktheory::{hk_compare, k_theory_dihedral, HkVerdict, KTheoryReport};
use crate::odometer::{
    fixed_points_extendable, fixed_points_limit, is_topologically_free, FixedCount, FreenessVerdict, GroupElement,
    GroupKind, Horizon, OdometerSpec,
};

/// Depth at which fixed points are enumerated in reports.
pub const FIXED_POINT_DEPTH: usize = 3;

/// Levels above this many cosets are not picked for AH certificates by default.
pub const DEFAULT_AH_MAX_COSETS: usize = 64;

/// Number of finite levels certified by default.
pub const DEFAULT_AH_LEVELS: usize = 3;

const NOT_PRINCIPAL: &str = "groupoid not essentially principal";
const DIHEDRAL_ONLY: &str = "K-theory is computed only for the dihedral family";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub max_degree: usize,
    /// Finite levels for AH certificates; `None` picks small levels automatically.
    pub ah_levels: Option<Vec<usize>>,
    /// Horizon `D` for fixed-point enumeration; defaults to `d + 3`.
    pub horizon: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            max_degree: DEFAULT_MAX_DEGREE,
            ah_levels: None,
            horizon: None,
        }
    }
}

/// A report field: a value, an explicit marker, or the error that prevented it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry<T> {
    Value(T),
    NotApplicable(String),
    Failed { error: Error, context: Option<String> },
}

impl<T> Entry<T> {
    pub fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Entry::Value(v),
            Err(error) => Entry::Failed { error, context: None },
        }
    }

    fn with_context(r: Result<T>, context: String) -> Self {
        match r {
            Ok(v) => Entry::Value(v),
            Err(error) => Entry::Failed {
                error,
                context: Some(context),
            },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Entry::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn error(&self) -> Option<&Error> {
        match self {
            Entry::Failed { error, .. } => Some(error),
            _ => None,
        }
    }

    pub fn not_applicable(&self) -> Option<&str> {
        match self {
            Entry::NotApplicable(reason) => Some(reason),
            _ => None,
        }
    }
}

impl<T: Serialize> Serialize for Entry<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Value(v) => v.serialize(s),
            Entry::NotApplicable(reason) => s.serialize_str(&format!("not applicable: {}", reason)),
            Entry::Failed { error, context } => {
                let mut map = s.serialize_map(None)?;
                map.serialize_entry("error", error.kind())?;
                map.serialize_entry("message", &error.to_string())?;
                if let Some(c) = context {
                    map.serialize_entry("at", c)?;
                }
                map.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointRow {
    pub element: String,
    /// Fixed points on the limit space.
    pub limit: Entry<FixedCount>,
    /// Fixed tuples at depth `d` extending to the horizon.
    pub extendable: Entry<FixedCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointSection {
    pub depth: usize,
    pub horizon: usize,
    pub rows: Vec<FixedPointRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub spec: serde_json::Value,
    pub topological_freeness: Entry<FreenessVerdict>,
    pub fixed_points: FixedPointSection,
    pub homology: Entry<HomologyReport>,
    pub ktheory: Entry<KTheoryReport>,
    pub hk: Entry<HkVerdict>,
    pub ah: Entry<Vec<Entry<AhCertificate>>>,
}

impl InvariantReport {
    /// Errors recorded anywhere in the report.
    pub fn errors(&self) -> Vec<&Error> {
        let mut out: Vec<&Error> = Vec::new();
        out.extend(self.topological_freeness.error());
        for row in &self.fixed_points.rows {
            out.extend(row.limit.error());
            out.extend(row.extendable.error());
        }
        out.extend(self.homology.error());
        out.extend(self.ktheory.error());
        out.extend(self.hk.error());
        out.extend(self.ah.error());
        if let Some(certs) = self.ah.value() {
            out.extend(certs.iter().filter_map(Entry::error));
        }
        out
    }

    pub fn has_invariant_violation(&self) -> bool {
        self.errors().iter().any(|e| matches!(e, Error::InvariantViolation(_)))
    }
}

/// Elements whose fixed points are reported.
pub fn probe_elements(kind: GroupKind) -> Vec<GroupElement> {
    match kind {
        GroupKind::Integers => vec![GroupElement::from_ints(kind, 1, false)],
        GroupKind::Dihedral | GroupKind::DirectProduct => {
            vec![GroupElement::from_ints(kind, 0, true), GroupElement::from_ints(kind, 1, true)]
        }
    }
}

fn fixed_point_section(spec: &OdometerSpec, horizon: Option<usize>) -> FixedPointSection {
    let depth = spec.depth().min(FIXED_POINT_DEPTH);
    let horizon = horizon.unwrap_or(depth + 3);
    let rows = probe_elements(spec.group())
        .into_iter()
        .map(|g| FixedPointRow {
            element: g.to_string(),
            limit: Entry::from_result(fixed_points_limit(spec, &g)),
            extendable: Entry::from_result(fixed_points_extendable(spec, &g, depth, Horizon::Level(horizon))),
        })
        .collect();
    FixedPointSection { depth, horizon, rows }
}

/// Levels certified when none are requested: the first few with `3 ≤ n_i ≤ 64`.
pub fn default_ah_levels(spec: &OdometerSpec) -> Vec<usize> {
    (1..=spec.depth())
        .filter(|&i| spec.modulus_usize(i).is_ok_and(|n| (3..=DEFAULT_AH_MAX_COSETS).contains(&n)))
        .take(DEFAULT_AH_LEVELS)
        .collect()
}

/// Certificates at the given finite levels followed by the colimit certificate.
pub fn ah_entries(spec: &OdometerSpec, levels: &[usize]) -> Vec<Entry<AhCertificate>> {
    let mut out: Vec<Entry<AhCertificate>> = levels
        .iter()
        .map(|&i| Entry::with_context(ah_certificate(spec, AhLevel::Level(i)), format!("level {}", i)))
        .collect();
    out.push(Entry::with_context(ah_certificate(spec, AhLevel::Colimit), "colimit".into()));
    out
}

/// Every invariant of the odometer, each either computed, marked not
/// applicable, or carrying the error that stopped it.
pub fn run_report(spec: &OdometerSpec, options: &ReportOptions) -> InvariantReport {
    let kind = spec.group();
    let topological_freeness = Entry::from_result(is_topologically_free(spec, spec.depth()));
    let fixed_points = fixed_point_section(spec, options.horizon);

    if kind == GroupKind::DirectProduct {
        return InvariantReport {
            spec: spec_to_json(spec),
            topological_freeness,
            fixed_points,
            homology: Entry::NotApplicable(NOT_PRINCIPAL.into()),
            ktheory: Entry::NotApplicable(NOT_PRINCIPAL.into()),
            hk: Entry::NotApplicable(NOT_PRINCIPAL.into()),
            ah: Entry::NotApplicable(NOT_PRINCIPAL.into()),
        };
    }

    let homology = Entry::from_result(odometer_homology(spec, options.max_degree));
    let (ktheory, hk) = match kind {
        GroupKind::Dihedral => (
            Entry::from_result(k_theory_dihedral(spec)),
            Entry::from_result(hk_compare(spec)),
        ),
        _ => (
            Entry::NotApplicable(DIHEDRAL_ONLY.to_string()),
            Entry::NotApplicable(DIHEDRAL_ONLY.to_string()),
        ),
    };
    let levels = options.ah_levels.clone().unwrap_or_else(|| default_ah_levels(spec));
    InvariantReport {
        spec: spec_to_json(spec),
        topological_freeness,
        fixed_points,
        homology,
        ktheory,
        hk,
        ah: Entry::Value(ah_entries(spec, &levels)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_kind_markers() {
        let spec = OdometerSpec::geometric(GroupKind::Integers, 3, 3, 4).unwrap();
        let r = run_report(&spec, &ReportOptions::default());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(
            json["ktheory"],
            "not applicable: K-theory is computed only for the dihedral family"
        );
        assert_eq!(json["topological_freeness"]["verdict"], "Free");
        assert_eq!(json["homology"]["1"], "Z");
    }

    #[test]
    fn direct_product_markers() {
        let spec = OdometerSpec::geometric(GroupKind::DirectProduct, 2, 2, 3).unwrap();
        let json = serde_json::to_value(run_report(&spec, &ReportOptions::default())).unwrap();
        assert_eq!(json["topological_freeness"]["verdict"], "NotFree");
        for field in ["homology", "ktheory", "hk", "ah"] {
            assert_eq!(json[field], "not applicable: groupoid not essentially principal");
        }
        assert_eq!(json["fixed_points"]["rows"][0]["limit"], "uncountable");
    }

    #[test]
    fn errors_become_entries() {
        let spec = OdometerSpec::explicit(GroupKind::Dihedral, [2, 4], 2, None).unwrap();
        let r = run_report(&spec, &ReportOptions::default());
        assert_eq!(r.homology.error(), Some(&Error::TailRequired));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["homology"]["error"], "TailRequired");
        assert!(!r.has_invariant_violation());
    }

    #[test]
    fn deterministic() {
        let spec = OdometerSpec::geometric(GroupKind::Dihedral, 2, 2, 5).unwrap();
        let a = serde_json::to_string(&run_report(&spec, &ReportOptions::default())).unwrap();
        let b = serde_json::to_string(&run_report(&spec, &ReportOptions::default())).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(r#""K0":"Z[1/2] (+) Z^1""#));
    }
}
