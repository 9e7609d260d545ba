use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use super::spec_io::spec_to_json;
use crate::abelian::FgAbelianGroup;
use crate::error::{Error, Result};
use crate::homology::{
    groupoid_chain_homology, orbit_stabilizer_homology, transfer_between, transfer_map_with, z2_homology,
    FiniteGroupoid, InvolutionModule,
};
use crate::ktheory::{coinvariants_mod, COINVARIANT_CHECK_LIMIT};
use crate::odometer::{
    fixed_points_extendable, fixed_points_limit, GroupElement, GroupKind, Horizon, OdometerSpec, Transversal,
};

/// Largest `Z_n` whose involution homology is compared.
pub const INVOLUTION_ORACLE_LIMIT: usize = 128;
/// Largest `Z_n` whose groupoid chain complex is built.
pub const CHAIN_COMPLEX_ORACLE_LIMIT: usize = 12;
/// Largest index between consecutive levels for the transfer oracles.
pub const TRANSFER_ORACLE_LIMIT: u64 = 4096;
pub const RANDOM_TRANSVERSALS_PER_LEVEL: usize = 5;
pub const ORACLE_SEED: u64 = 0x0d0_0e7e5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Agree,
    Disagree,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OraclePair {
    pub name: String,
    pub status: OracleStatus,
    pub details: Vec<String>,
}

impl OraclePair {
    fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: OracleStatus::Skipped,
            details: vec![reason.into()],
        }
    }

    /// Agreement when every check agreed, skipped when none ran.
    fn from_checks(name: &str, checks: Vec<(bool, String)>, none_reason: &str) -> Self {
        if checks.is_empty() {
            return Self::skipped(name, none_reason);
        }
        let status = if checks.iter().all(|(ok, _)| *ok) {
            OracleStatus::Agree
        } else {
            OracleStatus::Disagree
        };
        Self {
            name: name.into(),
            status,
            details: checks.into_iter().map(|(_, d)| d).collect(),
        }
    }

    fn from_result(name: &str, r: Result<Self>) -> Self {
        r.unwrap_or_else(|e| Self::skipped(name, format!("error: {}", e)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub spec: serde_json::Value,
    pub depth: usize,
    pub pairs: Vec<OraclePair>,
}

impl OracleReport {
    pub fn pair(&self, name: &str) -> Option<&OraclePair> {
        self.pairs.iter().find(|p| p.name == name)
    }

    pub fn all_agree_or_skipped(&self) -> bool {
        self.pairs.iter().all(|p| p.status != OracleStatus::Disagree)
    }
}

pub const FIXED_POINTS: &str = "fixed points";
pub const INVOLUTION_HOMOLOGY: &str = "involution homology";
pub const CHAIN_COMPLEX: &str = "groupoid chain complex";
pub const TRANSVERSAL_INDEPENDENCE: &str = "transversal independence";
pub const TRANSFER_TRANSITIVITY: &str = "transfer transitivity";
pub const COINVARIANTS: &str = "coinvariants";

/// `#{x ∈ Z_n : 2x = 0}`.
fn negation_fixed(n: usize) -> usize {
    if n.is_multiple_of(2) {
        2
    } else {
        1
    }
}

fn small_levels(spec: &OdometerSpec, depth: usize, limit: usize) -> Vec<(usize, usize)> {
    (1..=depth)
        .filter_map(|i| spec.modulus_usize(i).ok().map(|n| (i, n)))
        .filter(|&(_, n)| n <= limit)
        .collect()
}

fn fixed_point_oracle(spec: &OdometerSpec, depth: usize) -> Result<OraclePair> {
    if spec.group() != GroupKind::Dihedral {
        return Ok(OraclePair::skipped(FIXED_POINTS, "the closed form counts fixed points of reflections"));
    }
    if spec.effective_tail().is_none() {
        return Ok(OraclePair::skipped(FIXED_POINTS, "the closed form needs a tail"));
    }
    let horizon = depth + 3;
    let mut checks = Vec::new();
    for t in [0, 1] {
        let g = GroupElement::from_ints(GroupKind::Dihedral, t, true);
        let closed = fixed_points_limit(spec, &g)?;
        let brute = fixed_points_extendable(spec, &g, depth, Horizon::Level(horizon))?;
        checks.push((
            closed == brute,
            format!("{}: closed form {}, enumeration at d = {}, D = {}: {}", g, closed, depth, horizon, brute),
        ));
    }
    Ok(OraclePair::from_checks(FIXED_POINTS, checks, ""))
}

fn involution_oracle(spec: &OdometerSpec, depth: usize) -> OraclePair {
    let checks = small_levels(spec, depth, INVOLUTION_ORACLE_LIMIT)
        .into_iter()
        .map(|(i, n)| {
            let module = InvolutionModule::negation(n);
            let h1 = z2_homology(&module, 1);
            let h2 = z2_homology(&module, 2);
            let expected = FgAbelianGroup::new(0, vec![2u64; negation_fixed(n)]);
            (
                h1 == expected && h2.is_trivial(),
                format!("level {} (n = {}): H_1 = {}, H_2 = {}, expected {} and 0", i, n, h1, h2, expected),
            )
        })
        .collect();
    OraclePair::from_checks(INVOLUTION_HOMOLOGY, checks, "no level is small enough")
}

fn chain_complex_oracle(spec: &OdometerSpec, depth: usize) -> Result<OraclePair> {
    if spec.group() != GroupKind::Dihedral {
        return Ok(OraclePair::skipped(CHAIN_COMPLEX, "the level groupoids are reflection groupoids only for the dihedral group"));
    }
    let mut checks = Vec::new();
    for (i, n) in small_levels(spec, depth, CHAIN_COMPLEX_ORACLE_LIMIT) {
        let g = FiniteGroupoid::negation(n);
        for degree in 0..=3 {
            let complex = groupoid_chain_homology(&g, degree)?;
            let formula = orbit_stabilizer_homology(&g, degree)
                .ok_or_else(|| Error::InvariantViolation("stabilizers of negation are cyclic".into()))?;
            checks.push((
                complex == formula,
                format!("level {} (n = {}), degree {}: complex {}, formula {}", i, n, degree, complex, formula),
            ));
        }
    }
    Ok(OraclePair::from_checks(CHAIN_COMPLEX, checks, "no level is small enough"))
}

fn transversal_oracle(spec: &OdometerSpec, depth: usize) -> Result<OraclePair> {
    if depth < 2 {
        return Ok(OraclePair::skipped(TRANSVERSAL_INDEPENDENCE, "needs two levels"));
    }
    let mut rng = StdRng::seed_from_u64(ORACLE_SEED);
    let mut checks = Vec::new();
    for level in 1..depth {
        let r = spec.ratio(level)?;
        if r > TRANSFER_ORACLE_LIMIT {
            continue;
        }
        let canonical = transfer_between(spec, level, level + 1, 1)?;
        let mut agree = 0;
        for _ in 0..RANDOM_TRANSVERSALS_PER_LEVEL {
            let t = Transversal::randomized(spec.group(), r as usize, &mut rng);
            if transfer_map_with(spec, level, &t)?.agrees_with(&canonical) {
                agree += 1;
            }
        }
        checks.push((
            agree == RANDOM_TRANSVERSALS_PER_LEVEL,
            format!("level {}: {}/{} random transversals give the canonical transfer", level, agree, RANDOM_TRANSVERSALS_PER_LEVEL),
        ));
    }
    Ok(OraclePair::from_checks(TRANSVERSAL_INDEPENDENCE, checks, "every index is too large"))
}

fn transitivity_oracle(spec: &OdometerSpec, depth: usize) -> Result<OraclePair> {
    if depth < 3 {
        return Ok(OraclePair::skipped(TRANSFER_TRANSITIVITY, "needs three levels"));
    }
    let mut checks = Vec::new();
    for level in 1..depth - 1 {
        if spec.ratio(level)?.saturating_mul(spec.ratio(level + 1)?) > TRANSFER_ORACLE_LIMIT {
            continue;
        }
        let first = transfer_between(spec, level, level + 1, 1)?;
        let second = transfer_between(spec, level + 1, level + 2, 1)?;
        let direct = transfer_between(spec, level, level + 2, 1)?;
        checks.push((
            second.compose(&first)?.agrees_with(&direct),
            format!("levels {}..{}", level, level + 2),
        ));
    }
    Ok(OraclePair::from_checks(TRANSFER_TRANSITIVITY, checks, "every index is too large"))
}

fn coinvariant_oracle(spec: &OdometerSpec, depth: usize) -> OraclePair {
    if spec.group() != GroupKind::Dihedral {
        return OraclePair::skipped(COINVARIANTS, "the flip exists only in the dihedral group");
    }
    let checks = small_levels(spec, depth, COINVARIANT_CHECK_LIMIT)
        .into_iter()
        .map(|(i, n)| match coinvariants_mod(n) {
            Ok((g, _)) => (g == FgAbelianGroup::free(1), format!("level {} (n = {}): coinvariants {}, flip trivial", i, n, g)),
            Err(e) => (false, format!("level {} (n = {}): {}", i, n, e)),
        })
        .collect();
    OraclePair::from_checks(COINVARIANTS, checks, "no level is small enough")
}

/// Closed forms against brute force on levels `1..=depth`. Disagreements are
/// reported, never raised.
pub fn run_oracles(spec: &OdometerSpec, depth: usize) -> OracleReport {
    let pairs = vec![
        OraclePair::from_result(FIXED_POINTS, fixed_point_oracle(spec, depth)),
        involution_oracle(spec, depth),
        OraclePair::from_result(CHAIN_COMPLEX, chain_complex_oracle(spec, depth)),
        OraclePair::from_result(TRANSVERSAL_INDEPENDENCE, transversal_oracle(spec, depth)),
        OraclePair::from_result(TRANSFER_TRANSITIVITY, transitivity_oracle(spec, depth)),
        coinvariant_oracle(spec, depth),
    ];
    OracleReport {
        spec: spec_to_json(spec),
        depth,
        pairs,
    }
}
