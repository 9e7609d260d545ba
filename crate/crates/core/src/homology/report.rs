use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::ser::SerializeMap;
use serde::Serialize;

use super::transfer::{level_abelianization, transfer_between};
use crate::abelian::{AbHom, FgAbelianGroup};
use crate::colimit::{colimit_finite, ColimitResult, SupernaturalNumber};
use crate::error::{Error, Result};
use crate::odometer::{reflection_fixed_counts, GroupKind, OdometerSpec, Tail};

/// Highest degree reported unless asked otherwise.
pub const DEFAULT_MAX_DEGREE: usize = 3;

/// Verification window for the degree-1 colimit.
pub const COLIMIT_WINDOW: usize = 4;

/// A homology group: finitely generated, or a rank-1 subgroup of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomologyGroup {
    Group(FgAbelianGroup),
    Rank1(SupernaturalNumber),
}

impl HomologyGroup {
    pub fn as_group(&self) -> Option<&FgAbelianGroup> {
        match self {
            HomologyGroup::Group(g) => Some(g),
            HomologyGroup::Rank1(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, HomologyGroup::Group(g) if g.is_trivial())
    }

    fn from_colimit(c: ColimitResult) -> Self {
        match c {
            ColimitResult::Rank1(s) => HomologyGroup::Rank1(s),
            other => HomologyGroup::Group(other.as_fg_group().expect("finitely generated colimit")),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyGroup::Group(g) => write!(f, "{}", g),
            HomologyGroup::Rank1(s) => f.write_str(&s.group_string()),
        }
    }
}

/// `H_n(Γ, C(X, Z))` for `n ≤ max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub degrees: BTreeMap<usize, HomologyGroup>,
    pub max_degree: usize,
    /// Level from which the degree-1 system was seen to be stable.
    pub h1_stabilization_depth: usize,
}

impl HomologyReport {
    pub fn degree(&self, n: usize) -> Option<&HomologyGroup> {
        self.degrees.get(&n)
    }
}

impl Serialize for HomologyReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.degrees.len()))?;
        for (n, g) in &self.degrees {
            map.serialize_entry(&n.to_string(), &g.to_string())?;
        }
        map.end()
    }
}

/// Transfer system `(Γ_1)_ab → (Γ_2)_ab → …` over `levels` levels.
pub fn degree_one_system(spec: &OdometerSpec, levels: usize) -> Result<(Vec<FgAbelianGroup>, Vec<AbHom>)> {
    let groups = vec![level_abelianization(spec.group()); levels];
    let maps = (1..levels)
        .map(|i| transfer_between(spec, i, i + 1, 1))
        .collect::<Result<_>>()?;
    Ok((groups, maps))
}

/// `lim (H_1(Γ_i), tr)`, with the level it stabilized at.
fn degree_one_colimit(spec: &OdometerSpec, tail: Tail) -> Result<(FgAbelianGroup, usize)> {
    if let Tail::Explicit = tail {
        // a finite system: its colimit is the last group
        let top = spec.level_count().expect("explicit tail");
        return Ok((level_abelianization(spec.group()), top));
    }
    let levels = spec.levels_for_colimit(2 * COLIMIT_WINDOW);
    let (groups, maps) = degree_one_system(spec, levels)?;
    match spec.group() {
        GroupKind::Dihedral => match colimit_finite(&groups, &maps, COLIMIT_WINDOW)? {
            ColimitResult::Finite { group, stabilization_depth } => Ok((group, stabilization_depth)),
            ColimitResult::Zero => Ok((FgAbelianGroup::trivial(), 1)),
            ColimitResult::Rank1(_) => unreachable!("finite system"),
        },
        GroupKind::Integers => {
            // every transfer is an automorphism of Z, so the colimit is Z
            for (i, m) in maps.iter().enumerate() {
                if !m.matrix().determinant().abs().is_one() {
                    return Err(Error::InvariantViolation(format!("transfer at level {} is not invertible", i + 1)));
                }
            }
            Ok((FgAbelianGroup::free(1), 1))
        }
        GroupKind::DirectProduct => unreachable!("rejected earlier"),
    }
}

/// `H_*(Γ, C(X, Z)) = lim (H_*(Γ_i), tr)` up to `max_degree`.
///
/// Degree 0 is the rank-1 colimit of the indices and degree 1 the colimit of
/// the transfer system. For the dihedral group higher even degrees vanish and
/// odd degrees are `Z_2^{m_(0,1) + m_(1,1)}`; for `Z` everything above degree 1 vanishes.
pub fn odometer_homology(spec: &OdometerSpec, max_degree: usize) -> Result<HomologyReport> {
    if spec.group() == GroupKind::DirectProduct {
        return Err(Error::WrongGroupKind {
            expected: "z or dihedral".into(),
            got: spec.group().name().into(),
        });
    }
    let tail = spec.require_tail()?;
    let mut degrees = BTreeMap::new();
    degrees.insert(0, HomologyGroup::from_colimit(spec.index_colimit()?));
    let mut depth = 0;
    if max_degree >= 1 {
        let (h1, d) = degree_one_colimit(spec, tail)?;
        depth = d;
        degrees.insert(1, HomologyGroup::Group(h1));
    }
    if max_degree >= 2 {
        let odd = match spec.group() {
            GroupKind::Dihedral => {
                let (a, b) = reflection_fixed_counts(spec)?;
                FgAbelianGroup::new(0, vec![2u64; (a + b) as usize])
            }
            _ => FgAbelianGroup::trivial(),
        };
        for n in 2..=max_degree {
            let g = if n % 2 == 0 { FgAbelianGroup::trivial() } else { odd.clone() };
            degrees.insert(n, HomologyGroup::Group(g));
        }
    }
    Ok(HomologyReport {
        degrees,
        max_degree,
        h1_stabilization_depth: depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(r: &HomologyReport) -> Vec<String> {
        r.degrees.values().map(|g| g.to_string()).collect()
    }

    #[test]
    fn dihedral_even() {
        let s = OdometerSpec::geometric(GroupKind::Dihedral, 2, 2, 6).unwrap();
        let r = odometer_homology(&s, 3).unwrap();
        assert_eq!(render(&r), ["Z[1/2]", "Z_2", "0", "Z_2"]);
    }

    #[test]
    fn dihedral_odd() {
        let s = OdometerSpec::geometric(GroupKind::Dihedral, 3, 3, 6).unwrap();
        let r = odometer_homology(&s, 3).unwrap();
        assert_eq!(render(&r), ["Z[1/3]", "Z_2^2", "0", "Z_2^2"]);
    }

    #[test]
    fn integers() {
        let s = OdometerSpec::geometric(GroupKind::Integers, 2, 2, 6).unwrap();
        let r = odometer_homology(&s, 2).unwrap();
        assert_eq!(render(&r), ["Z[1/2]", "Z", "0"]);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"0":"Z[1/2]","1":"Z","2":"0"}"#);
    }

    #[test]
    fn needs_tail() {
        let s = OdometerSpec::explicit(GroupKind::Dihedral, [2, 4], 2, None).unwrap();
        assert_eq!(odometer_homology(&s, 3), Err(Error::TailRequired));
    }
}
