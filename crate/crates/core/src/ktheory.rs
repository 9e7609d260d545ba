//! K-theory of the dihedral odometer crossed products and the comparison with
//! groupoid homology.
//!
//! `K_0 ≅ (1 + (0,1)_*)(C(X,Z)/(1 - (1,0)_*)) ⊕ Z^{m_(0,1) + m_(1,1)}` and `K_1 = 0`,
//! where the coinvariants of the translation form the rank-1 group `{m/n_i}`
//! on which the flip acts trivially.

use std::fmt;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::abelian::{cokernel, AbHom, FgAbelianGroup, IntMatrix, Presentation};
use crate::colimit::SupernaturalNumber;
use crate::error::{Error, Result};
use crate::homology::{odometer_homology, HomologyGroup, HomologyReport, DEFAULT_MAX_DEGREE};
use crate::odometer::{reflection_fixed_counts, GroupKind, OdometerSpec};

/// Largest level checked by the coinvariant computation inside reports.
pub const COINVARIANT_CHECK_LIMIT: usize = 64;

/// `C(Z_n, Z)/(1 - shift)` with the action induced by `x ↦ -x`; the action is
/// checked to be the identity.
pub fn coinvariants_with_involution(spec: &OdometerSpec, level: usize) -> Result<(FgAbelianGroup, AbHom)> {
    if level == 0 || level > spec.depth() {
        return Err(Error::LevelOutOfRange {
            level,
            available: format!("1..={}", spec.depth()),
        });
    }
    coinvariants_mod(spec.modulus_usize(level)?)
}

/// [`coinvariants_with_involution`] for `Z_n` directly.
pub fn coinvariants_mod(n: usize) -> Result<(FgAbelianGroup, AbHom)> {
    if n > 4096 {
        return Err(Error::TooLarge(format!("coinvariants over Z_{}", n)));
    }
    let one = BigInt::from(1);
    let mut relations = IntMatrix::identity(n);
    for x in 0..n {
        relations[((x + 1) % n, x)] -= &one;
    }
    let negation = IntMatrix::from_fn(n, n, |row, col| if row == (n - col) % n { one.clone() } else { BigInt::from(0) });
    let group = FgAbelianGroup::from_presentation(Presentation::new(n, relations.clone()));
    let sigma = AbHom::new(group.clone(), group.clone(), negation)?;
    if !sigma.agrees_with(&AbHom::identity(&group)) {
        return Err(Error::InvariantViolation(format!("the flip acts nontrivially on the coinvariants of Z_{}", n)));
    }
    debug_assert_eq!(group, cokernel(&relations));
    Ok((group, sigma))
}

/// `K_0 = {m/n_i} ⊕ Z^m`, `K_1`, and the fixed-point counts `(m_(0,1), m_(1,1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryReport {
    pub k0_rank1: SupernaturalNumber,
    pub k0_free: usize,
    pub k1: FgAbelianGroup,
    pub fixed_counts: (u64, u64),
}

impl KTheoryReport {
    pub fn k0_string(&self) -> String {
        format!("{} (+) Z^{}", self.k0_rank1.group_string(), self.k0_free)
    }
}

impl Serialize for KTheoryReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KTheoryReport", 3)?;
        st.serialize_field("K0", &self.k0_string())?;
        st.serialize_field("K1", &self.k1.to_string())?;
        st.serialize_field("fixed_points", &[self.fixed_counts.0, self.fixed_counts.1])?;
        st.end()
    }
}

fn require_dihedral(spec: &OdometerSpec) -> Result<()> {
    if spec.group() != GroupKind::Dihedral {
        return Err(Error::WrongGroupKind {
            expected: GroupKind::Dihedral.name().into(),
            got: spec.group().name().into(),
        });
    }
    Ok(())
}

/// K-theory of `C(X) ⋊ (Z ⋊ Z_2)`.
///
/// The image of `1 + (0,1)_*` is `2·{m/n_i}`, isomorphic to `{m/n_i}` through
/// halving, so the rank-1 summand is the index supernatural number itself.
pub fn k_theory_dihedral(spec: &OdometerSpec) -> Result<KTheoryReport> {
    require_dihedral(spec)?;
    spec.require_tail()?;
    for level in 1..=spec.depth() {
        match spec.modulus_usize(level) {
            Ok(n) if n <= COINVARIANT_CHECK_LIMIT => {
                coinvariants_mod(n)?;
            }
            _ => break,
        }
    }
    let fixed_counts = reflection_fixed_counts(spec)?;
    let m = fixed_counts.0 + fixed_counts.1;
    if !(1..=2).contains(&m) {
        return Err(Error::InvariantViolation(format!("reflections fix {} points in total", m)));
    }
    Ok(KTheoryReport {
        k0_rank1: spec.index_supernatural()?,
        k0_free: m as usize,
        k1: FgAbelianGroup::trivial(),
        fixed_counts,
    })
}

/// A completely decomposable torsion-free group `Q_τ ⊕ Z^k` up to isomorphism:
/// the rank-1 summand's infinite primes and the number of `Z` summands.
fn decomposable_class(rank1: &SupernaturalNumber, free: usize) -> (Vec<u64>, usize) {
    if rank1.is_finite() {
        (Vec::new(), free + 1)
    } else {
        (rank1.infinite_primes(), free)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Match { details: String },
    Mismatch { details: String },
}

impl Comparison {
    fn new(equal: bool, details: String) -> Self {
        if equal {
            Comparison::Match { details }
        } else {
            Comparison::Mismatch { details }
        }
    }

    pub fn is_match(&self) -> bool {
        matches!(self, Comparison::Match { .. })
    }

    pub fn details(&self) -> &str {
        match self {
            Comparison::Match { details } | Comparison::Mismatch { details } => details,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Match { details } => write!(f, "match ({})", details),
            Comparison::Mismatch { details } => write!(f, "mismatch ({})", details),
        }
    }
}

impl Serialize for Comparison {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Comparison", 2)?;
        st.serialize_field("verdict", if self.is_match() { "match" } else { "mismatch" })?;
        st.serialize_field("details", self.details())?;
        st.end()
    }
}

/// `K_0` against `⊕ H_{2k}` and `K_1` against `⊕ H_{2k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkVerdict {
    pub k0_vs_even: Comparison,
    pub k1_vs_odd: Comparison,
    pub even_side: String,
    pub odd_side: String,
    pub ktheory: KTheoryReport,
    pub homology: HomologyReport,
}

impl HkVerdict {
    pub fn is_counterexample(&self) -> bool {
        !self.k0_vs_even.is_match() || !self.k1_vs_odd.is_match()
    }
}

/// Compares K-theory with homology for the dihedral family. Even-degree
/// homology above 0 vanishes, so the even side is `H_0`; the odd side repeats
/// the same group in every odd degree and is reported as such.
pub fn hk_compare(spec: &OdometerSpec) -> Result<HkVerdict> {
    require_dihedral(spec)?;
    let homology = odometer_homology(spec, DEFAULT_MAX_DEGREE)?;
    let ktheory = k_theory_dihedral(spec)?;

    let h0 = match homology.degree(0) {
        Some(HomologyGroup::Rank1(s)) => s.clone(),
        other => return Err(Error::InvariantViolation(format!("H_0 should be rank one, got {:?}", other))),
    };
    for n in (2..=homology.max_degree).step_by(2) {
        if !homology.degree(n).is_some_and(HomologyGroup::is_zero) {
            return Err(Error::InvariantViolation(format!("H_{} does not vanish", n)));
        }
    }
    let even_side = h0.group_string();
    let k0_class = decomposable_class(&ktheory.k0_rank1, ktheory.k0_free);
    let even_class = decomposable_class(&h0, 0);
    let k0_vs_even = Comparison::new(
        k0_class == even_class,
        format!("K_0 = {} vs H_0 (+) H_2 (+) ... = {}", ktheory.k0_string(), even_side),
    );

    let h1 = homology.degree(1).and_then(HomologyGroup::as_group).cloned().expect("degree 1 present");
    let h3 = homology.degree(3).and_then(HomologyGroup::as_group).cloned().expect("degree 3 present");
    let odd_side = if h1.is_trivial() && h3.is_trivial() {
        "0".to_string()
    } else {
        format!("{} (+) {} (+) ... ({} per odd degree >= 3, infinitely many)", h1, h3, h3)
    };
    let odd_zero = h1.is_trivial() && h3.is_trivial();
    let k1_vs_odd = Comparison::new(
        ktheory.k1.is_trivial() == odd_zero,
        format!("K_1 = {} vs H_1 (+) H_3 (+) ... = {}", ktheory.k1, odd_side),
    );
    Ok(HkVerdict {
        k0_vs_even,
        k1_vs_odd,
        even_side,
        odd_side,
        ktheory,
        homology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral(start: u64, ratio: u64) -> OdometerSpec {
        OdometerSpec::geometric(GroupKind::Dihedral, start, ratio, 5).unwrap()
    }

    #[test]
    fn coinvariants_are_z_with_trivial_flip() {
        for n in [1, 4, 9] {
            let (g, sigma) = coinvariants_mod(n).unwrap();
            assert_eq!(g, FgAbelianGroup::free(1));
            assert!(sigma.agrees_with(&AbHom::identity(&g)));
        }
    }

    #[test]
    fn k_theory_examples() {
        let k = k_theory_dihedral(&dihedral(2, 2)).unwrap();
        assert_eq!(k.k0_string(), "Z[1/2] (+) Z^1");
        assert_eq!(
            serde_json::to_string(&k).unwrap(),
            r#"{"K0":"Z[1/2] (+) Z^1","K1":"0","fixed_points":[1,0]}"#
        );
        assert_eq!(k_theory_dihedral(&dihedral(3, 3)).unwrap().k0_string(), "Z[1/3] (+) Z^2");
        let mixed = k_theory_dihedral(&dihedral(6, 3)).unwrap();
        assert_eq!(mixed.k0_string(), "{m/n_i} over 2 * 3^inf (+) Z^2");
        assert_eq!(mixed.fixed_counts, (2, 0));
    }

    #[test]
    fn wrong_kind_and_missing_tail() {
        let z = OdometerSpec::geometric(GroupKind::Integers, 2, 2, 3).unwrap();
        assert!(matches!(k_theory_dihedral(&z), Err(Error::WrongGroupKind { .. })));
        assert!(matches!(hk_compare(&z), Err(Error::WrongGroupKind { .. })));
        let single = OdometerSpec::explicit(GroupKind::Dihedral, [2], 1, None).unwrap();
        assert_eq!(hk_compare(&single), Err(Error::TailRequired));
    }

    #[test]
    fn hk_fails_on_both_sides() {
        for spec in [dihedral(2, 2), dihedral(3, 3)] {
            let v = hk_compare(&spec).unwrap();
            assert!(!v.k0_vs_even.is_match());
            assert!(!v.k1_vs_odd.is_match());
        }
        let v = hk_compare(&dihedral(2, 2)).unwrap();
        assert_eq!(v.k0_vs_even.details(), "K_0 = Z[1/2] (+) Z^1 vs H_0 (+) H_2 (+) ... = Z[1/2]");
        assert!(v.k1_vs_odd.details().starts_with("K_1 = 0 vs H_1 (+) H_3 (+) ... = Z_2 (+) Z_2"));
    }
}
