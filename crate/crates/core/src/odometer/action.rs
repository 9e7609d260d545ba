use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::Serialize;

use super::element::{GroupElement, GroupKind};
use super::spec::{OdometerSpec, Tail};
use crate::colimit::Multiplicity;
use crate::error::{Error, Result};

/// Largest coset space enumerated point by point.
pub const ENUMERATION_LIMIT: usize = 1 << 24;

fn check_kind(spec: &OdometerSpec, g: &GroupElement) -> Result<()> {
    if g.kind() != spec.group() {
        return Err(Error::WrongGroupKind {
            expected: spec.group().name().into(),
            got: g.kind().name().into(),
        });
    }
    Ok(())
}

/// `x ↦ t + (-1)^s x` on `Z_n` (the flip is ignored unless the group is dihedral).
pub(crate) fn act_mod(g: &GroupElement, x: &BigInt, n: &BigInt) -> BigInt {
    let y = match g {
        GroupElement::Dihedral(t, true) => t - x,
        _ => g.t() + x,
    };
    y.mod_floor(n)
}

/// Left multiplication by `g` on `Γ/Γ_level`, cosets written as `t mod n_level`.
pub fn coset_action(spec: &OdometerSpec, level: usize, g: &GroupElement, coset: &BigInt) -> Result<BigInt> {
    check_kind(spec, g)?;
    let n = spec.modulus(level)?;
    if coset.is_negative() || *coset >= n {
        return Err(Error::Invalid(format!("coset {} is not in Z_{}", coset, n)));
    }
    Ok(act_mod(g, coset, &n))
}

/// A compatible tuple `(x_1, …, x_d)` with `x_i ∈ Z_{n_i}` and `x_{i+1} ≡ x_i mod n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPoint {
    coords: Vec<BigInt>,
}

impl TruncatedPoint {
    /// The tuple determined by its last coordinate.
    pub fn from_last(spec: &OdometerSpec, depth: usize, x: &BigInt) -> Result<Self> {
        let coords = (1..=depth)
            .map(|i| spec.modulus(i).map(|n| x.mod_floor(&n)))
            .collect::<Result<_>>()?;
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn depth(&self) -> usize {
        self.coords.len()
    }

    pub fn is_compatible(&self, spec: &OdometerSpec) -> bool {
        self.coords.iter().enumerate().all(|(i, x)| {
            let Ok(n) = spec.modulus(i + 1) else { return false };
            let in_range = !x.is_negative() && *x < n;
            let projects = i == 0 || x.mod_floor(&spec.modulus(i).expect("lower level")) == self.coords[i - 1];
            in_range && projects
        })
    }

    pub fn act(&self, spec: &OdometerSpec, g: &GroupElement) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, x)| coset_action(spec, i + 1, g, x))
            .collect::<Result<_>>()?;
        Ok(Self { coords })
    }
}

/// All compatible tuples of length `depth`, ordered by last coordinate.
pub fn truncated_points(spec: &OdometerSpec, depth: usize) -> Result<Vec<TruncatedPoint>> {
    if depth == 0 || depth > spec.depth() {
        return Err(Error::BadDepth(format!("depth {} is outside 1..={}", depth, spec.depth())));
    }
    let n = enumerable(spec, depth)?;
    (0..n)
        .map(|x| TruncatedPoint::from_last(spec, depth, &BigInt::from(x)))
        .collect()
}

fn enumerable(spec: &OdometerSpec, level: usize) -> Result<usize> {
    let n = spec.modulus_usize(level)?;
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("Z_{} at level {}", n, level)));
    }
    Ok(n)
}

/// How far a fixed tuple has to extend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horizon {
    Level(usize),
    /// Fixed points of the limit space itself.
    Infinite,
}

impl Horizon {
    /// `d + 3`.
    pub fn default_for(depth: usize) -> Self {
        Horizon::Level(depth + 3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FixedCount {
    Finite(BigInt),
    /// `g` acts trivially on a Cantor set.
    Uncountable,
}

impl FixedCount {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            FixedCount::Finite(n) => Some(n),
            FixedCount::Uncountable => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.finite().and_then(ToPrimitive::to_u64)
    }
}

impl fmt::Display for FixedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedCount::Finite(n) => write!(f, "{}", n),
            FixedCount::Uncountable => f.write_str("uncountable"),
        }
    }
}

impl Serialize for FixedCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_u64() {
            Some(n) => s.serialize_u64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

/// Number of fixed tuples of `g` at depth `d` that extend to fixed tuples at
/// the horizon. The finite-horizon count enumerates `Z_{n_D}`; the infinite
/// horizon is answered in closed form and needs a tail.
pub fn fixed_points_extendable(spec: &OdometerSpec, g: &GroupElement, depth: usize, horizon: Horizon) -> Result<FixedCount> {
    check_kind(spec, g)?;
    match horizon {
        Horizon::Infinite => fixed_points_limit(spec, g),
        Horizon::Level(big) => {
            if depth == 0 || big < depth {
                return Err(Error::BadDepth(format!("need 1 <= d <= D, got d = {}, D = {}", depth, big)));
            }
            let n_big = BigInt::from(enumerable(spec, big)?);
            let n_small = spec.modulus(depth)?;
            let mut projected: Vec<BigInt> = (0..enumerable(spec, big)?)
                .map(BigInt::from)
                .filter(|x| act_mod(g, x, &n_big) == *x)
                .map(|x| x.mod_floor(&n_small))
                .collect();
            projected.sort();
            projected.dedup();
            Ok(FixedCount::Finite(BigInt::from(projected.len())))
        }
    }
}

/// Fixed points of `g` on the whole space `X`.
///
/// A reflection `x ↦ t - x` fixes the solutions of `2x = t` in `lim Z_{n_i}`;
/// only the 2-primary part of the index supernatural number matters. Under an
/// explicit tail `X` is the finite top level.
pub fn fixed_points_limit(spec: &OdometerSpec, g: &GroupElement) -> Result<FixedCount> {
    check_kind(spec, g)?;
    let tail = spec.require_tail()?;
    let t = g.t();
    if matches!(g, GroupElement::Dihedral(_, true)) {
        let two = spec.index_supernatural()?.multiplicity(2);
        let count = match two {
            Multiplicity::Finite(0) => 1,
            _ if t.is_odd() => 0,
            Multiplicity::Infinite => 1,
            Multiplicity::Finite(_) => 2,
        };
        return Ok(FixedCount::Finite(BigInt::from(count)));
    }
    Ok(match tail {
        Tail::Geometric { .. } if t.is_zero() => FixedCount::Uncountable,
        Tail::Geometric { .. } => FixedCount::Finite(BigInt::zero()),
        Tail::Explicit => {
            let top = spec.level_count().expect("explicit tail bounds the system");
            let n = spec.modulus(top)?;
            if t.is_multiple_of(&n) {
                FixedCount::Finite(n)
            } else {
                FixedCount::Finite(BigInt::zero())
            }
        }
    })
}

/// `(m_(0,1), m_(1,1))` for the dihedral group.
pub fn reflection_fixed_counts(spec: &OdometerSpec) -> Result<(u64, u64)> {
    if spec.group() != GroupKind::Dihedral {
        return Err(Error::WrongGroupKind {
            expected: GroupKind::Dihedral.name().into(),
            got: spec.group().name().into(),
        });
    }
    let count = |t: i64| -> Result<u64> {
        let g = GroupElement::from_ints(GroupKind::Dihedral, t, true);
        Ok(fixed_points_limit(spec, &g)?.as_u64().expect("reflections fix finitely many points"))
    };
    Ok((count(0)?, count(1)?))
}

/// `∩ Γ_i`: exact for unbounded chains, otherwise the last listed `Γ_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionSubgroup {
    group: GroupKind,
    truncated_at: Option<(usize, BigInt)>,
}

impl IntersectionSubgroup {
    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    pub fn truncated_at(&self) -> Option<&(usize, BigInt)> {
        self.truncated_at.as_ref()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        if g.kind() != self.group {
            return false;
        }
        match &self.truncated_at {
            Some((_, n)) => g.t().is_multiple_of(n),
            None => g.t().is_zero(),
        }
    }

    /// Elements of an exact (finite) intersection.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if self.is_truncated() {
            return None;
        }
        let mut out = vec![GroupElement::identity(self.group)];
        out.extend(GroupElement::flip(self.group));
        Some(out)
    }
}

impl fmt::Display for IntersectionSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.truncated_at, self.group.has_flip()) {
            (None, _) => {
                let els: Vec<String> = self.elements().expect("exact").iter().map(|g| g.to_string()).collect();
                write!(f, "{{{}}}", els.join(", "))
            }
            (Some((i, n)), false) => write!(f, "{}Z (truncated at level {})", n, i),
            (Some((i, n)), true) => write!(f, "{}Z with the flip (truncated at level {})", n, i),
        }
    }
}

pub fn chain_intersection(spec: &OdometerSpec) -> Result<IntersectionSubgroup> {
    let truncated_at = match spec.level_count() {
        None => None,
        Some(l) => Some((l, spec.modulus(l)?)),
    };
    Ok(IntersectionSubgroup {
        group: spec.group(),
        truncated_at,
    })
}

/// `b ∈ Γ_level` moving `gamma` out of the intersection by conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessWitness {
    pub gamma: String,
    pub level: usize,
    pub b: String,
    /// `b · γ · b⁻¹`
    pub conjugate: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreenessVerdict {
    Free { witnesses: Vec<FreenessWitness> },
    NotFree { gamma: GroupElement, level: usize, reason: String },
    Inconclusive { reason: String },
}

impl Serialize for FreenessVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("verdict", self.label())?;
        match self {
            FreenessVerdict::Free { witnesses } => map.serialize_entry("witnesses", witnesses)?,
            FreenessVerdict::NotFree { gamma, level, reason } => {
                map.serialize_entry("gamma", &gamma.to_string())?;
                map.serialize_entry("level", level)?;
                map.serialize_entry("reason", reason)?;
            }
            FreenessVerdict::Inconclusive { reason } => map.serialize_entry("reason", reason)?,
        }
        map.end()
    }
}

impl FreenessVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreenessVerdict::Free { .. })
    }

    pub fn is_not_free(&self) -> bool {
        matches!(self, FreenessVerdict::NotFree { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            FreenessVerdict::Free { .. } => "Free",
            FreenessVerdict::NotFree { .. } => "NotFree",
            FreenessVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Every nontrivial `γ ∈ ∩Γ_i` must be conjugated out of `∩Γ_i` by some
/// `b ∈ Γ_j`, for each `j` up to `search_depth`.
pub fn is_topologically_free(spec: &OdometerSpec, search_depth: usize) -> Result<FreenessVerdict> {
    let kind = spec.group();
    let flip = GroupElement::flip(kind);
    if kind == GroupKind::DirectProduct {
        // (0,1) is central and lies in every Γ_i, whatever the tail.
        let gamma = flip.expect("direct product has a flip");
        for j in 1..=search_depth.max(1) {
            let n = spec.modulus(j)?;
            for b in [GroupElement::translation(kind, n.clone()), GroupElement::new(kind, n, true)] {
                if b.conjugate(&gamma) != gamma {
                    return Err(Error::InvariantViolation(format!("{} is not central", gamma)));
                }
            }
        }
        return Ok(FreenessVerdict::NotFree {
            gamma,
            level: 1,
            reason: "(0,1) is central, so every conjugate stays in the intersection".into(),
        });
    }
    match spec.effective_tail() {
        Some(Tail::Geometric { .. }) => {}
        Some(Tail::Explicit) | None => {
            return Ok(FreenessVerdict::Inconclusive {
                reason: "freeness is a property of the unbounded chain; supply a geometric tail".into(),
            })
        }
    }
    let inter = chain_intersection(spec)?;
    let nontrivial: Vec<GroupElement> = inter
        .elements()
        .expect("exact intersection")
        .into_iter()
        .filter(|g| !g.is_identity())
        .collect();
    let mut witnesses = Vec::new();
    for gamma in &nontrivial {
        for j in 1..=search_depth {
            let n = spec.modulus(j)?;
            let b = GroupElement::translation(kind, n);
            let conj = &(&b * gamma) * &b.inverse();
            let conj_inv = b.conjugate(gamma);
            if inter.contains(&conj) || inter.contains(&conj_inv) {
                return Err(Error::InvariantViolation(format!("translation witness fails for {} at level {}", gamma, j)));
            }
            witnesses.push(FreenessWitness {
                gamma: gamma.to_string(),
                level: j,
                b: b.to_string(),
                conjugate: conj.to_string(),
            });
        }
    }
    Ok(FreenessVerdict::Free { witnesses })
}

/// Orbit of coset 0 under the translation `(1,0)` at a level.
pub fn translation_orbit_size(spec: &OdometerSpec, level: usize) -> Result<usize> {
    let n = BigInt::from(enumerable(spec, level)?);
    let one = GroupElement::translation(spec.group(), BigInt::one());
    let mut x = BigInt::zero();
    let mut size = 0;
    loop {
        x = act_mod(&one, &x, &n);
        size += 1;
        if x.is_zero() {
            return Ok(size);
        }
    }
}
