use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::action::ENUMERATION_LIMIT;
use super::element::{GroupElement, GroupKind};
use super::spec::OdometerSpec;
use crate::error::{Error, Result};

/// One representative per coset of `Γ/nΓ`, the coset of `(t, s)` being `t mod n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    kind: GroupKind,
    modulus: usize,
    reps: Vec<GroupElement>,
}

impl Transversal {
    /// `reps[k] = (k, 0)`.
    pub fn canonical(kind: GroupKind, modulus: usize) -> Self {
        let reps = (0..modulus).map(|k| GroupElement::translation(kind, k)).collect();
        Self { kind, modulus, reps }
    }

    /// Each representative moved inside its coset by a random element of the subgroup.
    pub fn randomized<R: Rng + ?Sized>(kind: GroupKind, modulus: usize, rng: &mut R) -> Self {
        let n = modulus as i64;
        let reps = (0..n)
            .map(|k| {
                let shift = rng.gen_range(-3i64..=3);
                let s = kind.has_flip() && rng.gen_bool(0.5);
                GroupElement::from_ints(kind, k + shift * n, s)
            })
            .collect();
        Self { kind, modulus, reps }
    }

    pub fn from_reps(kind: GroupKind, modulus: usize, reps: Vec<GroupElement>) -> Result<Self> {
        if reps.len() != modulus {
            return Err(Error::Invalid(format!("{} representatives for {} cosets", reps.len(), modulus)));
        }
        let n = BigInt::from(modulus);
        for (k, r) in reps.iter().enumerate() {
            if r.kind() != kind || r.t().mod_floor(&n) != BigInt::from(k) {
                return Err(Error::Invalid(format!("{} does not represent coset {}", r, k)));
            }
        }
        Ok(Self { kind, modulus, reps })
    }

    pub fn reps(&self) -> &[GroupElement] {
        &self.reps
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }
}

/// `g · reps[k] = reps[sigma(k)] · h[k]` with every `h[k]` in the subgroup of index `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleData {
    pub level: Option<usize>,
    pub modulus: usize,
    pub g: GroupElement,
    pub reps: Vec<GroupElement>,
    pub sigma: Vec<usize>,
    pub h: Vec<GroupElement>,
}

impl CocycleData {
    /// Checks the defining identity and subgroup membership exactly.
    pub fn verify(&self) -> bool {
        let n = BigInt::from(self.modulus);
        self.reps.iter().enumerate().all(|(k, r)| {
            let lhs = &self.g * r;
            let rhs = &self.reps[self.sigma[k]] * &self.h[k];
            lhs == rhs && self.h[k].t().is_multiple_of(&n)
        })
    }

    pub fn sigma_is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(k, &s)| k == s)
    }
}

/// Cocycle of `g` on `Γ/nΓ` for an arbitrary transversal.
pub fn coset_cocycle(g: &GroupElement, transversal: &Transversal) -> Result<CocycleData> {
    if g.kind() != transversal.kind {
        return Err(Error::WrongGroupKind {
            expected: transversal.kind.name().into(),
            got: g.kind().name().into(),
        });
    }
    let n = BigInt::from(transversal.modulus);
    let mut sigma = Vec::with_capacity(transversal.modulus);
    let mut h = Vec::with_capacity(transversal.modulus);
    for r in &transversal.reps {
        let y = g * r;
        let target = y.t().mod_floor(&n).to_usize().expect("coset below modulus");
        let hk = &transversal.reps[target].inverse() * &y;
        if !hk.t().is_multiple_of(&n) {
            return Err(Error::InvariantViolation(format!("h = {} is outside the subgroup", hk)));
        }
        sigma.push(target);
        h.push(hk);
    }
    Ok(CocycleData {
        level: None,
        modulus: transversal.modulus,
        g: g.clone(),
        reps: transversal.reps.clone(),
        sigma,
        h,
    })
}

fn level_modulus(spec: &OdometerSpec, level: usize) -> Result<usize> {
    if level == 0 || level > spec.depth() {
        return Err(Error::LevelOutOfRange {
            level,
            available: format!("1..={}", spec.depth()),
        });
    }
    let n = spec.modulus_usize(level)?;
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("cocycle over {} cosets", n)));
    }
    Ok(n)
}

/// Cocycle of `g` on `Γ/Γ_level` with the canonical transversal `(k, 0)`.
pub fn cocycle(spec: &OdometerSpec, level: usize, g: &GroupElement) -> Result<CocycleData> {
    let n = level_modulus(spec, level)?;
    cocycle_with(spec, level, g, &Transversal::canonical(spec.group(), n))
}

pub fn cocycle_with(spec: &OdometerSpec, level: usize, g: &GroupElement, transversal: &Transversal) -> Result<CocycleData> {
    let n = level_modulus(spec, level)?;
    if transversal.modulus != n {
        return Err(Error::Invalid(format!("transversal has {} cosets, level {} has {}", transversal.modulus, level, n)));
    }
    let mut data = coset_cocycle(g, transversal)?;
    data.level = Some(level);
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn d(t: i64, s: bool) -> GroupElement {
        GroupElement::from_ints(GroupKind::Dihedral, t, s)
    }

    fn spec() -> OdometerSpec {
        OdometerSpec::geometric(GroupKind::Dihedral, 2, 2, 4).unwrap()
    }

    #[test]
    fn identity_cocycle() {
        let c = cocycle(&spec(), 2, &d(0, false)).unwrap();
        assert!(c.sigma_is_identity());
        assert!(c.h.iter().all(GroupElement::is_identity));
    }

    #[test]
    fn translation_cocycle() {
        let c = cocycle(&spec(), 1, &d(1, false)).unwrap();
        assert_eq!(c.sigma, vec![1, 0]);
        assert_eq!(c.h, vec![d(0, false), d(2, false)]);
        assert!(c.verify());
    }

    #[test]
    fn flip_cocycle() {
        let c = cocycle(&spec(), 1, &d(0, true)).unwrap();
        assert_eq!(c.sigma, vec![0, 1]);
        assert_eq!(c.h, vec![d(0, true), d(-2, true)]);
        assert!(c.verify());
    }

    #[test]
    fn random_transversals_verify() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for kind in GroupKind::ALL {
            let t = Transversal::randomized(kind, 6, &mut rng);
            let g = GroupElement::from_ints(kind, 5, true);
            assert!(coset_cocycle(&g, &t).unwrap().verify());
            assert!(Transversal::from_reps(kind, 6, t.reps().to_vec()).is_ok());
        }
    }
}
