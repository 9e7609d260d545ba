use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::abelian::{AbHom, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::odometer::{coset_cocycle, GroupElement, GroupKind, OdometerSpec, Transversal, ENUMERATION_LIMIT};

/// `(Γ_i)_ab` in the coordinates used throughout: `Z_2 ⊕ Z_2` via
/// `(t, s) ↦ (t/n_i mod 2, s)` for the dihedral group, `Z` via `t/n_i` for `Z`,
/// and `Z ⊕ Z_2` via `(t/n_i, s)` for `Z × Z_2`.
pub fn level_abelianization(kind: GroupKind) -> FgAbelianGroup {
    match kind {
        GroupKind::Dihedral => FgAbelianGroup::new(0, [2, 2]),
        GroupKind::Integers => FgAbelianGroup::free(1),
        GroupKind::DirectProduct => FgAbelianGroup::new(1, [2]),
    }
}

/// Image of `g ∈ nΓ` in `(nΓ)_ab`, in the coordinates of [`level_abelianization`].
pub fn abelianize_in_level(g: &GroupElement, n: &BigInt) -> Result<Vec<BigInt>> {
    let (q, r) = g.t().div_mod_floor(n);
    if r != BigInt::from(0) {
        return Err(Error::Invalid(format!("{} is not in the subgroup of index {}", g, n)));
    }
    let s = BigInt::from(g.s() as u8);
    Ok(match g.kind() {
        GroupKind::Dihedral => vec![q.mod_floor(&BigInt::from(2)), s],
        GroupKind::Integers => vec![q],
        GroupKind::DirectProduct => vec![q, s],
    })
}

/// Generators of `Γ` whose images generate `Γ_ab`, matching the coordinates above.
pub fn abelian_generators(kind: GroupKind) -> Vec<GroupElement> {
    let mut gens = vec![GroupElement::translation(kind, 1)];
    gens.extend(GroupElement::flip(kind));
    gens
}

/// Degree-1 transfer `Γ_ab → (rΓ)_ab`, `g ↦ Σ_k h(k, g)`, from the cocycle of
/// each generator over a transversal of `Γ/rΓ`. Any `Γ_i → Γ_j` transfer is
/// this map after rescaling `Γ_i ≅ Γ`.
pub fn transfer_relative(kind: GroupKind, transversal: &Transversal) -> Result<AbHom> {
    let r = BigInt::from(transversal.modulus());
    let ab = level_abelianization(kind);
    let mut cols = Vec::new();
    for g in abelian_generators(kind) {
        let data = coset_cocycle(&g, transversal)?;
        let mut sum = vec![BigInt::from(0); ab.presentation().generators()];
        for h in &data.h {
            for (acc, x) in sum.iter_mut().zip(abelianize_in_level(h, &r)?) {
                *acc += x;
            }
        }
        cols.push(sum);
    }
    AbHom::new(ab.clone(), ab.clone(), IntMatrix::from_columns(cols[0].len(), &cols))
}

fn enumerable_index(index: BigInt) -> Result<usize> {
    index
        .to_usize()
        .filter(|&r| r <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("transfer over {} cosets", index)))
}

/// Transfer `H_degree(Γ_from) → H_degree(Γ_to)` for `from < to`, any levels of the chain.
pub fn transfer_between(spec: &OdometerSpec, from: usize, to: usize, degree: usize) -> Result<AbHom> {
    if from == 0 || to <= from {
        return Err(Error::Invalid(format!("transfer needs 1 <= from < to, got {} -> {}", from, to)));
    }
    let index = spec.modulus(to)? / spec.modulus(from)?;
    match degree {
        0 => {
            let z = FgAbelianGroup::free(1);
            AbHom::new(z.clone(), z, IntMatrix::new(1, 1, vec![index]))
        }
        1 => {
            let r = enumerable_index(index)?;
            transfer_relative(spec.group(), &Transversal::canonical(spec.group(), r))
        }
        _ => Err(Error::Invalid(format!("transfer maps are implemented in degrees 0 and 1, not {}", degree))),
    }
}

/// `tr: H_degree(Γ_level) → H_degree(Γ_{level+1})`; `level + 1` must not exceed the depth.
pub fn transfer_map(spec: &OdometerSpec, level: usize, degree: usize) -> Result<AbHom> {
    if level == 0 || level + 1 > spec.depth() {
        return Err(Error::LevelOutOfRange {
            level,
            available: format!("1..={}", spec.depth().saturating_sub(1)),
        });
    }
    transfer_between(spec, level, level + 1, degree)
}

/// Degree-1 transfer at a level computed over a caller-supplied transversal of `Γ_level/Γ_{level+1}`
/// (written in the rescaled coordinates `Γ_level ≅ Γ`).
pub fn transfer_map_with(spec: &OdometerSpec, level: usize, transversal: &Transversal) -> Result<AbHom> {
    let r = spec.ratio(level)?;
    if transversal.modulus() as u64 != r || transversal.kind() != spec.group() {
        return Err(Error::Invalid(format!(
            "transversal has {} cosets, the level has index {}",
            transversal.modulus(),
            r
        )));
    }
    transfer_relative(spec.group(), transversal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral(ratio: u64) -> OdometerSpec {
        OdometerSpec::geometric(GroupKind::Dihedral, ratio, ratio, 5).unwrap()
    }

    #[test]
    fn dihedral_even_ratio_collapses() {
        let tr = transfer_map(&dihedral(2), 1, 1).unwrap();
        assert_eq!(tr.matrix(), &IntMatrix::from_rows(&[[1, 1], [0, 0]]));
    }

    #[test]
    fn dihedral_odd_ratio_is_identity() {
        let tr = transfer_map(&dihedral(3), 2, 1).unwrap();
        assert_eq!(tr.matrix(), &IntMatrix::identity(2));
    }

    #[test]
    fn integer_transfer_is_iso() {
        let s = OdometerSpec::geometric(GroupKind::Integers, 5, 5, 4).unwrap();
        let tr = transfer_map(&s, 1, 1).unwrap();
        assert_eq!(tr.matrix(), &IntMatrix::identity(1));
        let t0 = transfer_map(&s, 1, 0).unwrap();
        assert_eq!(t0.matrix(), &IntMatrix::from_rows(&[[5]]));
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(transfer_map(&dihedral(2), 5, 1), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn commutators_die_in_abelianization() {
        let n = BigInt::from(3);
        let kind = GroupKind::Dihedral;
        let els: Vec<GroupElement> = (-4..=4)
            .flat_map(|t| [false, true].map(|s| GroupElement::from_ints(kind, 3 * t, s)))
            .collect();
        for a in &els {
            for b in &els {
                let comm = &(&a.inverse() * &b.inverse()) * &(a * b);
                assert_eq!(abelianize_in_level(&comm, &n).unwrap(), vec![BigInt::from(0), BigInt::from(0)]);
                let ab = abelianize_in_level(&(a * b), &n).unwrap();
                let sum: Vec<BigInt> = abelianize_in_level(a, &n)
                    .unwrap()
                    .iter()
                    .zip(abelianize_in_level(b, &n).unwrap())
                    .map(|(x, y)| (x + y) % 2)
                    .collect();
                assert_eq!(ab, sum);
            }
        }
    }
}
