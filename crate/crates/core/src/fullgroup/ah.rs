use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::element::{j_map_with, FullGroupElement, FullGroupLevel};
use crate::abelian::{check_exactness, AbHom, FgAbelianGroup, IntMatrix, Presentation};
use crate::colimit::stable_image_at;
use crate::error::{Error, Result};
use crate::homology::{level_abelianization, transfer_between, COLIMIT_WINDOW};
use crate::odometer::{translation_orbit_size, GroupElement, GroupKind, OdometerSpec, Tail};

/// Levels up to this many cosets get `H_0(G_i)` from an explicit coinvariant computation.
pub const H0_SNF_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AhLevel {
    Level(usize),
    Colimit,
}

/// A named homomorphism as recorded in a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapRecord {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub matrix: Vec<Vec<String>>,
}

impl MapRecord {
    fn of(name: &str, m: &AbHom) -> Self {
        Self {
            name: name.into(),
            domain: m.domain().to_string(),
            codomain: m.codomain().to_string(),
            matrix: m
                .matrix()
                .to_nested()
                .iter()
                .map(|row| row.iter().map(BigInt::to_string).collect())
                .collect(),
        }
    }
}

/// `H_0(G) ⊗ Z_2 →j [[G]]_ab →I H_1(G) → 0` at a level or in the limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhCertificate {
    pub level: AhLevel,
    /// `(H_0 ⊗ Z_2, [[G]]_ab, H_1)`
    pub groups: [String; 3],
    pub maps: Vec<MapRecord>,
    pub exact: bool,
    /// `None` when no splitting is known.
    pub split: Option<bool>,
    pub notes: Vec<String>,
}

impl Serialize for AhCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AhCertificate", 6)?;
        match self.level {
            AhLevel::Level(i) => st.serialize_field("level", &i)?,
            AhLevel::Colimit => st.serialize_field("level", "colimit")?,
        }
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("split", &self.split)?;
        st.serialize_field("groups", &self.groups)?;
        st.serialize_field("maps", &self.maps)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

/// One level of the sequence with its maps written on explicit generators.
struct LevelSequence {
    level: FullGroupLevel,
    h0_z2: FgAbelianGroup,
    full_ab: FgAbelianGroup,
    h1: FgAbelianGroup,
    j: AbHom,
    index: AbHom,
}

/// `[[G_i]]_ab ≅ (Γ_i)_ab ⊕ Z_2` in the coordinates of `abelian_coordinates`.
fn full_group_abelianization(kind: GroupKind) -> FgAbelianGroup {
    match kind {
        GroupKind::Dihedral => FgAbelianGroup::new(0, [2, 2, 2]),
        GroupKind::Integers => FgAbelianGroup::new(1, [2]),
        GroupKind::DirectProduct => FgAbelianGroup::new(1, [2, 2]),
    }
}

/// Elements of `[[G_i]]` whose classes are the coordinate generators of `[[G_i]]_ab`:
/// `ζ` of the generators of `Γ_i`, then a transposition.
fn full_group_generators(level: &FullGroupLevel) -> Result<Vec<FullGroupElement>> {
    let n = BigInt::from(level.modulus());
    let kind = level.kind();
    let mut gens = vec![level.zeta(&GroupElement::translation(kind, n))?];
    if let Some(flip) = GroupElement::flip(kind) {
        gens.push(level.zeta(&flip)?);
    }
    gens.push(level.transposition(0, 1)?);
    Ok(gens)
}

fn columns(vs: Vec<Vec<BigInt>>, rows: usize) -> IntMatrix {
    IntMatrix::from_columns(rows, &vs)
}

/// `H_0(G_i) ⊗ Z_2`, generated by `[1_{x}] ⊗ 1` for any coset `x`. Small levels
/// compute the coinvariants of `Z[Γ/Γ_i]` modulo 2 by SNF; larger ones rely on
/// transitivity of the translation.
fn h0_tensor_z2(spec: &OdometerSpec, level: &FullGroupLevel) -> Result<FgAbelianGroup> {
    let n = level.modulus();
    let computed = if n > H0_SNF_LIMIT {
        if translation_orbit_size(spec, level.level())? != n {
            return Err(Error::InvariantViolation(format!("level {} is not transitive", level.level())));
        }
        FgAbelianGroup::cyclic(2)
    } else {
        let one = BigInt::from(1);
        let mut cols = Vec::new();
        let mut gens = vec![GroupElement::translation(level.kind(), 1)];
        gens.extend(GroupElement::flip(level.kind()));
        for g in &gens {
            for x in 0..n {
                let mut c = vec![BigInt::from(0); n];
                c[level.act(g, x)] += &one;
                c[x] -= &one;
                cols.push(c);
            }
        }
        for x in 0..n {
            let mut c = vec![BigInt::from(0); n];
            c[x] = BigInt::from(2);
            cols.push(c);
        }
        FgAbelianGroup::from_presentation(Presentation::new(n, columns(cols, n)))
    };
    if computed != FgAbelianGroup::cyclic(2) {
        return Err(Error::InvariantViolation(format!("H_0 ⊗ Z_2 at level {} is {}", level.level(), computed)));
    }
    Ok(FgAbelianGroup::cyclic(2))
}

fn build_level(spec: &OdometerSpec, i: usize) -> Result<LevelSequence> {
    let level = FullGroupLevel::new(spec, i)?;
    let n = level.modulus();
    if n < 3 {
        return Err(Error::LevelTooSmall {
            level: i,
            cosets: n.to_string(),
            required: 3,
        });
    }
    let kind = level.kind();
    let h0_z2 = h0_tensor_z2(spec, &level)?;
    let full_ab = full_group_abelianization(kind);
    let h1 = level_abelianization(kind);
    let width = full_ab.presentation().generators();

    // j([1_{x}] ⊗ 1) through τ_F with F = {((1,0), x)}; every x gives the generator
    let one = GroupElement::translation(kind, 1);
    let classes: Vec<Vec<BigInt>> = [0, n - 1]
        .iter()
        .map(|&x| j_map_with(&level, &one, x).map(|c| c.tau.abelian_coordinates()))
        .collect::<Result<_>>()?;
    if classes[0] != classes[1] {
        return Err(Error::InvariantViolation("j depends on the chosen arrow".into()));
    }
    let j = AbHom::new(h0_z2.clone(), full_ab.clone(), columns(vec![classes[0].clone()], width))?;

    let gens = full_group_generators(&level)?;
    let i_cols = gens.iter().map(FullGroupElement::index_map).collect();
    let index = AbHom::new(full_ab.clone(), h1.clone(), columns(i_cols, h1.presentation().generators()))?;
    Ok(LevelSequence {
        level,
        h0_z2,
        full_ab,
        h1,
        j,
        index,
    })
}

/// Right inverse of `I` from `ζ`: the generators of `Γ_i` go to their `ζ`-classes.
fn zeta_section(seq: &LevelSequence) -> Result<AbHom> {
    let gens = full_group_generators(&seq.level)?;
    let k = seq.h1.presentation().generators();
    let cols = gens[..k].iter().map(FullGroupElement::abelian_coordinates).collect();
    AbHom::new(seq.h1.clone(), seq.full_ab.clone(), columns(cols, seq.full_ab.presentation().generators()))
}

fn check_generators(seq: &LevelSequence) -> Result<()> {
    for (k, g) in full_group_generators(&seq.level)?.iter().enumerate() {
        let mut expected = vec![BigInt::from(0); seq.full_ab.presentation().generators()];
        expected[k] = BigInt::from(1);
        if g.abelian_coordinates() != expected {
            return Err(Error::InvariantViolation(format!("generator {} has class {:?}", k, g.abelian_coordinates())));
        }
    }
    Ok(())
}

fn level_certificate(spec: &OdometerSpec, i: usize) -> Result<(AhCertificate, LevelSequence)> {
    let seq = build_level(spec, i)?;
    check_generators(&seq)?;
    let exact = check_exactness(&seq.j, &seq.index)? && seq.index.is_surjective() && seq.j.is_injective();
    let section = zeta_section(&seq)?;
    let split = seq.index.compose(&section)?.agrees_with(&AbHom::identity(&seq.h1));
    let cert = AhCertificate {
        level: AhLevel::Level(i),
        groups: [seq.h0_z2.to_string(), seq.full_ab.to_string(), seq.h1.to_string()],
        maps: vec![MapRecord::of("j", &seq.j), MapRecord::of("I", &seq.index), MapRecord::of("section", &section)],
        exact,
        split: Some(split),
        notes: Vec::new(),
    };
    Ok((cert, seq))
}

/// Connecting maps between consecutive levels: `H_0 ⊗ Z_2` by the index,
/// `[[G_i]]_ab` by lifting generators, `H_1` by transfer.
fn connecting_maps(spec: &OdometerSpec, lower: &LevelSequence, upper: &LevelSequence) -> Result<[AbHom; 3]> {
    let (i, k) = (lower.level.level(), upper.level.level());
    let index = transfer_between(spec, i, k, 0)?.matrix()[(0, 0)].clone();
    let a = AbHom::new(lower.h0_z2.clone(), upper.h0_z2.clone(), IntMatrix::new(1, 1, vec![index]))?;
    let b_cols = full_group_generators(&lower.level)?
        .iter()
        .map(|g| lower.level.lift(g, &upper.level).map(|u| u.abelian_coordinates()))
        .collect::<Result<_>>()?;
    let b = AbHom::new(lower.full_ab.clone(), upper.full_ab.clone(), columns(b_cols, upper.full_ab.presentation().generators()))?;
    let c = transfer_between(spec, i, k, 1)?;
    Ok([a, b, c])
}

/// Whether both squares of the ladder between two levels commute.
fn natural(lower: &LevelSequence, upper: &LevelSequence, maps: &[AbHom; 3]) -> Result<bool> {
    let [a, b, c] = maps;
    Ok(upper.j.compose(a)?.agrees_with(&b.compose(&lower.j)?)
        && upper.index.compose(b)?.agrees_with(&c.compose(&lower.index)?))
}

/// Brute-force search for a right inverse of a map between finite groups.
fn find_section(index: &AbHom) -> Result<Option<AbHom>> {
    let Some(candidates) = index.domain().elements() else { return Ok(None) };
    let k = index.codomain().presentation().generators();
    let total = candidates.len().checked_pow(k as u32).filter(|&t| t <= 1 << 16);
    let Some(total) = total else { return Ok(None) };
    let rows = index.domain().presentation().generators();
    let id = AbHom::identity(index.codomain());
    for code in 0..total {
        let mut rest = code;
        let cols: Vec<Vec<BigInt>> = (0..k)
            .map(|_| {
                let c = candidates[rest % candidates.len()].clone();
                rest /= candidates.len();
                c
            })
            .collect();
        let Ok(s) = AbHom::new(index.codomain().clone(), index.domain().clone(), columns(cols, rows)) else { continue };
        if index.compose(&s)?.agrees_with(&id) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn first_level_with_cosets(spec: &OdometerSpec, at_least: usize) -> Result<usize> {
    let mut i = 1;
    loop {
        if spec.modulus(i)? >= BigInt::from(at_least) {
            return Ok(i);
        }
        i += 1;
    }
}

fn colimit_certificate(spec: &OdometerSpec) -> Result<AhCertificate> {
    let tail = spec.require_tail()?;
    if let Tail::Explicit = tail {
        let top = spec.level_count().expect("explicit tail");
        let (mut cert, _) = level_certificate(spec, top)?;
        cert.level = AhLevel::Colimit;
        cert.split = None;
        cert.notes.push(format!("explicit tail: the system ends at level {}", top));
        return Ok(cert);
    }
    let first = first_level_with_cosets(spec, 3)?;
    let count = spec.levels_for_colimit(COLIMIT_WINDOW + 1);
    let seqs: Vec<LevelSequence> = (first..first + count).map(|i| build_level(spec, i)).collect::<Result<_>>()?;
    let mut notes = Vec::new();
    let mut levelwise = true;
    let mut ladders = Vec::new();
    for pair in seqs.windows(2) {
        let maps = connecting_maps(spec, &pair[0], &pair[1])?;
        if !natural(&pair[0], &pair[1], &maps)? {
            return Err(Error::InvariantViolation(format!(
                "ladder between levels {} and {} does not commute",
                pair[0].level.level(),
                pair[1].level.level()
            )));
        }
        ladders.push(maps);
    }
    for s in &seqs {
        levelwise &= check_exactness(&s.j, &s.index)? && s.index.is_surjective();
    }
    notes.push(format!(
        "levels {}..={} exact with commuting ladders",
        first,
        first + count - 1
    ));

    if spec.group() != GroupKind::Dihedral {
        // [[G_i]]_ab has a free summand, so the middle colimit is not assembled;
        // filtered colimits preserve the levelwise exactness checked above.
        let a_system: Vec<FgAbelianGroup> = seqs.iter().map(|s| s.h0_z2.clone()).collect();
        let a_maps: Vec<AbHom> = ladders.iter().map(|l| l[0].clone()).collect();
        let a = crate::colimit::colimit_finite(&a_system, &a_maps, COLIMIT_WINDOW)?;
        notes.push("middle colimit not assembled: mixed-rank system".into());
        return Ok(AhCertificate {
            level: AhLevel::Colimit,
            groups: [a.to_string(), "not assembled".into(), level_abelianization(spec.group()).to_string()],
            maps: Vec::new(),
            exact: levelwise,
            split: None,
            notes,
        });
    }

    let systems: Vec<(Vec<FgAbelianGroup>, Vec<AbHom>)> = (0..3)
        .map(|k| {
            let groups = seqs
                .iter()
                .map(|s| [&s.h0_z2, &s.full_ab, &s.h1][k].clone())
                .collect();
            let maps = ladders.iter().map(|l| l[k].clone()).collect();
            (groups, maps)
        })
        .collect();
    let mut found = None;
    for start in 0..=(seqs.len() - COLIMIT_WINDOW) {
        let images = systems
            .iter()
            .map(|(g, m)| stable_image_at(g, m, start, COLIMIT_WINDOW))
            .collect::<Result<Vec<_>>>()?;
        if images.iter().all(Option::is_some) {
            found = Some(images.into_iter().map(Option::unwrap).collect::<Vec<_>>());
            break;
        }
    }
    let images = found.ok_or(Error::NotStabilized { window: COLIMIT_WINDOW })?;
    let top = &seqs[images[0].top];
    let (ga, ia) = images[0].composite.image_subgroup();
    let (gb, ib) = images[1].composite.image_subgroup();
    let (gc, ic) = images[2].composite.image_subgroup();
    let j = top.j.compose(&ia)?.factor_through(&ib)?;
    let index = top.index.compose(&ib)?.factor_through(&ic)?;
    let exact = levelwise && check_exactness(&j, &index)? && index.is_surjective();
    let split = find_section(&index)?.map(|_| true);
    notes.push(format!(
        "colimit realized as images of levels {} -> {}",
        seqs[images[0].start].level.level(),
        top.level.level()
    ));
    Ok(AhCertificate {
        level: AhLevel::Colimit,
        groups: [ga.to_string(), gb.to_string(), gc.to_string()],
        maps: vec![MapRecord::of("j", &j), MapRecord::of("I", &index)],
        exact,
        split,
        notes,
    })
}

/// Exactness (and splitness where decidable) of the sequence at a level or in the limit.
pub fn ah_certificate(spec: &OdometerSpec, at: AhLevel) -> Result<AhCertificate> {
    match at {
        AhLevel::Level(i) => level_certificate(spec, i).map(|(c, _)| c),
        AhLevel::Colimit => colimit_certificate(spec),
    }
}
