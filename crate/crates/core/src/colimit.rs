//! Sequential colimits of abelian groups.
//!
//! Two regimes are supported: systems of finite groups that eventually
//! stabilize, and rank-1 systems `Z → Z → …` with multiplication maps, whose
//! colimits are the subgroups of `Q` classified by supernatural numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::abelian::{AbHom, FgAbelianGroup};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

/// Formal product `∏ p^{k_p}` with `k_p ∈ N ∪ {∞}`. Represents the group
/// `{m/n ∈ Q : n divides the product}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    factors: BTreeMap<u64, Multiplicity>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_integer(n: u64) -> Self {
        assert!(n > 0, "supernatural numbers start from positive integers");
        let mut s = Self::one();
        for (p, k) in factorize(n) {
            s.factors.insert(p, Multiplicity::Finite(k));
        }
        s
    }

    /// `p^∞` for every prime `p` dividing `n`.
    pub fn infinite_part_of(n: u64) -> Self {
        let mut s = Self::one();
        for (p, _) in factorize(n) {
            s.factors.insert(p, Multiplicity::Infinite);
        }
        s
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, &k) in &other.factors {
            let entry = out.factors.entry(p).or_insert(Multiplicity::Finite(0));
            *entry = match (*entry, k) {
                (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
                _ => Multiplicity::Infinite,
            };
        }
        out
    }

    pub fn multiplicity(&self, p: u64) -> Multiplicity {
        self.factors.get(&p).copied().unwrap_or(Multiplicity::Finite(0))
    }

    pub fn is_finite(&self) -> bool {
        self.factors.values().all(|k| *k != Multiplicity::Infinite)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn infinite_primes(&self) -> Vec<u64> {
        self.factors
            .iter()
            .filter(|(_, k)| **k == Multiplicity::Infinite)
            .map(|(p, _)| *p)
            .collect()
    }

    /// True when every prime present has infinite multiplicity.
    pub fn is_purely_infinite(&self) -> bool {
        self.factors.values().all(|k| *k == Multiplicity::Infinite)
    }

    /// Description of the represented subgroup of `Q`: `Z` when finite,
    /// `Z[1/m]` when purely infinite, `{m/n_i} over <s>` otherwise.
    pub fn group_string(&self) -> String {
        if self.is_finite() {
            "Z".to_string()
        } else if self.is_purely_infinite() {
            let radical: u64 = self.infinite_primes().iter().product();
            format!("Z[1/{}]", radical)
        } else {
            format!("{{m/n_i}} over {}", self)
        }
    }
}

/// The rank-1 groups are isomorphic iff the supernatural numbers agree up to
/// finitely many finite multiplicities: same infinite primes, finite parts ignored.
pub fn supernatural_iso_equal(a: &SupernaturalNumber, b: &SupernaturalNumber) -> bool {
    a.infinite_primes() == b.infinite_primes()
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, k)| match k {
                Multiplicity::Infinite => format!("{}^inf", p),
                Multiplicity::Finite(1) => format!("{}", p),
                Multiplicity::Finite(k) => format!("{}^{}", p, k),
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

impl FromStr for SupernaturalNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let mut out = Self::one();
        for term in s.split('*') {
            let term = term.trim();
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (term, None),
            };
            let p: u64 = base
                .parse()
                .map_err(|_| Error::Invalid(format!("bad prime {:?} in {:?}", base, s)))?;
            if p < 2 || factorize(p).len() != 1 || factorize(p)[0].1 != 1 {
                return Err(Error::Invalid(format!("{} is not prime", p)));
            }
            let k = match exp {
                None => Multiplicity::Finite(1),
                Some("inf") => Multiplicity::Infinite,
                Some(e) => Multiplicity::Finite(
                    e.parse()
                        .map_err(|_| Error::Invalid(format!("bad exponent {:?}", e)))?,
                ),
            };
            if k != Multiplicity::Finite(0) {
                let single = Self { factors: BTreeMap::from([(p, k)]) };
                out = out.multiply(&single);
            }
        }
        Ok(out)
    }
}

impl Serialize for SupernaturalNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColimitResult {
    /// Colimit of an eventually stable system of finite groups; `stabilization_depth`
    /// is the 1-based level from which composite images stay constant.
    Finite {
        group: FgAbelianGroup,
        stabilization_depth: usize,
    },
    Rank1(SupernaturalNumber),
    Zero,
}

impl ColimitResult {
    /// The colimit as a finitely generated group when it is one.
    pub fn as_fg_group(&self) -> Option<FgAbelianGroup> {
        match self {
            ColimitResult::Finite { group, .. } => Some(group.clone()),
            ColimitResult::Zero => Some(FgAbelianGroup::trivial()),
            ColimitResult::Rank1(s) if s.is_finite() => Some(FgAbelianGroup::free(1)),
            ColimitResult::Rank1(_) => None,
        }
    }
}

impl fmt::Display for ColimitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColimitResult::Finite { group, .. } => write!(f, "{}", group),
            ColimitResult::Rank1(s) => write!(f, "{}", s.group_string()),
            ColimitResult::Zero => write!(f, "0"),
        }
    }
}

/// How a rank-1 system continues beyond the listed multipliers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank1Tail {
    /// The listed multipliers are the whole system.
    Explicit,
    /// The listed multipliers are followed by this pattern repeated forever.
    Periodic(Vec<u64>),
}

impl Rank1Tail {
    pub fn geometric(ratio: u64) -> Self {
        Rank1Tail::Periodic(vec![ratio])
    }
}

/// Colimit of `Z →(×m_1) Z →(×m_2) …`.
pub fn colimit_rank1(multipliers: &[u64], tail: &Rank1Tail) -> ColimitResult {
    let mut s = SupernaturalNumber::one();
    for &m in multipliers {
        s = s.multiply(&SupernaturalNumber::from_integer(m));
    }
    if let Rank1Tail::Periodic(pattern) = tail {
        for &m in pattern {
            s = s.multiply(&SupernaturalNumber::infinite_part_of(m));
        }
    }
    ColimitResult::Rank1(s)
}

/// Image of the composite map from level `start` to a later level, with stabilization data.
#[derive(Clone, Debug)]
pub struct StableImage {
    /// 0-based index of the first level of the stable window.
    pub start: usize,
    /// 0-based index of the level receiving the composite.
    pub top: usize,
    pub composite: AbHom,
    pub group: FgAbelianGroup,
}

fn composite(maps: &[AbHom], from: usize, to: usize) -> Result<AbHom> {
    let mut acc = AbHom::identity(maps[from].domain());
    for m in &maps[from..to] {
        acc = m.compose(&acc)?;
    }
    Ok(acc)
}

/// Checks the stabilization criterion on levels `start ..= start + window - 1`:
/// every composite spanning at least `max(1, window / 2)` steps inside the window
/// has the same image up to isomorphism. Returns the image of the full-window
/// composite when it holds.
pub fn stable_image_at(groups: &[FgAbelianGroup], maps: &[AbHom], start: usize, window: usize) -> Result<Option<StableImage>> {
    let top = start + window - 1;
    if top >= groups.len() {
        return Ok(None);
    }
    let span = (window / 2).max(1);
    let mut class: Option<FgAbelianGroup> = None;
    for a in start..top {
        for b in (a + span)..=top {
            let img = composite(maps, a, b)?.image();
            match &class {
                None => class = Some(img),
                Some(c) if *c == img => {}
                Some(_) => return Ok(None),
            }
        }
    }
    let full = composite(maps, start, top)?;
    let group = full.image();
    Ok(Some(StableImage {
        start,
        top,
        composite: full,
        group,
    }))
}

fn validate_system(groups: &[FgAbelianGroup], maps: &[AbHom], window: usize) -> Result<()> {
    if window < 2 {
        return Err(Error::Invalid("colimit window must be at least 2".into()));
    }
    if groups.len() < window {
        return Err(Error::Invalid(format!(
            "{} levels given, window needs {}",
            groups.len(),
            window
        )));
    }
    if maps.len() + 1 != groups.len() {
        return Err(Error::Invalid(format!(
            "{} groups need {} connecting maps, got {}",
            groups.len(),
            groups.len() - 1,
            maps.len()
        )));
    }
    for (i, m) in maps.iter().enumerate() {
        if m.domain() != &groups[i] || m.codomain() != &groups[i + 1] {
            return Err(Error::DomainMismatch(format!("map {} does not connect levels {} and {}", i, i, i + 1)));
        }
    }
    Ok(())
}

/// First window position where the stabilization criterion holds.
pub fn stable_image(groups: &[FgAbelianGroup], maps: &[AbHom], window: usize) -> Result<StableImage> {
    validate_system(groups, maps, window)?;
    for start in 0..=(groups.len() - window) {
        if let Some(img) = stable_image_at(groups, maps, start, window)? {
            return Ok(img);
        }
    }
    Err(Error::NotStabilized { window })
}

/// Colimit of a sequence of finite groups, detected by stabilization of composite images.
pub fn colimit_finite(groups: &[FgAbelianGroup], maps: &[AbHom], window: usize) -> Result<ColimitResult> {
    if let Some(level) = groups.iter().position(|g| !g.is_finite()) {
        return Err(Error::InfiniteGroup { level: level + 1 });
    }
    let img = stable_image(groups, maps, window)?;
    Ok(if img.group.is_trivial() {
        ColimitResult::Zero
    } else {
        ColimitResult::Finite {
            group: img.group,
            stabilization_depth: img.start + 1,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::IntMatrix;

    fn v4() -> FgAbelianGroup {
        FgAbelianGroup::new(0, [2, 2])
    }

    fn collapse() -> AbHom {
        AbHom::new(v4(), v4(), IntMatrix::from_rows(&[[1, 1], [0, 0]])).unwrap()
    }

    #[test]
    fn constant_identity_system() {
        let groups = vec![v4(); 6];
        let maps = vec![AbHom::identity(&v4()); 5];
        let r = colimit_finite(&groups, &maps, 3).unwrap();
        assert_eq!(
            r,
            ColimitResult::Finite {
                group: v4(),
                stabilization_depth: 1
            }
        );
    }

    #[test]
    fn collapsing_system() {
        let groups = vec![v4(); 8];
        let maps = vec![collapse(); 7];
        let r = colimit_finite(&groups, &maps, 4).unwrap();
        assert_eq!(r.as_fg_group().unwrap(), FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn alternating_system_over_ten_levels() {
        let groups = vec![v4(); 10];
        let maps: Vec<AbHom> = (0..9)
            .map(|i| if i % 2 == 0 { AbHom::identity(&v4()) } else { collapse() })
            .collect();
        // Brute force: composing all nine maps leaves a rank-1 image.
        let mut all = AbHom::identity(&v4());
        for m in &maps {
            all = m.compose(&all).unwrap();
        }
        assert_eq!(all.image(), FgAbelianGroup::cyclic(2));
        let r = colimit_finite(&groups, &maps, 4).unwrap();
        assert_eq!(r.as_fg_group().unwrap(), FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn zero_maps_give_zero() {
        let groups = vec![v4(); 5];
        let maps = vec![AbHom::zero(&v4(), &v4()); 4];
        assert_eq!(colimit_finite(&groups, &maps, 3).unwrap(), ColimitResult::Zero);
    }

    #[test]
    fn not_stabilized_is_an_error() {
        // Z_2 -> Z_4 -> Z_8 ... by inclusion never stabilizes.
        let groups: Vec<FgAbelianGroup> = (1..=5).map(|k| FgAbelianGroup::cyclic(1u64 << k)).collect();
        let maps: Vec<AbHom> = (0..4)
            .map(|i| AbHom::new(groups[i].clone(), groups[i + 1].clone(), IntMatrix::from_rows(&[[2]])).unwrap())
            .collect();
        assert_eq!(colimit_finite(&groups, &maps, 3), Err(Error::NotStabilized { window: 3 }));
    }

    #[test]
    fn infinite_groups_rejected() {
        let z = FgAbelianGroup::free(1);
        let groups = vec![z.clone(); 3];
        let maps = vec![AbHom::identity(&z); 2];
        assert!(matches!(colimit_finite(&groups, &maps, 2), Err(Error::InfiniteGroup { level: 1 })));
    }

    #[test]
    fn rank1_examples() {
        let trivial = colimit_rank1(&[1, 1, 1], &Rank1Tail::Explicit);
        assert_eq!(trivial, ColimitResult::Rank1(SupernaturalNumber::one()));
        assert_eq!(trivial.to_string(), "Z");
        let dyadic = colimit_rank1(&[2], &Rank1Tail::geometric(2));
        assert_eq!(dyadic.to_string(), "Z[1/2]");
        if let ColimitResult::Rank1(s) = colimit_rank1(&[], &Rank1Tail::geometric(6)) {
            assert_eq!(s.to_string(), "2^inf * 3^inf");
        } else {
            panic!("rank-1 expected");
        }
    }

    #[test]
    fn supernatural_iso_examples() {
        let two_inf: SupernaturalNumber = "2^inf".parse().unwrap();
        let three_two_inf: SupernaturalNumber = "3 * 2^inf".parse().unwrap();
        let three_inf: SupernaturalNumber = "3^inf".parse().unwrap();
        assert!(supernatural_iso_equal(&two_inf, &three_two_inf));
        assert!(!supernatural_iso_equal(&two_inf, &three_inf));
        assert!(supernatural_iso_equal(
            &SupernaturalNumber::one(),
            &SupernaturalNumber::from_integer(5)
        ));
    }

    #[test]
    fn supernatural_text_format() {
        let s: SupernaturalNumber = "2^inf * 3^2".parse().unwrap();
        assert_eq!(s.to_string(), "2^inf * 3^2");
        assert_eq!(s.multiplicity(3), Multiplicity::Finite(2));
        assert_eq!("1".parse::<SupernaturalNumber>().unwrap(), SupernaturalNumber::one());
        assert!("4^2".parse::<SupernaturalNumber>().is_err());
        let mixed: SupernaturalNumber = "2 * 3^inf".parse().unwrap();
        assert_eq!(mixed.group_string(), "{m/n_i} over 2 * 3^inf");
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }
}
