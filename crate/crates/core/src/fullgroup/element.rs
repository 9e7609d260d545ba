use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::homology::abelianize_in_level;
use crate::odometer::{act_mod, GroupElement, GroupKind, OdometerSpec};

/// Largest coset space whose full group is handled element by element.
pub const FULL_GROUP_LIMIT: usize = 1 << 16;

/// The groupoid `Γ ⋉ Γ/Γ_i` at one level, cosets `Z_n` with representatives `(k, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullGroupLevel {
    kind: GroupKind,
    level: usize,
    modulus: usize,
}

impl FullGroupLevel {
    pub fn new(spec: &OdometerSpec, level: usize) -> Result<Self> {
        let modulus = spec.modulus_usize(level)?;
        if modulus > FULL_GROUP_LIMIT {
            return Err(Error::TooLarge(format!("full group over {} cosets", modulus)));
        }
        Ok(Self {
            kind: spec.group(),
            level,
            modulus,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    fn n(&self) -> BigInt {
        BigInt::from(self.modulus)
    }

    fn rep(&self, k: usize) -> GroupElement {
        GroupElement::translation(self.kind, k)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.kind() == self.kind && g.t().is_multiple_of(&self.n())
    }

    /// `g · x` on `Z_n`.
    pub fn act(&self, g: &GroupElement, x: usize) -> usize {
        act_mod(g, &BigInt::from(x), &self.n()).to_usize().expect("below modulus")
    }

    pub fn identity(&self) -> FullGroupElement {
        FullGroupElement {
            level: self.clone(),
            h: vec![GroupElement::identity(self.kind); self.modulus],
            perm: (0..self.modulus).collect(),
        }
    }

    /// `ζ(λ)`: the arrow `λ` over the coset `Γ_i`, units elsewhere.
    pub fn zeta(&self, lambda: &GroupElement) -> Result<FullGroupElement> {
        if !self.contains(lambda) {
            return Err(Error::Invalid(format!("{} is not in Γ_{}", lambda, self.level)));
        }
        let mut u = self.identity();
        u.h[0] = lambda.clone();
        Ok(u)
    }

    /// `η(π)`: the arrows `(π(x) - x, 0)`.
    pub fn eta(&self, perm: Vec<usize>) -> Result<FullGroupElement> {
        check_permutation(&perm, self.modulus)?;
        Ok(FullGroupElement {
            level: self.clone(),
            h: vec![GroupElement::identity(self.kind); self.modulus],
            perm,
        })
    }

    /// `η` of the transposition `(a b)`.
    pub fn transposition(&self, a: usize, b: usize) -> Result<FullGroupElement> {
        let mut perm: Vec<usize> = (0..self.modulus).collect();
        if a >= self.modulus || b >= self.modulus {
            return Err(Error::Invalid(format!("transposition ({} {}) outside Z_{}", a, b, self.modulus)));
        }
        perm.swap(a, b);
        self.eta(perm)
    }

    /// Element from its arrows `g_x` over every coset `x`.
    pub fn from_arrows(&self, arrows: &[GroupElement]) -> Result<FullGroupElement> {
        if arrows.len() != self.modulus {
            return Err(Error::Invalid(format!("{} arrows for {} cosets", arrows.len(), self.modulus)));
        }
        let perm: Vec<usize> = arrows.iter().enumerate().map(|(x, g)| self.act(g, x)).collect();
        check_permutation(&perm, self.modulus).map_err(|_| Error::NotPartition("ranges overlap".into()))?;
        let h = arrows
            .iter()
            .enumerate()
            .map(|(x, g)| &(&self.rep(perm[x]).inverse() * g) * &self.rep(x))
            .collect();
        Ok(FullGroupElement {
            level: self.clone(),
            h,
            perm,
        })
    }

    pub fn from_bisection(&self, b: &BisectionForm) -> Result<FullGroupElement> {
        let mut arrows: Vec<Option<GroupElement>> = vec![None; self.modulus];
        for (g, set) in &b.pairs {
            if g.kind() != self.kind {
                return Err(Error::WrongGroupKind {
                    expected: self.kind.name().into(),
                    got: g.kind().name().into(),
                });
            }
            for &x in set {
                if x >= self.modulus {
                    return Err(Error::NotPartition(format!("coset {} is outside Z_{}", x, self.modulus)));
                }
                if arrows[x].replace(g.clone()).is_some() {
                    return Err(Error::NotPartition(format!("coset {} lies in two sources", x)));
                }
            }
        }
        let arrows: Vec<GroupElement> = arrows
            .into_iter()
            .enumerate()
            .map(|(x, a)| a.ok_or_else(|| Error::NotPartition(format!("coset {} is in no source", x))))
            .collect::<Result<_>>()?;
        self.from_arrows(&arrows)
    }

    /// `τ_F` for the single arrow `F = {(g, x0)}` with `g·x0 ≠ x0`.
    pub fn tau(&self, g: &GroupElement, x0: usize) -> Result<FullGroupElement> {
        let y0 = self.act(g, x0);
        if y0 == x0 {
            return Err(Error::Invalid(format!("{} fixes coset {}", g, x0)));
        }
        let mut arrows = vec![GroupElement::identity(self.kind); self.modulus];
        arrows[x0] = g.clone();
        arrows[y0] = g.inverse();
        self.from_arrows(&arrows)
    }

    /// Lifts a level-`i` element to a later level: the arrow over `y` is the arrow over `y mod n_i`.
    pub fn lift(&self, u: &FullGroupElement, upper: &FullGroupLevel) -> Result<FullGroupElement> {
        self.check(u)?;
        if upper.kind != self.kind || !upper.modulus.is_multiple_of(self.modulus) || upper.modulus <= self.modulus {
            return Err(Error::Invalid(format!("level {} does not refine level {}", upper.level, self.level)));
        }
        let arrows: Vec<GroupElement> = (0..upper.modulus).map(|y| u.arrow(y % self.modulus)).collect();
        upper.from_arrows(&arrows)
    }

    fn check(&self, u: &FullGroupElement) -> Result<()> {
        if u.level != *self {
            return Err(Error::LevelMismatch(self.level, u.level.level));
        }
        Ok(())
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Invalid(format!("permutation of length {} on {} points", perm.len(), n)));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Invalid("not a permutation".into()));
        }
    }
    Ok(())
}

/// Element of `Γ_i^{Γ/Γ_i} ⋊ S_{Γ/Γ_i}`: the arrow over coset `k` is
/// `r_{perm(k)} · h[k] · r_k⁻¹` with `r_k = (k, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullGroupElement {
    level: FullGroupLevel,
    h: Vec<GroupElement>,
    perm: Vec<usize>,
}

impl FullGroupElement {
    pub fn level(&self) -> &FullGroupLevel {
        &self.level
    }

    pub fn h(&self) -> &[GroupElement] {
        &self.h
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The group element carrying coset `x` to `perm(x)`.
    pub fn arrow(&self, x: usize) -> GroupElement {
        let l = &self.level;
        &(&l.rep(self.perm[x]) * &self.h[x]) * &l.rep(x).inverse()
    }

    /// Both encodings agree: every `h[k]` is in `Γ_i` and the arrows realize `perm`.
    pub fn is_consistent(&self) -> bool {
        let l = &self.level;
        check_permutation(&self.perm, l.modulus).is_ok()
            && self.h.iter().all(|h| l.contains(h))
            && (0..l.modulus).all(|x| l.act(&self.arrow(x), x) == self.perm[x])
    }

    pub fn is_identity(&self) -> bool {
        self.h.iter().all(GroupElement::is_identity) && self.perm.iter().enumerate().all(|(k, &p)| k == p)
    }

    /// `(h, σ)·(h', σ') = (k, σ∘σ')` with `k[x] = h[σ'(x)]·h'[x]`.
    pub fn multiply(&self, other: &FullGroupElement) -> Result<FullGroupElement> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level.level, other.level.level));
        }
        let h = (0..self.h.len()).map(|x| &self.h[other.perm[x]] * &other.h[x]).collect();
        let perm = other.perm.iter().map(|&y| self.perm[y]).collect();
        Ok(FullGroupElement {
            level: self.level.clone(),
            h,
            perm,
        })
    }

    pub fn inverse(&self) -> FullGroupElement {
        let mut inv = vec![0; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            inv[y] = x;
        }
        let h = (0..self.h.len()).map(|x| self.h[inv[x]].inverse()).collect();
        FullGroupElement {
            level: self.level.clone(),
            h,
            perm: inv,
        }
    }

    pub fn commutator(&self, other: &FullGroupElement) -> Result<FullGroupElement> {
        self.inverse().multiply(&other.inverse())?.multiply(self)?.multiply(other)
    }

    /// Arrows grouped by group element: `{g} × A` pieces.
    pub fn to_bisection(&self) -> BisectionForm {
        let mut pieces: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
        for x in 0..self.perm.len() {
            pieces.entry(self.arrow(x)).or_default().push(x);
        }
        BisectionForm {
            pairs: pieces.into_iter().collect(),
        }
    }

    /// Odd permutation part.
    pub fn sign(&self) -> bool {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.perm[x];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 1
    }

    /// `[[G_i]]_ab ≅ (Γ_i)_ab × Z_2`: `(Σ_k h[k], parity of perm)`.
    pub fn abelianize(&self) -> (Vec<BigInt>, bool) {
        let n = self.level.n();
        let mut sum: Option<Vec<BigInt>> = None;
        for h in &self.h {
            let v = abelianize_in_level(h, &n).expect("h lies in the subgroup");
            sum = Some(match sum {
                None => v,
                Some(acc) => acc.iter().zip(v).map(|(a, b)| a + b).collect(),
            });
        }
        let mut sum = sum.unwrap_or_default();
        if self.level.kind == GroupKind::Dihedral {
            sum[0] = sum[0].mod_floor(&BigInt::from(2));
        }
        if self.level.kind.has_flip() {
            let last = sum.len() - 1;
            sum[last] = sum[last].mod_floor(&BigInt::from(2));
        }
        (sum, self.sign())
    }

    /// `I(u) = [1_u] ∈ H_1(G_i) ≅ (Γ_i)_ab`.
    pub fn index_map(&self) -> Vec<BigInt> {
        self.abelianize().0
    }

    /// Coordinates in `(Γ_i)_ab ⊕ Z_2`.
    pub fn abelian_coordinates(&self) -> Vec<BigInt> {
        let (mut v, sign) = self.abelianize();
        v.push(BigInt::from(sign as u8));
        v
    }
}

/// `I: [[G_i]] → H_1(G_i)`.
pub fn index_map_i(u: &FullGroupElement) -> Vec<BigInt> {
    u.index_map()
}

/// `U = ⋃ {g_k} × A_k` with the `A_k` and the `g_k A_k` partitioning the cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionForm {
    pub pairs: Vec<(GroupElement, Vec<usize>)>,
}

impl BisectionForm {
    pub fn new(pairs: Vec<(GroupElement, Vec<usize>)>) -> Self {
        Self { pairs }
    }

    /// The induced map on cosets.
    pub fn coset_map(&self, level: &FullGroupLevel) -> BTreeMap<usize, usize> {
        self.pairs
            .iter()
            .flat_map(|(g, set)| set.iter().map(move |&x| (x, level.act(g, x))))
            .collect()
    }
}

/// The class `j([1_{x0}] ⊗ 1)` computed from `τ_F` with `F = {(g, x0)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JClass {
    pub tau: FullGroupElement,
    pub class: (Vec<BigInt>, bool),
}

/// `j` at a level with at least three cosets, from the arrow `(1,0)` over coset 0.
pub fn j_map(level: &FullGroupLevel) -> Result<JClass> {
    j_map_with(level, &GroupElement::translation(level.kind, 1), 0)
}

pub fn j_map_with(level: &FullGroupLevel, g: &GroupElement, x0: usize) -> Result<JClass> {
    if level.modulus < 3 {
        return Err(Error::LevelTooSmall {
            level: level.level,
            cosets: level.modulus.to_string(),
            required: 3,
        });
    }
    let tau = level.tau(g, x0)?;
    let class = tau.abelianize();
    Ok(JClass { tau, class })
}
