use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::matrix::IntMatrix;
use super::snf::{self, Track};

/// `Z^generators / (column span of relations)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: usize,
    relations: IntMatrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            generators,
            "relation matrix must have one row per generator"
        );
        Self { generators, relations }
    }

    pub fn free(generators: usize) -> Self {
        Self::new(generators, IntMatrix::zeros(generators, 0))
    }

    /// Free generators first, then one cyclic generator per torsion order.
    pub fn canonical(free_rank: usize, torsion: &[BigInt]) -> Self {
        let n = free_rank + torsion.len();
        let mut rel = IntMatrix::zeros(n, torsion.len());
        for (k, d) in torsion.iter().enumerate() {
            rel[(free_rank + k, k)] = d.clone();
        }
        Self::new(n, rel)
    }

    /// Block-diagonal sum; generators of `self` come first.
    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        let (g1, g2) = (self.generators, other.generators);
        let (r1, r2) = (self.relations.cols(), other.relations.cols());
        let mut rel = IntMatrix::zeros(g1 + g2, r1 + r2);
        for i in 0..g1 {
            for j in 0..r1 {
                rel[(i, j)] = self.relations[(i, j)].clone();
            }
        }
        for i in 0..g2 {
            for j in 0..r2 {
                rel[(g1 + i, r1 + j)] = other.relations[(i, j)].clone();
            }
        }
        Presentation::new(g1 + g2, rel)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// When every relation is a multiple of a single generator, the modulus of each
    /// generator (zero for free ones). Used to keep representatives small.
    pub(crate) fn diagonal_moduli(&self) -> Option<Vec<BigInt>> {
        let mut moduli = vec![BigInt::zero(); self.generators];
        for j in 0..self.relations.cols() {
            let col = self.relations.column(j);
            let nonzero: Vec<usize> = (0..col.len()).filter(|&i| !col[i].is_zero()).collect();
            match nonzero.as_slice() {
                [] => {}
                [i] => moduli[*i] = moduli[*i].gcd(&col[*i]),
                _ => return None,
            }
        }
        Some(moduli)
    }
}

/// Finitely generated abelian group in canonical form `Z^r ⊕ Z_{d_1} ⊕ … ⊕ Z_{d_k}`
/// with `2 ≤ d_1 | d_2 | … | d_k`.
///
/// Equality compares the canonical form only; the optional presentation records
/// which generators a homomorphism is written against.
#[derive(Clone)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
    presentation: Option<Presentation>,
}

impl FgAbelianGroup {
    /// Group `Z^free_rank ⊕ ⊕ Z_{t}` for arbitrary cyclic orders `t` (normalized;
    /// orders 1 vanish, a zero order contributes a free summand).
    pub fn new<I, T>(free_rank: usize, torsion: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let torsion: Vec<BigInt> = torsion.into_iter().map(Into::into).collect();
        let extra_free = torsion.iter().filter(|t| t.is_zero()).count();
        let finite: Vec<BigInt> = torsion.into_iter().filter(|t| !t.is_zero()).map(|t| t.abs()).collect();
        let diag = IntMatrix::diagonal(finite.len(), finite.len(), finite.clone());
        let factors = invariant_factors_of(&snf::reduce(&diag, Track::NONE).diagonal());
        let rank = free_rank + extra_free;
        Self {
            free_rank: rank,
            presentation: Some(Presentation::canonical(rank, &factors)),
            invariant_factors: factors,
        }
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::<BigInt>::new())
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Vec::<BigInt>::new())
    }

    pub fn cyclic<T: Into<BigInt>>(order: T) -> Self {
        Self::new(0, [order.into()])
    }

    /// Cokernel of a presentation, remembering the presentation.
    pub fn from_presentation(p: Presentation) -> Self {
        let red = snf::reduce(p.relations(), Track::NONE);
        let diag = red.diagonal();
        let rank = red.rank();
        let factors = invariant_factors_of(&diag);
        Self {
            free_rank: p.generators() - rank,
            invariant_factors: factors,
            presentation: Some(p),
        }
    }

    /// Canonical form without a presentation attached.
    pub fn canonical_only(free_rank: usize, invariant_factors: Vec<BigInt>) -> Self {
        let g = Self::new(free_rank, invariant_factors);
        Self { presentation: None, ..g }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Number of cyclic summands whose order is divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.invariant_factors.iter().filter(|d| d.is_multiple_of(&p)).count()
    }

    /// Presentation homomorphisms are written against; canonical if none was given.
    pub fn presentation(&self) -> Presentation {
        self.presentation
            .clone()
            .unwrap_or_else(|| Presentation::canonical(self.free_rank, &self.invariant_factors))
    }

    pub(crate) fn presentation_ref(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    /// Same group carrying its canonical presentation.
    pub fn with_canonical_presentation(&self) -> Self {
        Self {
            presentation: Some(Presentation::canonical(self.free_rank, &self.invariant_factors)),
            ..self.clone()
        }
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        FgAbelianGroup::from_presentation(self.presentation().direct_sum(&other.presentation()))
    }

    /// Canonical cyclic generators expressed in presentation coordinates.
    pub fn canonical_basis(&self) -> CanonicalBasis {
        CanonicalBasis::of(&self.presentation())
    }

    /// All elements (in presentation coordinates, one representative each) of a finite group.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        self.canonical_basis().elements()
    }
}

fn invariant_factors_of(diag: &[BigInt]) -> Vec<BigInt> {
    diag.iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect()
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }
}

impl Eq for FgAbelianGroup {}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbelianGroup({})", self)
    }
}

/// Renders `0`, `Z`, `Z^r`, `Z_d`, `Z_d^k`, joined by ` (+) `.
impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z_{}", d));
            } else {
                parts.push(format!("Z_{}^{}", d, run));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" (+) "))
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FgAbelianGroup", 2)?;
        st.serialize_field("rank", &self.free_rank)?;
        let torsion: Vec<serde_json::Value> = self
            .invariant_factors
            .iter()
            .map(|d| match d.to_u64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// Cyclic decomposition of a presented group: generator `k` (a column of `U⁻¹`)
/// has order `orders[k]` (zero means infinite); `U` maps presentation
/// coordinates to canonical ones. Summands of order 1 are dropped.
#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    pub generators: Vec<Vec<BigInt>>,
    pub orders: Vec<BigInt>,
    to_canonical: IntMatrix,
}

impl CanonicalBasis {
    fn of(p: &Presentation) -> Self {
        let red = snf::reduce(p.relations(), Track { u: true, u_inv: true, ..Track::NONE });
        let diag = red.diagonal();
        let u = red.u.expect("tracked");
        let ui = red.u_inv.expect("tracked");
        let n = p.generators();
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        let mut rows = Vec::new();
        for k in 0..n {
            let d = diag.get(k).cloned().unwrap_or_else(BigInt::zero);
            if d.is_one() {
                continue;
            }
            generators.push(ui.column(k));
            orders.push(d);
            rows.push(k);
        }
        let to_canonical = IntMatrix::from_fn(rows.len(), n, |i, j| u[(rows[i], j)].clone());
        Self { generators, orders, to_canonical }
    }

    /// Canonical coordinates of `x`, reduced into `[0, d)` on finite summands.
    pub fn coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.to_canonical.mul_vec(x);
        for (yk, d) in y.iter_mut().zip(&self.orders) {
            if !d.is_zero() {
                *yk = yk.mod_floor(d);
            }
        }
        y
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).iter().all(Zero::is_zero)
    }

    /// Element `Σ c_k · generator_k` in presentation coordinates.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let n = self.to_canonical.cols();
        let mut out = vec![BigInt::zero(); n];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            for (o, gi) in out.iter_mut().zip(g) {
                *o += c * gi;
            }
        }
        out
    }

    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if self.orders.iter().any(Zero::is_zero) {
            return None;
        }
        let mut out = Vec::new();
        let mut coeffs = vec![BigInt::zero(); self.orders.len()];
        loop {
            out.push(self.combine(&coeffs));
            let mut k = 0;
            loop {
                if k == coeffs.len() {
                    return Some(out);
                }
                coeffs[k] += 1;
                if coeffs[k] < self.orders[k] {
                    break;
                }
                coeffs[k] = BigInt::zero();
                k += 1;
            }
        }
    }
}
