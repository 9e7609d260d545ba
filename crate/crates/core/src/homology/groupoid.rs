use num_bigint::BigInt;

use crate::abelian::{subquotient, AbHom, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};

/// Matrix-entry budget for chain complexes unless the caller says otherwise.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Finite group given by its multiplication table, elements `0..order` with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Invalid("multiplication table must be square with entries below its size".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::Invalid("element 0 is not the identity".into()));
            }
            if !(0..n).any(|b| table[a][b] == 0) {
                return Err(Error::Invalid(format!("element {} has no inverse", a)));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(format!("not associative at ({}, {}, {})", a, b, c)));
                    }
                }
            }
        }
        Ok(Self { table })
    }

    pub fn cyclic(n: usize) -> Self {
        Self {
            table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Transformation groupoid `Γ ⋉ X` of a finite group acting on a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    group: FiniteGroup,
    points: usize,
    /// `action[g][x] = g · x`
    action: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    pub fn new(group: FiniteGroup, points: usize, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = group.order();
        if action.len() != n || action.iter().any(|row| row.len() != points || row.iter().any(|&y| y >= points)) {
            return Err(Error::Invalid("action table has the wrong shape".into()));
        }
        for x in 0..points {
            if action[0][x] != x {
                return Err(Error::Invalid(format!("identity moves point {}", x)));
            }
            for g in 0..n {
                for h in 0..n {
                    if action[group.mul(g, h)][x] != action[g][action[h][x]] {
                        return Err(Error::Invalid(format!("action law fails for ({}, {}) at {}", g, h, x)));
                    }
                }
            }
        }
        Ok(Self { group, points, action })
    }

    /// `Z_2` acting on `Z_n` by `x ↦ -x`.
    pub fn negation(n: usize) -> Self {
        let action = vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()];
        Self::new(FiniteGroup::cyclic(2), n, action).expect("negation is an action")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// Number of composable `k`-tuples.
    fn cells(&self, k: usize) -> u128 {
        (self.group.order() as u128).pow(k as u32) * self.points as u128
    }

    /// `δ_k: Z[G^(k)] → Z[G^(k-1)]`. A composable tuple `(g_1, …, g_k)` is stored
    /// as `(γ_1, …, γ_k, x)` with `x` the source of `g_k`, indexed lexicographically.
    fn boundary(&self, k: usize) -> IntMatrix {
        let q = self.group.order();
        let rows = self.cells(k - 1) as usize;
        let cols = self.cells(k) as usize;
        let mut m = IntMatrix::zeros(rows, cols);
        let mut gammas = vec![0usize; k];
        for col in 0..cols {
            let x = col % self.points;
            let mut rest = col / self.points;
            for slot in gammas.iter_mut().rev() {
                *slot = rest % q;
                rest /= q;
            }
            let index = |gs: &[usize], x: usize| gs.iter().fold(0usize, |acc, &g| acc * q + g) * self.points + x;
            for i in 0..=k {
                let face = if i == 0 {
                    index(&gammas[1..], x)
                } else if i == k {
                    index(&gammas[..k - 1], self.act(gammas[k - 1], x))
                } else {
                    let mut gs = gammas.clone();
                    gs[i - 1] = self.group.mul(gammas[i - 1], gammas[i]);
                    gs.remove(i);
                    index(&gs, x)
                };
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m[(face, col)] += BigInt::from(sign);
            }
        }
        m
    }

    /// Orbit representatives together with their stabilizers.
    pub fn orbits(&self) -> Vec<(usize, Vec<usize>)> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for x in 0..self.points {
            if seen[x] {
                continue;
            }
            for g in 0..self.group.order() {
                seen[self.act(g, x)] = true;
            }
            let stab = (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect();
            out.push((x, stab));
        }
        out
    }
}

fn free_map(m: IntMatrix) -> AbHom {
    AbHom::new(FgAbelianGroup::free(m.cols()), FgAbelianGroup::free(m.rows()), m)
        .expect("maps between free groups are well defined")
}

/// `H_n(G) = ker δ_n / im δ_{n+1}` of the groupoid chain complex, refusing complexes
/// whose two matrices hold more than `budget` entries.
pub fn groupoid_chain_homology_with_budget(g: &FiniteGroupoid, degree: usize, budget: u128) -> Result<FgAbelianGroup> {
    let needed = g.cells(degree + 1) * g.cells(degree) + if degree > 0 { g.cells(degree) * g.cells(degree - 1) } else { 0 };
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let upper = free_map(g.boundary(degree + 1));
    let lower = if degree == 0 {
        free_map(IntMatrix::zeros(0, g.points()))
    } else {
        free_map(g.boundary(degree))
    };
    subquotient(&lower, &upper)
}

pub fn groupoid_chain_homology(g: &FiniteGroupoid, degree: usize) -> Result<FgAbelianGroup> {
    groupoid_chain_homology_with_budget(g, degree, DEFAULT_BUDGET)
}

/// Independent answer `⊕_orbits H_n(stabilizer)`, available when every stabilizer
/// is cyclic (`H_0 = Z`, `H_odd = Z_m`, `H_even = 0` for `Z_m`).
pub fn orbit_stabilizer_homology(g: &FiniteGroupoid, degree: usize) -> Option<FgAbelianGroup> {
    let mut free = 0;
    let mut torsion = Vec::new();
    for (_, stab) in g.orbits() {
        let m = stab.len();
        if !stab.iter().any(|&s| g.group().element_order(s) == m) {
            return None;
        }
        if degree == 0 {
            free += 1;
        } else if degree % 2 == 1 {
            torsion.push(BigInt::from(m));
        }
    }
    Some(FgAbelianGroup::new(free, torsion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{z2_homology, InvolutionModule};

    #[test]
    fn negation_on_z3() {
        let g = FiniteGroupoid::negation(3);
        assert_eq!(groupoid_chain_homology(&g, 0).unwrap(), FgAbelianGroup::free(2));
        assert_eq!(groupoid_chain_homology(&g, 1).unwrap(), FgAbelianGroup::cyclic(2));
        assert!(groupoid_chain_homology(&g, 2).unwrap().is_trivial());
    }

    #[test]
    fn trivial_groupoid() {
        let g = FiniteGroupoid::new(FiniteGroup::cyclic(1), 1, vec![vec![0]]).unwrap();
        assert_eq!(groupoid_chain_homology(&g, 0).unwrap(), FgAbelianGroup::free(1));
        for n in 1..=3 {
            assert!(groupoid_chain_homology(&g, n).unwrap().is_trivial());
        }
    }

    #[test]
    fn negation_on_z4_matches_involution_homology() {
        let g = FiniteGroupoid::negation(4);
        let m = InvolutionModule::negation(4);
        for n in [1, 3] {
            let h = groupoid_chain_homology(&g, n).unwrap();
            assert_eq!(h, FgAbelianGroup::new(0, [2, 2]));
            assert_eq!(h, z2_homology(&m, n));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroupoid::negation(12);
        let err = groupoid_chain_homology_with_budget(&g, 3, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1000, .. }));
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroupoid::new(FiniteGroup::cyclic(2), 2, vec![vec![0, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn orbit_formula() {
        let g = FiniteGroupoid::negation(6);
        assert_eq!(orbit_stabilizer_homology(&g, 0).unwrap(), FgAbelianGroup::free(4));
        assert_eq!(orbit_stabilizer_homology(&g, 3).unwrap(), FgAbelianGroup::new(0, [2, 2]));
        assert!(orbit_stabilizer_homology(&g, 2).unwrap().is_trivial());
    }
}
