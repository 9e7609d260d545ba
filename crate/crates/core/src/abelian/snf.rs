//! Smith normal form over the integers.
//!
//! Convention: `S = U · A · V` with `U`, `V` unimodular. The diagonal of `S`
//! is nonnegative, satisfies `d_1 | d_2 | … | d_r`, and zeros trail.
//!
//! Elimination always pivots on the smallest nonzero entry of the remaining
//! block, which keeps entry growth in check for the small matrices used here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub source: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries `d_1 | … | d_r`.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        diagonal(&self.s).into_iter().take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_diagonal().len()
    }

    /// Checks every defining property exactly: the product identity,
    /// unimodularity, diagonal shape, signs and the divisibility chain.
    pub fn is_valid(&self) -> bool {
        let (m, n) = (self.source.rows(), self.source.cols());
        if self.u.rows() != m || self.u.cols() != m || self.v.rows() != n || self.v.cols() != n {
            return false;
        }
        if self.u.mul(&self.source).mul(&self.v) != self.s {
            return false;
        }
        if self.u.determinant().abs() != BigInt::one() || self.v.determinant().abs() != BigInt::one() {
            return false;
        }
        for i in 0..m {
            for j in 0..n {
                if i != j && !self.s[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        is_divisibility_chain(&diagonal(&self.s))
    }
}

pub(crate) fn diagonal(s: &IntMatrix) -> Vec<BigInt> {
    (0..s.rows().min(s.cols())).map(|i| s[(i, i)].clone()).collect()
}

/// Nonnegative, `d_k | d_{k+1}`, zeros only at the end.
pub(crate) fn is_divisibility_chain(diag: &[BigInt]) -> bool {
    if diag.iter().any(|d| d.is_negative()) {
        return false;
    }
    let nonzero = diag.iter().take_while(|d| !d.is_zero()).count();
    if diag[nonzero..].iter().any(|d| !d.is_zero()) {
        return false;
    }
    diag[..nonzero]
        .windows(2)
        .all(|w| w[1].is_multiple_of(&w[0]))
}

/// Which transforms to accumulate during elimination.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub v: bool,
    pub u_inv: bool,
    pub v_inv: bool,
}

impl Track {
    pub const NONE: Track = Track { u: false, v: false, u_inv: false, v_inv: false };
    #[cfg(test)]
    pub const ALL: Track = Track { u: true, v: true, u_inv: true, v_inv: true };
}

/// Outcome of an elimination run; untracked transforms are `None`.
pub(crate) struct Reduction {
    pub s: IntMatrix,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub v_inv: Option<IntMatrix>,
}

impl Reduction {
    pub fn diagonal(&self) -> Vec<BigInt> {
        diagonal(&self.s)
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Reducer {
    s: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.s.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.s.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// row[target] += q·row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        self.s.add_row_multiple(target, source, q);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(target, source, q);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(source, target, &-q);
        }
    }

    /// col[target] += q·col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        self.s.add_col_multiple(target, source, q);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(target, source, q);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(source, target, &-q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.s.rows() {
            for j in t..self.s.cols() {
                let x = &self.s[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => x.magnitude() < self.s[b].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Smallest nonzero entry in pivot row `t` or pivot column `t`.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let cands = (t..self.s.rows())
            .map(|i| (i, t))
            .chain((t + 1..self.s.cols()).map(|j| (t, j)));
        for p in cands {
            let x = &self.s[p];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|b| x.magnitude() < self.s[b].magnitude()) {
                best = Some(p);
            }
        }
        best
    }

    fn run(&mut self) {
        let (m, n) = (self.s.rows(), self.s.cols());
        let mut t = 0;
        while t < m.min(n) {
            let Some((p, q)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, p);
            self.swap_cols(t, q);
            loop {
                let pivot = self.s[(t, t)].clone();
                let mut remainder = false;
                for i in t + 1..m {
                    if self.s[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.s[(i, t)].div_floor(&pivot);
                    self.add_row(i, t, &-q);
                    remainder |= !self.s[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    if self.s[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.s[(t, j)].div_floor(&pivot);
                    self.add_col(j, t, &-q);
                    remainder |= !self.s[(t, j)].is_zero();
                }
                if remainder {
                    let (p, q) = self
                        .smallest_in_cross(t)
                        .expect("pivot row/column cannot vanish");
                    self.swap_rows(t, p);
                    self.swap_cols(t, q);
                    continue;
                }
                // Pivot must divide the rest of the block.
                let offender = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.s[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.s[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

pub(crate) fn reduce(a: &IntMatrix, track: Track) -> Reduction {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        s: a.clone(),
        u: track.u.then(|| IntMatrix::identity(m)),
        v: track.v.then(|| IntMatrix::identity(n)),
        u_inv: track.u_inv.then(|| IntMatrix::identity(m)),
        v_inv: track.v_inv.then(|| IntMatrix::identity(n)),
    };
    r.run();
    Reduction {
        s: r.s,
        u: r.u,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
    }
}

/// Smith normal form `S = U·A·V` of an arbitrary (possibly empty) matrix.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let r = reduce(a, Track { u: true, v: true, ..Track::NONE });
    SmithDecomposition {
        u: r.u.expect("tracked"),
        s: r.s,
        v: r.v.expect("tracked"),
        source: a.clone(),
    }
}

/// Basis (as columns) of the integer kernel `{x : A x = 0}`.
pub(crate) fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let r = reduce(a, Track { v: true, ..Track::NONE });
    let rank = r.rank();
    r.v.expect("tracked").column_range(rank..a.cols())
}

/// Basis (as columns) of the lattice spanned by the columns of `p`.
pub(crate) fn column_lattice_basis(p: &IntMatrix) -> IntMatrix {
    let r = reduce(p, Track { u_inv: true, ..Track::NONE });
    let rank = r.rank();
    let diag = r.diagonal();
    let ui = r.u_inv.expect("tracked");
    // A·V = U⁻¹·S, so the first `rank` columns of U⁻¹·S span the same lattice.
    IntMatrix::from_fn(p.rows(), rank, |i, j| &ui[(i, j)] * &diag[j])
}

/// Integer solver for `A x = b`, reusing one elimination for many right-hand sides.
pub(crate) struct IntegerSolver {
    u: IntMatrix,
    v: IntMatrix,
    diag: Vec<BigInt>,
    rank: usize,
}

impl IntegerSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let r = reduce(a, Track { u: true, v: true, ..Track::NONE });
        let rank = r.rank();
        let diag = r.diagonal();
        Self {
            u: r.u.expect("tracked"),
            v: r.v.expect("tracked"),
            diag,
            rank,
        }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.u.mul_vec(b);
        let mut z = vec![BigInt::zero(); self.v.rows()];
        for (k, yk) in y.iter().enumerate() {
            if k < self.rank {
                let (q, r) = yk.div_rem(&self.diag[k]);
                if !r.is_zero() {
                    return None;
                }
                z[k] = q;
            } else if !yk.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&z))
    }
}
