use num_bigint::BigInt;

use crate::abelian::{cokernel, subquotient, AbHom, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};

/// `Z^Y` with the `Z_2`-action induced by an involution `σ` of a finite set `Y = {0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionModule {
    sigma: Vec<usize>,
}

impl InvolutionModule {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        for (y, &z) in sigma.iter().enumerate() {
            if z >= n || sigma[z] != y {
                return Err(Error::Invalid(format!("sigma is not an involution at {}", y)));
            }
        }
        Ok(Self { sigma })
    }

    /// `x ↦ -x` on `Z_n`.
    pub fn negation(n: usize) -> Self {
        Self {
            sigma: (0..n).map(|x| (n - x) % n).collect(),
        }
    }

    /// `x ↦ t - x` on `Z_n`.
    pub fn reflection(n: usize, t: usize) -> Self {
        Self {
            sigma: (0..n).map(|x| (t % n + n - x) % n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn fixed_points(&self) -> usize {
        self.sigma.iter().enumerate().filter(|(y, z)| y == *z).count()
    }

    pub fn orbits(&self) -> usize {
        (self.len() + self.fixed_points()) / 2
    }

    /// `1 + sign · σ_*` on `Z^Y`.
    fn operator(&self, sign: i64) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::identity(n);
        for (y, &z) in self.sigma.iter().enumerate() {
            m[(z, y)] += BigInt::from(sign);
        }
        m
    }
}

fn endo(m: IntMatrix) -> AbHom {
    let g = FgAbelianGroup::free(m.rows());
    AbHom::new(g.clone(), g, m).expect("maps between free groups are well defined")
}

/// `H_n(Z_2, Z^Y)` from the 2-periodic resolution: `coker(1-σ)` in degree 0,
/// `ker(1-σ)/im(1+σ)` in odd degrees, `ker(1+σ)/im(1-σ)` in even positive degrees.
pub fn z2_homology(module: &InvolutionModule, degree: usize) -> FgAbelianGroup {
    let minus = module.operator(-1);
    if degree == 0 {
        return cokernel(&minus);
    }
    let plus = module.operator(1);
    let (kernel_of, image_of) = if degree % 2 == 1 { (minus, plus) } else { (plus, minus) };
    subquotient(&endo(kernel_of), &endo(image_of)).expect("(1-σ)(1+σ) = 0 for an involution")
}
