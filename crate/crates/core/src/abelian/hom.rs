use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{FgAbelianGroup, Presentation};
use super::matrix::IntMatrix;
use super::snf::{self, IntegerSolver};
use crate::error::{Error, Result};

/// Homomorphism between presented groups, written on presentation generators:
/// `x ↦ matrix · x` with `matrix` of shape `codomain.generators × domain.generators`.
///
/// Well-definedness (relations land in the codomain's relation lattice) is
/// verified when the value is built.
#[derive(Clone)]
pub struct AbHom {
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    matrix: IntMatrix,
}

impl AbHom {
    pub fn new(domain: FgAbelianGroup, codomain: FgAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        let dp = domain.presentation();
        let cp = codomain.presentation();
        if matrix.rows() != cp.generators() || matrix.cols() != dp.generators() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                cp.generators(),
                dp.generators()
            )));
        }
        let images = matrix.mul(dp.relations());
        let rel = Lattice::spanned_by(cp.relations());
        for (k, col) in images.columns().enumerate() {
            if !rel.contains(&col) {
                return Err(Error::NotWellDefined(format!(
                    "relation {} maps outside the codomain relations",
                    k
                )));
            }
        }
        let mut hom = Self {
            domain: attach(domain, dp),
            codomain: attach(codomain, cp),
            matrix,
        };
        hom.reduce_entries();
        Ok(hom)
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        let n = g.presentation().generators();
        Self::new(g.clone(), g.clone(), IntMatrix::identity(n)).expect("identity is well defined")
    }

    pub fn zero(domain: &FgAbelianGroup, codomain: &FgAbelianGroup) -> Self {
        let m = IntMatrix::zeros(codomain.presentation().generators(), domain.presentation().generators());
        Self::new(domain.clone(), codomain.clone(), m).expect("zero map is well defined")
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    fn domain_presentation(&self) -> &Presentation {
        self.domain.presentation_ref().expect("attached")
    }

    fn codomain_presentation(&self) -> &Presentation {
        self.codomain.presentation_ref().expect("attached")
    }

    fn reduce_entries(&mut self) {
        if let Some(moduli) = self.codomain_presentation().diagonal_moduli() {
            self.matrix.reduce_rows_mod(&moduli);
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AbHom) -> Result<AbHom> {
        if first.codomain_presentation() != self.domain_presentation() {
            return Err(Error::DomainMismatch(format!(
                "cannot compose: {} -> {} after {} -> {}",
                self.domain, self.codomain, first.domain, first.codomain
            )));
        }
        let mut out = AbHom {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&first.matrix),
        };
        out.reduce_entries();
        Ok(out)
    }

    /// True when both maps agree on every generator modulo the codomain relations.
    pub fn agrees_with(&self, other: &AbHom) -> bool {
        if self.domain_presentation() != other.domain_presentation()
            || self.codomain_presentation() != other.codomain_presentation()
        {
            return false;
        }
        let rel = Lattice::spanned_by(self.codomain_presentation().relations());
        self.matrix
            .sub(&other.matrix)
            .columns()
            .all(|c| rel.contains(&c))
    }

    /// Preimage in `Z^{domain generators}` of the codomain relation lattice.
    fn kernel_lattice(&self) -> IntMatrix {
        let cp = self.codomain_presentation();
        let stacked = self.matrix.hconcat(cp.relations());
        let k = snf::kernel_basis(&stacked);
        let projected = k.row_range(0..self.matrix.cols());
        snf::column_lattice_basis(&projected)
    }

    /// Generators of `im(self)` together with the codomain relations.
    fn image_generators(&self) -> IntMatrix {
        self.matrix.hconcat(self.codomain_presentation().relations())
    }

    pub fn kernel(&self) -> FgAbelianGroup {
        let basis = self.kernel_lattice();
        let rel = self.domain_presentation().relations().clone();
        lattice_quotient(&basis, &rel).expect("domain relations lie in the kernel")
    }

    pub fn image(&self) -> FgAbelianGroup {
        self.image_subgroup().0
    }

    pub fn cokernel(&self) -> FgAbelianGroup {
        cokernel(&self.image_generators())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_zero(&self) -> bool {
        let rel = Lattice::spanned_by(self.codomain_presentation().relations());
        self.matrix.columns().all(|c| rel.contains(&c))
    }

    /// The image as a presented group `Z^{domain gens} / (kernel lattice)` together
    /// with its (injective) inclusion into the codomain.
    pub fn image_subgroup(&self) -> (FgAbelianGroup, AbHom) {
        let p = Presentation::new(self.matrix.cols(), self.kernel_lattice());
        let g = FgAbelianGroup::from_presentation(p);
        let incl = AbHom::new(g.clone(), self.codomain.clone(), self.matrix.clone())
            .expect("kernel relations map into codomain relations");
        (g, incl)
    }

    /// Solves `inclusion ∘ x = self` for `x`; `inclusion` must be injective with image
    /// containing `im(self)`.
    pub fn factor_through(&self, inclusion: &AbHom) -> Result<AbHom> {
        if inclusion.codomain_presentation() != self.codomain_presentation() {
            return Err(Error::DomainMismatch("factor_through: codomains differ".into()));
        }
        let stacked = inclusion.image_generators();
        let solver = IntegerSolver::new(&stacked);
        let width = inclusion.matrix.cols();
        let mut cols = Vec::with_capacity(self.matrix.cols());
        for c in self.matrix.columns() {
            let x = solver.solve(&c).ok_or(Error::ImageNotContained)?;
            cols.push(x[..width].to_vec());
        }
        let m = IntMatrix::from_columns(width, &cols);
        AbHom::new(self.domain.clone(), inclusion.domain.clone(), m)
    }
}

fn attach(g: FgAbelianGroup, p: Presentation) -> FgAbelianGroup {
    if g.presentation_ref().is_some() {
        g
    } else {
        FgAbelianGroup::from_presentation(p)
    }
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbHom({} -> {}, {})", self.domain, self.codomain, self.matrix)
    }
}

/// Membership test for a lattice spanned by the columns of a matrix.
pub(crate) struct Lattice {
    solver: Option<IntegerSolver>,
}

impl Lattice {
    pub fn spanned_by(gens: &IntMatrix) -> Self {
        let solver = (gens.cols() > 0 && !gens.is_zero()).then(|| IntegerSolver::new(gens));
        Self { solver }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        match &self.solver {
            None => v.iter().all(Zero::is_zero),
            Some(s) => s.solve(v).is_some(),
        }
    }
}

/// `L / M` for lattices with `M ⊂ L`: `basis` is a basis of `L` (columns), `gens`
/// generates `M`. Errors when some generator of `M` is outside `L`.
fn lattice_quotient(basis: &IntMatrix, gens: &IntMatrix) -> Result<FgAbelianGroup> {
    let k = basis.cols();
    if k == 0 {
        return if gens.is_zero() {
            Ok(FgAbelianGroup::trivial())
        } else {
            Err(Error::ImageNotContained)
        };
    }
    let solver = IntegerSolver::new(basis);
    let mut coords = Vec::with_capacity(gens.cols());
    for c in gens.columns() {
        coords.push(solver.solve(&c).ok_or(Error::ImageNotContained)?);
    }
    Ok(FgAbelianGroup::from_presentation(Presentation::new(
        k,
        IntMatrix::from_columns(k, &coords),
    )))
}

/// Canonical form of `Z^rows / colspan(A)`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    FgAbelianGroup::from_presentation(Presentation::new(a.rows(), a.clone()))
}

/// `ker(kernel_of) / im(image_of)`; the image must land in the kernel.
pub fn subquotient(kernel_of: &AbHom, image_of: &AbHom) -> Result<FgAbelianGroup> {
    if image_of.codomain_presentation() != kernel_of.domain_presentation() {
        return Err(Error::DomainMismatch(format!(
            "image lands in {} but kernel is taken in {}",
            image_of.codomain, kernel_of.domain
        )));
    }
    lattice_quotient(&kernel_of.kernel_lattice(), &image_of.image_generators())
}

/// Whether `im f = ker g`.
pub fn check_exactness(f: &AbHom, g: &AbHom) -> Result<bool> {
    match subquotient(g, f) {
        Ok(q) => Ok(q.is_trivial()),
        Err(Error::ImageNotContained) => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn iso_equal(g: &FgAbelianGroup, h: &FgAbelianGroup) -> bool {
    g == h
}
