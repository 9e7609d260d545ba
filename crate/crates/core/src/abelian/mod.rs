//! Exact integer linear algebra: Smith normal form, finitely generated
//! abelian groups as cokernels, and homomorphisms between them.

mod group;
mod hom;
mod matrix;
mod snf;

pub use group::{CanonicalBasis, FgAbelianGroup, Presentation};
pub use hom::{check_exactness, cokernel, iso_equal, subquotient, AbHom};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithDecomposition};

