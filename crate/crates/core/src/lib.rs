//! Homology, K-theory and topological full groups of odometer actions.
//!
//! The crate models odometer actions of `Z`, the infinite dihedral group
//! `Z ⋊ Z_2` and `Z × Z_2` on inverse limits of finite coset spaces, and
//! computes their invariants with exact integer arithmetic:
//!
//! * [`abelian`]: Smith normal form, finitely generated abelian groups and
//!   homomorphisms between them.
//! * [`colimit`]: sequential colimits (stabilizing finite systems and rank-1
//!   systems described by supernatural numbers).
//! * [`odometer`]: group elements, subgroup chains, coset actions, cocycles,
//!   fixed points and topological freeness.
//! * [`homology`]: group homology of the odometer via transfer maps, the
//!   2-periodic homology of involutions, and the groupoid chain complex.
//! * [`ktheory`]: K-theory of the dihedral crossed products and the
//!   comparison against homology.
//! * [`fullgroup`]: topological full groups of the finite level groupoids
//!   and certificates for the exact sequence relating them to homology.
//! * [`cli`]: spec parsing and report generation used by the `odohk` binary.

pub mod abelian;
pub mod cli;
pub mod colimit;
pub mod error;
pub mod fullgroup;
pub mod homology;
pub mod ktheory;
pub mod odometer;

pub use error::{Error, Result};
