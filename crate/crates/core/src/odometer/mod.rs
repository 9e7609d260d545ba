//! Acting groups, subgroup chains and the odometer they define.
//!
//! `Γ` is one of `Z`, `Z ⋊ Z_2` or `Z × Z_2`; the chain is `Γ_i = n_i Z`
//! (with the `Z_2` factor kept in the two non-cyclic cases), and the space is
//! the inverse limit of the coset spaces `Γ/Γ_i ≅ Z_{n_i}`.

mod action;
mod cocycle;
mod element;
mod spec;

pub use action::{
    chain_intersection, coset_action, fixed_points_extendable, fixed_points_limit, is_topologically_free,
    reflection_fixed_counts, translation_orbit_size, truncated_points, FixedCount, FreenessVerdict, FreenessWitness,
    Horizon, IntersectionSubgroup, TruncatedPoint, ENUMERATION_LIMIT,
};
pub(crate) use action::act_mod;
pub use cocycle::{cocycle, cocycle_with, coset_cocycle, CocycleData, Transversal};
pub use element::{GroupElement, GroupKind};
pub use spec::{Chain, OdometerSpec, Tail};
