//! Homology of the odometer and the finite models used to check it.

mod groupoid;
mod involution;
mod report;
mod transfer;

pub use groupoid::{
    groupoid_chain_homology, groupoid_chain_homology_with_budget, orbit_stabilizer_homology, FiniteGroup,
    FiniteGroupoid, DEFAULT_BUDGET,
};
pub use involution::{z2_homology, InvolutionModule};
pub use report::{
    degree_one_system, odometer_homology, HomologyGroup, HomologyReport, COLIMIT_WINDOW, DEFAULT_MAX_DEGREE,
};
pub use transfer::{
    abelian_generators, abelianize_in_level, level_abelianization, transfer_between, transfer_map,
    transfer_map_with, transfer_relative,
};
