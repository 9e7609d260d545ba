//! Topological full groups of the level groupoids `Γ ⋉ Γ/Γ_i` in wreath form,
//! their abelianizations, and the exact sequence
//! `H_0(G) ⊗ Z_2 → [[G]]_ab → H_1(G) → 0`.

mod ah;
mod element;

pub use ah::{ah_certificate, AhCertificate, AhLevel, MapRecord, H0_SNF_LIMIT};
pub use element::{
    index_map_i, j_map, j_map_with, BisectionForm, FullGroupElement, FullGroupLevel, JClass, FULL_GROUP_LIMIT,
};
