//! Exact algebra in the Artin braid group `B_n`.

mod cabling;
mod garside;
mod perm;
mod torsion;
mod word;

pub use cabling::{
    block_crossing, cable, cabled_relation_target, exponent_ledger, plain_cable, CablingVector,
};
pub use garside::{delta_word, equal_in_artin, normal_form, GarsideNormalForm, MAX_STRANDS};
pub use perm::{permutation_of, Permutation};
pub use torsion::{
    identity_suite, omega, relation_word, torsion_cycle_structure, torsion_element,
    CycleStructure, IdentityCheck,
};
pub use word::BraidWord;
