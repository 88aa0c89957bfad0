//! Self-similar actions of free nilpotent groups on rooted trees, built from
//! virtual endomorphisms.

mod endo;
pub mod example;
mod rep;
mod spectral;

pub use endo::{cyclic_data, make_virtual_endomorphism, cyclic_endomorphism, VirtualEndomorphism};
pub use rep::{
    Automaton, AutomatonState, Decomposition, Permutation, Portrait, PortraitNode, SelfSimilarRep,
    StateClosure, DEFAULT_NODE_CAP,
};
pub use spectral::{
    abelianized_matrix, abelianized_matrix_of, polynomial_to_string, RationalMatrix, SpectralRadius, SpectralVerdict,
    SPECTRAL_TOLERANCE,
};
