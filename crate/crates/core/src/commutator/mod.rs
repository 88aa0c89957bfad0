//! Basic commutators, Hall bases, and the counting formulas attached to them.

mod counting;
mod hall;

pub use counting::{
    index_exponent, mobius, subgroup_index_formula, weight_count, witt_multirank, witt_rank,
};
pub use hall::{hall_basis, BasicCommutator, CommutatorShape, HallBasis, DEFAULT_BASIS_CAP};
