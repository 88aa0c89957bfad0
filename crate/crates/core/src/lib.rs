//! Free nilpotent groups `N(r, c)` in Mal'cev coordinates over a Hall basis,
//! and the transitive self-similar actions they admit on rooted `m`-ary trees.
//!
//! The group arithmetic is generic over the exponent ring (any signed integer
//! type implementing [`Exponent`]); the aliases below fix it to
//! arbitrary-precision [`BigInt`], which is what the CLI and the acceptance
//! suite use. `i64` aliases are provided for quick experiments where overflow
//! is not a concern.

// Elements hash by their exponent vector only; the shared presentation's
// caches do not take part.
#![allow(clippy::mutable_key_type)]

pub mod commutator;
pub mod error;
pub mod nilpotent;
pub mod scalar;
pub mod selfsim;

pub use error::{Error, Result};
pub use scalar::Exponent;

pub use num_bigint::BigInt;

pub use commutator::{
    hall_basis, index_exponent, mobius, subgroup_index_formula, weight_count, witt_multirank,
    witt_rank, BasicCommutator, CommutatorShape, HallBasis, DEFAULT_BASIS_CAP,
};
pub use nilpotent::expr::{Expr, Word};

/// Presentation of `N(r, c)` with arbitrary-precision exponents.
pub type Presentation = nilpotent::Presentation<BigInt>;
/// Group element in Mal'cev coordinates with arbitrary-precision exponents.
pub type Element = nilpotent::GroupElement<BigInt>;
pub type Subgroup = nilpotent::Subgroup<BigInt>;
pub type Homomorphism = nilpotent::Homomorphism<BigInt>;

/// Machine-word variants. Exponent overflow panics in debug builds.
pub type Presentation64 = nilpotent::Presentation<i64>;
pub type Element64 = nilpotent::GroupElement<i64>;
pub type Subgroup64 = nilpotent::Subgroup<i64>;

pub type VirtualEndomorphism = selfsim::VirtualEndomorphism<BigInt>;
pub type SelfSimilarRep = selfsim::SelfSimilarRep<BigInt>;
pub type RationalMatrix = selfsim::RationalMatrix<BigInt>;
