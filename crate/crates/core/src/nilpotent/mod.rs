//! Exact arithmetic in free nilpotent groups.

mod element;
pub mod expr;
mod hom;
mod magnus;
mod presentation;
mod subgroup;

pub use element::{ElementRecord, GroupElement, JsonInt};
pub use expr::collect;
pub use hom::{hom_extend, Homomorphism};
pub use presentation::Presentation;
pub use subgroup::{induced_sequence, IndexRecord, Subgroup, SubgroupRecord, TRANSVERSAL_CAP};
