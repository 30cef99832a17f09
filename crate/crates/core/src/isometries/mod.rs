//! Isometries of F^n, the stabilizer groups 𝒜^t ⊇ ℬ^t, and coset
//! representatives 𝒟^t.

mod groups;
mod isometry;
mod rep;

pub use groups::{
    group_orders, in_a, in_a_definitional, in_b, in_b_by_collection, in_b_definitional, sample_a,
    sample_b,
};
pub use isometry::Isometry;
pub(crate) use isometry::PermTable;
pub use rep::{d_size, enumerate_d, factor_mod_b, sample_d, DRep, DRepIter, RepData};
