//! Dense linear algebra over Z/p^N.

mod lattice;
mod matrix;
pub mod snf;

pub use lattice::Lattice;
pub use matrix::ZpMatrix;
pub use snf::{kernel, membership, snf, snf_full, Membership, SnfCertificate, SnfResult, DEFAULT_MARGIN};
