//! Finite-precision computations with the canonical local points of a
//! supersingular elliptic curve over unramified extensions of Q_p and their
//! cyclotomic towers.

pub mod error;
pub mod formal;
pub mod group_ring;
pub mod lambda;
pub mod lattice_lab;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod series;
pub mod tower;

pub use error::{Error, Result};
pub use linalg::{Lattice, SnfResult, ZpMatrix};
pub use padic::{FieldDesc, PAdicInt, UnramifiedElt, Zp};
pub use group_ring::{GRPoly, GroupRingElt};
pub use lambda::Presentation;
pub use poly::Poly;
pub use ring::RingElem;
pub use series::TruncSeries;
pub use tower::{TowerDesc, TowerElt};

/// Series over the rationals; the exact oracle for formal-group computations.
pub type QSeries = TruncSeries<num_rational::BigRational>;
pub type ZpSeries = TruncSeries<PAdicInt>;
pub type ZpPoly = Poly<PAdicInt>;
pub use formal::KSeries;
