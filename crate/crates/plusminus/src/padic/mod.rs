//! Z/p^N scalars and the unramified extension O_k.

mod unramified;
mod zp;

pub use unramified::{
    build_unramified, frobenius_matrix_power, is_irreducible_fp, primitive_normal_poly, FieldDesc,
    UnramifiedElt,
};
pub use zp::{is_prime, primitive_root, teichmuller, PAdicInt, Zp};

/// Frobenius power applied to an element of O_k; negative powers allowed.
pub fn frobenius(x: &UnramifiedElt, power: i64) -> UnramifiedElt {
    x.frobenius(power)
}

/// Coordinate valuation; `None` means zero at the working precision.
pub fn valuation(x: &UnramifiedElt) -> Option<u32> {
    x.valuation()
}
