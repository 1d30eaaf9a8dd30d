//! Fixed inputs shared by the kernel benchmarks.

use formsums::{BinaryForm, MultiplicativeFunction, UniPoly};

/// Semiprime with two 31-bit factors, the slow case for rho.
pub const SEMIPRIME: u64 = 2_147_483_647 * 2_147_483_629;

pub fn cubic_form() -> BinaryForm {
    "3; 1 0 0 2".parse().expect("literal")
}

/// `x^2 + 1`.
pub fn quadratic() -> UniPoly {
    UniPoly::from_i64s(&[1, 0, 1])
}

/// `x^5 - x`, which has fixed prime divisors 2, 3 and 5.
pub fn quintic_with_fpd() -> UniPoly {
    UniPoly::from_i64s(&[0, -1, 0, 0, 0, 1])
}

pub fn tau() -> MultiplicativeFunction {
    MultiplicativeFunction::from_builtin("tau").expect("builtin")
}
