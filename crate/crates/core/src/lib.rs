//! Sums of multiplicative functions over values of binary integral forms.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: primes, factorisation, exact rationals, multiplicative
//!   functions and the weight `psi`.
//! * [`poly`]: integer polynomials, binary forms, discriminants, the
//!   `GL_2` action, shape decomposition and specialisation.
//! * [`roots`]: root counts `rho_f(m)` and `rho*_F(m)`, prime-power
//!   lifting and the prime-power root bound check.
//! * [`fpd`]: fixed prime divisors and the change-of-variables removal
//!   algorithm with independently checkable certificates.
//! * [`sums`]: brute-force sums `T` and `S`, Euler products, the Nair
//!   right-hand sides and the boundedness harnesses.
//! * [`report`]: CSV/JSON rendering of experiment tables.

pub mod arith;
pub mod error;
pub mod fpd;
pub mod poly;
pub mod report;
pub mod roots;
pub mod sums;

pub use arith::{
    euler_phi, factorize, psi, FactoredInteger, MultiplicativeFunction, Rational,
};
pub use error::{Error, Result};
pub use fpd::{
    fixed_prime_divisors, pqr_decompose, reduce_full, reduce_once, remove_all_fpd,
    verify_certificate, MultiPrimeCertificate, ReductionCertificate,
};
pub use poly::{BinaryForm, ShapeDecomposition, UniPoly};
pub use sums::{euler_e, nair_rhs, s_sum, t_sum, EulerProductSpec, SumRow};
