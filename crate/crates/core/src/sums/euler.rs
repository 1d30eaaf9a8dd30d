use serde::{Deserialize, Serialize};

use crate::arith::{primes_up_to, MultiplicativeFunction, Rational};
use crate::error::Result;
use crate::poly::ShapeDecomposition;
use crate::roots::rho_star_prime;

#[derive(Debug, Clone)]
pub struct EulerProductSpec {
    pub shape: ShapeDecomposition,
    pub h: MultiplicativeFunction,
    pub x1: u64,
    pub x2: u64,
}

/// Per-factor breakdown, useful for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactors {
    #[serde(with = "crate::report::rational_str")]
    pub g_part: Rational,
    #[serde(with = "crate::report::rational_str")]
    pub x1_part: Rational,
    #[serde(with = "crate::report::rational_str")]
    pub x2_part: Rational,
}

impl EulerFactors {
    pub fn total(&self) -> Rational {
        &self.g_part * &self.x1_part * &self.x2_part
    }
}

/// `E = prod_{d < p <= min X_i} (1 + rho*_G(p)(h(p) - 1)/p)
///      * prod_i prod_{p <= X_i} (1 + d_i (h(p) - 1)/p)`.
pub fn euler_e(spec: &EulerProductSpec) -> Result<Rational> {
    Ok(euler_factors(spec)?.total())
}

pub fn euler_factors(spec: &EulerProductSpec) -> Result<EulerFactors> {
    let d = spec.shape.degree() as u64;
    let h = &spec.h;
    let one = Rational::from_integer(1.into());
    let mut g_part = one.clone();
    for p in primes_up_to(spec.x1.min(spec.x2)).into_iter().filter(|&p| p > d) {
        let r = rho_star_prime(&spec.shape.g, p)?;
        g_part *= &one + Rational::from_integer(r.into()) * (h.at_prime_power(p, 1)? - &one) / Rational::from_integer(p.into());
    }
    let side = |x: u64, di: u8| -> Result<Rational> {
        let mut acc = one.clone();
        if di == 0 {
            return Ok(acc);
        }
        for p in primes_up_to(x) {
            acc *= &one + Rational::from_integer(di.into()) * (h.at_prime_power(p, 1)? - &one) / Rational::from_integer(p.into());
        }
        Ok(acc)
    };
    Ok(EulerFactors { g_part, x1_part: side(spec.x1, spec.shape.d1)?, x2_part: side(spec.x2, spec.shape.d2)? })
}
