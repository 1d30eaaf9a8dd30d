use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_up_to, rational_sum, Decimal, MultiplicativeFunction, Rational};
use crate::error::{Error, Result};
use crate::fpd::fixed_prime_divisors;
use crate::poly::{disc_uni, UniPoly};
use crate::report::rational_str;
use crate::roots::rho_prime_power;

fn check_admissible(f: &UniPoly) -> Result<usize> {
    let primes = fixed_prime_divisors(f)?;
    if !primes.is_empty() {
        return Err(Error::HasFixedPrimeDivisor { poly: f.to_string(), primes });
    }
    let d = f.degree().expect("fpd check rejects zero");
    if disc_uni(f, d)?.is_zero() {
        return Err(Error::VanishingDiscriminant(f.to_string()));
    }
    Ok(d)
}

/// `rho_f(p^l)` for every prime power up to `x`.
fn rho_table(f: &UniPoly, x: u64) -> Result<HashMap<(u64, u32), u64>> {
    let mut t = HashMap::new();
    for p in primes_up_to(x) {
        let (mut q, mut l) = (p, 1u32);
        loop {
            t.insert((p, l), rho_prime_power(f, p, l)?);
            match q.checked_mul(p) {
                Some(n) if n <= x => {
                    q = n;
                    l += 1;
                }
                _ => break,
            }
        }
    }
    Ok(t)
}

fn local_product(f_rho: &HashMap<(u64, u32), u64>, x: u64) -> Rational {
    primes_up_to(x)
        .into_iter()
        .map(|p| Rational::one() - Rational::new(f_rho[&(p, 1)].into(), p.into()))
        .fold(Rational::one(), |a, b| a * b)
}

/// `X prod_{p <= X} (1 - rho_f(p)/p) sum_{m <= X} rho_f(m) h(m) / m`.
///
/// `f` must be free of fixed prime divisors; run
/// [`crate::fpd::remove_all_fpd`] first otherwise.
pub fn nair_rhs(x: u64, h: &MultiplicativeFunction, f: &UniPoly) -> Result<Rational> {
    check_admissible(f)?;
    if x == 0 {
        return Err(Error::Zero("X"));
    }
    let table = rho_table(f, x)?;
    let mut terms = Vec::new();
    for m in 1..=x {
        let fm = factorize(m)?;
        let r: u64 = fm.factors().iter().map(|pe| table[pe]).product();
        if r == 0 {
            continue;
        }
        terms.push(h.eval_factored(&fm)? * Rational::new(r.into(), m.into()));
    }
    Ok(Rational::from_integer(x.into()) * local_product(&table, x) * rational_sum(terms))
}

/// The variant with `exp(sum_{p <= X} h(p) rho_f(p) / p)` in place of the
/// divisor-type sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NairExpRhs {
    /// `X prod_{p <= X} (1 - rho_f(p)/p)`.
    #[serde(with = "rational_str")]
    pub product_part: Rational,
    #[serde(with = "rational_str")]
    pub exponent_sum: Rational,
    /// The whole right-hand side, rounded to `digits` places.
    pub value: String,
    pub digits: u32,
}

pub fn nair_exp_rhs(x: u64, h: &MultiplicativeFunction, f: &UniPoly, digits: u32) -> Result<NairExpRhs> {
    check_admissible(f)?;
    if x == 0 {
        return Err(Error::Zero("X"));
    }
    let table = rho_table(f, x)?;
    let mut terms = Vec::new();
    for p in primes_up_to(x) {
        terms.push(h.at_prime_power(p, 1)? * Rational::new(table[&(p, 1)].into(), p.into()));
    }
    let exponent_sum = rational_sum(terms);
    let product_part = Rational::from_integer(x.into()) * local_product(&table, x);
    let value = Decimal::exp(&exponent_sum, digits).mul_rational(&product_part);
    Ok(NairExpRhs { product_part, exponent_sum, value: value.to_string(), digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn rhs_examples() {
        let one = MultiplicativeFunction::one();
        assert_eq!(nair_rhs(4, &one, &p(&[0, 1])).unwrap(), rat(25, 9));
        assert_eq!(nair_rhs(3, &one, &p(&[1, 0, 1])).unwrap(), rat(9, 4));
        assert_eq!(nair_rhs(1, &MultiplicativeFunction::tau(), &p(&[2, 0, 0, 1])).unwrap(), rat_int(1));
    }

    #[test]
    fn rhs_rejects_fpd() {
        let e = nair_rhs(10, &MultiplicativeFunction::tau(), &p(&[0, 1, 1])).unwrap_err();
        assert!(matches!(e, Error::HasFixedPrimeDivisor { .. }));
        assert!(nair_rhs(10, &MultiplicativeFunction::tau(), &p(&[1, 2, 1])).is_err());
    }

    #[test]
    fn exp_examples() {
        let r = nair_exp_rhs(2, &MultiplicativeFunction::one(), &p(&[0, 1]), 30).unwrap();
        assert_eq!(r.exponent_sum, rat(1, 2));
        assert_eq!(r.product_part, rat_int(1));
        assert!(r.value.starts_with("1.6487212707001281468"), "{}", r.value);
        let r = nair_exp_rhs(1, &MultiplicativeFunction::one(), &p(&[0, 1]), 30).unwrap();
        assert_eq!((r.exponent_sum, r.product_part), (rat_int(0), rat_int(1)));
        let r = nair_exp_rhs(5, &MultiplicativeFunction::tau(), &p(&[1, 0, 1]), 30).unwrap();
        assert_eq!(r.exponent_sum, rat(9, 5));
    }
}
