//! Exact integer and rational arithmetic.

pub mod decimal;
pub mod expr;
pub mod factor;
pub mod multiplicative;
pub mod primes;

pub use decimal::{rational_sig, Decimal};
pub use factor::{factorize, factorize_big, is_prime, FactoredInteger};
pub use multiplicative::{
    check_class_membership, ClassParams, FunctionSpec, MembershipReport, MultiplicativeFunction,
    PrimePowerRule,
};
pub use primes::{primes_up_to, Sieve};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Sum of many rationals by pairwise reduction, which keeps operand sizes
/// balanced when denominators grow.
pub fn rational_sum(mut terms: Vec<Rational>) -> Rational {
    if terms.is_empty() {
        return Rational::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Zero("euler_phi"));
    }
    Ok(factorize(m)?.phi())
}

/// `psi(n) = prod_{p | n} (1 + 1/p)`.
pub fn psi(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Zero("psi"));
    }
    Ok(psi_of_primes(factorize(n)?.primes().map(BigUint::from)))
}

/// `psi(|n|)` for an arbitrary nonzero integer.
pub fn psi_big(n: &BigInt) -> Result<Rational> {
    if n.is_zero() {
        return Err(Error::Zero("psi"));
    }
    let factors = factorize_big(&n.abs().to_biguint().unwrap());
    Ok(psi_of_primes(factors.into_iter().map(|(p, _)| p)))
}

fn psi_of_primes(primes: impl Iterator<Item = BigUint>) -> Rational {
    primes.fold(Rational::one(), |acc, p| {
        let p = BigInt::from(p);
        acc * Rational::new(&p + 1u32, p)
    })
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::Zero("omega"));
    }
    Ok(factorize(n)?.factors().len())
}

pub fn pow_rational(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_by_count(m: u64) -> u64 {
        (1..=m).filter(|&k| num_integer::gcd(k, m) == 1).count() as u64
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(5).unwrap(), 4);
        assert_eq!(euler_phi(12).unwrap(), phi_by_count(12));
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(euler_phi(0), Err(Error::Zero("euler_phi")));
    }

    #[test]
    fn phi_matches_count() {
        for m in 1..500 {
            assert_eq!(euler_phi(m).unwrap(), phi_by_count(m), "m = {m}");
        }
    }

    #[test]
    fn phi_multiplicative_on_coprime_pairs() {
        for m in 1..=200u64 {
            for n in (1..=1000u64).step_by(7) {
                if num_integer::gcd(m, n) == 1 {
                    assert_eq!(
                        euler_phi(m * n).unwrap(),
                        euler_phi(m).unwrap() * euler_phi(n).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(1).unwrap(), rat(1, 1));
        assert_eq!(psi(12).unwrap(), rat(2, 1));
        // (3/2)(4/3)(6/5)
        assert_eq!(psi(30).unwrap(), rat(12, 5));
        assert!(psi(0).is_err());
        assert_eq!(psi_big(&BigInt::from(-108)).unwrap(), rat(2, 1));
    }

    #[test]
    fn psi_at_most_two_pow_omega() {
        for n in 1..=100_000u64 {
            let bound = rat_int(1u64 << omega(n).unwrap());
            assert!(psi(n).unwrap() <= bound, "n = {n}");
        }
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-7", "12/5", "3/9"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
        }
        assert_eq!(fmt_rational(&parse_rational("3/9").unwrap()), "1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn pairwise_sum_matches_sequential() {
        let terms: Vec<Rational> = (1..200).map(|m| rat(1, m)).collect();
        let seq = terms.iter().fold(Rational::zero(), |a, b| a + b);
        assert_eq!(rational_sum(terms), seq);
    }
}
