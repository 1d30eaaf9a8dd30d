//! Counting roots of congruences.
//!
//! `rho_f(m) = #{n mod m : f(n) = 0 mod m}` for univariate `f`, and for a
//! binary form `F` the normalised pair count
//! `rho*_F(m) = #{(n1, n2) in (0, m]^2 : gcd(n1, n2, m) = 1, F(n1, n2) = 0 mod m} / phi(m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, factorize, is_prime, FactoredInteger, Rational};
use crate::error::{Error, Result};
use crate::poly::{mod_u64, BinaryForm, UniPoly};

/// Moduli up to this size are recounted by enumeration inside [`rho`].
pub const BRUTE_CROSSCHECK_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Brute,
    Lifted,
    CrtCombined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCountResult {
    pub modulus: u64,
    pub count: u64,
    pub method: CountMethod,
}

/// `rho_f(m)` by enumerating all residues.
pub fn rho_brute(f: &UniPoly, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Zero("modulus"));
    }
    let reduced: Vec<u128> = f.coeffs().iter().map(|c| mod_u64(c, m) as u128).collect();
    let mm = m as u128;
    Ok((0..m)
        .filter(|&x| {
            let x = x as u128;
            reduced.iter().rev().fold(0u128, |acc, &c| (acc * x + c) % mm) == 0
        })
        .count() as u64)
}

/// Roots of `f` modulo `p` by enumeration; every residue when `p` divides
/// all coefficients.
pub fn roots_mod_p(f: &UniPoly, p: u64) -> Vec<u64> {
    let reduced = f.reduce_mod(p);
    let pm = p as u128;
    (0..p)
        .filter(|&x| {
            let x = x as u128;
            reduced.iter().rev().fold(0u128, |acc, &c| (acc * x + c as u128) % pm) == 0
        })
        .collect()
}

/// `rho_f(p^l)` by recursive lifting from roots modulo `p`.
///
/// Simple roots lift uniquely. At a multiple root `a`, `f(a + p t)` is
/// divided by its exact power `p^v` of the content and the count recurses
/// at exponent `l - v`; when `v >= l` every lift works.
pub fn rho_prime_power(f: &UniPoly, p: u64, l: u32) -> Result<u64> {
    if l == 0 {
        return Ok(1);
    }
    if f.is_zero() || f.vanishes_mod(p) {
        return Err(Error::DegenerateModP { p });
    }
    Ok(lift_count(f, p, l))
}

fn lift_count(f: &UniPoly, p: u64, l: u32) -> u64 {
    let roots = roots_mod_p(f, p);
    if l == 1 {
        return roots.len() as u64;
    }
    let df = f.derivative();
    let bp = BigInt::from(p);
    let mut total = 0u64;
    for a in roots {
        if df.eval_mod(a, p) != 0 {
            total += 1;
            continue;
        }
        let g = f.compose_affine(&bp, &BigInt::from(a));
        let v = g.content_valuation(p).expect("f(a + pt) is nonzero");
        debug_assert!(v >= 1);
        if v >= l {
            total += p.pow(l - 1);
        } else {
            let g1 = g.div_exact_scalar(&num_traits::pow(bp.clone(), v as usize));
            total += p.pow(v - 1) * lift_count(&g1, p, l - v);
        }
    }
    total
}

/// `rho_f(m)` as the product of lifted prime-power counts.
///
/// For `m <= BRUTE_CROSSCHECK_LIMIT` the result is also recounted by
/// enumeration and a mismatch is reported as an invariant violation.
pub fn rho(f: &UniPoly, m: &FactoredInteger) -> Result<RootCountResult> {
    let mut count = 1u64;
    for &(p, e) in m.factors() {
        count *= rho_prime_power(f, p, e)?;
    }
    let method = if m.factors().len() == 1 { CountMethod::Lifted } else { CountMethod::CrtCombined };
    if m.value() <= BRUTE_CROSSCHECK_LIMIT {
        let brute = rho_brute(f, m.value())?;
        if brute != count {
            return Err(Error::Invariant(format!(
                "rho({f}, {}) lifted {count} but enumeration gives {brute}",
                m.value()
            )));
        }
    }
    Ok(RootCountResult { modulus: m.value(), count, method })
}

/// Convenience wrapper over [`rho`] taking a plain modulus.
pub fn rho_of(f: &UniPoly, m: u64) -> Result<RootCountResult> {
    rho(f, &factorize(m)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoStarResult {
    pub modulus: u64,
    pub pair_count: u64,
    #[serde(with = "crate::report::rational_str")]
    pub value: Rational,
}

/// `rho*_F(m)` by enumerating pairs; rows are counted in parallel.
pub fn rho_star_brute(f: &BinaryForm, m: u64) -> Result<RhoStarResult> {
    if m == 0 {
        return Err(Error::Zero("modulus"));
    }
    let coeffs: Vec<u128> = f.coeffs().iter().map(|c| crate::poly::mod_u64(c, m) as u128).collect();
    let mm = m as u128;
    let pair_count: u64 = (1..=m)
        .into_par_iter()
        .map(|n1| {
            let mut count = 0u64;
            for n2 in 1..=m {
                if n1.gcd(&n2).gcd(&m) != 1 {
                    continue;
                }
                let (x1, x2) = (n1 as u128 % mm, n2 as u128 % mm);
                let mut acc = 0u128;
                let mut x2_pow = 1u128;
                // sum_j a_j x1^(d-j) x2^j by Horner in x1
                let mut terms = Vec::with_capacity(coeffs.len());
                for &c in &coeffs {
                    terms.push(c * x2_pow % mm);
                    x2_pow = x2_pow * x2 % mm;
                }
                for t in terms {
                    acc = (acc * x1 + t) % mm;
                }
                if acc == 0 {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let phi = euler_phi(m)?;
    Ok(RhoStarResult {
        modulus: m,
        pair_count,
        value: Rational::new(pair_count.into(), phi.into()),
    })
}

/// `rho*_G(p) = rho_{G(x,1)}(p) + [p | G(1,0)]`; requires `G(1,0) != 0`.
pub fn rho_star_prime(g: &BinaryForm, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let a0 = g.coeff(0);
    if a0.is_zero() {
        return Err(Error::Precondition(
            "G(1,0) = 0; swap the variables before using the prime formula".into(),
        ));
    }
    let roots = roots_mod_p(&g.dehomogenize(), p).len() as u64;
    let at_infinity = u64::from((a0 % BigInt::from(p)).is_zero());
    Ok(roots + at_infinity)
}

/// Outcome of checking `rho_f(p^l) <= min(d p^(l-1), 2 d^3 p^((1-1/d) l))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DanBoundReport {
    pub p: u64,
    pub l: u32,
    pub degree: usize,
    pub rho: u64,
    /// `d p^(l-1)`.
    pub linear_bound: String,
    pub linear_ok: bool,
    /// Checked as `rho^d <= (2 d^3)^d p^((d-1) l)`.
    pub power_ok: bool,
    pub passed: bool,
}

/// Checks the prime-power root bound exactly in integers.
pub fn check_dan_bound(f: &UniPoly, p: u64, l: u32) -> Result<DanBoundReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if l == 0 {
        return Err(Error::Zero("exponent"));
    }
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    if f.vanishes_mod(p) {
        return Err(Error::DegenerateModP { p });
    }
    let rho = rho_prime_power(f, p, l)?;
    let bp = BigInt::from(p);
    let linear = BigInt::from(d) * num_traits::pow(bp.clone(), (l - 1) as usize);
    let linear_ok = BigInt::from(rho) <= linear;
    let lhs = num_traits::pow(BigInt::from(rho), d);
    let rhs = num_traits::pow(BigInt::from(2 * d * d * d), d)
        * num_traits::pow(bp, (d - 1) * l as usize);
    let power_ok = lhs <= rhs;
    Ok(DanBoundReport {
        p,
        l,
        degree: d,
        rho,
        linear_bound: linear.to_string(),
        linear_ok,
        power_ok,
        passed: linear_ok && power_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64s(c).unwrap()
    }

    #[test]
    fn brute_examples() {
        assert_eq!(rho_brute(&p(&[0, 1]), 5).unwrap(), 1);
        assert_eq!(rho_brute(&p(&[1, 0, 1]), 5).unwrap(), 2);
        assert_eq!(rho_brute(&p(&[1, 0, 1]), 4).unwrap(), 0);
        assert!(rho_brute(&p(&[1]), 0).is_err());
    }

    #[test]
    fn lifted_examples() {
        let f = p(&[1, 0, 1]);
        let r = rho_of(&f, 65).unwrap();
        assert_eq!((r.count, r.method), (4, CountMethod::CrtCombined));
        assert_eq!(rho_of(&f, 25).unwrap().count, 2);
        assert_eq!(rho_of(&p(&[3, 7, 1]), 1).unwrap().count, 1);
        assert_eq!(rho_prime_power(&p(&[0, 0, 1]), 3, 2).unwrap(), 3);
        assert_eq!(rho_prime_power(&p(&[3, 6]), 3, 2), Err(Error::DegenerateModP { p: 3 }));
    }

    #[test]
    fn lifting_handles_deep_multiple_roots() {
        for f in [p(&[0, 0, 1]), p(&[0, 0, 0, 1]), p(&[4, 4, 1]), p(&[0, 0, 2, 3]), p(&[-8, 0, 0, 1])] {
            for (q, max_l) in [(2u64, 10u32), (3, 6), (5, 4)] {
                for l in 1..=max_l {
                    let m = q.pow(l);
                    assert_eq!(
                        rho_prime_power(&f, q, l).unwrap(),
                        rho_brute(&f, m).unwrap(),
                        "f = {f}, m = {q}^{l}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_star_examples() {
        let r = rho_star_brute(&form(&[0, 1, 0]), 5).unwrap();
        assert_eq!((r.pair_count, r.value), (8, rat(2, 1)));
        assert_eq!(rho_star_brute(&form(&[1, 0, 1]), 5).unwrap().value, rat(2, 1));
        // F = x1: n1 = 7, n2 in 1..=6
        let r = rho_star_brute(&form(&[1, 0]), 7).unwrap();
        assert_eq!((r.pair_count, r.value), (6, rat(1, 1)));
    }

    #[test]
    fn rho_star_prime_examples() {
        assert_eq!(rho_star_prime(&form(&[1, 0, 1]), 5).unwrap(), 2);
        assert_eq!(rho_star_prime(&form(&[5, 1, 1]), 5).unwrap(), 2);
        assert_eq!(rho_star_brute(&form(&[5, 1, 1]), 5).unwrap().value, rat(2, 1));
        assert_eq!(rho_star_prime(&form(&[1, 0, 1]), 3).unwrap(), 0);
        assert!(rho_star_prime(&form(&[0, 1, 1]), 3).is_err());
        assert!(rho_star_prime(&form(&[1, 0, 1]), 4).is_err());
    }

    #[test]
    fn dan_bound_examples() {
        let r = check_dan_bound(&p(&[0, 0, 1]), 3, 2).unwrap();
        assert_eq!((r.rho, r.linear_bound.as_str(), r.passed), (3, "6", true));
        let r = check_dan_bound(&p(&[1, 0, 1]), 5, 3).unwrap();
        assert_eq!((r.rho, r.passed), (2, true));
        let r = check_dan_bound(&p(&[-6, 11, -6, 1]), 7, 1).unwrap();
        assert!(r.rho <= 3 && r.passed);
        assert!(check_dan_bound(&p(&[3, 6]), 3, 1).is_err());
    }
}
