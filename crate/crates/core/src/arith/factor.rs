use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::Sieve;
use crate::error::{Error, Result};

/// `n = prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Builds from a factor list, checking every invariant.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Precondition("primes must be strictly increasing".into()));
            }
        }
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::Precondition("exponents must be positive".into()));
            }
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            let pe = p
                .checked_pow(e)
                .ok_or_else(|| Error::Overflow(format!("{p}^{e}")))?;
            value = value
                .checked_mul(pe)
                .ok_or_else(|| Error::Overflow("factored value exceeds u64".into()))?;
        }
        Ok(FactoredInteger { value, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Prime powers `p^e` of the factorisation.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }
}

/// Factorises `n >= 1`.
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::Zero("factorize"));
    }
    let mut factors = Vec::new();
    factor_u64_into(n, &mut factors);
    factors.sort_unstable();
    let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
    for p in factors {
        match merged.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => merged.push((p, 1)),
        }
    }
    Ok(FactoredInteger { value: n, factors: merged })
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Pushes prime factors (with multiplicity, unordered) of `n`.
fn factor_u64_into(mut n: u64, out: &mut Vec<u64>) {
    let tz = n.trailing_zeros();
    for _ in 0..tz {
        out.push(2);
    }
    n >>= tz;
    for &p in &SMALL_PRIMES[1..] {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    if n == 1 {
        return;
    }
    // no factor below 101 remains
    if n < 101 * 101 {
        out.push(n);
        return;
    }
    split_odd(n, out);
}

fn split_odd(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_odd(d, out);
    split_odd(n / d, out);
}

/// Montgomery arithmetic modulo an odd `n`.
#[derive(Clone, Copy)]
struct Mont {
    n: u64,
    n_inv: u64,
    r2: u64,
}

impl Mont {
    fn new(n: u64) -> Self {
        debug_assert!(n % 2 == 1);
        // Newton iteration for n^{-1} mod 2^64
        let mut inv = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Mont { n, n_inv: inv, r2 }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let lo = t as u64;
        let hi = (t >> 64) as u64;
        let m = lo.wrapping_mul(self.n_inv);
        let mn_hi = ((m as u128 * self.n as u128) >> 64) as u64;
        let (res, borrow) = hi.overflowing_sub(mn_hi);
        if borrow {
            res.wrapping_add(self.n)
        } else {
            res
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    fn one(&self) -> u64 {
        self.to_mont(1)
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// Deterministic primality test for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if let Some(b) = Sieve::global().is_prime(n) {
        return b;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let bases: &[u64] = if n < 3_474_749_660_383 {
        &[2, 3, 5, 7, 11, 13]
    } else if n < 341_550_071_728_321 {
        &[2, 3, 5, 7, 11, 13, 17]
    } else {
        &[2, 325, 9375, 28178, 450775, 9780504, 1795265022]
    };
    let mont = Mont::new(n);
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let one = mont.one();
    let minus_one = mont.to_mont(n - 1);
    'bases: for &a in bases {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = mont.pow(mont.to_mont(a), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    let mont = Mont::new(n);
    let mut c = 1u64;
    loop {
        let cm = mont.to_mont(c);
        let f = |x: u64| {
            let (y, carry) = mont.mul(x, x).overflowing_add(cm);
            if carry || y >= n {
                y.wrapping_sub(n)
            } else {
                y
            }
        };
        let mut y = mont.to_mont(2);
        let mut r = 1u64;
        let mut q = mont.one();
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = q.gcd(&n);
                k += BLOCK;
            }
            r <<= 1;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Factorisation of an arbitrary positive integer, ascending primes.
///
/// Values that fit in `u64` take the fast path; larger cofactors use
/// Miller-Rabin and Pollard rho over `BigUint`.
pub fn factorize_big(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize_big(0)");
    if let Some(small) = n.to_u64() {
        return factorize(small)
            .expect("nonzero")
            .factors()
            .iter()
            .map(|&(p, e)| (BigUint::from(p), e))
            .collect();
    }
    let mut n = n.clone();
    let mut found: Vec<BigUint> = Vec::new();
    for &p in Sieve::global().primes_up_to(10_000) {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            found.push(bp.clone());
            n /= &bp;
        }
        if &bp * &bp > n {
            break;
        }
    }
    split_big(n, &mut found);
    found.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for p in found {
        match merged.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => merged.push((p, 1)),
        }
    }
    merged
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        let mut v = Vec::new();
        factor_u64_into(small, &mut v);
        out.extend(v.into_iter().map(BigUint::from));
        return;
    }
    if is_probable_prime_big(&n) {
        out.push(n);
        return;
    }
    // rho is hopeless on p^k with p large; peel perfect powers first
    for k in (2..=n.bits() as u32).rev() {
        let root = n.nth_root(k);
        if num_traits::pow(root.clone(), k as usize) == n {
            for _ in 0..k {
                split_big(root.clone(), out);
            }
            return;
        }
    }
    let d = pollard_rho_big(&n);
    let other = &n / &d;
    split_big(d, out);
    split_big(other, out);
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    // first 20 primes; a composite passing all of them is astronomically unlikely
    'bases: for &a in &SMALL_PRIMES[..20] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if !g.is_one() {
                return g;
            }
        }
        c += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(trial_division(9973), vec![(9973, 1)]);
        assert_eq!(factorize(9973).unwrap().factors(), &[(9973, 1)]);
        assert_eq!(factorize(0), Err(Error::Zero("factorize")));
    }

    #[test]
    fn round_trip_up_to_a_million() {
        for n in 1..=1_000_000u64 {
            let f = factorize(n).unwrap();
            let back: u64 = f.prime_powers().product();
            assert_eq!(back, n);
            assert!(f.primes().all(is_prime));
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn matches_trial_division_on_large_values() {
        let mut n: u64 = 10_000_000_019;
        for _ in 0..2000 {
            assert_eq!(factorize(n).unwrap().factors(), trial_division(n).as_slice(), "n = {n}");
            n = n.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) % 100_000_000_000;
            n = n.max(1);
        }
    }

    #[test]
    fn hard_semiprimes_and_primes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        assert!(is_prime(p) && is_prime(q));
        assert_eq!(factorize(p * q).unwrap().factors(), &[(q, 1), (p, 1)]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        let big = factorize(u64::MAX).unwrap();
        assert_eq!(big.prime_powers().product::<u64>(), u64::MAX);
    }

    #[test]
    fn big_factorisation() {
        let p = BigUint::from(18_446_744_073_709_551_557u64);
        let n = &p * &p * BigUint::from(12u32);
        let f = factorize_big(&n);
        assert_eq!(f, vec![(BigUint::from(2u32), 2), (BigUint::from(3u32), 1), (p, 2)]);
    }

    #[test]
    fn from_factors_validates() {
        assert_eq!(FactoredInteger::from_factors(vec![(2, 2), (3, 1)]).unwrap().value(), 12);
        assert!(FactoredInteger::from_factors(vec![(4, 1)]).is_err());
        assert!(FactoredInteger::from_factors(vec![(3, 1), (2, 1)]).is_err());
    }
}
