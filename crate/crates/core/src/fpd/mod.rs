//! Fixed prime divisors and their removal by affine changes of variable.
//!
//! A primitive `f` of degree `d` has `p` as a fixed prime divisor (fpd)
//! when `p | f(n)` for every integer `n`; necessarily `p <= d`. Writing
//! `f = (x^p - x) q + p r` with `deg q = e`, the substitution
//! `x -> p x + k` followed by division by the exact power of `p` lowers
//! `e` by at least `p - 1` whenever the fpd survives, so repeating it
//! along every digit path terminates with polynomials free of `p`.

mod certificate;

pub use certificate::{
    remove_all_fpd, verify_certificate, CheckResult, Leaf, LeafStep, MultiPrimeCertificate,
    VerificationReport,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::poly::{disc_uni, UniPoly};

/// True when `f(n) = 0 mod p` for every residue `n`.
pub fn has_fpd(f: &UniPoly, p: u64) -> bool {
    (0..p).all(|n| f.eval_mod(n, p) == 0)
}

/// All fixed prime divisors of a primitive polynomial of positive degree.
pub fn fixed_prime_divisors(f: &UniPoly) -> Result<Vec<u64>> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive(f.content().to_string()));
    }
    Ok(primes_up_to(d as u64).into_iter().filter(|&p| has_fpd(f, p)).collect())
}

/// `f = (x^p - x) q + p r` with the digits of `q` in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqrDecomposition {
    pub p: u64,
    pub q: UniPoly,
    pub r: UniPoly,
    pub e: usize,
}

pub fn pqr_decompose(f: &UniPoly, p: u64) -> Result<PqrDecomposition> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !f.is_primitive() {
        return Err(Error::NotPrimitive(f.content().to_string()));
    }
    let not_fpd = || Error::NotFixedPrimeDivisor { p, poly: f.to_string() };
    let mut rem = f.reduce_mod(p);
    let pu = p as usize;
    if rem.len() <= pu {
        // nonzero of degree < p cannot vanish on all residues
        return Err(not_fpd());
    }
    let deg = rem.len() - 1;
    let mut q = vec![0u64; deg - pu + 1];
    for i in (pu..=deg).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        q[i - pu] = c;
        rem[i] = 0;
        rem[i - pu + 1] = (rem[i - pu + 1] + c) % p;
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(not_fpd());
    }
    let q = UniPoly::new(q.into_iter().map(BigInt::from).collect());
    let e = q.degree().expect("quotient of a nonzero polynomial");
    let xp_minus_x = &UniPoly::monomial(BigInt::one(), pu) - &UniPoly::x();
    let diff = f - &(&xp_minus_x * &q);
    let bp = BigInt::from(p);
    if diff.coeffs().iter().any(|c| !(c % &bp).is_zero()) {
        return Err(Error::Invariant("f - (x^p - x) q is not divisible by p".into()));
    }
    let r = diff.div_exact_scalar(&bp);
    Ok(PqrDecomposition { p, q, r, e })
}

/// `(nu, f_k)` with `f_k(x) = f(p x + k) / p^(nu + 1)` primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedStep {
    pub nu: u32,
    pub fk: UniPoly,
}

pub fn reduce_once(f: &UniPoly, p: u64, k: u64) -> Result<ReducedStep> {
    if k >= p {
        return Err(Error::Precondition(format!("digit {k} is not below {p}")));
    }
    let pqr = pqr_decompose(f, p)?;
    reduce_once_with_e(f, p, k, pqr.e)
}

fn reduce_once_with_e(f: &UniPoly, p: u64, k: u64, e: usize) -> Result<ReducedStep> {
    let bp = BigInt::from(p);
    let g = f.compose_affine(&bp, &BigInt::from(k));
    let v = g.content_valuation(p).ok_or(Error::ZeroPolynomial)?;
    if v == 0 {
        return Err(Error::Invariant(format!("f({p}x + {k}) is not divisible by {p}")));
    }
    let nu = v - 1;
    if nu as usize > e {
        return Err(Error::Invariant(format!("nu = {nu} exceeds e = {e}")));
    }
    let fk = g.div_exact_scalar(&num_traits::pow(bp, v as usize));
    if !fk.is_primitive() {
        return Err(Error::Invariant(format!("{fk} is not primitive")));
    }
    Ok(ReducedStep { nu, fk })
}

/// One root-to-leaf path of the digit tree for a single prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionBranch {
    /// `(k_0, ..., k_delta)`, each in `[0, p)`.
    pub digits: Vec<u64>,
    /// `mu_i = nu_i + 1` at each stage.
    pub mus: Vec<u32>,
    /// The `e` of the polynomial entering each stage.
    pub stage_e: Vec<usize>,
    /// `f(p^(delta+1) x + sum p^i k_i) / p^(sum mu)`.
    pub result: UniPoly,
}

impl ReductionBranch {
    pub fn delta(&self) -> usize {
        self.digits.len() - 1
    }

    pub fn mu_sum(&self) -> u32 {
        self.mus.iter().sum()
    }

    /// `sum_i p^i k_i`.
    pub fn offset(&self, p: u64) -> BigInt {
        let bp = BigInt::from(p);
        self.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &k| acc * &bp + BigInt::from(k))
    }
}

/// Digit tree removing one fixed prime divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub f: UniPoly,
    pub p: u64,
    pub e: usize,
    /// Ordered lexicographically by digit string.
    pub branches: Vec<ReductionBranch>,
}

impl ReductionCertificate {
    /// The same data as a one-prime [`MultiPrimeCertificate`].
    pub fn to_multi_prime(&self) -> MultiPrimeCertificate {
        let bp = BigInt::from(self.p);
        let leaves = self
            .branches
            .iter()
            .map(|b| Leaf {
                alpha: num_traits::pow(bp.clone(), b.digits.len()),
                beta: b.offset(self.p),
                gamma: num_traits::pow(bp.clone(), b.mu_sum() as usize),
                g: b.result.clone(),
                steps: vec![LeafStep {
                    p: self.p,
                    digits: b.digits.clone(),
                    mus: b.mus.clone(),
                    stage_e: b.stage_e.clone(),
                }],
            })
            .collect();
        MultiPrimeCertificate { f: self.f.clone(), primes: vec![self.p], leaves }
    }
}

fn require_squarefree(f: &UniPoly) -> Result<()> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if disc_uni(f, d)?.is_zero() {
        return Err(Error::VanishingDiscriminant(format!("{f} has a repeated root")));
    }
    Ok(())
}

/// Removes the fixed prime divisor `p` from `f` along every digit path.
pub fn reduce_full(f: &UniPoly, p: u64) -> Result<ReductionCertificate> {
    require_squarefree(f)?;
    let pqr = pqr_decompose(f, p)?;
    let d = f.degree().unwrap();
    let branches = explore(f, p, pqr.e, 0, d * d)?;
    Ok(ReductionCertificate { f: f.clone(), p, e: pqr.e, branches })
}

fn explore(f: &UniPoly, p: u64, e: usize, depth: usize, cap: usize) -> Result<Vec<ReductionBranch>> {
    if depth >= cap {
        return Err(Error::DepthExceeded { p, cap });
    }
    let per_digit: Vec<Result<Vec<ReductionBranch>>> = (0..p)
        .into_par_iter()
        .map(|k| {
            let step = reduce_once_with_e(f, p, k, e)?;
            let mu = step.nu + 1;
            if has_fpd(&step.fk, p) {
                let e_next = pqr_decompose(&step.fk, p)?.e;
                if e_next + p as usize > e + 1 {
                    return Err(Error::Invariant(format!(
                        "e dropped from {e} only to {e_next} at p = {p}"
                    )));
                }
                let sub = explore(&step.fk, p, e_next, depth + 1, cap)?;
                Ok(sub
                    .into_iter()
                    .map(|mut b| {
                        b.digits.insert(0, k);
                        b.mus.insert(0, mu);
                        b.stage_e.insert(0, e);
                        b
                    })
                    .collect())
            } else {
                Ok(vec![ReductionBranch { digits: vec![k], mus: vec![mu], stage_e: vec![e], result: step.fk }])
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in per_digit {
        out.extend(r?);
    }
    Ok(out)
}
