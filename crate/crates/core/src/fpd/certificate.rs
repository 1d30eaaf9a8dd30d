//! Multi-prime certificates and a verifier that only needs polynomial
//! arithmetic, so it can check a stored certificate without trusting the
//! code that produced it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fixed_prime_divisors, has_fpd, reduce_full, require_squarefree};
use crate::arith::{is_prime, primes_up_to, Rational};
use crate::error::{Error, Result};
use crate::poly::{disc_uni, UniPoly};
use crate::report::bigint_str;

/// The digit path taken for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafStep {
    pub p: u64,
    pub digits: Vec<u64>,
    pub mus: Vec<u32>,
    pub stage_e: Vec<usize>,
}

/// `gamma * g(x) = f(alpha x + beta)` on the progression `alpha Z + beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    #[serde(with = "bigint_str")]
    pub alpha: BigInt,
    #[serde(with = "bigint_str")]
    pub beta: BigInt,
    #[serde(with = "bigint_str")]
    pub gamma: BigInt,
    pub g: UniPoly,
    pub steps: Vec<LeafStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiPrimeCertificate {
    pub f: UniPoly,
    pub primes: Vec<u64>,
    pub leaves: Vec<Leaf>,
}

impl MultiPrimeCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }
}

/// Removes every fixed prime divisor of `f`, primes in increasing order.
pub fn remove_all_fpd(f: &UniPoly) -> Result<MultiPrimeCertificate> {
    let primes = fixed_prime_divisors(f)?;
    require_squarefree(f)?;
    let mut leaves = vec![Leaf {
        alpha: BigInt::one(),
        beta: BigInt::zero(),
        gamma: BigInt::one(),
        g: f.clone(),
        steps: Vec::new(),
    }];
    for &p in &primes {
        let next: Vec<Result<Vec<Leaf>>> = leaves
            .par_iter()
            .map(|leaf| {
                if !has_fpd(&leaf.g, p) {
                    return Ok(vec![leaf.clone()]);
                }
                let cert = reduce_full(&leaf.g, p)?;
                let bp = BigInt::from(p);
                Ok(cert
                    .branches
                    .into_iter()
                    .map(|b| {
                        let mut steps = leaf.steps.clone();
                        let beta = &leaf.alpha * b.offset(p) + &leaf.beta;
                        let alpha = &leaf.alpha * num_traits::pow(bp.clone(), b.digits.len());
                        let gamma = &leaf.gamma * num_traits::pow(bp.clone(), b.mu_sum() as usize);
                        steps.push(LeafStep { p, digits: b.digits, mus: b.mus, stage_e: b.stage_e });
                        Leaf { alpha, beta, gamma, g: b.result, steps }
                    })
                    .collect())
            })
            .collect();
        let mut merged = Vec::new();
        for r in next {
            merged.extend(r?);
        }
        leaves = merged;
    }
    Ok(MultiPrimeCertificate { f: f.clone(), primes, leaves })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub leaves: usize,
    pub checks: Vec<CheckResult>,
    /// Every `g` is free of fixed prime divisors at all primes.
    pub fully_fpd_free: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

const CHECK_NAMES: [(&str, &str); 5] = [
    ("i", "identity"),
    ("ii", "partition"),
    ("iii", "fpd-free"),
    ("iv", "budgets"),
    ("v", "discriminant"),
];

/// Runs the five checks on a certificate. Never fails; problems become
/// report entries.
pub fn verify_certificate(cert: &MultiPrimeCertificate) -> VerificationReport {
    let mut fails: [Vec<String>; 5] = Default::default();
    let f = &cert.f;
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            fails[0].push("f must have positive degree".into());
            return finish(cert, fails, false);
        }
    };
    if cert.leaves.is_empty() {
        fails[1].push("no leaves".into());
    }
    if cert.primes.windows(2).any(|w| w[0] >= w[1]) {
        fails[3].push("primes are not strictly increasing".into());
    }
    for &p in &cert.primes {
        if !is_prime(p) {
            fails[3].push(format!("{p} is not prime"));
        }
    }
    let p_max = cert.primes.iter().copied().max().unwrap_or(1);
    let small_primes = primes_up_to(p_max);
    let all_primes = primes_up_to(d as u64);
    let disc_f = disc_uni(f, d).ok();
    let mut fully_free = true;

    for (idx, leaf) in cert.leaves.iter().enumerate() {
        let tag = format!("leaf {idx}");
        if !leaf.alpha.is_positive() || leaf.beta.is_negative() || leaf.beta >= leaf.alpha || !leaf.gamma.is_positive() {
            fails[1].push(format!("{tag}: need alpha > 0, 0 <= beta < alpha, gamma > 0"));
            continue;
        }

        // (i)
        let lhs = f.compose_affine(&leaf.alpha, &leaf.beta);
        if lhs != leaf.g.scale(&leaf.gamma) {
            fails[0].push(format!("{tag}: f(alpha x + beta) != gamma g(x)"));
        }
        let (mut a, mut b, mut c) = (BigInt::one(), BigInt::zero(), BigInt::one());
        for step in &leaf.steps {
            let bp = BigInt::from(step.p);
            for &k in &step.digits {
                b += &a * k;
                a *= &bp;
            }
            for &mu in &step.mus {
                c *= num_traits::pow(bp.clone(), mu as usize);
            }
        }
        if (a, b, c) != (leaf.alpha.clone(), leaf.beta.clone(), leaf.gamma.clone()) {
            fails[0].push(format!("{tag}: alpha, beta, gamma disagree with the digit paths"));
        }
        walk_steps(f, d, leaf, &tag, &mut fails);

        // (iii)
        if leaf.g.degree() != Some(d) {
            fails[2].push(format!("{tag}: degree of g differs from {d}"));
        }
        if !leaf.g.is_primitive() {
            fails[2].push(format!("{tag}: g is not primitive"));
        }
        for &q in &small_primes {
            if has_fpd(&leaf.g, q) {
                fails[2].push(format!("{tag}: g still has fixed prime divisor {q}"));
            }
        }
        if all_primes.iter().any(|&q| has_fpd(&leaf.g, q)) {
            fully_free = false;
        }

        // (v)
        match (&disc_f, disc_uni(&leaf.g, d)) {
            (Some(df), Ok(dg)) => {
                let lhs = num_traits::pow(leaf.gamma.clone(), 2 * (d - 1)) * dg;
                let rhs = num_traits::pow(leaf.alpha.clone(), d * (d - 1)) * df;
                if lhs != rhs {
                    fails[4].push(format!("{tag}: gamma^(2(d-1)) disc(g) != alpha^(d(d-1)) disc(f)"));
                }
            }
            _ => fails[4].push(format!("{tag}: discriminant could not be computed")),
        }
    }

    // (ii)
    let total: Rational = cert
        .leaves
        .iter()
        .filter(|l| l.alpha.is_positive())
        .map(|l| Rational::new(BigInt::one(), l.alpha.clone()))
        .sum();
    if total != Rational::one() {
        fails[1].push(format!("sum of 1/alpha is {total}, not 1"));
    }
    for (i, li) in cert.leaves.iter().enumerate() {
        for (j, lj) in cert.leaves.iter().enumerate().skip(i + 1) {
            let g = li.alpha.gcd(&lj.alpha);
            if !g.is_zero() && ((&li.beta - &lj.beta) % &g).is_zero() {
                fails[1].push(format!("leaves {i} and {j} overlap"));
            }
        }
    }

    finish(cert, fails, fully_free)
}

fn finish(cert: &MultiPrimeCertificate, fails: [Vec<String>; 5], fully_free: bool) -> VerificationReport {
    let checks = CHECK_NAMES
        .iter()
        .zip(fails)
        .map(|(&(id, name), failures)| CheckResult {
            id: id.into(),
            name: name.into(),
            passed: failures.is_empty(),
            failures,
        })
        .collect();
    VerificationReport { leaves: cert.leaves.len(), checks, fully_fpd_free: fully_free }
}

/// Replays every substitution, recomputing the intermediate polynomials
/// and their `e` from scratch.
fn walk_steps(f: &UniPoly, d: usize, leaf: &Leaf, tag: &str, fails: &mut [Vec<String>; 5]) {
    let mut h = f.clone();
    for step in &leaf.steps {
        let p = step.p;
        let n = step.digits.len();
        if n == 0 || step.mus.len() != n || (!step.stage_e.is_empty() && step.stage_e.len() != n) {
            fails[3].push(format!("{tag}: malformed step for p = {p}"));
            return;
        }
        if n > d - 1 {
            fails[3].push(format!("{tag}: delta + 1 = {n} exceeds d - 1 at p = {p}"));
        }
        let mu_total: u32 = step.mus.iter().sum();
        if mu_total as usize > d * d {
            fails[3].push(format!("{tag}: mu sum {mu_total} exceeds d^2 at p = {p}"));
        }
        let bp = BigInt::from(p);
        let mut prev_e: Option<usize> = None;
        for (i, (&k, &mu)) in step.digits.iter().zip(&step.mus).enumerate() {
            if k >= p || mu == 0 {
                fails[3].push(format!("{tag}: bad digit {k} or mu {mu} at p = {p}"));
                return;
            }
            if !has_fpd(&h, p) {
                fails[3].push(format!("{tag}: stage {i} at p = {p} has no fixed prime divisor to remove"));
                return;
            }
            // x^p - x divides h mod p, so deg q = deg(h mod p) - p
            let e = match h.reduce_mod(p).len().checked_sub(p as usize + 1) {
                Some(e) => e,
                None => {
                    fails[3].push(format!("{tag}: h vanishes mod {p}"));
                    return;
                }
            };
            if let Some(&recorded) = step.stage_e.get(i) {
                if recorded != e {
                    fails[3].push(format!("{tag}: recorded e = {recorded}, recomputed {e}"));
                }
            }
            if let Some(pe) = prev_e {
                if e + p as usize > pe + 1 {
                    fails[3].push(format!("{tag}: e fell from {pe} only to {e} at p = {p}"));
                }
            }
            let tail: u32 = step.mus[i..].iter().sum();
            if tail as usize > (e + 1) * (e + 1) {
                fails[3].push(format!("{tag}: mu budget {tail} > (e+1)^2 = {} at p = {p}", (e + 1) * (e + 1)));
            }
            if n - 1 - i > e {
                fails[3].push(format!("{tag}: remaining depth {} > e = {e} at p = {p}", n - 1 - i));
            }
            let g = h.compose_affine(&bp, &BigInt::from(k));
            let pm = num_traits::pow(bp.clone(), mu as usize);
            if g.coeffs().iter().any(|c| !(c % &pm).is_zero()) {
                fails[0].push(format!("{tag}: p^mu does not divide f(p x + {k}) at p = {p}"));
                return;
            }
            h = g.div_exact_scalar(&pm);
            if !h.is_primitive() {
                fails[0].push(format!("{tag}: mu = {mu} leaves a non-primitive quotient at p = {p}"));
                return;
            }
            prev_e = Some(e);
        }
        if has_fpd(&h, p) {
            fails[3].push(format!("{tag}: path for p = {p} stops while {p} is still a fixed prime divisor"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn cubic_certificate_passes() {
        let cert = remove_all_fpd(&p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(cert.primes, vec![2, 3]);
        let report = verify_certificate(&cert);
        assert!(report.passed(), "{report:?}");
        assert!(report.fully_fpd_free);
        assert!(cert.leaves.iter().all(|l| l.g.degree() == Some(3)));
    }

    #[test]
    fn quintic_certificate_passes() {
        let cert = remove_all_fpd(&p(&[0, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(cert.primes, vec![2, 3, 5]);
        let report = verify_certificate(&cert);
        assert!(report.passed(), "{report:?}");
        assert!(report.fully_fpd_free);
    }

    #[test]
    fn trivial_certificate() {
        let f = p(&[1, 0, 1]);
        let cert = remove_all_fpd(&f).unwrap();
        assert_eq!(cert.leaves.len(), 1);
        let l = &cert.leaves[0];
        assert_eq!((l.alpha.clone(), l.beta.clone(), l.gamma.clone()), (BigInt::one(), BigInt::zero(), BigInt::one()));
        assert_eq!(l.g, f);
        assert!(verify_certificate(&cert).passed());
    }

    #[test]
    fn tampered_mu_fails_identity() {
        let mut cert = remove_all_fpd(&p(&[0, -1, 0, 1])).unwrap();
        let leaf = cert.leaves.iter_mut().find(|l| l.steps[0].mus[0] > 1).unwrap();
        leaf.steps[0].mus[0] -= 1;
        let report = verify_certificate(&cert);
        assert!(!report.check("i").unwrap().passed);
    }

    #[test]
    fn dropped_leaf_breaks_partition() {
        let mut cert = remove_all_fpd(&p(&[0, 1, 1])).unwrap();
        cert.leaves.pop();
        assert!(!verify_certificate(&cert).check("ii").unwrap().passed);
    }

    #[test]
    fn json_round_trip() {
        let cert = remove_all_fpd(&p(&[0, -1, 0, 1])).unwrap();
        let text = cert.to_json();
        let back = MultiPrimeCertificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), text);
        assert!(verify_certificate(&back).passed());
    }

    #[test]
    fn single_prime_view_verifies() {
        let cert = reduce_full(&p(&[0, -1, 0, 1]), 2).unwrap().to_multi_prime();
        assert!(verify_certificate(&cert).passed());
    }
}
