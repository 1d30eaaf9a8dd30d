//! Brute-force sums of `h(|F(n1, n2)|)` and `h(|f(n)|)`, the Euler product
//! `E`, the Nair right-hand sides and the boundedness harnesses.
//!
//! Each value is factored directly. Rows (or blocks of `n`) run in
//! parallel and their exact partial sums are added in index order, so the
//! result never depends on scheduling.

mod euler;
mod harness;
mod nair;

pub use euler::{euler_e, euler_factors, EulerFactors, EulerProductSpec};
pub use harness::{
    corollary2_harness, inequality_31, nair_harness, spread, theorem1_harness, BoundReport,
    BoundRow, InequalityCheck, LogBoundReport, LogBoundRow, NairReport, NairRow,
};
pub use nair::{nair_exp_rhs, nair_rhs, NairExpRhs};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, factorize_big, rational_sum, MultiplicativeFunction, Rational};
use crate::error::{Error, Result};
use crate::poly::{BinaryForm, UniPoly};
use crate::report::rational_str;

/// One grid point of `T` or `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumRow {
    pub x1: u64,
    pub x2: u64,
    #[serde(with = "rational_str")]
    pub sum: Rational,
    pub zeros_skipped: u64,
}

/// `h(|v|)` for nonzero `v`.
pub fn h_abs(h: &MultiplicativeFunction, v: &BigInt) -> Result<Rational> {
    if v.is_zero() {
        return Err(Error::Zero("argument of h"));
    }
    if let Some(small) = v.abs().to_u64() {
        return h.eval(small);
    }
    let n: BigUint = v.abs().to_biguint().expect("absolute value");
    let mut acc = Rational::one();
    for (p, e) in factorize_big(&n) {
        let pv = match p.to_u64() {
            Some(pv) => pv,
            None if h.is_integer_valued() => 2, // built-ins ignore the prime
            None => return Err(Error::Overflow(format!("prime factor {p} of {v} exceeds u64"))),
        };
        acc *= h.at_prime_power(pv, e)?;
    }
    Ok(acc)
}

/// Running sum for one chunk: an integer fast path for the built-in
/// functions, rationals otherwise.
#[derive(Default)]
struct Partial {
    int: BigInt,
    rats: Vec<Rational>,
    zeros: u64,
}

impl Partial {
    fn add_value(&mut self, h: &MultiplicativeFunction, small: &mut u128, v: Value) -> Result<()> {
        match v {
            Value::Small(0) => self.zeros += 1,
            Value::Small(v) => {
                let a = v.unsigned_abs();
                if let (Ok(a64), true) = (u64::try_from(a), h.is_integer_valued()) {
                    let hv = h.eval_integer(&factorize(a64)?).expect("integer-valued");
                    match small.checked_add(hv) {
                        Some(s) => *small = s,
                        None => {
                            self.int += BigInt::from(*small) + BigInt::from(hv);
                            *small = 0;
                        }
                    }
                } else {
                    self.push(h_abs(h, &BigInt::from(v))?);
                }
            }
            Value::Big(b) if b.is_zero() => self.zeros += 1,
            Value::Big(b) => self.push(h_abs(h, &b)?),
        }
        Ok(())
    }

    fn push(&mut self, r: Rational) {
        if r.is_integer() {
            self.int += r.to_integer();
        } else {
            self.rats.push(r);
        }
    }

    fn finish(mut self, small: u128) -> Self {
        self.int += BigInt::from(small);
        self
    }

    fn merge(parts: Vec<Partial>) -> (Rational, u64) {
        let mut int = BigInt::zero();
        let mut rats = Vec::new();
        let mut zeros = 0;
        for p in parts {
            int += p.int;
            rats.push(rational_sum(p.rats));
            zeros += p.zeros;
        }
        (Rational::from_integer(int) + rational_sum(rats), zeros)
    }
}

enum Value {
    Small(i128),
    Big(BigInt),
}

/// A polynomial in `n` with an `i128` fast path.
struct Evaluator {
    small: Option<Vec<i128>>,
    big: UniPoly,
}

impl Evaluator {
    fn new(f: UniPoly) -> Self {
        Evaluator { small: f.to_i128s(), big: f }
    }

    fn eval(&self, n: i64) -> Value {
        if let Some(c) = &self.small {
            let x = n as i128;
            let horner = c.iter().rev().try_fold(0i128, |acc, &a| acc.checked_mul(x)?.checked_add(a));
            if let Some(v) = horner {
                return Value::Small(v);
            }
        }
        Value::Big(self.big.eval(&BigInt::from(n)))
    }
}

/// `F(x, n2)` as a polynomial in `x`.
fn row_poly(f: &BinaryForm, n2: i64) -> UniPoly {
    let d = f.degree();
    let n2 = BigInt::from(n2);
    let mut c = vec![BigInt::zero(); d + 1];
    let mut pw = BigInt::one();
    for j in 0..=d {
        c[d - j] = f.coeff(j) * &pw;
        pw *= &n2;
    }
    UniPoly::new(c)
}

fn sum_range(h: &MultiplicativeFunction, ev: &Evaluator, lo: i64, hi: i64) -> Result<Partial> {
    let mut part = Partial::default();
    let mut small = 0u128;
    for n in lo..=hi {
        part.add_value(h, &mut small, ev.eval(n))?;
    }
    Ok(part.finish(small))
}

const BLOCK: i64 = 2048;

/// `T(X; h, f)`: the sum of `h(|f(n)|)` over `1 <= n <= X`, zeros skipped.
pub fn t_sum(x: u64, h: &MultiplicativeFunction, f: &UniPoly) -> Result<SumRow> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let xi = to_i64(x)?;
    let ev = Evaluator::new(f.clone());
    let blocks = (xi + BLOCK - 1) / BLOCK;
    let parts: Result<Vec<Partial>> = (0..blocks)
        .into_par_iter()
        .map(|b| sum_range(h, &ev, b * BLOCK + 1, ((b + 1) * BLOCK).min(xi)))
        .collect();
    let (sum, zeros) = Partial::merge(parts?);
    Ok(SumRow { x1: x, x2: 0, sum, zeros_skipped: zeros })
}

/// `S(X1, X2; h, F)` over `1 <= n_i <= X_i`, zeros skipped.
pub fn s_sum(x1: u64, x2: u64, h: &MultiplicativeFunction, f: &BinaryForm) -> Result<SumRow> {
    rect_sum(x1, x2, h, f, false)
}

/// The symmetric variant over `|n_i| <= X_i`.
pub fn s_sum_symmetric(x1: u64, x2: u64, h: &MultiplicativeFunction, f: &BinaryForm) -> Result<SumRow> {
    rect_sum(x1, x2, h, f, true)
}

fn rect_sum(x1: u64, x2: u64, h: &MultiplicativeFunction, f: &BinaryForm, symmetric: bool) -> Result<SumRow> {
    let (a, b) = (to_i64(x1)?, to_i64(x2)?);
    let (lo1, lo2) = if symmetric { (-a, -b) } else { (1, 1) };
    let parts: Result<Vec<Partial>> = (lo2..=b)
        .into_par_iter()
        .map(|n2| sum_range(h, &Evaluator::new(row_poly(f, n2)), lo1, a))
        .collect();
    let (sum, zeros) = Partial::merge(parts?);
    Ok(SumRow { x1, x2, sum, zeros_skipped: zeros })
}

fn to_i64(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(format!("range bound {x}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64s(c).unwrap()
    }

    #[test]
    fn t_examples() {
        let tau = MultiplicativeFunction::tau();
        assert_eq!(t_sum(4, &tau, &UniPoly::from_i64s(&[0, 1])).unwrap().sum, rat_int(8));
        assert_eq!(t_sum(3, &tau, &UniPoly::from_i64s(&[1, 0, 1])).unwrap().sum, rat_int(8));
        let r = t_sum(10, &MultiplicativeFunction::one(), &UniPoly::from_i64s(&[-6, 5, -1])).unwrap();
        assert_eq!((r.sum, r.zeros_skipped), (rat_int(8), 2));
    }

    #[test]
    fn s_examples() {
        let tau = MultiplicativeFunction::tau();
        assert_eq!(s_sum(2, 2, &tau, &form(&[0, 1, 0])).unwrap().sum, rat_int(8));
        assert_eq!(s_sum(1, 1, &tau, &form(&[1, 0, 1])).unwrap().sum, rat_int(2));
        // x1 - x2 vanishes on the diagonal
        let r = s_sum(5, 7, &MultiplicativeFunction::one(), &form(&[1, -1])).unwrap();
        assert_eq!((r.sum, r.zeros_skipped), (rat_int(30), 5));
    }

    #[test]
    fn symmetric_counts_zeros_on_lines() {
        let r = s_sum_symmetric(3, 3, &MultiplicativeFunction::one(), &form(&[0, 1, 0])).unwrap();
        assert_eq!((r.sum, r.zeros_skipped), (rat_int(36), 13));
    }

    #[test]
    fn matches_naive_loop() {
        let h = MultiplicativeFunction::two_pow_omega();
        let f = form(&[3, -1, 0, 7]);
        let mut expect = Rational::zero();
        for n1 in 1..=20i64 {
            for n2 in 1..=15i64 {
                let v = f.eval_i64(n1, n2);
                if !v.is_zero() {
                    expect += h_abs(&h, &v).unwrap();
                }
            }
        }
        assert_eq!(s_sum(20, 15, &h, &f).unwrap().sum, expect);
    }

    #[test]
    fn big_values_take_the_slow_path() {
        let f = UniPoly::from_i64s(&[1, 0, 0, 0, 0, 0, 0, 0, 1_000_000_000_000]);
        let r = t_sum(3, &MultiplicativeFunction::one(), &f).unwrap();
        assert_eq!(r.sum, rat_int(3));
    }

    #[test]
    fn rational_valued_h() {
        let h = crate::arith::FunctionSpec {
            name: "inv".into(),
            builtin: None,
            rule: Some("1/p".into()),
            a: Some("1".into()),
            b: None,
            epsilon: None,
        }
        .build()
        .unwrap();
        let r = t_sum(4, &h, &UniPoly::from_i64s(&[0, 1])).unwrap();
        // 1 + 1/2 + 1/3 + 1/2
        assert_eq!(r.sum, Rational::new(7.into(), 3.into()));
    }
}
