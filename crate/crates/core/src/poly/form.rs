use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::uni::{parse_int_list, UniPoly};
use crate::error::{Error, Result};

/// Binary form `sum_j a_j x1^(d-j) x2^j` stored densely as `[a_0, ..., a_d]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

/// Integer 2x2 matrix `[[m11, m12], [m21, m22]]` acting by `x -> M x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix2 {
    pub m: [[BigInt; 2]; 2],
}

impl Matrix2 {
    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Self {
        Matrix2 { m: [[m11.into(), m12.into()], [m21.into(), m22.into()]] }
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn power(lin: &[BigInt], k: usize) -> Vec<BigInt> {
    (0..k).fold(vec![BigInt::one()], |acc, _| convolve(&acc, lin))
}

impl BinaryForm {
    /// `coeffs[j]` is the coefficient of `x1^(d-j) x2^j`; the degree is
    /// `coeffs.len() - 1`. Rejects the zero form.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x1^e * f(x1/x2) * x2^degree`: the degree-`degree` form whose
    /// dehomogenisation at `x2 = 1` is `f`.
    pub fn homogenize(f: &UniPoly, degree: usize) -> Result<Self> {
        let deg_f = f.degree().ok_or(Error::ZeroPolynomial)?;
        if degree < deg_f {
            return Err(Error::Precondition(format!(
                "cannot homogenise degree {deg_f} polynomial to degree {degree}"
            )));
        }
        Self::new((0..=degree).map(|j| f.coeff(degree - j)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }

    /// Max absolute coefficient.
    pub fn norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn eval(&self, x1: &BigInt, x2: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut x2_pow = BigInt::one();
        // Horner in x1 with x2 powers folded in
        let d = self.degree();
        let mut terms = Vec::with_capacity(d + 1);
        for c in &self.coeffs {
            terms.push(c * &x2_pow);
            x2_pow *= x2;
        }
        for t in terms {
            acc = acc * x1 + t;
        }
        acc
    }

    pub fn eval_i64(&self, x1: i64, x2: i64) -> BigInt {
        self.eval(&x1.into(), &x2.into())
    }

    /// `F(x, 1)` as a polynomial in `x` (degree below `d` when `a_0 = 0`).
    pub fn dehomogenize(&self) -> UniPoly {
        let d = self.degree();
        UniPoly::new((0..=d).map(|i| self.coeffs[d - i].clone()).collect())
    }

    /// `F(1, y)` as a polynomial in `y`.
    pub fn dehomogenize_first(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// `F(x2, x1)`.
    pub fn swap(&self) -> BinaryForm {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinaryForm { coeffs: c }
    }

    /// `F(M x)`; rejects singular `M`.
    pub fn gl2_act(&self, m: &Matrix2) -> Result<BinaryForm> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let d = self.degree();
        let l1 = [m.m[0][0].clone(), m.m[0][1].clone()];
        let l2 = [m.m[1][0].clone(), m.m[1][1].clone()];
        let mut out = vec![BigInt::zero(); d + 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = convolve(&power(&l1, d - j), &power(&l2, j));
            for (k, t) in term.into_iter().enumerate() {
                out[k] += a * t;
            }
        }
        BinaryForm::new(out)
    }

    /// Coefficients as `i128` if they all fit.
    pub fn to_i128s(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| c.to_i128()).collect()
    }

    /// Text form `d; a_0 a_1 ... a_d`.
    pub fn to_literal(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}; {}", self.degree(), cs.join(" "))
    }

    /// Product of two forms.
    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        BinaryForm { coeffs: convolve(&self.coeffs, &other.coeffs) }
    }
}

impl FromStr for BinaryForm {
    type Err = Error;
    /// Parses `d; a_0 a_1 ... a_d`.
    fn from_str(s: &str) -> Result<Self> {
        let (d, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("form literal needs `d; a_0 ... a_d`, got {s:?}")))?;
        let d: usize = d.trim().parse().map_err(|_| Error::Parse(format!("bad degree {d:?}")))?;
        let coeffs = parse_int_list(rest)?;
        if coeffs.len() != d + 1 {
            return Err(Error::Parse(format!(
                "degree {d} form needs {} coefficients, got {}",
                d + 1,
                coeffs.len()
            )));
        }
        BinaryForm::new(coeffs)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut parts = Vec::new();
            for (var, e) in [("x1", d - j), ("x2", j)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            if !mag.is_one() || parts.is_empty() {
                write!(f, "{mag}")?;
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({self})")
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_literal().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64s(c).unwrap()
    }

    #[test]
    fn gl2_examples() {
        let f = form(&[1, 3, -2, 5]);
        assert_eq!(f.gl2_act(&Matrix2::new(1, 0, 0, 1)).unwrap(), f);
        // swap on x1^2 x2 gives x1 x2^2
        assert_eq!(form(&[0, 1, 0, 0]).gl2_act(&Matrix2::new(0, 1, 1, 0)).unwrap(), form(&[0, 0, 1, 0]));
        // x1 -> x1 + x2 on x1 x2
        assert_eq!(form(&[0, 1, 0]).gl2_act(&Matrix2::new(1, 1, 0, 1)).unwrap(), form(&[0, 1, 1]));
        assert_eq!(f.gl2_act(&Matrix2::new(1, 2, 2, 4)), Err(Error::SingularMatrix));
    }

    #[test]
    fn gl2_matches_pointwise_evaluation() {
        let f = form(&[2, -1, 0, 3, 1]);
        let m = Matrix2::new(2, -3, 1, 5);
        let g = f.gl2_act(&m).unwrap();
        for x1 in -4..4i64 {
            for x2 in -4..4i64 {
                assert_eq!(g.eval_i64(x1, x2), f.eval_i64(2 * x1 - 3 * x2, x1 + 5 * x2));
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let f: BinaryForm = "3; 1 0 0 2".parse().unwrap();
        assert_eq!(f, form(&[1, 0, 0, 2]));
        assert_eq!(f.to_string(), "x1^3 + 2x2^3");
        assert_eq!(f.to_literal(), "3; 1 0 0 2");
        assert_eq!(form(&[0, 1, -1, 0]).to_string(), "x1^2*x2 - x1*x2^2");
        assert!("2; 1 0".parse::<BinaryForm>().is_err());
        assert!("1; 0 0".parse::<BinaryForm>().is_err());
        assert!("1 0 1".parse::<BinaryForm>().is_err());
    }

    #[test]
    fn dehomogenisations() {
        let f = form(&[2, 0, 5]); // 2x1^2 + 5x2^2
        assert_eq!(f.dehomogenize(), UniPoly::from_i64s(&[5, 0, 2]));
        assert_eq!(f.dehomogenize_first(), UniPoly::from_i64s(&[2, 0, 5]));
        assert_eq!(BinaryForm::homogenize(&UniPoly::from_i64s(&[5, 0, 2]), 2).unwrap(), f);
        assert_eq!(
            BinaryForm::homogenize(&UniPoly::from_i64s(&[1, 1]), 2).unwrap(),
            form(&[0, 1, 1])
        );
        assert_eq!(f.eval_i64(3, -1), BigInt::from(23));
        assert_eq!(f.norm(), BigInt::from(5));
    }
}
