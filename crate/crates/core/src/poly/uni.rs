use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense integer polynomial, coefficients in ascending powers.
///
/// The highest stored coefficient is nonzero; the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// gcd of the coefficients (non-negative; 0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `(content, primitive part)` with `content * primitive == self`.
    pub fn content_and_primitive(&self) -> Result<(BigInt, UniPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let c = self.content();
        Ok((c.clone(), self.div_exact_scalar(&c)))
    }

    /// Divides every coefficient by `d`; `d` must divide them all.
    pub fn div_exact_scalar(&self, d: &BigInt) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero(), "inexact division");
                    q
                })
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Value modulo `m` at `x` (result in `[0, m)`).
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let m128 = m as u128;
        let x = (x % m) as u128;
        let mut acc: u128 = 0;
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + mod_u64(c, m) as u128) % m128;
        }
        acc as u64
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `self(a x + b)`.
    pub fn compose_affine(&self, a: &BigInt, b: &BigInt) -> UniPoly {
        let lin = UniPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UniPoly::new(vec![c.clone()]);
        }
        acc
    }

    /// Coefficients reduced into `[0, p)`, trailing zeros trimmed.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.iter().map(|c| mod_u64(c, p)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// True when `p` divides every coefficient.
    pub fn vanishes_mod(&self, p: u64) -> bool {
        self.reduce_mod(p).is_empty()
    }

    /// Exponent of `p` in the content (`None` for the zero polynomial).
    pub fn content_valuation(&self, p: u64) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let c = self.content();
        Some(valuation(&c, p))
    }

    /// Coefficients as `i128` if they all fit.
    pub fn to_i128s(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| c.to_i128()).collect()
    }

    /// Max absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// `c mod m` in `[0, m)`.
pub(crate) fn mod_u64(c: &BigInt, m: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(m));
    r.to_u64().unwrap()
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

impl<'a> std::ops::Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> std::ops::Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> std::ops::Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
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
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// Text form `c_0 c_1 ... c_e` (ascending powers, whitespace or commas).
impl FromStr for UniPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = parse_int_list(s)?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty polynomial literal".into()));
        }
        Ok(UniPoly::new(coeffs))
    }
}

pub(crate) fn parse_int_list(s: &str) -> Result<Vec<BigInt>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
        .collect()
}

impl UniPoly {
    /// Inverse of [`FromStr`]: ascending coefficients separated by spaces.
    pub fn to_literal(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }
}

// Canonical JSON: array of decimal strings, ascending powers.
impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(UniPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn content_examples() {
        let (c, prim) = p(&[4, 0, 2]).content_and_primitive().unwrap();
        assert_eq!((c, prim), (BigInt::from(2), p(&[2, 0, 1])));
        let (c, prim) = p(&[0, 1, 1]).content_and_primitive().unwrap();
        assert_eq!((c, prim), (BigInt::from(1), p(&[0, 1, 1])));
        let (c, prim) = p(&[0, 10, 0, 6]).content_and_primitive().unwrap();
        assert_eq!((c, prim), (BigInt::from(2), p(&[0, 5, 0, 3])));
        assert_eq!(UniPoly::zero().content_and_primitive(), Err(Error::ZeroPolynomial));
        let (c, prim) = p(&[-4, -6]).content_and_primitive().unwrap();
        assert_eq!((c, prim), (BigInt::from(2), p(&[-2, -3])));
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
    }

    #[test]
    fn affine_composition() {
        // f(x) = x^3 - x, f(2x + 1) = 8x^3 + 12x^2 + 4x
        let f = p(&[0, -1, 0, 1]);
        assert_eq!(f.compose_affine(&2.into(), &1.into()), p(&[0, 4, 12, 8]));
        for x in -5..5 {
            assert_eq!(
                f.compose_affine(&3.into(), &(-2).into()).eval_i64(x),
                f.eval_i64(3 * x - 2)
            );
        }
    }

    #[test]
    fn modular_evaluation() {
        let f = p(&[1, 0, 1]);
        assert_eq!(f.eval_mod(2, 5), 0);
        assert_eq!(p(&[-3, 1]).eval_mod(1, 7), 5);
        assert_eq!(p(&[6, 3, 9]).reduce_mod(3), Vec::<u64>::new());
        assert!(p(&[6, 3, 9]).vanishes_mod(3));
        assert_eq!(p(&[12, 4]).content_valuation(2), Some(2));
    }

    #[test]
    fn display_and_literal() {
        assert_eq!(p(&[0, -1, 0, 1]).to_string(), "x^3 - x");
        assert_eq!(p(&[3, 2, -1]).to_string(), "-x^2 + 2x + 3");
        assert_eq!(p(&[0]).to_string(), "0");
        let f: UniPoly = "1 0 1".parse().unwrap();
        assert_eq!(f, p(&[1, 0, 1]));
        assert_eq!(f.to_literal().parse::<UniPoly>().unwrap(), f);
        assert!("1 x".parse::<UniPoly>().is_err());
        assert!("".parse::<UniPoly>().is_err());
    }

    #[test]
    fn json_is_string_array() {
        let f = p(&[-1, 0, 3]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"["-1","0","3"]"#);
        assert_eq!(serde_json::from_str::<UniPoly>(&s).unwrap(), f);
    }
}
