//! Fixed-point decimals for the few quantities that are not rational
//! (`ln X`, `exp(..)`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// `mantissa * 10^(-scale)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    mantissa: BigInt,
    scale: u32,
}

const GUARD: u32 = 12;

fn ten_pow(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Round-half-away-from-zero division.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    if (r.abs() * 2u32) >= d.abs() {
        if n.is_negative() != d.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

impl Decimal {
    pub fn from_rational(r: &Rational, digits: u32) -> Self {
        let m = div_round(&(r.numer() * ten_pow(digits)), r.denom());
        Decimal { mantissa: m, scale: digits }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Exact rational value of this decimal.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), ten_pow(self.scale))
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    fn rescale(&self, scale: u32) -> BigInt {
        if scale >= self.scale {
            &self.mantissa * ten_pow(scale - self.scale)
        } else {
            div_round(&self.mantissa, &ten_pow(self.scale - scale))
        }
    }

    pub fn mul(&self, other: &Decimal) -> Decimal {
        let scale = self.scale.max(other.scale);
        let m = div_round(&(self.rescale(scale) * other.rescale(scale)), &ten_pow(scale));
        Decimal { mantissa: m, scale }
    }

    pub fn div(&self, other: &Decimal) -> Decimal {
        let scale = self.scale.max(other.scale);
        let m = div_round(&(self.rescale(scale) * ten_pow(scale)), &other.rescale(scale));
        Decimal { mantissa: m, scale }
    }

    pub fn mul_rational(&self, r: &Rational) -> Decimal {
        let m = div_round(&(&self.mantissa * r.numer()), r.denom());
        Decimal { mantissa: m, scale: self.scale }
    }

    /// Natural logarithm of a positive rational to `digits` decimal places.
    pub fn ln(x: &Rational, digits: u32) -> Decimal {
        assert!(x.is_positive(), "ln of a non-positive number");
        let work = digits + GUARD;
        // x = 2^k * m with m in [1, 2)
        let k = x.numer().bits() as i64 - x.denom().bits() as i64;
        let two_k = num_traits::pow(BigInt::from(2), k.unsigned_abs() as usize);
        let m = if k >= 0 { x / Rational::from_integer(two_k) } else { x * Rational::from_integer(two_k) };
        let ln_m = atanh_series(&((&m - Rational::one()) / (&m + Rational::one())), work) * 2u32;
        let ln2 = atanh_series(&Rational::new(1.into(), 3.into()), work) * 2u32;
        let total = ln_m + ln2 * BigInt::from(k);
        Decimal { mantissa: div_round(&total, &ten_pow(GUARD)), scale: digits }
    }

    /// `exp(r)` to `digits` decimal places.
    pub fn exp(r: &Rational, digits: u32) -> Decimal {
        // exp(r) = exp(r / 2^s)^(2^s); each squaring may double relative error
        let mag = (r.numer().bits() as i64 - r.denom().bits() as i64).max(0) as u32;
        let s = mag + 8;
        let integer_digits = (r.abs().to_integer().bits() as f64 * 0.4343).ceil() as u32 + 2;
        let work = digits + GUARD + s / 3 + 2 + integer_digits;
        let one = ten_pow(work);
        let y = r / Rational::from_integer(num_traits::pow(BigInt::from(2), s as usize));
        let y_fixed = div_round(&(y.numer() * &one), y.denom());
        // Taylor series at |y| < 1/256
        let mut term = one.clone();
        let mut sum = one.clone();
        let mut n = 1u32;
        loop {
            term = div_round(&(&term * &y_fixed), &(&one * BigInt::from(n)));
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..s {
            sum = div_round(&(&sum * &sum), &one);
        }
        Decimal { mantissa: div_round(&sum, &ten_pow(work - digits)), scale: digits }
    }

    /// Rounded to `sig` significant digits, in plain or scientific notation.
    pub fn to_sig_string(&self, sig: u32) -> String {
        if self.mantissa.is_zero() {
            return "0".into();
        }
        let neg = self.mantissa.is_negative();
        let digits = self.mantissa.abs().to_string();
        let len = digits.len() as i64;
        // value = 0.digits * 10^(len - scale)
        let exp10 = len - self.scale as i64;
        let keep = sig.max(1) as i64;
        let rounded = if len > keep {
            div_round(&self.mantissa.abs(), &ten_pow((len - keep) as u32))
        } else {
            self.mantissa.abs() * ten_pow((keep - len) as u32)
        };
        let mut rs = rounded.to_string();
        let mut exp10 = exp10;
        if rs.len() as i64 > keep {
            // carried into a new digit (e.g. 9.99 -> 10.0)
            rs.truncate(keep as usize);
            exp10 += 1;
        }
        let body = if exp10 > keep || exp10 < -5 {
            let (h, t) = rs.split_at(1);
            if t.is_empty() {
                format!("{h}e{}", exp10 - 1)
            } else {
                format!("{h}.{t}e{}", exp10 - 1)
            }
        } else if exp10 <= 0 {
            format!("0.{}{}", "0".repeat((-exp10) as usize), rs)
        } else if exp10 >= keep {
            format!("{}{}", rs, "0".repeat((exp10 - keep) as usize))
        } else {
            let (h, t) = rs.split_at(exp10 as usize);
            format!("{h}.{t}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// `atanh(y) * 10^work` for rational `|y| <= 1/3`.
fn atanh_series(y: &Rational, work: u32) -> BigInt {
    let one = ten_pow(work);
    let y_fixed = div_round(&(y.numer() * &one), y.denom());
    let y2 = div_round(&(&y_fixed * &y_fixed), &one);
    let mut power = y_fixed.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u32;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = div_round(&(&power * &y2), &one);
        k += 2;
    }
    sum
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.mantissa.is_negative();
        let s = self.mantissa.abs().to_string();
        let scale = self.scale as usize;
        let padded = if s.len() <= scale { format!("{}{}", "0".repeat(scale + 1 - s.len()), s) } else { s };
        let (int, frac) = padded.split_at(padded.len() - scale);
        if neg {
            write!(f, "-")?;
        }
        if scale == 0 {
            write!(f, "{int}")
        } else {
            write!(f, "{int}.{frac}")
        }
    }
}

/// `r` rounded to `sig` significant digits.
pub fn rational_sig(r: &Rational, sig: u32) -> String {
    if r.is_zero() {
        return "0".into();
    }
    // enough fractional digits that `sig` significant ones survive
    let lead = r.numer().abs().bits() as i64 - r.denom().bits() as i64;
    let extra = if lead < 0 { ((-lead) as f64 * 0.302) as u32 + 2 } else { 0 };
    Decimal::from_rational(r, sig + extra + 2).to_sig_string(sig)
}
