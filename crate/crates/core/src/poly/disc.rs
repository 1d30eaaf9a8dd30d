use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::form::BinaryForm;
use super::uni::UniPoly;
use crate::error::{Error, Result};

/// Fraction-free (Bareiss) determinant.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Resultant of two nonzero polynomials via the Sylvester matrix.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Result<BigInt> {
    let m = f.degree().ok_or(Error::ZeroPolynomial)?;
    let n = g.degree().ok_or(Error::ZeroPolynomial)?;
    let size = m + n;
    if size == 0 {
        return Ok(BigInt::one());
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for k in 0..=m {
            rows[i][i + k] = f.coeff(m - k);
        }
    }
    for i in 0..m {
        for k in 0..=n {
            rows[n + i][i + k] = g.coeff(n - k);
        }
    }
    Ok(determinant(rows))
}

/// Discriminant of `f` regarded as a polynomial of degree `as_degree`.
///
/// At `as_degree = deg f` this is `(-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
/// Larger `as_degree` means roots at infinity: the value is that of the
/// binary form of degree `as_degree` dehomogenising to `f` (zero once
/// `as_degree >= deg f + 2`).
pub fn disc_uni(f: &UniPoly, as_degree: usize) -> Result<BigInt> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if as_degree < d {
        return Err(Error::Precondition(format!(
            "as_degree {as_degree} is below the degree {d}"
        )));
    }
    if as_degree > d {
        return disc_form(&BinaryForm::homogenize(f, as_degree)?);
    }
    if d <= 1 {
        return Ok(BigInt::one());
    }
    let res = resultant(f, &f.derivative())?;
    let lc = f.leading().unwrap();
    let (q, r) = res.div_rem(lc);
    debug_assert!(r.is_zero());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

/// Discriminant of a binary form.
///
/// Uses the least `t >= 0` with `F(1, t) != 0`, substitutes
/// `x2 -> x2 + t x1` (determinant 1, discriminant unchanged) so that the
/// dehomogenisation keeps full degree, and takes its discriminant.
pub fn disc_form(f: &BinaryForm) -> Result<BigInt> {
    let at_one = f.dehomogenize_first();
    let t = (0..=f.degree() as i64)
        .find(|&t| !at_one.eval_i64(t).is_zero())
        .expect("nonzero polynomial of degree d has a non-root in 0..=d");
    disc_form_with_shift(f, t)
}

/// [`disc_form`] with an explicit shift `t`; requires `F(1, t) != 0`.
pub fn disc_form_with_shift(f: &BinaryForm, t: i64) -> Result<BigInt> {
    if f.dehomogenize_first().eval_i64(t).is_zero() {
        return Err(Error::Precondition(format!("F(1, {t}) = 0")));
    }
    let shifted = f.gl2_act(&super::Matrix2::new(1, 0, t, 1))?;
    disc_uni(&shifted.dehomogenize(), f.degree())
}
