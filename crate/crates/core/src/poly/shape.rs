use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::disc::disc_form;
use super::form::BinaryForm;
use super::uni::UniPoly;
use crate::arith::{psi_big, Rational};
use crate::error::{Error, Result};

/// `F = x1^d1 * x2^d2 * G` with `d1, d2 in {0, 1}`, `G(1,0) G(0,1) != 0`
/// and `disc(G) != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeDecomposition {
    pub d1: u8,
    pub d2: u8,
    pub g: BinaryForm,
}

impl ShapeDecomposition {
    /// Degree `d` of the original form.
    pub fn degree(&self) -> usize {
        self.g.degree() + self.d1 as usize + self.d2 as usize
    }

    /// `d' = d - d2`.
    pub fn d_prime(&self) -> usize {
        self.degree() - self.d2 as usize
    }

    /// `d'' = d - d1 - d2 = deg G`.
    pub fn d_doubleprime(&self) -> usize {
        self.g.degree()
    }

    /// Rebuilds `F`.
    pub fn form(&self) -> BinaryForm {
        let mut c = vec![BigInt::zero(); self.d2 as usize];
        c.extend(self.g.coeffs().iter().cloned());
        c.extend(std::iter::repeat_n(BigInt::zero(), self.d1 as usize));
        BinaryForm::new(c).expect("G is nonzero")
    }
}

/// Splits off the coordinate-axis factors of a form with nonzero
/// discriminant.
pub fn shape_decompose(f: &BinaryForm) -> Result<ShapeDecomposition> {
    if disc_form(f)?.is_zero() {
        return Err(Error::VanishingDiscriminant(format!(
            "{f} has the repeated factor {}",
            repeated_factor_witness(f)
        )));
    }
    let d = f.degree();
    let d2 = u8::from(f.coeff(0).is_zero());
    let d1 = u8::from(f.coeff(d).is_zero());
    let g = BinaryForm::new(f.coeffs()[d2 as usize..=d - d1 as usize].to_vec())?;
    debug_assert!(!g.coeff(0).is_zero() && !g.coeff(g.degree()).is_zero());
    Ok(ShapeDecomposition { d1, d2, g })
}

/// `Delta_F = psi(|disc F|)`.
pub fn delta_f(f: &BinaryForm) -> Result<Rational> {
    let disc = disc_form(f)?;
    if disc.is_zero() {
        return Err(Error::VanishingDiscriminant(format!("{f}")));
    }
    psi_big(&disc)
}

/// A squared factor of a form with vanishing discriminant, as text.
fn repeated_factor_witness(f: &BinaryForm) -> String {
    let d = f.degree();
    if d >= 2 && f.coeff(0).is_zero() && f.coeff(1).is_zero() {
        return "x2^2".into();
    }
    if d >= 2 && f.coeff(d).is_zero() && f.coeff(d - 1).is_zero() {
        return "x1^2".into();
    }
    let g = f.dehomogenize();
    let common = gcd_primitive(&g, &g.derivative());
    match common.degree() {
        Some(k) if k >= 1 => {
            let w = BinaryForm::homogenize(&common, k).expect("degree matches");
            format!("({w})^2")
        }
        _ => "(unknown)".into(),
    }
}

/// Primitive gcd over `Z[x]` by primitive pseudo-remainder sequences.
pub(crate) fn gcd_primitive(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let prim = |p: &UniPoly| -> UniPoly {
        if p.is_zero() {
            p.clone()
        } else {
            p.content_and_primitive().unwrap().1
        }
    };
    let (mut a, mut b) = (prim(a), prim(b));
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let mut r = a.clone();
        let db = b.degree().unwrap();
        let lb = b.leading().unwrap().clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shifted = &UniPoly::monomial(lr, dr - db) * &b;
            r = &r.scale(&lb) - &shifted;
        }
        a = b;
        b = prim(&r);
    }
    if a.leading().is_some_and(|c| c < &BigInt::zero()) {
        a = a.scale(&BigInt::from(-1));
    }
    a
}

/// `f = x^d1 G(x, n2) / q` together with `q = gcd(a_0, a_1 n2, ..., a_d'' n2^d'')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub f: UniPoly,
    pub q: BigInt,
}

/// Fixes the second variable at `n2`; requires `G` primitive.
pub fn specialize(shape: &ShapeDecomposition, n2: u64) -> Result<Specialization> {
    if n2 == 0 {
        return Err(Error::Zero("n2"));
    }
    if !shape.g.is_primitive() {
        return Err(Error::NotPrimitive(shape.g.content().to_string()));
    }
    let dd = shape.d_doubleprime();
    let n2 = BigInt::from(n2);
    let mut power = BigInt::one();
    // G(x, n2) = sum_j a_j n2^j x^(dd - j)
    let mut coeffs = vec![BigInt::zero(); dd + 1 + shape.d1 as usize];
    for (j, a) in shape.g.coeffs().iter().enumerate() {
        coeffs[dd - j + shape.d1 as usize] = a * &power;
        power *= &n2;
    }
    let raw = UniPoly::new(coeffs);
    let q = raw.content();
    debug_assert!(!q.is_zero());
    let f = raw.div_exact_scalar(&q);
    debug_assert!(f.content().is_one());
    Ok(Specialization { f, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_i64s(c).unwrap()
    }

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn decompose_examples() {
        // x1 x2 (x1 + x2) = x1^2 x2 + x1 x2^2
        let s = shape_decompose(&form(&[0, 1, 1, 0])).unwrap();
        assert_eq!((s.d1, s.d2, s.g.clone()), (1, 1, form(&[1, 1])));
        let s = shape_decompose(&form(&[1, 0, 0, 2])).unwrap();
        assert_eq!((s.d1, s.d2, s.g.clone()), (0, 0, form(&[1, 0, 0, 2])));
        // x2 (x1^2 + x2^2)
        let s = shape_decompose(&form(&[0, 1, 0, 1])).unwrap();
        assert_eq!((s.d1, s.d2, s.g.clone()), (0, 1, form(&[1, 0, 1])));
        assert_eq!(s.form(), form(&[0, 1, 0, 1]));
        assert_eq!((s.degree(), s.d_prime(), s.d_doubleprime()), (3, 2, 2));
    }

    #[test]
    fn decompose_rejects_repeated_factors() {
        let e = shape_decompose(&form(&[0, 1, 0, 0])).unwrap_err();
        assert!(e.to_string().contains("x2^2") || e.to_string().contains("x1^2"), "{e}");
        // (x1 + x2)^2 (x1 - 2x2) = x1^3 - 3x1 x2^2 - 2x2^3
        let e = shape_decompose(&form(&[1, 0, -3, -2])).unwrap_err();
        assert!(e.to_string().contains("(x1 + x2)^2"), "{e}");
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_f(&form(&[0, 1, 1, 0])).unwrap(), rat(1, 1));
        assert_eq!(delta_f(&form(&[1, 0, 1])).unwrap(), rat(3, 2));
        assert_eq!(delta_f(&form(&[1, 0, 0, 2])).unwrap(), rat(2, 1));
        assert!(delta_f(&form(&[1, 2, 1])).is_err());
    }

    #[test]
    fn specialize_examples() {
        let s = shape_decompose(&form(&[1, 0, 1])).unwrap();
        let sp = specialize(&s, 2).unwrap();
        assert_eq!((sp.f, sp.q), (p(&[4, 0, 1]), BigInt::from(1)));
        let s = shape_decompose(&form(&[2, 0, 1])).unwrap();
        let sp = specialize(&s, 2).unwrap();
        assert_eq!((sp.f, sp.q), (p(&[2, 0, 1]), BigInt::from(2)));
        // x1 x2 (x1 + x2): d1 = 1, G = x1 + x2
        let s = shape_decompose(&form(&[0, 1, 1, 0])).unwrap();
        let sp = specialize(&s, 3).unwrap();
        assert_eq!((sp.f, sp.q), (p(&[0, 3, 1]), BigInt::from(1)));
        assert_eq!(specialize(&s, 0), Err(Error::Zero("n2")));
        let s = ShapeDecomposition { d1: 0, d2: 0, g: form(&[2, 0, 4]) };
        assert!(specialize(&s, 1).is_err());
    }

    #[test]
    fn polynomial_gcd() {
        // (x + 1)(x - 2) and (x + 1)(3x + 5)
        let a = &p(&[1, 1]) * &p(&[-2, 1]);
        let b = &p(&[1, 1]) * &p(&[5, 3]);
        assert_eq!(gcd_primitive(&a, &b), p(&[1, 1]));
        assert_eq!(gcd_primitive(&p(&[1, 0, 1]), &p(&[0, 2])), p(&[1]));
    }
}
