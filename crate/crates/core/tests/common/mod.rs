#![allow(dead_code)]

use formsums::poly::{disc_form, disc_uni};
use formsums::{BinaryForm, UniPoly};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Primitive polynomial of exact degree `d`, coefficients in `[-c, c]`.
pub fn primitive_poly(rng: &mut ChaCha8Rng, d: usize, c: i64) -> UniPoly {
    loop {
        let mut v: Vec<i64> = (0..=d).map(|_| rng.gen_range(-c..=c)).collect();
        if v[d] == 0 {
            v[d] = if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let f = UniPoly::from_i64s(&v);
        if f.is_primitive() {
            return f;
        }
    }
}

/// Squarefree primitive polynomial of degree `d` with `p` as a fixed prime
/// divisor, built as `(x^p - x) q + p r`.
pub fn fpd_poly(rng: &mut ChaCha8Rng, d: usize, p: u64, c: i64) -> UniPoly {
    assert!(p as usize <= d);
    let pu = p as usize;
    let mut xp = vec![0i64; pu + 1];
    xp[pu] = 1;
    xp[1] = -1;
    let xp = UniPoly::from_i64s(&xp);
    loop {
        let mut qc: Vec<i64> = (0..=d - pu).map(|_| rng.gen_range(-c..=c)).collect();
        if qc[d - pu] % p as i64 == 0 {
            qc[d - pu] = 1;
        }
        let q = UniPoly::from_i64s(&qc);
        let r = UniPoly::from_i64s(&(0..d).map(|_| rng.gen_range(-c..=c)).collect::<Vec<_>>());
        let f = &(&xp * &q) + &r.scale(&BigInt::from(p));
        if f.degree() == Some(d) && f.is_primitive() && !disc_uni(&f, d).unwrap().is_zero() {
            return f;
        }
    }
}

/// Form of degree `d` with nonzero discriminant.
pub fn squarefree_form(rng: &mut ChaCha8Rng, d: usize, c: i64) -> BinaryForm {
    loop {
        let v: Vec<i64> = (0..=d).map(|_| rng.gen_range(-c..=c)).collect();
        if let Ok(f) = BinaryForm::from_i64s(&v) {
            if f.degree() == d && !disc_form(&f).unwrap().is_zero() {
                return f;
            }
        }
    }
}

pub fn primitive_squarefree_form(rng: &mut ChaCha8Rng, d: usize, c: i64) -> BinaryForm {
    loop {
        let f = squarefree_form(rng, d, c);
        if f.is_primitive() {
            return f;
        }
    }
}
