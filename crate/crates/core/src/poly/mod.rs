//! Integer polynomials and binary forms.

mod disc;
mod form;
mod shape;
mod uni;

pub use disc::{disc_form, disc_form_with_shift, disc_uni, resultant};
pub use form::{BinaryForm, Matrix2};
pub use shape::{delta_f, shape_decompose, specialize, ShapeDecomposition, Specialization};
pub use uni::UniPoly;

pub(crate) use uni::mod_u64;
