//! Polynomials over the working field: sparse trivariate polynomials, binary
//! forms from restricting to lines, and univariate squarefree decomposition.

mod binform;
mod tri;
mod univariate;

pub use binform::{affine_profile, merge_profile, BinForm};
pub use tri::{Monomial, SerializedTerm, TriPoly};
pub use univariate::{
    dense_det, interpolate, squarefree_decompose, sylvester_resultant, SqfDecomp, UniPoly,
};
