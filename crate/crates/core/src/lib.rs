//! Exact finite-field tools for the Dickson-Guralnick-Zieve plane curve and
//! its Galois points.
//!
//! All arithmetic happens in one ambient field `F_{q^L}` ([`field`]).
//! Polynomials and projective objects over it live in [`poly`] and [`plane`].
//! [`curve`] builds the curve and its local invariants, [`pgl`] handles the
//! projective linear group, and [`galois`] turns fibers of projections and
//! automorphism searches into certificates. [`report`] and [`cli`] expose
//! the results as versioned JSON.

pub mod cli;
pub mod curve;
pub mod error;
pub mod field;
pub mod galois;
pub mod linalg;
pub mod pgl;
pub mod plane;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use field::{Fel, FieldCtx};
