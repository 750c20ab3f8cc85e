//! Totally reflexive modules from exact pairs of zero divisors.
//!
//! The crate builds the modules `G_a = Coker [[x, a], [0, y]]` and
//! `H_a = Coker [[y, -a], [0, x]]` over two computable ring backends and
//! verifies their structural properties: exactness of the periodic
//! resolution, total reflexivity, Hom-modules between members of the
//! families, endomorphism rings and non-isomorphism certificates.

pub mod cli;
pub mod error;
pub mod family;
pub mod hom;
pub mod howell;
pub mod io;
pub mod linalg;
pub mod module;
pub mod report;
pub mod ring;
pub mod zerodiv;

pub use error::{Error, Result};
pub use linalg::{Matrix, Scope};
pub use report::{Verdict, VerificationReport};
pub use ring::{Element, Ring, RingDescriptor};
