//! Exact computations on the bigraded Jacobian ring of the Dwork potential of a
//! smooth projective complete intersection, together with a symbolic
//! Cech-de Rham engine comparing the two classical families of cohomology
//! representatives.

pub mod acceptance;
pub mod cechdr;
pub mod deforms;
pub mod error;
pub mod groebner;
pub mod hodge;
pub mod jacring;
pub mod linalg;
pub mod problem;
pub mod qpoly;

pub use error::{Error, Result};
