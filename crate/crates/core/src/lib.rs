//! Exact algebra for restricted Poisson and quantized algebras in
//! characteristic p.

pub mod atiyah;
pub mod error;
pub mod expr;
pub mod formscalc;
pub mod hconn;
pub mod linalg;
pub mod scalars;
pub mod suite;
pub mod sympgeo;
pub mod weyl;

pub use error::{Error, Result};
pub use scalars::{Gf, HSeries, Prime};
