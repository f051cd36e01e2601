//! Polynomial and rational-function algorithms.

mod expand;
mod factor;
mod poly;
mod qpoly;
mod ring;

pub use expand::{collect, expand, UnivariatePoly};
pub use factor::{factor, factor_full, poly_roots, Factorization};
pub use poly::{gcd, Mono, Poly};
pub use ring::{cancel, is_zero_rational, RatFunc, Ring};
