//! Eigenvalue estimation for linear dynamical systems from their outputs.
//!
//! The autoregressive parameters of the ARMA(X) model that any LDS output
//! follows are the negated coefficients of the characteristic polynomial of
//! the state-transition matrix. Estimating them by regularized iterated
//! regression ([`arma`]) and taking polynomial roots ([`poly`]) recovers the
//! spectrum without identifying `B`, `C` or `D`; [`cluster`] groups series by
//! those parameters.

pub mod arma;
pub mod cluster;
pub mod eig;
mod error;
pub mod io;
pub mod lds;
pub mod poly;
pub mod seed;

pub use error::{Error, Result};
