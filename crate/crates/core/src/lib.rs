//! Theta-function products `b_{m,n}`, their Kronecker-limit closed forms as
//! products of fundamental units, and the degree-7 class-invariant pipeline.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its arguments.
//!
//! ```
//! use theta_units_core::{derive, qseries, PosRational};
//!
//! let report = derive::derive_b(5, 3, 256).unwrap();
//! assert_eq!(report.product.to_string(), "(1+√2)^(-2)");
//! let b = qseries::b_numeric(PosRational::integer(10).unwrap(), 3, 256).unwrap();
//! assert!((&b - &report.value).abs_lt_pow2(-200));
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algrec;
pub mod bigreal;
pub mod derive;
pub mod error;
pub mod modeq;
pub mod qseries;
pub mod quadfields;
pub mod rational;

pub use bigreal::{BigReal, DEFAULT_PREC};
pub use error::{Error, Result};
pub use rational::PosRational;
