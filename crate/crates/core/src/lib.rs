//! Elliptic functions built from the Gauss hypergeometric function
//! `F(1/3, 2/3; 1/2; x)`.
//!
//! The crate follows the construction end to end:
//!
//! * [`hypergeometric`] evaluates `F(1/3, 2/3; 1/2; x)` by power series and by
//!   its trigonometric closed form.
//! * [`phase_map`] integrates `u(φ)`, inverts it on the principal branch and
//!   exposes the real functions `s`, `c`, `d`.
//! * [`weierstrass`] builds the invariants, the rectangular period lattice and
//!   evaluates `℘`, `℘′` anywhere in the plane.
//! * [`field`] realises `d`, `s²`, `c²` and `s c` as elliptic functions through
//!   `℘` and measures every identity linking them.
//! * [`poles`] certifies that `d` has a pole at `(2/3) i K′`, using exact
//!   rational arithmetic ([`poly`]) for the polynomial identities.
//! * [`verify`] and [`sample`] drive batch certification and sampling, in
//!   parallel when the `parallel` feature is enabled.
//!
//! ```
//! use shen_elliptic::{Complex64, ShenContext};
//!
//! let ctx = ShenContext::from_k(0.5)?;
//! // d has a pole where ℘ = −1/3
//! let z0 = ctx.pole_of_d();
//! let wp = ctx.weierstrass().wp(z0)?;
//! assert!((wp + 1.0 / 3.0).norm() < 1e-12);
//! // on the real axis d agrees with the phase map
//! let d = ctx.d(Complex64::new(0.7, 0.0))?;
//! assert!((d.re - ctx.phase_map().scd(0.7)?.d).abs() < 1e-12);
//! # Ok::<(), shen_elliptic::Error>(())
//! ```

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod field;
pub mod hypergeometric;
pub mod modulus;
pub mod phase_map;
pub mod poles;
pub mod poly;
pub mod quadrature;
pub mod sample;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use exec::Execution;
pub use field::ShenContext;
pub use modulus::Modulus;
pub use num_complex::Complex64;
pub use phase_map::PhaseMap;
pub use weierstrass::{Invariants, Lattice, Weierstrass};

/// Complex number used for every function evaluated off the real axis.
pub type ComplexValue = Complex64;
