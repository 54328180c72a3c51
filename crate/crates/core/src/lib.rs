//! Numerical toolkit for q-starlike functions of order alpha.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: truncated complex power series, the carrier for every function below.
//! - [`qcalc`]: the q-difference operator, q-shifted factorials and Heine's series.
//! - [`starlike`]: the extremal pair `F_{q,α}`, `G_{q,α}`, disk membership and coefficient bounds.
//! - [`herglotz`]: finitely supported circle measures and the functions they generate.
//! - [`products`]: the infinite-product constructor and the map `ρ` onto self-maps of the disk.
//! - [`order`]: grid estimates of the order of q-starlikeness and the closed form for
//!   shifted Heine functions.

pub mod error;
pub mod herglotz;
pub mod order;
pub mod products;
pub mod qcalc;
pub mod selftest;
pub mod series;
pub mod starlike;

mod serde_ext;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::TruncatedSeries;
