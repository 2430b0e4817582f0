//! Continuous sections of `Conf_{n,m}(S²) → Conf_n(S²)`: constructions that
//! add `m` new points to `n` points on the Riemann sphere, continuously in
//! the old points, together with the exact braid-group algebra behind them.

pub mod braid;
pub mod elliptic;
pub mod feasibility;
pub mod io;
pub mod mobius;
pub mod monodromy;
pub mod poly;
pub mod spacelevel;
mod error;

pub use error::{Error, Result};
