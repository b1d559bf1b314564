//! Exact Groebner basis and solution-set machinery for the coefficient system of
//! `C = x + C_{-1} x^{-1} + C_{-2} x^{-2} + …` subject to `C^3 ∈ K[x]`,
//! `(C^m)_{-1} = 0` and `(C^m)_{-2} + y = 0`.

pub mod algebra;
pub mod error;
pub mod groebner;
pub mod laurent;
pub mod roots;
pub mod run;
pub mod solve;
pub mod system;
pub mod univariate;
pub mod verify;

pub use error::{Error, Result};
