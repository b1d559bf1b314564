//! Exact rational arithmetic, sparse multivariate polynomials and matrix monomial orders.

pub mod division;
pub mod json;
pub mod monomial;
pub mod polynomial;
pub mod rational;

pub use division::{divide, normal_form, Division};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{poly_arith, ArithOp, Polynomial, Weight};
pub use rational::{genbinom, Rational};
