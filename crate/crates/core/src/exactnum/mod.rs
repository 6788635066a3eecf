//! Exact rationals and exact piecewise-linear functions on `[0, 2]`.

mod piecewise;
mod rational;

pub use piecewise::PiecewiseLinear;
pub use rational::Rational;
