pub mod complex;
pub mod error;
pub mod exactnum;
pub mod f2linalg;
pub mod semigroup;
pub mod upsilon;
pub mod upsilon2;

pub use complex::{BifilteredComplex, Generator};
pub use error::{Error, Result};
pub use exactnum::{PiecewiseLinear, Rational};
