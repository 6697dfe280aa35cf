pub mod alpha;
pub mod certify;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod forms;
pub mod poly;
pub mod suites;

pub use error::{Error, Result};
pub use exact::{Rational, RationalInterval, Sign};
