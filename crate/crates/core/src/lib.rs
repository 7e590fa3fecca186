//! Approximate lopsided universal sets, representative families and the
//! fixed-parameter tradeoff algorithms for P2-packing, 3-set packing and
//! 3D matching built on them.

pub mod algorithms;
pub mod approx;
pub mod bipartite;
pub mod budget;
pub mod calc;
pub mod error;
pub mod exact;
pub mod format;
mod hitting;
pub mod matching;
pub mod model;
pub mod oracles;
pub mod rep;
pub mod subset;
pub mod universal;

pub use budget::Budget;
pub use error::{Error, Result};
pub use subset::Subset;
