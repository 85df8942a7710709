//! Hypersparse associative arrays over pluggable semirings, a hierarchical
//! layered array for streaming updates, and an R-MAT streaming benchmark.

pub mod assoc;
pub mod bench;
pub mod error;
pub mod hier;
pub mod io;
pub mod keyset;
pub mod rmat;
pub mod semiring;

pub use assoc::{AssocArray, KeySelection, TripleList};
pub use error::{Error, Result};
pub use hier::{CutSpec, HierArray};
pub use keyset::KeySet;
pub use semiring::{Semiring, Value};
