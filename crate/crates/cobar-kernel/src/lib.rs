//! Exact integral cobar constructions on simplicial chains, the
//! Alexander-Whitney cobar diagonal, Baues's coproduct, and machinery for
//! checking the identities relating them.

pub mod chains;
pub mod cobar;
pub mod dcsh;
pub mod diagonal;
pub mod error;
pub mod ezaw;
pub mod homology;
pub mod linear;
pub mod report;
pub mod simplicial;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use linear::{Coeff, Graded, Lin};
