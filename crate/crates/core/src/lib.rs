//! Exact boundary-to-boundary currents in the completely packed O(1) loop
//! model on a strip, computed from the transfer-matrix ground state and from
//! closed formulas in symplectic characters.

pub mod chartoda;
pub mod cli;
pub mod error;
pub mod groundstate;
pub mod linalg;
pub mod linkpat;
pub mod numfield;
pub mod observables;
pub mod point;
pub mod yangbaxter;

pub use error::{Error, Result};
pub use linkpat::LinkPattern;
pub use numfield::{ComplexApprox, CycloNum, Scalar};
pub use point::Point;
