//! Combinatorics and linear algebra of moduli of quiver representations.
//!
//! The crate covers stability of dimension vectors, the double framing
//! construction and its reduction, dimension formulas for endomorphisms,
//! vector fields and first Hochschild cohomology, and a brute-force stability
//! oracle over small prime fields.
//!
//! All decisions are sign decisions on exact integers; linear algebra runs
//! over arbitrary-precision rationals or exact prime fields.

pub mod cohomology;
pub mod error;
pub mod field;
pub mod framing;
pub mod linalg;
pub mod oracle;
pub mod quiver;
pub mod stability;
pub mod vector;

pub use error::{Error, Result};
pub use quiver::{weight_one_character, Acyclicity, Arrow, Path, PathCountMatrix, Quiver};
pub use stability::{assumptions_report, Assumption, AssumptionsReport, BSets, Ternary};
pub use vector::{Character, DimensionVector, StabilityParameter};
