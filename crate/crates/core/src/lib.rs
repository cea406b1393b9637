//! Two-weight point sets in PG(3n-1, q) built as a union of baseless cones over
//! Singer-subgroup orbits, and equivalently as the orbit of `(1, 1)` under
//! `(x, y) -> (beta x, gamma y)` together with the subspace Π.
//!
//! The crate builds both constructions, checks they agree, and certifies the
//! hyperplane spectrum together with the derived two-weight code and strongly
//! regular Cayley graph.

pub mod analysis;
pub mod construction;
pub mod error;
pub mod field;
pub mod io;
pub mod pipeline;
pub mod projective;
pub mod singer;

pub use error::{Error, Result};
pub use field::{BaseField, Elem, Subfield, Tower, TowerOptions};
pub use projective::{HyperplaneFunctional, PointSet, ProjPoint, Space};
pub use construction::{Construction, Correspondence, Params, Provenance, TwoWeightSet};
pub use analysis::{blowup_weights, expected_weights, hyperplane_spectrum, SpectrumCertificate, Verdict};
