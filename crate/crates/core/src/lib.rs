//! Discrete magnetic Laplacians on graphs whose oriented edges carry elements
//! of a cyclic group `S¹ₖ` or of `U(1)`.
//!
//! The crate covers the full pipeline from a signed graph to certified
//! clusters:
//!
//! * [`graph`]: signed and mixed graphs, switching, boundary and volume.
//! * [`spectral`]: the Hermitian form of the operator, a dense eigensolver
//!   and Rayleigh quotients.
//! * [`frustration`]: balance detection, exact cyclic frustration indices and
//!   a `U(1)` upper-bound heuristic.
//! * [`cheeger`]: ratio functionals, exact multi-way Cheeger constants and
//!   threshold sweep cuts with machine-checkable certificates.
//! * [`multiway`]: higher-order clustering through the lens-space /
//!   complex-projective pseudometric on the spectral embedding.
//!
//! The crate is `no_std` with `alloc`. The `parallel` feature pulls in `std`
//! and rayon for the enumeration-heavy routines; results do not depend on it.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cheeger;
mod error;
pub mod frustration;
pub mod graph;
pub mod group;
pub mod linalg;
pub(crate) mod math;
pub mod multiway;
mod par;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{MixedGraph, OrderedKPartition, SignedGraph, Subpartition, SwitchingFunction, VertexSet};
pub use group::{GroupElement, SignatureGroup};
pub use num_complex::Complex64;

/// Default cap on the number of evaluated assignments for exhaustive routines.
pub const ENUMERATION_CAP: u64 = 30_000_000;
