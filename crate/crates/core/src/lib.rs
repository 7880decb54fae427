//! Elliptic tubes over properly convex domains of RPⁿ inside CPⁿ.
//!
//! The crate is organized bottom-up:
//!
//! - [`projective`]: homogeneous points, functionals, charts, lines, cross-ratios.
//! - [`domain`]: properly convex domains (vertex polytopes, functional families,
//!   ellipsoids), line clipping and the Hilbert metric.
//! - [`tube`]: the elliptic tube, slice disks, the boundary functions `p`, `u`
//!   and the distance to the real core.
//! - [`duality`]: dual complements, separating hyperplanes and tangent sets.
//! - [`tangent`]: the homeomorphism from a tube to the tangent bundle of its base.
//! - [`verify`]: sampling checks that emit [`report::VerifierReport`]s.
//! - [`complexify`]: cyclic convex projective manifolds and their complexification.
//! - [`spec`]: the domain-spec text format.
//! - [`shapes`]: a few standard domains.

// `!(x > t)` is used on purpose so that NaN falls on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod complexify;
pub mod domain;
pub mod duality;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod lp;
pub mod projective;
pub mod report;
pub mod shapes;
pub mod spec;
pub mod tangent;
pub mod tube;
pub mod verify;

pub use domain::{ConvexDomain, Interval, Representation};
pub use error::{Error, Result};
pub use exec::Execution;
pub use projective::{
    ComplexFunctional, ComplexPoint, Chart, HPoint, Functional, ProjectiveMap, RealFunctional, RealLine, RealPoint,
};
pub use report::VerifierReport;
pub use tangent::TangentVector;
pub use tube::{SliceDisk, Tube};

pub use num_complex::Complex64;
