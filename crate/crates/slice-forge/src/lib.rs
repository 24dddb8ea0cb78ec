//! Slice regular functions of a quaternionic variable, made executable.
//!
//! The crate evaluates slice regular functions through their stem functions,
//! computes the two-unit extension and representation formulas pointwise,
//! builds parameterized quaternionic domains from planar width profiles, and
//! classifies domains as speared / slice / spear-simple / S-connected /
//! main-sail / hinged at a chosen raster resolution.
//!
//! Start from the runnable examples (`cargo run -p slice-forge --example
//! representation_formula`), or use the `sliceforge` binary for the
//! classification table, verification suites, extension and chain queries.
//!
//! Module map:
//! - [`algebra`]: quaternions, their complexification, imaginary units and
//!   slice embeddings;
//! - [`planar`]: rasterized upper-half-plane regions, components, distances;
//! - [`domains`]: latitude-parameterized axial domains, sails, spine/core;
//! - [`slicefun`]: stem functions, power series, induced slice functions;
//! - [`extension`]: representation formula, stem families, global extension,
//!   derivatives and residuals;
//! - [`hinge`]: the equivalence closure, chain certificates and the domain
//!   classifiers;
//! - [`verify`]: seeded property suites;
//! - [`cli`]: the command front end used by the `sliceforge` binary.
//!
//! All values are immutable after construction and all evaluation is pure;
//! everything can be shared across threads. The `SLICE_FORGE_THREADS`
//! environment variable caps the worker pool of the parallel drivers.

pub mod algebra;
pub mod cli;
pub mod domains;
pub mod extension;
pub mod hinge;
pub mod planar;
pub mod report;
pub mod slicefun;
pub mod verify;

mod error;

pub use error::{Error, Result};
