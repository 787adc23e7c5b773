//! Globally optimal collinearity-aware polyline simplification for
//! building-footprint polygonization.
//!
//! The crate covers the full mask-to-polygon pipeline short of any learned
//! refinement:
//!
//! - [`geometry`]: points, polylines, polygons, distances, resampling;
//! - [`contour`]: binary masks, largest-component selection, border
//!   tracing on pixel corners, and fixed-length polyline windows;
//! - [`simplify`]: the exact dynamic-programming simplifier that minimizes
//!   summed point-to-line deviation plus a per-vertex charge, with a
//!   brute-force optimality oracle and a Douglas-Peucker baseline;
//! - [`losses`]: Hungarian vertex matching, smooth-L1 and angular losses,
//!   and the collinearity loss with its analytic gradient;
//! - [`metrics`]: raster IoU, C-IoU, N-ratio and the maximum tangent angle
//!   error.
//!
//! All operations are pure and deterministic; batch callers may evaluate
//! them in parallel with no shared mutable state.

pub mod contour;
pub mod geometry;
pub mod losses;
pub mod metrics;
pub mod simplify;

mod error;
pub use error::{Error, Result};
