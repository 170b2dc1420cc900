//! Cusp torus geometry, short slopes, and how many of them there can be.
//!
//! - [`cusp_geometry`]: the flat cusp torus, slopes, lengths, angles, intersection numbers.
//! - [`slope_search`]: every primitive slope below a length threshold.
//! - [`bound_calculus`]: from (length threshold, area floor) to a bound on the slope count.
//! - [`halfplane_geometry`]: horodisks tangent to a geodesic in the upper half-plane.
//! - [`surface_audit`]: the cusp-length inequalities for essential surfaces, as predicates.
//! - [`diagram`]: SVG lattice pictures.
//! - [`report_io`]: cusp files and analysis reports.

pub mod bound_calculus;
pub mod cusp_geometry;
pub mod diagram;
pub mod halfplane_geometry;
pub mod report_io;
pub mod slope_search;
pub mod surface_audit;

pub use bound_calculus::{BoundQuery, BoundReport, LemmaVerdict, ProjectivePoint};
pub use cusp_geometry::{CuspShape, Slope, Unimodular, Vec2};
pub use report_io::AnalysisReport;
pub use slope_search::{ShortSlopeReport, SlopeClass, SlopeEntry};
pub use surface_audit::{SurfaceAudit, SurfaceType, Verdict};
