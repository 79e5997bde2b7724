//! Disk rational Bézier curves and their optimal multi-degree reduction.
//!
//! A disk rational Bézier curve carries a tolerance radius along a rational
//! center curve. This crate evaluates, subdivides and elevates such curves,
//! and reduces their degree in three stages (weights, centers, radii) so that
//! the lower-degree curve bounds the original one.
//!
//! ```
//! use diskbez::{reduce, DiskRationalBezier, Point, ReductionConfig};
//!
//! let c = DiskRationalBezier::from_parts(
//!     &[Point::new(0.0, 0.0), Point::new(1.0, 2.0), Point::new(3.0, 2.0), Point::new(4.0, 0.0)],
//!     &[0.5, 1.0, 1.0, 0.5],
//!     &[1.0, 2.0, 2.0, 1.0],
//! )
//! .unwrap();
//! let out = reduce(&c, &ReductionConfig::new(2)).unwrap();
//! assert_eq!(out.reduced.degree(), 2);
//! assert!(out.reduced.radius_at(0.5) >= c.radius_at(0.5));
//! ```

pub mod bernstein;
pub mod curve;
pub mod disk;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod qp;
pub mod reduction;
pub mod svg;

pub use bernstein::{bernstein, binomial, gram_cross, gram_same, rational_basis, BernsteinPoly};
pub use curve::{CurvePoint, DeCasteljau, DiskRationalBezier};
pub use disk::{
    add_disks, linear_combination, oblique_project, perspective_project, scale_disk, Disk, HomogeneousDisk,
    Point, RadiusConvention,
};
pub use error::{Error, Result, Stage};
pub use exec::Execution;
pub use metrics::{measure, ErrorReport};
pub use qp::{solve_qp, QpProblem, QpSolution};
pub use reduction::{
    compute_d, reduce, reduce_batch, reduce_radius, reduce_weights, solve_center, Continuity, DistanceMode,
    ReductionConfig, ReductionResult,
};
