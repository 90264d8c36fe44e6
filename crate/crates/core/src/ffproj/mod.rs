//! Polyhedral complexes and the Federer–Fleming projection of PL surfaces
//! onto their 2-skeleton.
//!
//! Roundness is inradius over the radius of the smallest enclosing ball,
//! both measured inside the cell's affine hull; it lies in `(0, 1]` and
//! equals 1 for points.

mod cell;
mod complex;
mod grid;
mod polygon;
mod project;

pub use cell::{ConvexCell, Facet};
pub use complex::{CellId, PolyComplex};
pub use grid::{build_grid_complex, tent_surface, GridComplex};
pub use polygon::{area2d, convex_order, coverage, point_triangle_distance, Coverage, Polygon};
pub use project::{
    choose_center, ff_project, radial_project, CenterChoice, FfOptions, FfResult, ProjectionTrace,
    Stage, TraceEntry,
};

use crate::homology::HomologyError;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum FfError {
    #[error("degenerate cell: {0}")]
    DegenerateCell(String),
    #[error("projection center lies on the set")]
    CenterOnSet,
    #[error("projection center is not interior to the cell")]
    CenterNotInterior,
    #[error("no sampled center avoids the set")]
    NoValidCenter,
    #[error("set is not inside the complex (area {input}, inside {inside})")]
    OutsideComplex { input: f64, inside: f64 },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}
