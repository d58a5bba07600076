//! Classical numerical range of a single operator and essential ranges of
//! operator models.

pub mod essential;
pub mod inverse;
pub mod model;
pub mod polygon;
pub mod support;

pub use essential::{caratheodory, essential_range, we_vector, we_vector_from, WeVector};
pub use inverse::inverse_numrange;
pub use model::{OperatorModel, TailStream};
pub use polygon::{Membership, Polygon2D, PolygonKind};
pub use support::{boundary_polygon, boundary_sweep, support_point, BoundarySweep, SupportPoint, DEFAULT_ANGLES};

/// Closure-or-relint membership of `z` in a polygon.
pub fn polygon_membership(poly: &Polygon2D, z: crate::linalg::C64, mode: Membership, tol: f64) -> bool {
    poly.contains(z, mode, tol)
}
