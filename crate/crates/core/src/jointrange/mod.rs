//! Joint and Asplund–Ptak numerical ranges of operator tuples.

pub mod catalog;
pub mod optimizer;
pub mod probe;
pub mod tuple;

pub use optimizer::{min_distance, ProbeConfig, ProbeReport, RangeMode, StepRule};
pub use probe::{convexity_probe, SegmentReport, SegmentSample};
pub use tuple::{ap_point, joint_point, JointPoint, OperatorTuple};
