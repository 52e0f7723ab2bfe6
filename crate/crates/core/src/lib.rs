//! Exact-arithmetic toolkit for Newhouse thickness, Minkowski sums and
//! products of Cantor sets on the real line.

pub mod cli;
pub mod construction;
pub mod constructions;
pub mod cover;
pub mod enclosure;
pub mod error;
pub mod rational;
pub mod setops;
pub mod specfile;
pub mod thickness;
pub mod thresholds;
pub mod union;
pub mod verify;

pub use construction::{AffineImage, BlockCount, Construction, GeometricStack, Scalar, SubdivisionSystem};
pub use cover::{refine, CoverApprox, CoverInterval, Gap};
pub use enclosure::{Enclosure, QuadraticSurd};
pub use error::{Error, Result};
pub use rational::Rational;
pub use union::{normalize_union, Interval, IntervalUnion};
