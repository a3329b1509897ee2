//! Compact convex bodies as exact support-function oracles, with width
//! calculus, Chebyshev balls, constant-width constructions, and the maps
//! between hyperspaces of bodies and pairs of constant (relative) width.

pub mod ball_intersection;
pub mod body;
pub mod calculus;
pub mod chebyshev;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod hyperspace;
pub mod io;
pub mod similarity;
pub mod tol;
pub mod vector;

pub use ball_intersection::BallIntersection;
pub use body::{Body, BodyExpr, SupportSample};
pub use calculus::{Verdict, WidthRange, WidthReport};
pub use chebyshev::{ChebyshevData, ChebyshevOptions};
pub use error::{Error, Result};
pub use grid::{DirectionGrid, GridSpec};
pub use hyperspace::{BodyPair, FiberPoint};
pub use similarity::Similarity;
pub use tol::Tolerances;
pub use vector::Vector;
