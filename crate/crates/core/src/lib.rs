//! Exact computation of sphericity obstructions for real-analytic
//! hypersurfaces `M ⊂ ℂ^{n+1}` given as complexified graphs.

pub mod curvature;
pub mod error;
pub mod hypersurface;
pub mod pde;
pub mod series;

pub use error::{Error, Result};
pub use series::{GaussianRational, Multidegree, TruncatedSeries, Vars};
