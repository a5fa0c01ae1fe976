//! Arbitrary-point evaluation of high-order polynomial expansions on
//! finite-element reference shapes.
//!
//! Fields are stored as samples on a tensor grid of 1D nodes in collapsed
//! (η) coordinates. Evaluation at an arbitrary reference point ξ collapses
//! the point, contracts the grid one dimension at a time with the
//! barycentric kernel, and maps the η-gradient back through the Duffy
//! Jacobian. A Lagrange interpolation-matrix evaluator is provided as the
//! baseline and as an independent oracle.
//!
//! Module map:
//!
//! * [`nodes`]: 1D node sets, barycentric weights, differentiation matrices.
//! * [`bary1d`]: the univariate kernel (value, first and second derivative).
//! * [`tensor`]: dimension-by-dimension evaluation on `[-1,1]^d`.
//! * [`duffy`]: reference shapes, collapse/expand maps and Jacobians.
//! * [`element`]: shape-aware evaluation of a sampled field.
//! * [`lagrange`]: cached and recomputed interpolation-matrix baseline.
//! * [`pointlocate`]: quasi-Newton inverse mapping.
//! * [`bench`]: verification sweeps, timing sweeps and CSV reports.
//! * [`testfields`]: analytic polynomial fields and oracles.

pub mod bary1d;
pub mod bench;
pub mod duffy;
pub mod element;
mod error;
mod instrument;
pub mod lagrange;
pub mod nodes;
pub mod pointlocate;
pub mod tensor;
pub mod testfields;

pub use bary1d::{bary_evaluate, s_sum, Deriv, EvalResult};
pub use duffy::{Shape, ShapeSpec};
pub use element::ElementEvaluator;
pub use error::{Error, Result};
pub use lagrange::{InterpMode, InterpOperator};
pub use nodes::{NodeKind, NodeSet};
pub use pointlocate::{locate, LocateConfig, LocateProblem, LocateResult};
pub use tensor::{FieldValues, TensorBasis};

/// Largest number of 1D nodes per axis.
pub const MAX_POINTS: usize = 64;
