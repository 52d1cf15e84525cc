//! Classical and approximate variation of functions sampled on finite grids.
//!
//! A [`SampledFunction`] is a strictly increasing grid plus one value per grid
//! point in a metric space (real line, real line with a hole, Euclidean space,
//! or a finite metric space). The crate computes
//!
//! * classical functionals ([`variations`]): Jordan variation, oscillation,
//!   modulus of variation, `N_eps` counts, Waterman and phi-variation, Schrader
//!   oscillation;
//! * the eps-variation `V_eps(f) = inf { V(g) : sup_t d(f(t), g(t)) <= eps }`
//!   ([`approxvar`]), exactly with witnesses where the space allows it;
//! * closed-form reference values for standard families ([`closed_forms`]);
//! * finite-scale selection experiments on function families ([`selection`]).
//!
//! ```
//! use approxvar::{approx_variation, SampledFunction};
//!
//! let f = SampledFunction::real(&[0.0, 0.25, 0.5, 0.75, 1.0], &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
//! let r = approx_variation(&f, 0.1).unwrap();
//! assert!((r.value - 0.8).abs() < 1e-12);
//! ```

pub mod approxvar;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod oracle;
pub mod sampled;
pub mod selection;
pub mod spaces;
pub mod variations;

pub use crate::approxvar::{
    approx_variation, approx_variation_with, epsilon_variation_function, partition_lower_bound, profile,
    strict_variant, witness, EpsilonVariationResult, Method, VariationProfile,
};
pub use crate::error::{Error, Result};
pub use crate::sampled::{
    Coord, FunctionFamily, GeneratorSpec, GridDomain, PointTag, SampledFunction,
};
pub use crate::spaces::{MetricSpace, Point, DEFAULT_TOL};
