//! Simpson-type quadrature error bounds along a rotated segment
//! `[a, a + e^{iφ}(b − a)]`.
//!
//! The crate measures the Simpson error `|S(f) − M(f)|` on the segment,
//! checks it against the kernel identity, certifies the convexity
//! hypothesis of `|f′|^q` along the path by sampling, and compares the
//! measured error with four closed-form bounds and the classical
//! fourth-derivative bound.
//!
//! ```
//! use phisimpson::{bounds, domain::PhiInterval, expr::parse, identity, quad::QuadOptions};
//!
//! let f = parse("x^4").unwrap();
//! let iv = PhiInterval::new(0.0, 1.0, 0.0).unwrap();
//! let report = identity::identity_residual(&f, &iv, &QuadOptions::default()).unwrap();
//! assert!(report.residual < 1e-8);
//!
//! let inputs = bounds::BoundInputs::from_function(&f.differentiate(), &iv, 1.0).unwrap();
//! assert!(report.actual() <= bounds::bound_t31(&inputs));
//! ```

pub mod bounds;
pub mod convexity;
pub mod domain;
pub mod emit;
pub mod error;
pub mod expr;
pub mod identity;
pub mod quad;
pub mod run;

pub use error::{Error, Result};
