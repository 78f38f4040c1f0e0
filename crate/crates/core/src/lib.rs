//! Bohr radii, growth envelopes and covering radii for coefficient-constrained
//! families of planar harmonic mappings, with independent numerical oracles
//! to check every claimed radius.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`). The aliases below fix it to `f64`, which is what the
//! command-line tool and the acceptance tests use.
//!
//! ```
//! use bohrlab::{solver, Instance};
//!
//! let rh0 = Instance::RH0 { beta: 2.0 };
//! let r = solver::bohr_radius_for(&rh0, 1e-12).unwrap();
//! assert!((r.value - (2f64.sqrt() - 1.0)).abs() < 1e-15);
//! ```

// Range checks are written `!(x > 0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod coeffs;
pub mod error;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod verify;
pub mod wclass;

pub use classes::{ClassInstance, ClassSpec, MembershipVerdict, ParamValue, Sign, Variant};
pub use coeffs::HarmonicPolynomialMap;
pub use error::{Error, Result};
pub use scalar::Real;
pub use solver::{Method, RadiusResult};
pub use wclass::{SeriesValue, WParams};

pub type Map = HarmonicPolynomialMap<f64>;
pub type Spec = ClassSpec<f64>;
pub type Instance = ClassInstance<f64>;
pub type Radius = RadiusResult<f64>;
pub type W = WParams<f64>;
pub type Series = SeriesValue<f64>;
pub type Distance = oracle::DistanceEstimate<f64>;

pub type Map32 = HarmonicPolynomialMap<f32>;
pub type Instance32 = ClassInstance<f32>;
pub type Radius32 = RadiusResult<f32>;
