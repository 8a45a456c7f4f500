//! Geometry of the Aloff-Wallach spaces `W(p, q) = SU(3)/T(p, q)`.
//!
//! The crate computes volumes, sectional-curvature pinching and
//! injectivity-radius bounds for the homogeneous metric induced from the
//! Wallach metric on `SU(3)`, and cross-checks every closed form against a
//! numerical route.

pub mod curvature;
pub mod error;
pub mod euler;
pub mod injectivity;
pub mod pinching;
pub mod report;
pub mod structure;
pub mod su3;
pub mod verify;
pub mod volumes;

pub use error::{Error, Result};
