//! Deformation families of zero-mean-curvature surfaces built from
//! Weierstrass data `(F, G)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`holofn`]: closed-form holomorphic expressions, simply connected
//!   domains and adaptive path quadrature.
//! * [`weierstrass`]: the three-parameter family `X_{θ,λ,c}`, its potentials
//!   `h, g, T`, metric, dilatation, Jacobian and classical transforms.
//! * [`univalence`]: a numerical univalence oracle for planar harmonic maps
//!   plus convex/starlike classification of image domains.
//! * [`krust`]: graph/non-graph regions in the `|cλ²|` parameter axis and
//!   their cross-validation against the oracle.
//! * [`catalog`]: the Enneper-type, exponential and Scherk examples with
//!   their closed-form potentials.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line live in the companion `zmc` crate.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod geometry;
pub mod holofn;
pub mod krust;
pub mod univalence;
pub mod weierstrass;

pub use num_complex::Complex64 as C64;

pub use catalog::ExampleSpec;
pub use holofn::{DomainShape, DomainSpec, HoloError, HoloExpr};
pub use krust::{RegionClassification, TheoremId};
pub use univalence::{HarmonicMap, ImageClass, UnivalenceReport, Verdict};
pub use weierstrass::{DeformParams, Potentials, SurfacePoint, WeierstrassData};

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
