//! Numerics for hyperbolic harmonic maps between annuli in the Poincaré ball.
//!
//! * [`geometry`]: ball-model distance, geodesic polar coordinates, isometries.
//! * [`linalg`]: singular values, quasiconformality, cofactors and the sharp
//!   cross-product inequality.
//! * [`radial`]: the radial harmonic-map ODE, its IVP/BVP solvers and the
//!   Euclidean radial family.
//! * [`bounds`]: the lower bound on the target modulus in its three forms.
//! * [`tension`]: finite-difference tension fields and energy density.
//! * [`quadrature`]: surface and volume integrals of `|D Theta|^2`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod linalg;
pub mod maps;
pub mod quadrature;
pub mod radial;
pub mod tension;

pub use bounds::{BoundForm, NitscheReport};
pub use error::{Error, Result};
pub use geometry::{AnnulusPair, BallPoint, GeodesicPolar, MobiusMap};
pub use linalg::MatrixAnalysis;
pub use maps::MapField;
pub use radial::{RadialProfile, ShootingResult};
pub use tension::TensionSample;
