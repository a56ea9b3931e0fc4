//! Curvature and cohomology checks for torsionful connections on
//! `S² × T²` with a calibrated, parallel-free torsion.
//!
//! The core is generic over the scalar type (`f32` or `f64`); the aliases
//! at the bottom fix it to one of the two.

// Tensor code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod cohomology;
pub mod connection;
pub mod curvature;
pub mod error;
pub mod field;
pub mod forms;
pub mod frame;
pub mod grassmann;
pub mod quadrature;
pub mod report;
pub mod scalar;

pub use connection::{
    affine_coefficients, levi_civita_coefficients, ConnectionCoefficients, Flavor, TorsionParams,
};
pub use curvature::{RiemannTensor, TwoPlane};
pub use error::{GeometryError, Result};
pub use field::ScalarField;
pub use forms::{KForm, MultiIndex};
pub use frame::{FrameVector, Point};
pub use scalar::Scalar;

pub type Point64 = Point<f64>;
pub type FrameVector64 = FrameVector<f64>;
pub type TwoPlane64 = TwoPlane<f64>;
pub type KForm64 = KForm<f64>;
pub type Connection64 = ConnectionCoefficients<f64>;
pub type Params64 = TorsionParams<f64>;

pub type Point32 = Point<f32>;
pub type FrameVector32 = FrameVector<f32>;
pub type TwoPlane32 = TwoPlane<f32>;
pub type KForm32 = KForm<f32>;
pub type Connection32 = ConnectionCoefficients<f32>;
pub type Params32 = TorsionParams<f32>;
