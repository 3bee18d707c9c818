//! Snapping four-bar nets.
//!
//! Dual quaternions and the Study quadric ([`dualquat`]), quad nets in the
//! Study quadric ([`studynet`]), Koenigs nets and Whiteley de-averaging
//! ([`koenigs`]), and discrete rolling of face-isometric nets ([`rolling`]).
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

pub mod dualquat;
pub mod koenigs;
pub mod linalg;
pub mod procrustes;
pub mod rolling;
pub mod studynet;
pub mod scalar;
pub mod tolerance;

pub use scalar::Real;
pub use tolerance::Tolerance;

pub type Vector3 = linalg::Vec3<f64>;
pub type Matrix3 = linalg::Mat3<f64>;
pub type Quat = dualquat::Quaternion<f64>;
pub type DualQuat = dualquat::DualQuaternion<f64>;
pub type Line = dualquat::LineAxis<f64>;
pub type Rotation = dualquat::Rotation3<f64>;
pub type Dh = dualquat::DhParams<f64>;
pub type Tol = Tolerance<f64>;
