//! Frequency-domain simulation of autonomous surface vehicles in irregular seas.
//!
//! The computation is split in two phases. Phase one builds a [`WaveField`]
//! from a wind-parameterized directional spectrum and precomputes a
//! [`ForceAmplitudeTable`] for each hull: one pressure amplitude per component
//! wave and pressure point. Phase two steps the rigid-body equations of motion,
//! evaluating only cosines of the precomputed amplitudes each step, so the
//! per-step cost is linear in the number of component waves and independent of
//! any hull mesh.
//!
//! Conventions used throughout:
//!
//! * World frame: `x` East, `y` North, `z` up. Headings are measured clockwise
//!   from North, so a heading `mu` points along `(sin mu, cos mu)`.
//! * Degrees of freedom are ordered surge, sway, heave, roll, pitch, yaw.
//!   Surge is positive forward, sway positive to starboard, heave positive up
//!   and yaw positive clockwise seen from above (it is the vehicle heading).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod fmt;
pub mod force;
pub mod stats;
pub mod swarm;
pub mod vehicle;
pub mod wave;

pub use dynamics::{AsvState, Dof, RigidBodyMatrices, Vector6};
pub use error::{Error, Result};
pub use force::{ForceAmplitudeTable, HullGeometry, PitchLever, PressurePoint};
pub use swarm::{ExecutionMode, PerfReport, SwarmRun, SwarmVehicle};
pub use vehicle::{Asv, AsvSpec, DofMask, HullPrimitive, ThrustSegment, Thruster};
pub use wave::{RegularWave, SeaStateParams, WaveField};

/// Gravitational acceleration, m/s².
pub const GRAVITY: f64 = 9.81;

/// Default water density (sea water), kg/m³.
pub const SEA_WATER_DENSITY: f64 = 1025.0;

/// Fresh water density used for towing-tank comparisons, kg/m³.
pub const FRESH_WATER_DENSITY: f64 = 1000.0;
