//! Decoupled 6-DOF rigid-body equation of motion.
//!
//! `(M + M_A) a + C(v) v + K Δx = F`, with diagonal inertia, added mass and
//! hydrostatic stiffness, and quadratic drag standing in for all damping.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::force::HullGeometry;
use crate::wave::normalize_angle;
use crate::GRAVITY;

/// Degree of freedom, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dof {
    Surge,
    Sway,
    Heave,
    Roll,
    Pitch,
    Yaw,
}

impl Dof {
    pub const ALL: [Dof; 6] = [Dof::Surge, Dof::Sway, Dof::Heave, Dof::Roll, Dof::Pitch, Dof::Yaw];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Dof::Surge => "surge",
            Dof::Sway => "sway",
            Dof::Heave => "heave",
            Dof::Roll => "roll",
            Dof::Pitch => "pitch",
            Dof::Yaw => "yaw",
        }
    }

    pub fn from_name(name: &str) -> Option<Dof> {
        Dof::ALL.into_iter().find(|d| d.name() == name)
    }
}

/// A generalized 6-vector (force/moment, velocity, or a matrix diagonal).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector6(pub [f64; 6]);

impl Vector6 {
    pub const fn zeros() -> Self {
        Vector6([0.0; 6])
    }

    pub fn from_fn(f: impl FnMut(usize) -> f64) -> Self {
        Vector6(std::array::from_fn(f))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn component_mul(&self, other: &Vector6) -> Vector6 {
        Vector6::from_fn(|i| self.0[i] * other.0[i])
    }

    pub fn dot(&self, other: &Vector6) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }
}

impl Index<usize> for Vector6 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector6 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Index<Dof> for Vector6 {
    type Output = f64;
    fn index(&self, d: Dof) -> &f64 {
        &self.0[d.index()]
    }
}

impl IndexMut<Dof> for Vector6 {
    fn index_mut(&mut self, d: Dof) -> &mut f64 {
        &mut self.0[d.index()]
    }
}

impl Add for Vector6 {
    type Output = Vector6;
    fn add(self, rhs: Vector6) -> Vector6 {
        Vector6::from_fn(|i| self.0[i] + rhs.0[i])
    }
}

impl AddAssign for Vector6 {
    fn add_assign(&mut self, rhs: Vector6) {
        for i in 0..6 {
            self.0[i] += rhs.0[i];
        }
    }
}

impl Sub for Vector6 {
    type Output = Vector6;
    fn sub(self, rhs: Vector6) -> Vector6 {
        Vector6::from_fn(|i| self.0[i] - rhs.0[i])
    }
}

impl Neg for Vector6 {
    type Output = Vector6;
    fn neg(self) -> Vector6 {
        Vector6::from_fn(|i| -self.0[i])
    }
}

impl Mul<f64> for Vector6 {
    type Output = Vector6;
    fn mul(self, rhs: f64) -> Vector6 {
        Vector6::from_fn(|i| self.0[i] * rhs)
    }
}

/// Kinematic state of one vehicle.
///
/// `position` is the world position of the centre of gravity, with `z` the
/// heave offset from the equilibrium floating plane. `attitude` is roll, pitch
/// and yaw; yaw is the heading, clockwise from North. `velocity` and
/// `acceleration` are body-frame (surge, sway, heave, roll, pitch and yaw rates).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AsvState {
    pub position: [f64; 3],
    pub attitude: [f64; 3],
    pub velocity: Vector6,
    pub acceleration: Vector6,
    /// Simulation clock, s.
    pub time: f64,
    /// Number of steps taken.
    pub step: u64,
}

impl AsvState {
    pub fn at(position: [f64; 3], attitude: [f64; 3]) -> Self {
        let mut attitude = attitude;
        attitude[2] = normalize_angle(attitude[2]);
        Self {
            position,
            attitude,
            ..Self::default()
        }
    }

    pub fn roll(&self) -> f64 {
        self.attitude[0]
    }

    pub fn pitch(&self) -> f64 {
        self.attitude[1]
    }

    pub fn yaw(&self) -> f64 {
        self.attitude[2]
    }

    /// Horizontal speed over ground, m/s.
    pub fn speed(&self) -> f64 {
        self.velocity[0].hypot(self.velocity[1])
    }

    /// Direction of horizontal motion, clockwise from North; the yaw when (nearly) stopped.
    pub fn course(&self) -> f64 {
        if self.speed() > 1e-6 {
            normalize_angle(self.yaw() + self.velocity[1].atan2(self.velocity[0]))
        } else {
            self.yaw()
        }
    }

    /// World-frame velocity `(vx, vy, vz)`, m/s.
    pub fn world_velocity(&self) -> [f64; 3] {
        let (s, c) = self.yaw().sin_cos();
        let (u, v) = (self.velocity[0], self.velocity[1]);
        [u * s + v * c, u * c - v * s, self.velocity[2]]
    }

    /// Displacement from the equilibrium floating attitude, per DOF.
    pub fn restoring_displacement(&self) -> Vector6 {
        Vector6([0.0, 0.0, self.position[2], self.attitude[0], self.attitude[1], 0.0])
    }
}

/// Diagonal mass, added-mass, stiffness and quadratic drag coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyMatrices {
    /// kg and kg·m².
    pub mass: Vector6,
    pub added_mass: Vector6,
    /// N/m and N·m/rad; zero in surge, sway and yaw.
    pub stiffness: Vector6,
    /// N/(m/s)² and N·m/(rad/s)².
    pub drag: Vector6,
}

impl RigidBodyMatrices {
    pub fn new(mass: Vector6, added_mass: Vector6, stiffness: Vector6, drag: Vector6) -> Result<Self> {
        for i in 0..6 {
            if !(mass[i] > 0.0 && added_mass[i] > 0.0) {
                return Err(Error::config(format!(
                    "{} mass and added mass must be positive",
                    Dof::ALL[i].name()
                )));
            }
            if !(stiffness[i] >= 0.0 && drag[i] >= 0.0) {
                return Err(Error::config(format!(
                    "{} stiffness and drag must be non-negative",
                    Dof::ALL[i].name()
                )));
            }
        }
        for d in [Dof::Surge, Dof::Sway, Dof::Yaw] {
            if stiffness[d] != 0.0 {
                return Err(Error::config(format!("{} has no hydrostatic stiffness", d.name())));
            }
        }
        Ok(Self {
            mass,
            added_mass,
            stiffness,
            drag,
        })
    }

    /// Diagonal of `M + M_A`.
    pub fn inertia(&self) -> Vector6 {
        self.mass + self.added_mass
    }

    /// Undamped natural frequency of a restored DOF, rad/s.
    pub fn natural_frequency(&self, dof: Dof) -> f64 {
        (self.stiffness[dof] / self.inertia()[dof]).sqrt()
    }

    /// `½vᵀ(M+M_A)v + ½ΔxᵀKΔx` for a state.
    pub fn mechanical_energy(&self, state: &AsvState) -> f64 {
        let v = state.velocity;
        let dx = state.restoring_displacement();
        0.5 * v.component_mul(&self.inertia()).dot(&v) + 0.5 * dx.component_mul(&self.stiffness).dot(&dx)
    }
}

/// Fraction of the rigid-body inertia used as rotational added inertia.
pub const ROTATIONAL_ADDED_INERTIA_FRACTION: f64 = 0.2;

/// Added mass of the equivalent elliptical cylinder (semi-axes `L/2`, `B/2`, height `T`).
///
/// `rigid_inertia` holds the roll, pitch and yaw inertias that the rotational
/// entries are a `rotational_fraction` of.
pub fn added_mass_matrix(geom: &HullGeometry, rho: f64, rigid_inertia: [f64; 3], rotational_fraction: f64) -> Vector6 {
    let (a, b, t) = (0.5 * geom.length, 0.5 * geom.breadth, geom.draught);
    let pi = std::f64::consts::PI;
    Vector6([
        rho * pi * b * b * t,
        rho * pi * a * a * t,
        4.0 / 3.0 * rho * (a * b).powf(1.5),
        rotational_fraction * rigid_inertia[0],
        rotational_fraction * rigid_inertia[1],
        rotational_fraction * rigid_inertia[2],
    ])
}

/// Quadratic drag `-c|v|v` per DOF.
#[inline]
pub fn drag_force(drag: &Vector6, velocity: &Vector6) -> Vector6 {
    Vector6::from_fn(|i| -drag[i] * velocity[i].abs() * velocity[i])
}

/// Dimensionless drag coefficients, one per DOF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragCoefficients(pub [f64; 6]);

impl Default for DragCoefficients {
    fn default() -> Self {
        DragCoefficients([1.0; 6])
    }
}

/// Dimensional quadratic drag from coefficients and the underwater hull.
///
/// Translational: `½ρC_D A` over the projected area. Rotational: a plate of
/// width `w` and half-span `s` spinning about its centre gives `ρC_D w s⁴/4`.
pub fn drag_matrix(geom: &HullGeometry, rho: f64, coefficients: &DragCoefficients) -> Vector6 {
    let c = coefficients.0;
    let (l, b, t) = (geom.length, geom.breadth, geom.draught);
    let plate = |cd: f64, width: f64, half_span: f64| rho * cd * width * half_span.powi(4) / 4.0;
    Vector6([
        0.5 * rho * c[0] * b * t,
        0.5 * rho * c[1] * l * t,
        0.5 * rho * c[2] * geom.waterplane_area,
        plate(c[3], l, 0.5 * b),
        plate(c[4], b, 0.5 * l),
        plate(c[5], t, 0.5 * l),
    ])
}

/// Hydrostatic stiffness at the floating draught.
///
/// Heave from the waterplane area; roll and pitch from the metacentric
/// heights `GM = I_wp/∇ − (KG − KB)`. Fails if the vehicle does not float
/// upright with positive stability.
pub fn stiffness_matrix(geom: &HullGeometry, mass: f64, rho: f64) -> Result<Vector6> {
    if geom.draught >= geom.height {
        return Err(Error::config(format!(
            "draught {} m is not below hull height {} m",
            geom.draught, geom.height
        )));
    }
    let volume = geom.displaced_volume;
    let buoyant_mass = rho * volume;
    static WARNED: std::sync::atomic::AtomicBool = std::sync::atomic::AtomicBool::new(false);
    if ((buoyant_mass - mass) / mass).abs() > 0.05 && !WARNED.swap(true, std::sync::atomic::Ordering::Relaxed) {
        log::warn!(
            "displacement {:.4} kg differs from mass {:.4} kg by more than 5%",
            buoyant_mass,
            mass
        );
    }
    let bg = geom.cog_height - 0.5 * geom.draught;
    let gm_roll = geom.waterplane_inertia_roll / volume - bg;
    let gm_pitch = geom.waterplane_inertia_pitch / volume - bg;
    if gm_roll <= 0.0 || gm_pitch <= 0.0 {
        return Err(Error::config(format!(
            "non-positive metacentric height (roll {gm_roll:.4} m, pitch {gm_pitch:.4} m); the vehicle capsizes"
        )));
    }
    let weight = rho * GRAVITY * volume;
    Ok(Vector6([
        0.0,
        0.0,
        rho * GRAVITY * geom.waterplane_area,
        weight * gm_roll,
        weight * gm_pitch,
        0.0,
    ]))
}

/// Advances a state by `dt` with semi-implicit Euler.
///
/// DOFs flagged in `frozen` get zero acceleration and velocity, so their
/// coordinates stay exactly where they are.
pub fn integrate_step_constrained(
    state: &AsvState,
    net_force: &Vector6,
    matrices: &RigidBodyMatrices,
    dt: f64,
    frozen: [bool; 6],
) -> Result<AsvState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::domain(format!("time step must be positive, got {dt}")));
    }
    if !net_force.is_finite() {
        return Err(Error::Numerical {
            step: state.step,
            message: format!("non-finite force {:?}", net_force.0),
        });
    }
    let inertia = matrices.inertia();
    let drag = drag_force(&matrices.drag, &state.velocity);
    let restoring = matrices.stiffness.component_mul(&state.restoring_displacement());
    let mut acceleration = Vector6::zeros();
    let mut velocity = state.velocity;
    for i in 0..6 {
        if frozen[i] {
            velocity[i] = 0.0;
        } else {
            acceleration[i] = (net_force[i] + drag[i] - restoring[i]) / inertia[i];
            velocity[i] += acceleration[i] * dt;
        }
    }

    let (s, c) = state.yaw().sin_cos();
    let (u, v) = (velocity[0], velocity[1]);
    let mut next = *state;
    next.position[0] += (u * s + v * c) * dt;
    next.position[1] += (u * c - v * s) * dt;
    next.position[2] += velocity[2] * dt;
    next.attitude[0] += velocity[3] * dt;
    next.attitude[1] += velocity[4] * dt;
    if !frozen[5] {
        next.attitude[2] = normalize_angle(state.attitude[2] + velocity[5] * dt);
    }
    next.velocity = velocity;
    next.acceleration = acceleration;
    next.time += dt;
    next.step += 1;

    let finite = next.position.iter().chain(next.attitude.iter()).all(|v| v.is_finite()) && next.velocity.is_finite();
    if !finite {
        return Err(Error::Numerical {
            step: state.step,
            message: "state became non-finite".into(),
        });
    }
    Ok(next)
}

/// Advances a state by `dt`: `v ← v + a·dt`, then `x ← x + v·dt`.
pub fn integrate_step(
    state: &AsvState,
    net_force: &Vector6,
    matrices: &RigidBodyMatrices,
    dt: f64,
) -> Result<AsvState> {
    integrate_step_constrained(state, net_force, matrices, dt, [false; 6])
}
