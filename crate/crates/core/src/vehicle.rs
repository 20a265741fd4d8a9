//! A complete vehicle: specification, derived matrices and per-step force composition.

use crate::dynamics::{
    added_mass_matrix, drag_matrix, integrate_step_constrained, stiffness_matrix, AsvState, Dof, DragCoefficients,
    RigidBodyMatrices, Vector6, ROTATIONAL_ADDED_INERTIA_FRACTION,
};
use crate::error::{Error, Result};
use crate::force::{ForceAmplitudeTable, HullGeometry, PitchLever};
use crate::wave::WaveField;
use crate::FRESH_WATER_DENSITY;

pub use crate::force::HullPrimitive;

/// An ideal force actuator fixed to the hull.
///
/// Positions and orientations are in the body frame: `x` forward, `y`
/// starboard, `z` down, measured from the geometric centre of the hull.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thruster {
    pub position: [f64; 3],
    /// Unit thrust direction.
    pub orientation: [f64; 3],
    /// Maximum thrust magnitude, N.
    pub max_thrust: f64,
}

/// Physical description of a vehicle.
#[derive(Debug, Clone, PartialEq)]
pub struct AsvSpec {
    /// Waterline length, m.
    pub length: f64,
    /// Waterline breadth, m.
    pub breadth: f64,
    /// Hull height, m.
    pub height: f64,
    /// Mass, kg.
    pub mass: f64,
    /// Floating draught, m; solved from mass and density when `None`.
    pub draught: Option<f64>,
    /// Centre of gravity relative to the geometric centre, body frame (z down), m.
    pub cog_offset: [f64; 3],
    pub hull: HullPrimitive,
    pub thrusters: Vec<Thruster>,
    /// Drag coefficients per DOF.
    pub drag: DragCoefficients,
    /// Radii of gyration (roll, pitch, yaw), m; rules of thumb when `None`.
    pub radii_of_gyration: Option<[f64; 3]>,
    /// Rotational added inertia as a fraction of the rigid-body inertia.
    pub rotational_added_inertia: f64,
    pub pitch_lever: PitchLever,
    /// Water density, kg/m³.
    pub water_density: f64,
}

impl AsvSpec {
    /// The SMARTY platform: a 0.32 m diameter, 0.21 m high cylinder of 8.4 kg
    /// floating at 0.11 m in fresh water, with four forward-facing thrusters.
    pub fn smarty() -> Self {
        let thruster = |x: f64, y: f64| Thruster {
            position: [x, y, 0.0],
            orientation: [1.0, 0.0, 0.0],
            max_thrust: 23.0,
        };
        Self {
            length: 0.32,
            breadth: 0.32,
            height: 0.21,
            mass: 8.4,
            draught: Some(0.11),
            cog_offset: [0.0; 3],
            hull: HullPrimitive::Cylinder,
            thrusters: vec![
                thruster(0.08, -0.08),
                thruster(0.08, 0.08),
                thruster(-0.08, -0.08),
                thruster(-0.08, 0.08),
            ],
            drag: DragCoefficients::default(),
            radii_of_gyration: None,
            rotational_added_inertia: ROTATIONAL_ADDED_INERTIA_FRACTION,
            pitch_lever: PitchLever::Breadth,
            water_density: FRESH_WATER_DENSITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("length", self.length),
            ("breadth", self.breadth),
            ("height", self.height),
            ("mass", self.mass),
            ("water density", self.water_density),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(t) = self.draught {
            if !(t > 0.0 && t < self.height) {
                return Err(Error::config(format!(
                    "draught must lie in (0, height = {}), got {t}",
                    self.height
                )));
            }
        }
        for (i, th) in self.thrusters.iter().enumerate() {
            if !(th.max_thrust > 0.0) {
                return Err(Error::config(format!("thruster {i}: max_thrust must be positive")));
            }
            let n = th.orientation.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (n - 1.0).abs() > 1e-6 {
                return Err(Error::config(format!(
                    "thruster {i}: orientation must be a unit vector"
                )));
            }
        }
        if self.drag.0.iter().any(|c| !(*c >= 0.0)) {
            return Err(Error::config("drag coefficients must be non-negative"));
        }
        if !(self.rotational_added_inertia > 0.0) {
            return Err(Error::config("rotational added inertia fraction must be positive"));
        }
        Ok(())
    }

    /// Displaced volume of the hull primitive at draught `t`, m³.
    pub fn displaced_volume(&self, t: f64) -> f64 {
        let area = match self.hull {
            HullPrimitive::Cylinder => std::f64::consts::PI * 0.25 * self.length * self.breadth,
            HullPrimitive::Box => self.length * self.breadth,
        };
        area * t
    }

    /// Draught at which buoyancy balances weight, by bisection to 1e-6 m.
    pub fn equilibrium_draught(&self) -> Result<f64> {
        let excess = |t: f64| self.water_density * self.displaced_volume(t) - self.mass;
        if excess(self.height) <= 0.0 {
            return Err(Error::config(format!(
                "a {} kg hull needs more than its {} m height of draught to float",
                self.mass, self.height
            )));
        }
        let (mut lo, mut hi) = (0.0, self.height);
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if excess(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Draught used for the simulation: given, or solved.
    pub fn draught(&self) -> Result<f64> {
        match self.draught {
            Some(t) => Ok(t),
            None => self.equilibrium_draught(),
        }
    }

    /// Rigid-body inertias (roll, pitch, yaw), kg·m².
    pub fn rigid_inertia(&self) -> [f64; 3] {
        let r = self
            .radii_of_gyration
            .unwrap_or([0.34 * self.breadth, 0.25 * self.length, 0.25 * self.length]);
        r.map(|r| self.mass * r * r)
    }

    /// Mass, added mass, stiffness and drag for this vehicle.
    pub fn matrices(&self, geom: &HullGeometry) -> Result<RigidBodyMatrices> {
        let rho = self.water_density;
        let inertia = self.rigid_inertia();
        let m = self.mass;
        RigidBodyMatrices::new(
            Vector6([m, m, m, inertia[0], inertia[1], inertia[2]]),
            added_mass_matrix(geom, rho, inertia, self.rotational_added_inertia),
            stiffness_matrix(geom, m, rho)?,
            drag_matrix(geom, rho, &self.drag),
        )
    }
}

/// Hull areas, draught and centre of gravity depth of a vehicle.
pub fn derive_geometry(spec: &AsvSpec) -> Result<HullGeometry> {
    spec.validate()?;
    let draught = spec.draught()?;
    let cog_height = 0.5 * spec.height - spec.cog_offset[2];
    HullGeometry::new(spec.hull, spec.length, spec.breadth, spec.height, draught, cog_height)
}

/// Clamps each command to its thruster's limit. Returns whether any was clamped.
pub fn clamp_commands(spec: &AsvSpec, commands: &mut [f64]) -> bool {
    let mut clamped = false;
    for (c, th) in commands.iter_mut().zip(&spec.thrusters) {
        let limited = c.clamp(-th.max_thrust, th.max_thrust);
        if limited != *c {
            clamped = true;
            *c = limited;
        }
    }
    clamped
}

/// Body-frame wrench of the thrusters for the given commands (N), clamped to
/// each thruster's limit. Missing commands count as zero.
pub fn thrust_wrench(spec: &AsvSpec, commands: &[f64]) -> Vector6 {
    let mut force = [0.0; 3];
    let mut moment = [0.0; 3];
    for (th, &cmd) in spec.thrusters.iter().zip(commands) {
        let t = cmd.clamp(-th.max_thrust, th.max_thrust);
        let f = th.orientation.map(|d| d * t);
        let r = [
            th.position[0] - spec.cog_offset[0],
            th.position[1] - spec.cog_offset[1],
            th.position[2] - spec.cog_offset[2],
        ];
        for i in 0..3 {
            force[i] += f[i];
        }
        moment[0] += r[1] * f[2] - r[2] * f[1];
        moment[1] += r[2] * f[0] - r[0] * f[2];
        moment[2] += r[0] * f[1] - r[1] * f[0];
    }
    // body frame is forward-starboard-down; heave is reported positive up
    Vector6([force[0], force[1], -force[2], moment[0], moment[1], moment[2]])
}

/// Which DOFs are held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DofMask(pub [bool; 6]);

impl DofMask {
    pub const NONE: DofMask = DofMask([false; 6]);
    pub const ALL: DofMask = DofMask([true; 6]);

    pub fn only(dofs: &[Dof]) -> Self {
        let mut mask = [false; 6];
        for d in dofs {
            mask[d.index()] = true;
        }
        DofMask(mask)
    }

    pub fn is_constrained(&self, dof: Dof) -> bool {
        self.0[dof.index()]
    }
}

/// Thrust commands that take effect at `start` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct ThrustSegment {
    pub start: f64,
    pub commands: Vec<f64>,
}

/// One recorded step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRecord {
    pub state: AsvState,
    /// Sea surface elevation at the vehicle's horizontal position, m.
    pub wave_elevation: f64,
}

/// A vehicle being simulated.
#[derive(Debug, Clone)]
pub struct Asv {
    spec: AsvSpec,
    geometry: HullGeometry,
    matrices: RigidBodyMatrices,
    state: AsvState,
    mask: DofMask,
    commands: Vec<f64>,
    external_force: Vector6,
    schedule: Vec<ThrustSegment>,
    history: Option<Vec<HistoryRecord>>,
    warned_clamp: bool,
}

impl Asv {
    /// A vehicle floating at equilibrium at `position` (z ignored) with `attitude`.
    pub fn new(spec: AsvSpec, position: [f64; 3], attitude: [f64; 3]) -> Result<Self> {
        let geometry = derive_geometry(&spec)?;
        let matrices = spec.matrices(&geometry)?;
        let commands = vec![0.0; spec.thrusters.len()];
        Ok(Self {
            spec,
            geometry,
            matrices,
            state: AsvState::at(position, attitude),
            mask: DofMask::NONE,
            commands,
            external_force: Vector6::zeros(),
            schedule: Vec::new(),
            history: None,
            warned_clamp: false,
        })
    }

    pub fn spec(&self) -> &AsvSpec {
        &self.spec
    }

    pub fn geometry(&self) -> &HullGeometry {
        &self.geometry
    }

    pub fn matrices(&self) -> &RigidBodyMatrices {
        &self.matrices
    }

    pub fn state(&self) -> &AsvState {
        &self.state
    }

    pub fn set_state(&mut self, state: AsvState) {
        self.state = state;
    }

    pub fn mask(&self) -> DofMask {
        self.mask
    }

    pub fn commands(&self) -> &[f64] {
        &self.commands
    }

    /// Phase one for this hull.
    pub fn precompute(&self, field: &WaveField) -> Result<ForceAmplitudeTable> {
        ForceAmplitudeTable::new(field, &self.geometry, self.spec.water_density, self.spec.pitch_lever)
    }

    /// Sets per-thruster commands, clamping to each thruster's limit.
    pub fn set_thrust(&mut self, commands: &[f64]) {
        self.commands.clear();
        self.commands.extend_from_slice(commands);
        self.commands.resize(self.spec.thrusters.len(), 0.0);
        if clamp_commands(&self.spec, &mut self.commands) && !self.warned_clamp {
            log::warn!("thrust command exceeds thruster limit; clamped");
            self.warned_clamp = true;
        }
    }

    /// Sets every thruster to the same command.
    pub fn set_uniform_thrust(&mut self, per_thruster: f64) {
        let commands = vec![per_thruster; self.spec.thrusters.len()];
        self.set_thrust(&commands);
    }

    /// Replaces the thrust commands as the clock passes each segment's start.
    ///
    /// Segments are applied in order of start time; commands set before the
    /// first segment starts stay in force until then.
    pub fn set_thrust_schedule(&mut self, mut segments: Vec<ThrustSegment>) -> Result<()> {
        if segments.iter().any(|s| !s.start.is_finite()) {
            return Err(Error::config("thrust schedule start times must be finite"));
        }
        segments.sort_by(|a, b| b.start.total_cmp(&a.start));
        self.schedule = segments;
        self.apply_schedule();
        Ok(())
    }

    fn apply_schedule(&mut self) {
        // kept in descending order so the next segment is at the back
        while self.schedule.last().is_some_and(|s| s.start <= self.state.time) {
            if let Some(segment) = self.schedule.pop() {
                self.set_thrust(&segment.commands);
            }
        }
    }

    /// Constant wrench standing in for wind and current.
    pub fn set_external_force(&mut self, force: Vector6) {
        self.external_force = force;
    }

    /// Freezes the flagged DOFs at their current values.
    pub fn constrain_dof(&mut self, mask: DofMask) {
        self.mask = mask;
        for i in 0..6 {
            if mask.0[i] {
                self.state.velocity[i] = 0.0;
                self.state.acceleration[i] = 0.0;
            }
        }
    }

    /// Starts recording a history (including the current state).
    pub fn enable_history(&mut self, field: &WaveField) {
        self.history = Some(vec![self.record(field)]);
    }

    pub fn history(&self) -> Option<&[HistoryRecord]> {
        self.history.as_deref()
    }

    pub fn take_history(&mut self) -> Option<Vec<HistoryRecord>> {
        self.history.take()
    }

    fn record(&self, field: &WaveField) -> HistoryRecord {
        let [x, y, _] = self.state.position;
        HistoryRecord {
            state: self.state,
            wave_elevation: field.surface_elevation(x, y, self.state.time),
        }
    }

    /// Total external wrench at the current state: thrust, waves and the constant hook.
    pub fn net_force(&self, table: &ForceAmplitudeTable) -> Vector6 {
        thrust_wrench(&self.spec, &self.commands) + table.net_force(&self.state, self.state.time) + self.external_force
    }

    /// Advances one step of `dt` seconds in `field`, whose phase-one table is `table`.
    pub fn step(&mut self, field: &WaveField, table: &ForceAmplitudeTable, dt: f64) -> Result<&AsvState> {
        debug_assert!(
            table.matches(field),
            "amplitude table was built for a different wave field"
        );
        if !self.schedule.is_empty() {
            self.apply_schedule();
        }
        let force = self.net_force(table);
        self.state = integrate_step_constrained(&self.state, &force, &self.matrices, dt, self.mask.0)?;
        if self.history.is_some() {
            let rec = self.record(field);
            if let Some(h) = self.history.as_mut() {
                h.push(rec);
            }
        }
        Ok(&self.state)
    }
}

/// Steps `asv` once; see [`Asv::step`].
pub fn asv_step<'a>(asv: &'a mut Asv, field: &WaveField, table: &ForceAmplitudeTable, dt: f64) -> Result<&'a AsvState> {
    asv.step(field, table, dt)
}
