//! Froude-Krylov wave forces from linear (Airy) dynamic pressure.
//!
//! Pressure is sampled at five hull points: the centre of gravity, a point a
//! quarter length fore and aft of it, and a point a quarter breadth to
//! starboard and port. Phase one stores `ρgζₐe^{kz}` for every wave and point;
//! phase two only evaluates the cosine of the local wave phase.

use std::f64::consts::PI;
use std::io::Write;

use crate::dynamics::{AsvState, Vector6};
use crate::error::{Error, Result};
use crate::fmt::sig9;
use crate::wave::{RegularWave, WaveField};
use crate::GRAVITY;

/// Underwater hull shape approximated by a vertical prism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HullPrimitive {
    /// Elliptical cylinder with axes equal to length and breadth.
    #[default]
    Cylinder,
    /// Rectangular box.
    Box,
}

/// Lever arm used for the wave pitch moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PitchLever {
    /// `B/4`, the same arm as roll.
    #[default]
    Breadth,
    /// `L/4`, the length-wise arm of the fore and aft pressure points.
    LengthBased,
}

/// The five pressure sampling points, in table column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PressurePoint {
    Cog,
    Fore,
    Aft,
    Starboard,
    Port,
}

impl PressurePoint {
    pub const ALL: [PressurePoint; 5] = [
        PressurePoint::Cog,
        PressurePoint::Fore,
        PressurePoint::Aft,
        PressurePoint::Starboard,
        PressurePoint::Port,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PressurePoint::Cog => "cog",
            PressurePoint::Fore => "fore",
            PressurePoint::Aft => "aft",
            PressurePoint::Starboard => "sb",
            PressurePoint::Port => "ps",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Body-frame offset (forward, starboard) from the centre of gravity.
    pub fn body_offset(self, length: f64, breadth: f64) -> (f64, f64) {
        match self {
            PressurePoint::Cog => (0.0, 0.0),
            PressurePoint::Fore => (0.25 * length, 0.0),
            PressurePoint::Aft => (-0.25 * length, 0.0),
            PressurePoint::Starboard => (0.0, 0.25 * breadth),
            PressurePoint::Port => (0.0, -0.25 * breadth),
        }
    }
}

/// Principal dimensions and derived areas of a hull at its floating draught.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullGeometry {
    pub primitive: HullPrimitive,
    /// Length at the waterline, m.
    pub length: f64,
    /// Breadth at the waterline, m.
    pub breadth: f64,
    /// Hull height, m.
    pub height: f64,
    /// Floating draught, m.
    pub draught: f64,
    /// Waterplane area `A_z`, m².
    pub waterplane_area: f64,
    /// Underwater transverse section a quarter length from the CoG, `A_x`, m².
    pub transverse_area: f64,
    /// Underwater longitudinal profile a quarter breadth from the CoG, `A_y`, m².
    pub profile_area: f64,
    /// Height of the centre of gravity above the keel, m.
    pub cog_height: f64,
    /// Submergence of the centre of gravity below the waterline (0 if above), m.
    pub cog_depth: f64,
    /// Displaced volume at the draught, m³.
    pub displaced_volume: f64,
    /// Second moment of the waterplane about the longitudinal axis, m⁴.
    pub waterplane_inertia_roll: f64,
    /// Second moment of the waterplane about the transverse axis, m⁴.
    pub waterplane_inertia_pitch: f64,
}

impl HullGeometry {
    /// Geometry of a wall-sided primitive floating at `draught` with its centre
    /// of gravity `cog_height` above the keel.
    pub fn new(
        primitive: HullPrimitive,
        length: f64,
        breadth: f64,
        height: f64,
        draught: f64,
        cog_height: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("length", length),
            ("breadth", breadth),
            ("height", height),
            ("draught", draught),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("hull {name} must be positive, got {v}")));
            }
        }
        if draught >= height {
            return Err(Error::config(format!(
                "draught {draught} m is not below hull height {height} m; the vehicle does not float"
            )));
        }
        if !cog_height.is_finite() {
            return Err(Error::config("centre of gravity height must be finite"));
        }
        let (a, b) = (0.5 * length, 0.5 * breadth);
        let (waterplane_area, transverse_area, profile_area, i_roll, i_pitch) = match primitive {
            HullPrimitive::Cylinder => {
                // chords of the waterplane ellipse half a semi-axis off centre
                let chord = 3f64.sqrt() / 2.0;
                (
                    PI * a * b,
                    breadth * chord * draught,
                    length * chord * draught,
                    PI * a * b.powi(3) / 4.0,
                    PI * a.powi(3) * b / 4.0,
                )
            }
            HullPrimitive::Box => (
                length * breadth,
                breadth * draught,
                length * draught,
                length * breadth.powi(3) / 12.0,
                breadth * length.powi(3) / 12.0,
            ),
        };
        Ok(Self {
            primitive,
            length,
            breadth,
            height,
            draught,
            waterplane_area,
            transverse_area,
            profile_area,
            cog_height,
            cog_depth: (draught - cog_height).max(0.0),
            displaced_volume: waterplane_area * draught,
            waterplane_inertia_roll: i_roll,
            waterplane_inertia_pitch: i_pitch,
        })
    }

    /// Nominal depth (≤ 0) at which a pressure point is sampled.
    pub fn point_depth(&self, point: PressurePoint) -> f64 {
        match point {
            PressurePoint::Cog => -self.cog_depth,
            _ => -0.5 * self.draught,
        }
    }
}

/// Encounter frequency of a wave seen from a vehicle moving at `speed` along `course`.
///
/// Negative values are possible in fast following seas.
#[inline]
pub fn encounter_frequency(wave: &RegularWave, speed: f64, course: f64) -> f64 {
    let omega = wave.circular_frequency();
    omega - wave.wave_number() * speed * (wave.heading() - course).cos()
}

/// Dynamic pressure of one wave at a point at or below the mean water level, Pa.
pub fn dynamic_pressure(wave: &RegularWave, x: f64, y: f64, z: f64, t: f64, omega_e: f64, rho: f64) -> Result<f64> {
    if z > 0.0 {
        return Err(Error::domain(format!(
            "pressure is undefined above the surface (z = {z})"
        )));
    }
    Ok(rho * GRAVITY * wave.amplitude() * (wave.wave_number() * z).exp() * wave.phase_at(x, y, t, omega_e).cos())
}

/// Phase-one data for one wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeRow {
    pub wave: RegularWave,
    /// Pressure amplitude at each [`PressurePoint`], Pa.
    pub amplitudes: [f64; 5],
}

/// Areas and lever arms entering the force assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceLevers {
    pub length: f64,
    pub breadth: f64,
    pub transverse_area: f64,
    pub profile_area: f64,
    pub waterplane_area: f64,
    pub pitch_arm: f64,
}

/// Precomputed per-wave, per-point pressure amplitudes for one hull.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceAmplitudeTable {
    rows: Vec<AmplitudeRow>,
    levers: ForceLevers,
    rho: f64,
}

impl ForceAmplitudeTable {
    pub fn new(field: &WaveField, geom: &HullGeometry, rho: f64, pitch_lever: PitchLever) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::config(format!("water density must be positive, got {rho}")));
        }
        let depths = PressurePoint::ALL.map(|p| geom.point_depth(p));
        let rows = field
            .waves()
            .iter()
            .map(|w| {
                let base = rho * GRAVITY * w.amplitude();
                AmplitudeRow {
                    wave: *w,
                    amplitudes: depths.map(|z| base * (w.wave_number() * z).exp()),
                }
            })
            .collect();
        let pitch_arm = match pitch_lever {
            PitchLever::Breadth => 0.25 * geom.breadth,
            PitchLever::LengthBased => 0.25 * geom.length,
        };
        Ok(Self {
            rows,
            levers: ForceLevers {
                length: geom.length,
                breadth: geom.breadth,
                transverse_area: geom.transverse_area,
                profile_area: geom.profile_area,
                waterplane_area: geom.waterplane_area,
                pitch_arm,
            },
            rho,
        })
    }

    pub fn rows(&self) -> &[AmplitudeRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn levers(&self) -> &ForceLevers {
        &self.levers
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Whether this table was built from exactly the waves of `field`.
    pub fn matches(&self, field: &WaveField) -> bool {
        self.rows.len() == field.len() && self.rows.iter().zip(field.waves()).all(|(r, w)| r.wave == *w)
    }

    /// Force and moment of wave `index` on a vehicle in `state` at time `t`.
    pub fn component_force(&self, index: usize, state: &AsvState, t: f64) -> Vector6 {
        let frame = PointFrame::new(state, &self.levers);
        component_force(&self.rows[index], &self.levers, &frame, t)
    }

    /// Sum of the component forces of all waves.
    pub fn net_force(&self, state: &AsvState, t: f64) -> Vector6 {
        let frame = PointFrame::new(state, &self.levers);
        let mut total = Vector6::zeros();
        for row in &self.rows {
            total += component_force(row, &self.levers, &frame, t);
        }
        total
    }

    /// Writes the table as `wave_index,point,pressure_amplitude_pa` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "wave_index,point,pressure_amplitude_pa")?;
        for (i, row) in self.rows.iter().enumerate() {
            for p in PressurePoint::ALL {
                writeln!(out, "{},{},{}", i, p.name(), sig9(row.amplitudes[p.index()]))?;
            }
        }
        Ok(())
    }
}

/// World positions of the pressure points and the vehicle's speed and course.
#[derive(Debug, Clone, Copy)]
pub struct PointFrame {
    pub points: [(f64, f64); 5],
    pub speed: f64,
    pub course: f64,
}

impl PointFrame {
    pub fn new(state: &AsvState, levers: &ForceLevers) -> Self {
        let (sin_yaw, cos_yaw) = state.yaw().sin_cos();
        let [x, y, _] = state.position;
        let points = PressurePoint::ALL.map(|p| {
            let (fwd, stbd) = p.body_offset(levers.length, levers.breadth);
            // forward is (sin ψ, cos ψ), starboard is (cos ψ, -sin ψ)
            (x + fwd * sin_yaw + stbd * cos_yaw, y + fwd * cos_yaw - stbd * sin_yaw)
        });
        Self {
            points,
            speed: state.speed(),
            course: state.course(),
        }
    }
}

/// Phase-two evaluation of one wave's force at time `t`.
#[inline]
pub fn component_force(row: &AmplitudeRow, levers: &ForceLevers, frame: &PointFrame, t: f64) -> Vector6 {
    let wave = &row.wave;
    let omega_e = encounter_frequency(wave, frame.speed, frame.course);
    let mut p = [0.0; 5];
    for (q, (x, y)) in frame.points.iter().enumerate() {
        p[q] = row.amplitudes[q] * wave.phase_at(*x, *y, t, omega_e).cos();
    }
    assemble_force(p, levers)
}

/// Builds the 6-DOF wrench from the five point pressures (cog, fore, aft, sb, ps).
#[inline]
pub fn assemble_force(p: [f64; 5], levers: &ForceLevers) -> Vector6 {
    let [cog, fore, aft, sb, ps] = p;
    let longitudinal = fore - aft;
    let transverse = sb - ps;
    let half_waterplane = 0.5 * levers.waterplane_area;
    Vector6([
        longitudinal * levers.transverse_area,
        transverse * levers.profile_area,
        cog * levers.waterplane_area,
        transverse * half_waterplane * 0.25 * levers.breadth,
        longitudinal * half_waterplane * levers.pitch_arm,
        longitudinal * 0.5 * levers.profile_area * 0.25 * levers.length,
    ])
}

/// Phase one: precomputes the pressure amplitudes of `field` on `geom`.
pub fn precompute_force_amplitudes(field: &WaveField, geom: &HullGeometry, rho: f64) -> Result<ForceAmplitudeTable> {
    ForceAmplitudeTable::new(field, geom, rho, PitchLever::default())
}

/// Net wave force on a vehicle: the sum of all component forces.
pub fn net_wave_force(field: &WaveField, table: &ForceAmplitudeTable, state: &AsvState, t: f64) -> Vector6 {
    debug_assert!(
        table.matches(field),
        "amplitude table was built for a different wave field"
    );
    table.net_force(state, t)
}
