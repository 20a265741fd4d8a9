//! Run configuration files.
//!
//! Configurations are TOML. Unknown keys are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use swell_core::dynamics::DragCoefficients;
use swell_core::experiment::{default_trend_headings, default_trend_heights, SWARM_SIZE_GRID, WAVE_COUNT_GRID};
use swell_core::{AsvSpec, Dof, DofMask, ExecutionMode, HullPrimitive, PitchLever, SeaStateParams, Thruster};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub sea_state: SeaStateConfig,
    #[serde(rename = "vehicle")]
    pub vehicles: Vec<VehicleConfig>,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trends: Option<TrendsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<BenchmarkConfig>,
}

/// The sea. Give either `wind_speed` or `significant_wave_height`; a wind
/// speed of zero is calm water.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeaStateConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub significant_wave_height: Option<f64>,
    /// Direction the waves travel towards, degrees clockwise from North.
    #[serde(default)]
    pub wind_direction_deg: f64,
    #[serde(default = "default_bands")]
    pub n_frequency_bands: usize,
    #[serde(default = "default_headings")]
    pub n_headings: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Water density for every vehicle, kg/m³.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

fn default_bands() -> usize {
    15
}

fn default_headings() -> usize {
    5
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Smarty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullKind {
    Cylinder,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PitchLeverKind {
    #[serde(alias = "paper")]
    Breadth,
    LengthBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
    C,
}

impl From<Mode> for ExecutionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::A => ExecutionMode::A,
            Mode::B => ExecutionMode::B,
            Mode::C => ExecutionMode::C,
        }
    }
}

impl From<ExecutionMode> for Mode {
    fn from(m: ExecutionMode) -> Self {
        match m {
            ExecutionMode::A => Mode::A,
            ExecutionMode::B => Mode::B,
            ExecutionMode::C => Mode::C,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThrusterConfig {
    /// Body frame (x forward, y starboard, z down) from the geometric centre, m.
    pub position: [f64; 3],
    pub orientation: [f64; 3],
    pub max_thrust: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub start_s: f64,
    pub commands: Vec<f64>,
}

/// One vehicle. Without a preset, `length`, `breadth`, `height`, `mass` and
/// `thrusters` are required; with one, any field given overrides the preset.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breadth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draught: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cog_offset: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<HullKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drag_coefficients: Option<[f64; 6]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii_of_gyration: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotational_added_inertia: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pitch_lever: Option<PitchLeverKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub water_density: Option<f64>,
    /// Initial position of the centre of gravity, East and North, m.
    #[serde(default)]
    pub position: [f64; 2],
    /// Initial roll, pitch and heading, degrees.
    #[serde(default)]
    pub attitude_deg: [f64; 3],
    /// Total forward thrust shared by the forward-facing thrusters, N.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thrust: Option<f64>,
    /// Per-thruster commands, N.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thrust_commands: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thrust_schedule: Vec<ScheduleEntry>,
    /// DOFs held fixed: any of surge, sway, heave, roll, pitch, yaw.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dof_constraints: Vec<String>,
    /// Constant external force and moment (body frame), N and N·m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_force: Option<[f64; 6]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thrusters: Vec<ThrusterConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Stop each vehicle once it is this far from its start, m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    /// Time limit for distance runs, s.
    #[serde(default = "default_max_duration")]
    pub max_duration: f64,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_true")]
    pub history: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_dt() -> f64 {
    0.04
}

fn default_max_duration() -> f64 {
    600.0
}

fn default_mode() -> Mode {
    Mode::A
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_true() -> bool {
    true
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            duration: None,
            distance: None,
            max_duration: default_max_duration(),
            mode: default_mode(),
            output_dir: default_output_dir(),
            history: true,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendsConfig {
    #[serde(default = "default_trend_heights")]
    pub heights: Vec<f64>,
    #[serde(default = "default_trend_headings")]
    pub headings_deg: Vec<f64>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// Replicate `r` uses seed `seed_base + r`; defaults to the sea-state seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_base: Option<u64>,
    #[serde(default = "default_trend_thrust")]
    pub thrust: f64,
    #[serde(default = "default_trend_distance")]
    pub distance: f64,
    #[serde(default = "default_max_duration")]
    pub max_duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_replicates() -> usize {
    100
}

fn default_trend_thrust() -> f64 {
    4.0
}

fn default_trend_distance() -> f64 {
    50.0
}

impl Default for TrendsConfig {
    fn default() -> Self {
        Self {
            heights: default_trend_heights(),
            headings_deg: default_trend_headings(),
            replicates: default_replicates(),
            seed_base: None,
            thrust: default_trend_thrust(),
            distance: default_trend_distance(),
            max_duration: default_max_duration(),
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    /// Single-vehicle sweep over (headings, frequency bands).
    #[serde(default = "default_wave_grid")]
    pub wave_grid: Vec<[usize; 2]>,
    #[serde(default = "default_swarm_sizes")]
    pub swarm_sizes: Vec<usize>,
    #[serde(default = "default_modes")]
    pub modes: Vec<Mode>,
    /// (headings, frequency bands) of the sea used for the swarm sweep.
    #[serde(default = "default_swarm_waves")]
    pub swarm_waves: [usize; 2],
    /// Simulated time per run, s.
    #[serde(default = "default_bench_duration")]
    pub duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_wave_grid() -> Vec<[usize; 2]> {
    WAVE_COUNT_GRID.iter().map(|&(h, f)| [h, f]).collect()
}

fn default_swarm_sizes() -> Vec<usize> {
    SWARM_SIZE_GRID.to_vec()
}

fn default_modes() -> Vec<Mode> {
    vec![Mode::A, Mode::B, Mode::C]
}

fn default_swarm_waves() -> [usize; 2] {
    [5, 15]
}

fn default_bench_duration() -> f64 {
    100.0
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            wave_grid: default_wave_grid(),
            swarm_sizes: default_swarm_sizes(),
            modes: default_modes(),
            swarm_waves: default_swarm_waves(),
            duration: default_bench_duration(),
            workers: None,
        }
    }
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: SimConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    /// A SMARTY transit in a moderate sea; the template printed by `config-dump`.
    pub fn example() -> Self {
        Self {
            sea_state: SeaStateConfig {
                wind_speed: None,
                significant_wave_height: Some(1.0),
                wind_direction_deg: 180.0,
                n_frequency_bands: default_bands(),
                n_headings: default_headings(),
                seed: default_seed(),
                rho: None,
            },
            vehicles: vec![VehicleConfig {
                name: Some("smarty".into()),
                preset: Some(Preset::Smarty),
                thrust: Some(4.0),
                dof_constraints: vec!["yaw".into()],
                ..VehicleConfig::default()
            }],
            run: RunConfig {
                distance: Some(50.0),
                ..RunConfig::default()
            },
            trends: None,
            benchmark: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let sea = &self.sea_state;
        match (sea.wind_speed, sea.significant_wave_height) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "sea_state: give wind_speed or significant_wave_height, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "sea_state: one of wind_speed or significant_wave_height is required".into(),
                ))
            }
            (Some(u), None) if !(u >= 0.0 && u.is_finite()) => {
                return Err(CliError::Config(format!("sea_state.wind_speed must be >= 0, got {u}")))
            }
            (None, Some(h)) if !(h >= 0.0 && h.is_finite()) => {
                return Err(CliError::Config(format!(
                    "sea_state.significant_wave_height must be >= 0, got {h}"
                )))
            }
            _ => {}
        }
        if sea.n_frequency_bands == 0 || sea.n_headings == 0 {
            return Err(CliError::Config(
                "sea_state: n_frequency_bands and n_headings must be positive".into(),
            ));
        }
        if let Some(rho) = sea.rho {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(CliError::Config(format!("sea_state.rho must be positive, got {rho}")));
            }
        }
        if self.vehicles.is_empty() {
            return Err(CliError::Config("at least one [[vehicle]] is required".into()));
        }
        for (i, v) in self.vehicles.iter().enumerate() {
            v.spec(sea.rho)
                .map_err(|e| CliError::Config(format!("vehicle {i}: {e}")))?;
            v.constraints()
                .map_err(|e| CliError::Config(format!("vehicle {i}: {e}")))?;
        }
        let run = &self.run;
        if !(run.dt > 0.0 && run.dt.is_finite()) {
            return Err(CliError::Config(format!("run.dt must be positive, got {}", run.dt)));
        }
        if run.duration.is_some() && run.distance.is_some() {
            return Err(CliError::Config("run: give duration or distance, not both".into()));
        }
        if let Some(t) = run.duration {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("run.duration must be >= 0, got {t}")));
            }
        }
        if let Some(d) = run.distance {
            if !(d > 0.0) {
                return Err(CliError::Config(format!("run.distance must be positive, got {d}")));
            }
        }
        if run.workers == Some(0) {
            return Err(CliError::Config("run.workers must be at least 1".into()));
        }
        if let Some(t) = &self.trends {
            if t.replicates == 0 || t.heights.is_empty() || t.headings_deg.is_empty() {
                return Err(CliError::Config(
                    "trends: heights, headings_deg and replicates must be non-empty".into(),
                ));
            }
            if t.heights.iter().any(|h| !(*h > 0.0)) {
                return Err(CliError::Config("trends: heights must be positive".into()));
            }
        }
        if let Some(b) = &self.benchmark {
            if b.wave_grid
                .iter()
                .chain(std::iter::once(&b.swarm_waves))
                .any(|g| g[0] == 0 || g[1] == 0)
            {
                return Err(CliError::Config("benchmark: wave grid entries must be positive".into()));
            }
            if b.swarm_sizes.contains(&0) {
                return Err(CliError::Config("benchmark: swarm sizes must be positive".into()));
            }
        }
        Ok(())
    }

    /// Wind speed of the configured sea, m/s.
    pub fn wind_speed(&self) -> Result<f64, CliError> {
        match (self.sea_state.wind_speed, self.sea_state.significant_wave_height) {
            (Some(u), _) => Ok(u),
            (None, Some(0.0)) => Ok(0.0),
            (None, Some(h)) => Ok(swell_core::wave::wind_speed_for_significant_height(h)?),
            (None, None) => Err(CliError::Config("no sea state given".into())),
        }
    }

    /// Sea-state parameters, or `None` for calm water.
    pub fn sea_params(&self) -> Result<Option<SeaStateParams>, CliError> {
        let u = self.wind_speed()?;
        if u == 0.0 {
            return Ok(None);
        }
        let sea = &self.sea_state;
        Ok(Some(SeaStateParams::new(
            u,
            sea.wind_direction_deg.to_radians(),
            sea.n_frequency_bands,
            sea.n_headings,
            sea.seed,
        )?))
    }

    pub fn stop_condition(&self) -> Result<swell_core::swarm::StopCondition, CliError> {
        use swell_core::swarm::StopCondition;
        match (self.run.duration, self.run.distance) {
            (Some(t), None) => Ok(StopCondition::Duration(t)),
            (None, Some(d)) => Ok(StopCondition::Distance {
                distance: d,
                max_duration: self.run.max_duration,
            }),
            _ => Err(CliError::Config("run: one of duration or distance is required".into())),
        }
    }
}

impl VehicleConfig {
    /// The physical spec, with `rho` overriding the vehicle's water density.
    pub fn spec(&self, rho: Option<f64>) -> Result<AsvSpec, String> {
        let mut spec = match self.preset {
            Some(Preset::Smarty) => AsvSpec::smarty(),
            None => {
                let need = |v: Option<f64>, name: &str| v.ok_or_else(|| format!("{name} is required without a preset"));
                if self.thrusters.is_empty() && (self.thrust.is_some() || self.thrust_commands.is_some()) {
                    return Err("thrust given but no thrusters defined".into());
                }
                AsvSpec {
                    length: need(self.length, "length")?,
                    breadth: need(self.breadth, "breadth")?,
                    height: need(self.height, "height")?,
                    mass: need(self.mass, "mass")?,
                    draught: None,
                    thrusters: Vec::new(),
                    ..AsvSpec::smarty()
                }
            }
        };
        let set = |target: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *target = v;
            }
        };
        set(&mut spec.length, self.length);
        set(&mut spec.breadth, self.breadth);
        set(&mut spec.height, self.height);
        set(&mut spec.mass, self.mass);
        set(&mut spec.rotational_added_inertia, self.rotational_added_inertia);
        set(&mut spec.water_density, self.water_density);
        set(&mut spec.water_density, rho);
        if self.draught.is_some() {
            spec.draught = self.draught;
        }
        if let Some(c) = self.cog_offset {
            spec.cog_offset = c;
        }
        if let Some(h) = self.hull {
            spec.hull = match h {
                HullKind::Cylinder => HullPrimitive::Cylinder,
                HullKind::Box => HullPrimitive::Box,
            };
        }
        if let Some(d) = self.drag_coefficients {
            spec.drag = DragCoefficients(d);
        }
        if self.radii_of_gyration.is_some() {
            spec.radii_of_gyration = self.radii_of_gyration;
        }
        if let Some(p) = self.pitch_lever {
            spec.pitch_lever = match p {
                PitchLeverKind::Breadth => PitchLever::Breadth,
                PitchLeverKind::LengthBased => PitchLever::LengthBased,
            };
        }
        if !self.thrusters.is_empty() {
            spec.thrusters = self
                .thrusters
                .iter()
                .map(|t| Thruster {
                    position: t.position,
                    orientation: t.orientation,
                    max_thrust: t.max_thrust,
                })
                .collect();
        }
        spec.validate().map_err(|e| e.to_string())?;
        if self.thrust.is_some() && self.thrust_commands.is_some() {
            return Err("give thrust or thrust_commands, not both".into());
        }
        let n = spec.thrusters.len();
        let lengths = self
            .thrust_commands
            .iter()
            .chain(self.thrust_schedule.iter().map(|s| &s.commands));
        for c in lengths {
            if c.len() != n {
                return Err(format!("expected {n} thrust commands, got {}", c.len()));
            }
        }
        Ok(spec)
    }

    pub fn constraints(&self) -> Result<DofMask, String> {
        let mut dofs = Vec::new();
        for name in &self.dof_constraints {
            dofs.push(Dof::from_name(name).ok_or_else(|| format!("unknown DOF '{name}'"))?);
        }
        Ok(DofMask::only(&dofs))
    }
}
