use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use swell_core::experiment::{
    forward_thrust_commands, measure_performance, run_trends, write_perf_csv, write_trend_csv, MotionAmplitudes,
    PerfScenario, Transit, TrendCell, TrendStudy,
};
use swell_core::fmt::sig9;
use swell_core::swarm::{run_swarm, StopCondition, SwarmRun};
use swell_core::vehicle::HistoryRecord;
use swell_core::wave::PmSpectrum;
use swell_core::{Asv, AsvState, ExecutionMode, PerfReport, ThrustSegment, Vector6, WaveField};

use crate::config::{SimConfig, VehicleConfig};
use crate::error::CliError;

pub const TRAJECTORY_HEADER: &str =
    "t_s,x_m,y_m,z_m,roll_rad,pitch_rad,yaw_rad,vx_mps,vy_mps,vz_mps,p_radps,q_radps,r_radps,wave_elev_at_cog_m";

pub const SUMMARY_HEADER: &str =
    "vehicle,name,steps,sim_time_s,distance_m,heave_sig_amp_m,roll_sig_amp_rad,pitch_sig_amp_rad";

pub const WAVE_SUMMARY_HEADER: &str = "wind_speed_mps,n_waves,peak_frequency_hz,f_min_hz,f_max_hz,analytic_zeroth_moment_m2,zeroth_moment_m2,significant_wave_height_m";

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_with<F>(path: &Path, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let mut out = create(path)?;
    f(&mut out).and_then(|_| out.flush()).map_err(|e| CliError::io(path, e))
}

/// The configured sea, or calm water.
pub fn build_field(config: &SimConfig) -> Result<WaveField, CliError> {
    Ok(match config.sea_params()? {
        Some(p) => WaveField::generate(&p)?,
        None => WaveField::calm(),
    })
}

/// A vehicle ready to run: spec, initial state, thrust and constraints applied.
pub fn build_vehicle(v: &VehicleConfig, rho: Option<f64>) -> Result<Asv, CliError> {
    let spec = v.spec(rho).map_err(CliError::Config)?;
    let attitude = v.attitude_deg.map(f64::to_radians);
    let mut asv = Asv::new(spec, [v.position[0], v.position[1], 0.0], attitude)?;
    if let Some(total) = v.thrust {
        let commands = forward_thrust_commands(asv.spec(), total);
        asv.set_thrust(&commands);
    }
    if let Some(commands) = &v.thrust_commands {
        asv.set_thrust(commands);
    }
    if !v.thrust_schedule.is_empty() {
        let segments = v
            .thrust_schedule
            .iter()
            .map(|s| ThrustSegment {
                start: s.start_s,
                commands: s.commands.clone(),
            })
            .collect();
        asv.set_thrust_schedule(segments)?;
    }
    if let Some(f) = v.external_force {
        asv.set_external_force(Vector6(f));
    }
    asv.constrain_dof(v.constraints().map_err(CliError::Config)?);
    Ok(asv)
}

fn trajectory_row(out: &mut impl Write, s: &AsvState, elevation: f64) -> std::io::Result<()> {
    let mut cols = vec![s.time, s.position[0], s.position[1], s.position[2]];
    cols.extend_from_slice(&s.attitude);
    cols.extend(s.velocity.iter().copied());
    cols.push(elevation);
    let row: Vec<String> = cols.into_iter().map(sig9).collect();
    writeln!(out, "{}", row.join(","))
}

/// Writes a trajectory CSV. Velocities are body-frame rates.
pub fn write_trajectory<W: Write>(records: &[HistoryRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for r in records {
        trajectory_row(&mut out, &r.state, r.wave_elevation)?;
    }
    Ok(())
}

#[derive(Debug)]
pub struct VehicleSummary {
    pub name: String,
    pub steps: u64,
    pub sim_time: f64,
    pub distance: f64,
    /// `None` when history recording was off.
    pub amplitudes: Option<MotionAmplitudes>,
}

impl VehicleSummary {
    pub fn csv_row(&self, index: usize) -> String {
        let amp = |f: fn(&MotionAmplitudes) -> f64| self.amplitudes.as_ref().map(|a| sig9(f(a))).unwrap_or_default();
        format!(
            "{index},{},{},{},{},{},{},{}",
            self.name,
            self.steps,
            sig9(self.sim_time),
            sig9(self.distance),
            amp(|a| a.heave),
            amp(|a| a.roll),
            amp(|a| a.pitch)
        )
    }
}

#[derive(Debug)]
pub struct SimulateOutput {
    pub trajectories: Vec<PathBuf>,
    pub summary_path: PathBuf,
    pub vehicles: Vec<VehicleSummary>,
    pub report: PerfReport,
}

pub fn trajectory_file_name(index: usize) -> String {
    format!("trajectory_{index:03}.csv")
}

/// Phase one, then phase two for every vehicle; writes one trajectory CSV per
/// vehicle, `summary.csv` and `performance.csv` into the output directory.
pub fn run_simulate(config: &SimConfig) -> Result<SimulateOutput, CliError> {
    let out_dir = &config.run.output_dir;
    prepare_dir(out_dir)?;
    let field = Arc::new(build_field(config)?);
    let stop = config.stop_condition()?;
    let mut run = SwarmRun::new(
        Arc::clone(&field),
        config.run.mode.into(),
        config.run.dt,
        stop,
        config.sea_state.seed,
    );
    run.workers = config.run.workers;
    let mut starts = Vec::new();
    for v in &config.vehicles {
        let mut asv = build_vehicle(v, config.sea_state.rho)?;
        starts.push(*asv.state());
        if config.run.history {
            asv.enable_history(&field);
        }
        run.add_vehicle(asv)?;
    }
    let outcome = run_swarm(run)?;

    let mut trajectories = Vec::new();
    let mut vehicles = Vec::new();
    for (i, (sv, start)) in outcome.vehicles.into_iter().zip(starts).enumerate() {
        let mut asv = sv.asv;
        let history = asv.take_history();
        let path = out_dir.join(trajectory_file_name(i));
        write_with(&path, |out| match &history {
            Some(records) => write_trajectory(records, out),
            None => {
                let elevation = |s: &AsvState| field.surface_elevation(s.position[0], s.position[1], s.time);
                writeln!(out, "{TRAJECTORY_HEADER}")?;
                trajectory_row(out, &start, elevation(&start))?;
                trajectory_row(out, asv.state(), elevation(asv.state()))
            }
        })?;
        trajectories.push(path);
        let s = asv.state();
        vehicles.push(VehicleSummary {
            name: config.vehicles[i]
                .name
                .clone()
                .unwrap_or_else(|| format!("vehicle_{i}")),
            steps: s.step,
            sim_time: s.time,
            distance: (s.position[0] - start.position[0]).hypot(s.position[1] - start.position[1]),
            amplitudes: history.as_deref().map(MotionAmplitudes::from_history),
        });
    }

    let summary_path = out_dir.join("summary.csv");
    write_with(&summary_path, |out| {
        writeln!(out, "{SUMMARY_HEADER}")?;
        for (i, v) in vehicles.iter().enumerate() {
            writeln!(out, "{}", v.csv_row(i))?;
        }
        Ok(())
    })?;
    let report = outcome.report;
    write_with(&out_dir.join("performance.csv"), |out| write_perf_csv(&[report], out))?;
    Ok(SimulateOutput {
        trajectories,
        summary_path,
        vehicles,
        report,
    })
}

/// Builds the motion-trend study described by the configuration.
pub fn trend_study(config: &SimConfig) -> Result<TrendStudy, CliError> {
    let trends = config.trends.clone().unwrap_or_default();
    let vehicle = &config.vehicles[0];
    let spec = vehicle.spec(config.sea_state.rho).map_err(CliError::Config)?;
    let mut transit = Transit::trend_protocol(spec);
    transit.thrust = trends.thrust;
    transit.dt = config.run.dt;
    transit.stop = StopCondition::Distance {
        distance: trends.distance,
        max_duration: trends.max_duration,
    };
    let workers = trends
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    Ok(TrendStudy {
        transit,
        heights: trends.heights,
        headings_deg: trends.headings_deg,
        replicates: trends.replicates,
        seed_base: trends.seed_base.unwrap_or(config.sea_state.seed),
        n_frequency_bands: config.sea_state.n_frequency_bands,
        n_headings: config.sea_state.n_headings,
        workers,
    })
}

/// Runs the trend study and writes `trends.csv`.
pub fn run_trend_study(config: &SimConfig) -> Result<(PathBuf, Vec<TrendCell>), CliError> {
    prepare_dir(&config.run.output_dir)?;
    let cells = run_trends(&trend_study(config)?)?;
    let path = config.run.output_dir.join("trends.csv");
    write_with(&path, |out| write_trend_csv(&cells, out))?;
    Ok((path, cells))
}

/// Performance scenarios of the benchmark sweeps: the single-vehicle wave-count
/// grid in mode A, then every swarm size in every mode.
pub fn benchmark_scenarios(config: &SimConfig) -> Result<Vec<PerfScenario>, CliError> {
    let bench = config.benchmark.clone().unwrap_or_default();
    let spec = config.vehicles[0]
        .spec(config.sea_state.rho)
        .map_err(CliError::Config)?;
    let wind = match config.wind_speed()? {
        u if u > 0.0 => u,
        _ => return Err(CliError::Config("benchmark needs a non-calm sea state".into())),
    };
    let scenario = |n: usize, [h, f]: [usize; 2], mode: ExecutionMode| PerfScenario {
        spec: spec.clone(),
        duration: bench.duration,
        dt: config.run.dt,
        workers: bench.workers,
        seed: config.sea_state.seed,
        wind_speed: wind,
        ..PerfScenario::new(n, h, f, mode)
    };
    let mut out: Vec<PerfScenario> = bench
        .wave_grid
        .iter()
        .map(|&g| scenario(1, g, ExecutionMode::A))
        .collect();
    for &n in &bench.swarm_sizes {
        for &m in &bench.modes {
            out.push(scenario(n, bench.swarm_waves, m.into()));
        }
    }
    Ok(out)
}

/// Runs the benchmark sweeps and writes `benchmark.csv`.
pub fn run_benchmark(
    config: &SimConfig,
    mut progress: impl FnMut(&PerfReport),
) -> Result<(PathBuf, Vec<PerfReport>), CliError> {
    prepare_dir(&config.run.output_dir)?;
    let mut reports = Vec::new();
    for s in benchmark_scenarios(config)? {
        let r = measure_performance(&s)?;
        progress(&r);
        reports.push(r);
    }
    let path = config.run.output_dir.join("benchmark.csv");
    write_with(&path, |out| write_perf_csv(&reports, out))?;
    Ok((path, reports))
}

/// Summary of a generated sea.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSummary {
    pub wind_speed: f64,
    pub n_waves: usize,
    pub peak_frequency: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub analytic_zeroth_moment: f64,
    pub zeroth_moment: f64,
    pub significant_wave_height: f64,
}

impl WaveSummary {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            sig9(self.wind_speed),
            self.n_waves,
            sig9(self.peak_frequency),
            sig9(self.f_min),
            sig9(self.f_max),
            sig9(self.analytic_zeroth_moment),
            sig9(self.zeroth_moment),
            sig9(self.significant_wave_height)
        )
    }
}

/// Writes the component waves to `waves.csv` and their summary to `wave_summary.csv`.
pub fn run_wave_stats(config: &SimConfig) -> Result<WaveSummary, CliError> {
    let out_dir = &config.run.output_dir;
    prepare_dir(out_dir)?;
    let field = build_field(config)?;
    let summary = match field.spectrum() {
        Some(info) => WaveSummary {
            wind_speed: info.params.wind_speed,
            n_waves: field.len(),
            peak_frequency: info.peak_frequency,
            f_min: info.f_min,
            f_max: info.f_max,
            analytic_zeroth_moment: PmSpectrum::new(info.params.wind_speed)?.zeroth_moment(),
            zeroth_moment: field.zeroth_moment(),
            significant_wave_height: field.significant_wave_height(),
        },
        None => WaveSummary {
            wind_speed: 0.0,
            n_waves: 0,
            peak_frequency: 0.0,
            f_min: 0.0,
            f_max: 0.0,
            analytic_zeroth_moment: 0.0,
            zeroth_moment: 0.0,
            significant_wave_height: 0.0,
        },
    };
    write_with(&out_dir.join("waves.csv"), |out| field.write_csv(out))?;
    write_with(&out_dir.join("wave_summary.csv"), |out| {
        writeln!(out, "{WAVE_SUMMARY_HEADER}")?;
        writeln!(out, "{}", summary.csv_row())
    })?;
    Ok(summary)
}
