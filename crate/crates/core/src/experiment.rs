//! Experiment protocols built on the simulator: motion-trend studies,
//! regular-wave response and run-time performance sweeps.

use std::io::Write;
use std::sync::Arc;

use crate::dynamics::Dof;
use crate::error::{Error, Result};
use crate::fmt::sig9;
use crate::stats::significant_amplitude;
use crate::swarm::{run_swarm, ExecutionMode, PerfReport, StopCondition, SwarmRun};
use crate::vehicle::{Asv, AsvSpec, DofMask, HistoryRecord};
use crate::wave::{wind_speed_for_significant_height, RegularWave, SeaStateParams, WaveField};

/// Significant wave heights of the full trend grid, m.
pub fn default_trend_heights() -> Vec<f64> {
    (0..13).map(|i| 0.5 + 0.125 * i as f64).collect()
}

/// Wave headings of the full trend grid, degrees (180° is head sea).
pub fn default_trend_headings() -> Vec<f64> {
    (0..33).map(|i| 11.25 * i as f64).collect()
}

/// Component-wave grid of the wave-count sweep as (headings, frequency bands).
pub const WAVE_COUNT_GRID: [(usize, usize); 6] = [(3, 5), (3, 10), (5, 15), (9, 15), (13, 15), (13, 20)];

/// Swarm sizes of the swarm sweep.
pub const SWARM_SIZE_GRID: [usize; 7] = [10, 50, 100, 150, 200, 250, 500];

/// Per-thruster commands giving `total` newtons of forward thrust, shared
/// equally by the forward-pointing thrusters.
pub fn forward_thrust_commands(spec: &AsvSpec, total: f64) -> Vec<f64> {
    let forward: f64 = spec.thrusters.iter().map(|t| t.orientation[0].max(0.0)).sum();
    spec.thrusters
        .iter()
        .map(|t| {
            if t.orientation[0] > 0.0 && forward > 0.0 {
                total / forward
            } else {
                0.0
            }
        })
        .collect()
}

/// Significant amplitudes of the heave, roll and pitch records.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotionAmplitudes {
    /// m.
    pub heave: f64,
    /// rad.
    pub roll: f64,
    /// rad.
    pub pitch: f64,
}

impl MotionAmplitudes {
    pub fn from_history(history: &[HistoryRecord]) -> Self {
        let series = |f: fn(&HistoryRecord) -> f64| history.iter().map(f).collect::<Vec<_>>();
        Self {
            heave: significant_amplitude(&series(|r| r.state.position[2])),
            roll: significant_amplitude(&series(|r| r.state.attitude[0])),
            pitch: significant_amplitude(&series(|r| r.state.attitude[1])),
        }
    }
}

/// A straight-line transit through a sea.
#[derive(Debug, Clone)]
pub struct Transit {
    pub spec: AsvSpec,
    /// Total forward thrust, N.
    pub thrust: f64,
    /// Vehicle heading, rad clockwise from North.
    pub heading: f64,
    pub dt: f64,
    pub stop: StopCondition,
    /// DOFs held fixed during the run.
    pub constraints: DofMask,
}

impl Transit {
    /// The trend protocol: 4 N forward, yaw held, 50 m run at 40 ms steps.
    pub fn trend_protocol(spec: AsvSpec) -> Self {
        Self {
            spec,
            thrust: 4.0,
            heading: 0.0,
            dt: 0.04,
            stop: StopCondition::Distance {
                distance: 50.0,
                max_duration: 600.0,
            },
            constraints: DofMask::only(&[Dof::Yaw]),
        }
    }

    /// Runs the transit in `field` and returns the vehicle with its history.
    pub fn run(&self, field: &WaveField) -> Result<Asv> {
        let mut asv = Asv::new(self.spec.clone(), [0.0; 3], [0.0, 0.0, self.heading])?;
        asv.set_thrust(&forward_thrust_commands(&self.spec, self.thrust));
        asv.constrain_dof(self.constraints);
        asv.enable_history(field);
        let table = asv.precompute(field)?;
        let (max_steps, distance) = match self.stop {
            StopCondition::Duration(t) => ((t / self.dt).round() as u64, f64::INFINITY),
            StopCondition::Distance { distance, max_duration } => ((max_duration / self.dt).round() as u64, distance),
        };
        for _ in 0..max_steps {
            let s = asv.step(field, &table, self.dt)?;
            if s.position[0].hypot(s.position[1]) >= distance {
                break;
            }
        }
        Ok(asv)
    }
}

/// Settings of a motion-trend study.
#[derive(Debug, Clone)]
pub struct TrendStudy {
    pub transit: Transit,
    /// Significant wave heights, m.
    pub heights: Vec<f64>,
    /// Wave headings relative to the vehicle, degrees.
    pub headings_deg: Vec<f64>,
    pub replicates: usize,
    /// Replicate `r` uses phase seed `seed_base + r`.
    pub seed_base: u64,
    pub n_frequency_bands: usize,
    pub n_headings: usize,
    /// Threads used to run cells concurrently.
    pub workers: usize,
}

impl TrendStudy {
    /// The full 13 × 33 grid with the given replicate count.
    pub fn full(spec: AsvSpec, replicates: usize) -> Self {
        Self {
            transit: Transit::trend_protocol(spec),
            heights: default_trend_heights(),
            headings_deg: default_trend_headings(),
            replicates,
            seed_base: 1,
            n_frequency_bands: 15,
            n_headings: 5,
            workers: 1,
        }
    }
}

/// Mean significant amplitudes over replicates for one (height, heading) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendCell {
    pub significant_wave_height: f64,
    pub heading_deg: f64,
    pub replicates: usize,
    pub mean: MotionAmplitudes,
}

impl TrendCell {
    pub const CSV_HEADER: &'static str =
        "significant_wave_height_m,wave_heading_deg,replicates,heave_sig_amp_m,roll_sig_amp_rad,pitch_sig_amp_rad";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            sig9(self.significant_wave_height),
            sig9(self.heading_deg),
            self.replicates,
            sig9(self.mean.heave),
            sig9(self.mean.roll),
            sig9(self.mean.pitch)
        )
    }
}

fn trend_cell(study: &TrendStudy, hs: f64, heading_deg: f64) -> Result<TrendCell> {
    let wind_speed = wind_speed_for_significant_height(hs)?;
    // waves arrive relative to the vehicle's heading
    let direction = study.transit.heading + heading_deg.to_radians();
    let mut sum = MotionAmplitudes::default();
    for r in 0..study.replicates {
        let params = SeaStateParams::new(
            wind_speed,
            direction,
            study.n_frequency_bands,
            study.n_headings,
            study.seed_base.wrapping_add(r as u64),
        )?;
        let field = WaveField::generate(&params)?;
        let asv = study.transit.run(&field)?;
        let m = MotionAmplitudes::from_history(asv.history().unwrap_or_default());
        sum.heave += m.heave;
        sum.roll += m.roll;
        sum.pitch += m.pitch;
    }
    let n = study.replicates.max(1) as f64;
    Ok(TrendCell {
        significant_wave_height: hs,
        heading_deg,
        replicates: study.replicates,
        mean: MotionAmplitudes {
            heave: sum.heave / n,
            roll: sum.roll / n,
            pitch: sum.pitch / n,
        },
    })
}

/// Runs every cell of a trend study; cells are returned height-major.
pub fn run_trends(study: &TrendStudy) -> Result<Vec<TrendCell>> {
    if study.replicates == 0 {
        return Err(Error::config("trend study needs at least one replicate"));
    }
    let cells: Vec<(f64, f64)> = study
        .heights
        .iter()
        .flat_map(|&h| study.headings_deg.iter().map(move |&d| (h, d)))
        .collect();
    let workers = study.workers.clamp(1, cells.len().max(1));
    if workers == 1 {
        return cells.iter().map(|&(h, d)| trend_cell(study, h, d)).collect();
    }
    let mut results: Vec<Option<Result<TrendCell>>> = (0..cells.len()).map(|_| None).collect();
    let block = cells.len().div_ceil(workers);
    std::thread::scope(|scope| {
        for (inputs, outputs) in cells.chunks(block).zip(results.chunks_mut(block)) {
            scope.spawn(move || {
                for (&(h, d), out) in inputs.iter().zip(outputs.iter_mut()) {
                    *out = Some(trend_cell(study, h, d));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every cell is computed"))
        .collect()
}

pub fn write_trend_csv<W: Write>(cells: &[TrendCell], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", TrendCell::CSV_HEADER)?;
    for c in cells {
        writeln!(out, "{}", c.csv_row())?;
    }
    Ok(())
}

/// Steady-state amplitudes of heave (m), roll and pitch (rad) in a single
/// regular wave, with the vehicle held at zero speed on a fixed heading.
///
/// `heading` is the wave heading relative to the vehicle, rad. The first
/// `settle` seconds are discarded and each amplitude is the Fourier component
/// at the wave frequency over the whole periods that remain.
pub fn regular_wave_response(
    spec: &AsvSpec,
    amplitude: f64,
    frequency: f64,
    heading: f64,
    duration: f64,
    settle: f64,
    dt: f64,
) -> Result<MotionAmplitudes> {
    if !(settle >= 0.0) || duration - settle < 1.0 / frequency {
        return Err(Error::domain("need at least one wave period after the settling time"));
    }
    let field = WaveField::from_waves(vec![RegularWave::new(amplitude, frequency, heading, 0.0)?]);
    let transit = Transit {
        spec: spec.clone(),
        thrust: 0.0,
        heading: 0.0,
        dt,
        stop: StopCondition::Duration(duration),
        constraints: DofMask::only(&[Dof::Surge, Dof::Sway, Dof::Yaw]),
    };
    let asv = transit.run(&field)?;
    let history = asv.history().unwrap_or_default();
    let periods = ((duration - settle) * frequency).floor();
    let end = settle + periods / frequency;
    let tail: Vec<&HistoryRecord> = history
        .iter()
        .filter(|r| r.state.time > settle && r.state.time <= end + 0.5 * dt)
        .collect();
    let omega = std::f64::consts::TAU * frequency;
    let component = |f: fn(&HistoryRecord) -> f64| {
        let n = tail.len() as f64;
        let (c, s) = tail.iter().fold((0.0, 0.0), |(c, s), r| {
            let (sin, cos) = (omega * r.state.time).sin_cos();
            (c + f(r) * cos, s + f(r) * sin)
        });
        2.0 * c.hypot(s) / n
    };
    Ok(MotionAmplitudes {
        heave: component(|r| r.state.position[2]),
        roll: component(|r| r.state.attitude[0]),
        pitch: component(|r| r.state.attitude[1]),
    })
}

/// A performance measurement: a swarm of identical vehicles under 4 N thrust.
#[derive(Debug, Clone)]
pub struct PerfScenario {
    pub spec: AsvSpec,
    pub n_vehicles: usize,
    pub n_headings: usize,
    pub n_frequency_bands: usize,
    pub mode: ExecutionMode,
    /// Simulated time per vehicle, s.
    pub duration: f64,
    pub dt: f64,
    pub workers: Option<usize>,
    pub seed: u64,
    pub wind_speed: f64,
}

impl PerfScenario {
    pub fn new(n_vehicles: usize, n_headings: usize, n_frequency_bands: usize, mode: ExecutionMode) -> Self {
        Self {
            spec: AsvSpec::smarty(),
            n_vehicles,
            n_headings,
            n_frequency_bands,
            mode,
            duration: 100.0,
            dt: 0.04,
            workers: None,
            seed: 1,
            wind_speed: 5.0,
        }
    }

    /// Builds the swarm (phase one); not timed.
    pub fn build(&self) -> Result<SwarmRun> {
        let params = SeaStateParams::new(self.wind_speed, 0.0, self.n_frequency_bands, self.n_headings, self.seed)?;
        let field = Arc::new(WaveField::generate(&params)?);
        let mut run = SwarmRun::new(
            Arc::clone(&field),
            self.mode,
            self.dt,
            StopCondition::Duration(self.duration),
            self.seed,
        );
        run.workers = self.workers;
        let commands = forward_thrust_commands(&self.spec, 4.0);
        let template = Asv::new(self.spec.clone(), [0.0; 3], [0.0; 3])?;
        let table = Arc::new(template.precompute(&field)?);
        let side = (self.n_vehicles as f64).sqrt().ceil() as usize;
        for i in 0..self.n_vehicles {
            let position = [5.0 * (i % side.max(1)) as f64, 5.0 * (i / side.max(1)) as f64, 0.0];
            let mut asv = template.clone();
            let mut state = *asv.state();
            state.position = position;
            asv.set_state(state);
            asv.set_thrust(&commands);
            run.push(crate::swarm::SwarmVehicle::new(asv, Arc::clone(&table)))?;
        }
        Ok(run)
    }
}

/// Times the stepping loop of a scenario. Field generation and phase one are excluded.
pub fn measure_performance(scenario: &PerfScenario) -> Result<PerfReport> {
    let run = scenario.build()?;
    Ok(run_swarm(run)?.report)
}

/// Writes performance rows with the benchmark CSV header.
pub fn write_perf_csv<W: Write>(reports: &[PerfReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", PerfReport::CSV_HEADER)?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
