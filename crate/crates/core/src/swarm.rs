//! Many vehicles in one shared wave field.
//!
//! Vehicles do not interact, so a vehicle's trajectory depends only on its own
//! state, the shared field and its own amplitude table. The three execution
//! modes differ only in scheduling:
//!
//! * `A`: one thread steps every vehicle in turn, one step at a time.
//! * `B`: vehicles are split into static blocks across workers, and a barrier
//!   after every step keeps all vehicles on the same clock.
//! * `C`: the same blocks, but each worker runs its vehicles to completion
//!   one after another with no clock coupling.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Barrier, Mutex};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::force::ForceAmplitudeTable;
use crate::vehicle::Asv;
use crate::wave::WaveField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExecutionMode {
    /// Single-threaded.
    #[default]
    A,
    /// Multi-threaded, time-synchronized.
    B,
    /// Multi-threaded, unsynchronized.
    C,
}

impl ExecutionMode {
    pub const ALL: [ExecutionMode; 3] = [ExecutionMode::A, ExecutionMode::B, ExecutionMode::C];
}

impl fmt::Display for ExecutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExecutionMode::A => "A",
            ExecutionMode::B => "B",
            ExecutionMode::C => "C",
        })
    }
}

impl FromStr for ExecutionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(ExecutionMode::A),
            "B" | "b" => Ok(ExecutionMode::B),
            "C" | "c" => Ok(ExecutionMode::C),
            other => Err(Error::config(format!(
                "unknown execution mode {other:?} (expected A, B or C)"
            ))),
        }
    }
}

/// When a vehicle stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCondition {
    /// After a fixed simulated time, s.
    Duration(f64),
    /// Once the vehicle is `distance` m from its start, or after `max_duration` s.
    Distance { distance: f64, max_duration: f64 },
}

impl StopCondition {
    fn max_steps(&self, dt: f64) -> u64 {
        let t = match *self {
            StopCondition::Duration(t) => t,
            StopCondition::Distance { max_duration, .. } => max_duration,
        };
        (t / dt).round() as u64
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StopCondition::Duration(t) => t >= 0.0 && t.is_finite(),
            StopCondition::Distance { distance, max_duration } => {
                distance > 0.0 && max_duration >= 0.0 && max_duration.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!("invalid stop condition {self:?}")))
        }
    }
}

/// One member of a swarm: the vehicle and its phase-one table.
#[derive(Debug, Clone)]
pub struct SwarmVehicle {
    pub asv: Asv,
    pub table: Arc<ForceAmplitudeTable>,
    /// Seed of this vehicle's private stream, `master_seed ^ index`.
    pub seed: u64,
    start: [f64; 2],
    steps: u64,
    done: bool,
}

impl SwarmVehicle {
    pub fn new(asv: Asv, table: Arc<ForceAmplitudeTable>) -> Self {
        let [x, y, _] = asv.state().position;
        Self {
            asv,
            table,
            seed: 0,
            start: [x, y],
            steps: 0,
            done: false,
        }
    }

    /// Steps taken in the last run.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn reached(&self, stop: &StopCondition, max_steps: u64) -> bool {
        if self.steps >= max_steps {
            return true;
        }
        match *stop {
            StopCondition::Duration(_) => false,
            StopCondition::Distance { distance, .. } => {
                let [x, y, _] = self.asv.state().position;
                (x - self.start[0]).hypot(y - self.start[1]) >= distance
            }
        }
    }

    fn advance(&mut self, field: &WaveField, dt: f64, stop: &StopCondition, max_steps: u64) -> Result<()> {
        self.asv.step(field, &self.table, dt)?;
        self.steps += 1;
        if self.reached(stop, max_steps) {
            self.done = true;
        }
        Ok(())
    }

    fn reset(&mut self, stop: &StopCondition, max_steps: u64) {
        let [x, y, _] = self.asv.state().position;
        self.start = [x, y];
        self.steps = 0;
        self.done = false;
        self.done = self.reached(stop, max_steps);
    }
}

/// A swarm simulation to run.
#[derive(Debug, Clone)]
pub struct SwarmRun {
    pub vehicles: Vec<SwarmVehicle>,
    pub field: Arc<WaveField>,
    pub mode: ExecutionMode,
    pub dt: f64,
    pub stop: StopCondition,
    /// Worker threads for modes B and C; hardware parallelism when `None`.
    pub workers: Option<usize>,
    pub master_seed: u64,
    /// Track the largest clock difference between vehicles in mode B.
    pub monitor_lockstep: bool,
}

impl SwarmRun {
    pub fn new(field: Arc<WaveField>, mode: ExecutionMode, dt: f64, stop: StopCondition, master_seed: u64) -> Self {
        Self {
            vehicles: Vec::new(),
            field,
            mode,
            dt,
            stop,
            workers: None,
            master_seed,
            monitor_lockstep: false,
        }
    }

    /// Adds a vehicle, building its table against the shared field.
    pub fn add_vehicle(&mut self, asv: Asv) -> Result<()> {
        let table = Arc::new(asv.precompute(&self.field)?);
        self.push(SwarmVehicle::new(asv, table))
    }

    /// Adds a vehicle with an already built table, which must match the shared field.
    pub fn push(&mut self, mut vehicle: SwarmVehicle) -> Result<()> {
        if !vehicle.table.matches(&self.field) {
            return Err(Error::config(
                "amplitude table was not built against the swarm's wave field",
            ));
        }
        vehicle.seed = vehicle_seed(self.master_seed, self.vehicles.len());
        self.vehicles.push(vehicle);
        Ok(())
    }

    fn worker_count(&self) -> usize {
        let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        self.workers.unwrap_or(hw).clamp(1, self.vehicles.len().max(1))
    }
}

/// Seed of vehicle `index`'s private stream.
pub fn vehicle_seed(master_seed: u64, index: usize) -> u64 {
    master_seed ^ index as u64
}

/// Timing of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfReport {
    pub mode: ExecutionMode,
    pub n_vehicles: usize,
    pub n_waves: usize,
    pub dt: f64,
    /// Simulated time, s. Modes A and B: the swarm clock. Mode C: the sum over vehicles.
    pub sim_time: f64,
    /// Wall-clock time of the stepping loop, s.
    pub wall_time: f64,
    /// `sim_time / wall_time`.
    pub ratio: f64,
    pub workers: usize,
    /// Largest difference between two active vehicles' step counts seen in mode B.
    pub max_clock_skew_steps: Option<u64>,
}

impl PerfReport {
    pub const CSV_HEADER: &'static str = "mode,n_vehicles,n_waves,dt_s,sim_time_s,wall_time_s,ratio";

    pub fn csv_row(&self) -> String {
        use crate::fmt::sig9;
        format!(
            "{},{},{},{},{},{},{}",
            self.mode,
            self.n_vehicles,
            self.n_waves,
            sig9(self.dt),
            sig9(self.sim_time),
            sig9(self.wall_time),
            sig9(self.ratio)
        )
    }
}

/// The vehicles after a run, in their original order, and its timing.
#[derive(Debug)]
pub struct SwarmOutcome {
    pub vehicles: Vec<SwarmVehicle>,
    pub report: PerfReport,
}

/// Runs every vehicle until its stop condition, in the run's execution mode.
pub fn run_swarm(mut run: SwarmRun) -> Result<SwarmOutcome> {
    if !(run.dt > 0.0) || !run.dt.is_finite() {
        return Err(Error::config(format!("time step must be positive, got {}", run.dt)));
    }
    run.stop.validate()?;
    let max_steps = run.stop.max_steps(run.dt);
    for v in &mut run.vehicles {
        v.reset(&run.stop, max_steps);
    }
    let workers = match run.mode {
        ExecutionMode::A => 1,
        _ => run.worker_count(),
    };
    let field = Arc::clone(&run.field);

    let started = Instant::now();
    let skew = match run.mode {
        ExecutionMode::A => {
            run_round_robin(&mut run.vehicles, &field, run.dt, &run.stop, max_steps)?;
            None
        }
        ExecutionMode::B => Some(run_lockstep(
            &mut run.vehicles,
            &field,
            run.dt,
            &run.stop,
            max_steps,
            workers,
            run.monitor_lockstep,
        )?),
        ExecutionMode::C => {
            run_independent(&mut run.vehicles, &field, run.dt, &run.stop, max_steps, workers)?;
            None
        }
    };
    let wall_time = started.elapsed().as_secs_f64().max(1e-9);

    let steps: Vec<u64> = run.vehicles.iter().map(|v| v.steps).collect();
    let sim_time = match run.mode {
        ExecutionMode::C => steps.iter().map(|&s| s as f64 * run.dt).sum(),
        _ => steps.iter().copied().max().unwrap_or(0) as f64 * run.dt,
    };
    let report = PerfReport {
        mode: run.mode,
        n_vehicles: run.vehicles.len(),
        n_waves: field.len(),
        dt: run.dt,
        sim_time,
        wall_time,
        ratio: sim_time / wall_time,
        workers,
        max_clock_skew_steps: if run.monitor_lockstep { skew.flatten() } else { None },
    };
    Ok(SwarmOutcome {
        vehicles: run.vehicles,
        report,
    })
}

fn vehicle_error(index: usize, err: Error) -> Error {
    Error::Vehicle {
        vehicle: index,
        source: Box::new(err),
    }
}

fn run_round_robin(
    vehicles: &mut [SwarmVehicle],
    field: &WaveField,
    dt: f64,
    stop: &StopCondition,
    max_steps: u64,
) -> Result<()> {
    loop {
        let mut active = false;
        for (i, v) in vehicles.iter_mut().enumerate() {
            if v.done {
                continue;
            }
            v.advance(field, dt, stop, max_steps).map_err(|e| vehicle_error(i, e))?;
            active |= !v.done;
        }
        if !active {
            return Ok(());
        }
    }
}

fn block_size(n: usize, workers: usize) -> usize {
    n.div_ceil(workers).max(1)
}

/// Collects the first failure by vehicle index.
#[derive(Default)]
struct FirstFailure(Mutex<Option<(usize, Error)>>);

impl FirstFailure {
    fn record(&self, index: usize, err: Error) {
        let mut slot = self.0.lock().unwrap_or_else(|p| p.into_inner());
        if slot.as_ref().is_none_or(|(i, _)| index < *i) {
            *slot = Some((index, err));
        }
    }

    fn into_result(self) -> Result<()> {
        match self.0.into_inner().unwrap_or_else(|p| p.into_inner()) {
            Some((i, e)) => Err(vehicle_error(i, e)),
            None => Ok(()),
        }
    }
}

fn run_lockstep(
    vehicles: &mut [SwarmVehicle],
    field: &WaveField,
    dt: f64,
    stop: &StopCondition,
    max_steps: u64,
    workers: usize,
    monitor: bool,
) -> Result<Option<u64>> {
    let n = vehicles.len();
    if n == 0 {
        return Ok(monitor.then_some(0));
    }
    let block = block_size(n, workers);
    let workers = n.div_ceil(block);
    let barrier = Barrier::new(workers);
    // Per-step tallies live in three rotating slots: slot s%3 is filled during
    // step s and read after its barrier; the barrier leader clears slot
    // (s+2)%3, which nobody touches again until after the next barrier.
    let active = [AtomicUsize::new(0), AtomicUsize::new(0), AtomicUsize::new(0)];
    let failed = [AtomicBool::new(false), AtomicBool::new(false), AtomicBool::new(false)];
    let clocks: Vec<AtomicU64> = vehicles.iter().map(|v| AtomicU64::new(v.steps)).collect();
    let running: Vec<AtomicBool> = vehicles.iter().map(|v| AtomicBool::new(!v.done)).collect();
    let max_skew = AtomicU64::new(0);
    let failure = FirstFailure::default();

    std::thread::scope(|scope| {
        for (w, chunk) in vehicles.chunks_mut(block).enumerate() {
            let offset = w * block;
            let (barrier, active, failed, clocks, running, max_skew, failure) =
                (&barrier, &active, &failed, &clocks, &running, &max_skew, &failure);
            scope.spawn(move || {
                let mut step = 0usize;
                loop {
                    let slot = step % 3;
                    let mut still_active = 0;
                    for (k, v) in chunk.iter_mut().enumerate() {
                        if v.done {
                            continue;
                        }
                        let i = offset + k;
                        if let Err(e) = v.advance(field, dt, stop, max_steps) {
                            failure.record(i, e);
                            failed[slot].store(true, Ordering::SeqCst);
                            v.done = true;
                        }
                        if monitor {
                            clocks[i].store(v.steps, Ordering::SeqCst);
                            if v.done {
                                running[i].store(false, Ordering::SeqCst);
                            }
                        }
                        if !v.done {
                            still_active += 1;
                        }
                    }
                    active[slot].fetch_add(still_active, Ordering::SeqCst);
                    let wait = barrier.wait();
                    if wait.is_leader() {
                        active[(step + 2) % 3].store(0, Ordering::SeqCst);
                        failed[(step + 2) % 3].store(false, Ordering::SeqCst);
                    }
                    if monitor {
                        let (mut lo, mut hi) = (u64::MAX, 0);
                        for (c, r) in clocks.iter().zip(running.iter()) {
                            if r.load(Ordering::SeqCst) {
                                let c = c.load(Ordering::SeqCst);
                                lo = lo.min(c);
                                hi = hi.max(c);
                            }
                        }
                        if lo <= hi {
                            max_skew.fetch_max(hi - lo, Ordering::SeqCst);
                        }
                    }
                    if active[slot].load(Ordering::SeqCst) == 0 || failed[slot].load(Ordering::SeqCst) {
                        break;
                    }
                    step += 1;
                }
            });
        }
    });
    failure.into_result()?;
    Ok(monitor.then(|| max_skew.load(Ordering::SeqCst)))
}

fn run_independent(
    vehicles: &mut [SwarmVehicle],
    field: &WaveField,
    dt: f64,
    stop: &StopCondition,
    max_steps: u64,
    workers: usize,
) -> Result<()> {
    let n = vehicles.len();
    if n == 0 {
        return Ok(());
    }
    let block = block_size(n, workers);
    let abort = AtomicBool::new(false);
    let failure = FirstFailure::default();
    std::thread::scope(|scope| {
        for (w, chunk) in vehicles.chunks_mut(block).enumerate() {
            let (abort, failure) = (&abort, &failure);
            scope.spawn(move || {
                for (k, v) in chunk.iter_mut().enumerate() {
                    while !v.done {
                        if abort.load(Ordering::Relaxed) {
                            return;
                        }
                        if let Err(e) = v.advance(field, dt, stop, max_steps) {
                            failure.record(w * block + k, e);
                            abort.store(true, Ordering::Relaxed);
                            return;
                        }
                    }
                }
            });
        }
    });
    failure.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Vector6;
    use crate::vehicle::AsvSpec;
    use crate::wave::SeaStateParams;

    fn field() -> Arc<WaveField> {
        Arc::new(WaveField::generate(&SeaStateParams::new(4.0, 1.0, 5, 3, 11).unwrap()).unwrap())
    }

    fn swarm(mode: ExecutionMode, n: usize, workers: usize) -> SwarmRun {
        let mut run = SwarmRun::new(field(), mode, 0.04, StopCondition::Duration(8.0), 5);
        run.workers = Some(workers);
        for i in 0..n {
            let mut asv = Asv::new(
                AsvSpec::smarty(),
                [i as f64 * 3.0, 0.0, 0.0],
                [0.0, 0.0, 0.1 * i as f64],
            )
            .unwrap();
            asv.set_uniform_thrust(1.0 + 0.1 * i as f64);
            run.add_vehicle(asv).unwrap();
        }
        run
    }

    #[test]
    fn modes_agree_bitwise() {
        let a = run_swarm(swarm(ExecutionMode::A, 7, 1)).unwrap();
        for (mode, workers) in [(ExecutionMode::B, 3), (ExecutionMode::C, 3), (ExecutionMode::B, 7)] {
            let other = run_swarm(swarm(mode, 7, workers)).unwrap();
            for (x, y) in a.vehicles.iter().zip(&other.vehicles) {
                assert_eq!(x.asv.state(), y.asv.state(), "mode {mode}");
            }
        }
        assert_eq!(a.report.n_vehicles, 7);
        assert!((a.report.sim_time - 8.0).abs() < 1e-9);
    }

    #[test]
    fn single_vehicle_matches_direct_loop() {
        let out = run_swarm(swarm(ExecutionMode::B, 1, 4)).unwrap();
        let f = field();
        let mut asv = Asv::new(AsvSpec::smarty(), [0.0; 3], [0.0; 3]).unwrap();
        asv.set_uniform_thrust(1.0);
        let table = asv.precompute(&f).unwrap();
        for _ in 0..200 {
            asv.step(&f, &table, 0.04).unwrap();
        }
        assert_eq!(out.vehicles[0].asv.state(), asv.state());
    }

    #[test]
    fn mode_c_counts_vehicle_time() {
        let out = run_swarm(swarm(ExecutionMode::C, 4, 2)).unwrap();
        assert!((out.report.sim_time - 32.0).abs() < 1e-9);
        assert!(out.report.ratio > 0.0);
    }

    #[test]
    fn lockstep_clocks_stay_within_one_step() {
        let mut run = swarm(ExecutionMode::B, 9, 4);
        run.monitor_lockstep = true;
        let out = run_swarm(run).unwrap();
        assert!(out.report.max_clock_skew_steps.unwrap() <= 1);
    }

    #[test]
    fn distance_stop() {
        let stop = StopCondition::Distance {
            distance: 1.0,
            max_duration: 100.0,
        };
        let mut steps = Vec::new();
        for mode in ExecutionMode::ALL {
            let mut run = swarm(mode, 3, 2);
            let starts: Vec<[f64; 3]> = run.vehicles.iter().map(|v| v.asv.state().position).collect();
            run.stop = stop;
            let out = run_swarm(run).unwrap();
            for (v, s) in out.vehicles.iter().zip(&starts) {
                assert!(v.steps() < 2500);
                let [x, y, _] = v.asv.state().position;
                assert!((x - s[0]).hypot(y - s[1]) >= 1.0);
            }
            steps.push(out.vehicles.iter().map(|v| v.steps()).collect::<Vec<_>>());
        }
        assert!(steps.windows(2).all(|w| w[0] == w[1]), "{steps:?}");
    }

    #[test]
    fn failing_vehicle_is_reported() {
        for mode in ExecutionMode::ALL {
            let mut run = swarm(mode, 5, 2);
            run.vehicles[3]
                .asv
                .set_external_force(Vector6([f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0]));
            match run_swarm(run) {
                Err(Error::Vehicle { vehicle, .. }) => assert_eq!(vehicle, 3, "mode {mode}"),
                other => panic!("mode {mode}: expected vehicle failure, got {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_foreign_table() {
        let mut run = swarm(ExecutionMode::A, 1, 1);
        let other = WaveField::generate(&SeaStateParams::new(4.0, 1.0, 5, 3, 12).unwrap()).unwrap();
        let asv = Asv::new(AsvSpec::smarty(), [0.0; 3], [0.0; 3]).unwrap();
        let table = Arc::new(asv.precompute(&other).unwrap());
        assert!(run.push(SwarmVehicle::new(asv, table)).is_err());
    }

    #[test]
    fn seeds_follow_master() {
        let run = swarm(ExecutionMode::A, 3, 1);
        let seeds: Vec<u64> = run.vehicles.iter().map(|v| v.seed).collect();
        assert_eq!(seeds, vec![5, 4, 7]);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("b".parse::<ExecutionMode>().unwrap(), ExecutionMode::B);
        assert!("D".parse::<ExecutionMode>().is_err());
    }
}
