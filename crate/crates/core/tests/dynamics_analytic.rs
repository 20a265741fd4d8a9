use std::f64::consts::TAU;

use swell_core::dynamics::integrate_step;
use swell_core::{AsvState, Dof, RigidBodyMatrices, Vector6};

fn matrices(stiffness: f64, drag: f64) -> RigidBodyMatrices {
    RigidBodyMatrices::new(
        Vector6([10.0, 10.0, 10.0, 0.2, 0.3, 0.3]),
        Vector6([2.0, 3.0, 4.0, 0.04, 0.06, 0.06]),
        Vector6([0.0, 0.0, stiffness, 0.5, 0.8, 0.0]),
        Vector6([drag; 6]),
    )
    .unwrap()
}

fn heave_series(m: &RigidBodyMatrices, z0: f64, dt: f64, duration: f64) -> Vec<f64> {
    let mut s = AsvState::at([0.0, 0.0, z0], [0.0; 3]);
    let n = (duration / dt).round() as usize;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        s = integrate_step(&s, &Vector6::zeros(), m, dt).unwrap();
        out.push(s.position[2]);
    }
    out
}

#[test]
fn undamped_heave_oscillates_at_natural_frequency() {
    let m = matrices(800.0, 0.0);
    let wn = m.natural_frequency(Dof::Heave);
    let dt = 1e-4;
    let series = heave_series(&m, 0.05, dt, 20.0);
    // upward zero crossings
    let crossings: Vec<f64> = series
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < 0.0 && w[1] >= 0.0)
        .map(|(i, w)| (i as f64 + w[0] / (w[0] - w[1])) * dt)
        .collect();
    let period = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    assert!((period - TAU / wn).abs() < 1e-3 * TAU / wn, "{period} vs {}", TAU / wn);
    let peak = series.iter().fold(0.0f64, |a, &z| a.max(z.abs()));
    assert!((peak - 0.05).abs() < 1e-3);
}

#[test]
fn damped_heave_decays_monotonically() {
    let m = matrices(800.0, 40.0);
    let series = heave_series(&m, 0.1, 1e-3, 10.0);
    // largest excursion of each lobe between zero crossings
    let mut peaks = Vec::new();
    let mut peak = 0.0f64;
    for w in series.windows(2) {
        peak = peak.max(w[0].abs());
        if w[0].signum() != w[1].signum() {
            peaks.push(peak);
            peak = 0.0;
        }
    }
    assert!(peaks.len() > 4);
    assert!(peaks.windows(2).all(|w| w[1] < w[0]), "{peaks:?}");
    assert!(series.last().unwrap().abs() < 0.02);
}

#[test]
fn surge_reaches_terminal_speed() {
    let c = 17.6;
    let force = 4.0;
    let m = matrices(800.0, c);
    let mut s = AsvState::at([0.0; 3], [0.0; 3]);
    let push = Vector6([force, 0.0, 0.0, 0.0, 0.0, 0.0]);
    for _ in 0..20_000 {
        s = integrate_step(&s, &push, &m, 0.01).unwrap();
    }
    let terminal = (force / c).sqrt();
    assert!((s.velocity[0] - terminal).abs() < 1e-6 * terminal);
    assert!(s.position[0].abs() < 1e-12);
}

/// Energy functional conserved exactly by semi-implicit Euler on a linear oscillator.
fn shadow_energy(m: &RigidBodyMatrices, s: &AsvState, dt: f64) -> f64 {
    let inertia = m.inertia();
    let dx = s.restoring_displacement();
    (0..6)
        .map(|i| {
            let (v, x, k) = (s.velocity[i], dx[i], m.stiffness[i]);
            0.5 * inertia[i] * v * v + 0.5 * k * x * x - 0.5 * dt * k * x * v
        })
        .sum()
}

#[test]
fn unforced_motion_never_gains_energy() {
    let dt = 0.01;
    for drag in [0.0, 5.0, 50.0] {
        let m = matrices(800.0, drag);
        let mut s = AsvState::at([0.0, 0.0, 0.04], [0.05, -0.03, 0.0]);
        s.velocity = Vector6([0.3, -0.2, 0.1, 0.2, -0.1, 0.4]);
        s = integrate_step(&s, &Vector6::zeros(), &m, dt).unwrap();
        let mut last = shadow_energy(&m, &s, dt);
        let start = last;
        for _ in 0..5000 {
            s = integrate_step(&s, &Vector6::zeros(), &m, dt).unwrap();
            let e = shadow_energy(&m, &s, dt);
            assert!(e <= last + 1e-12 * start, "drag {drag}: {e} > {last}");
            last = e;
        }
        if drag == 0.0 {
            assert!((last - start).abs() < 1e-9 * start);
        } else {
            assert!(last < 0.5 * start);
        }
    }
}

#[test]
fn halving_the_step_converges_at_first_order() {
    let m = matrices(800.0, 10.0);
    let reference = heave_series(&m, 0.05, 1e-5, 2.0);
    let z_ref = *reference.last().unwrap();
    let errors: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| (heave_series(&m, 0.05, dt, 2.0).last().unwrap() - z_ref).abs())
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((0.8..1.3).contains(&order), "{errors:?}");
    }
}
