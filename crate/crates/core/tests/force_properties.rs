use swell_core::force::{assemble_force, dynamic_pressure, encounter_frequency};
use swell_core::{
    AsvState, ForceAmplitudeTable, HullGeometry, HullPrimitive, PitchLever, PressurePoint, RegularWave, SeaStateParams,
    Vector6, WaveField, SEA_WATER_DENSITY,
};

fn geometry() -> HullGeometry {
    HullGeometry::new(HullPrimitive::Cylinder, 0.32, 0.32, 0.21, 0.11, 0.08).unwrap()
}

fn field(seed: u64) -> WaveField {
    WaveField::generate(&SeaStateParams::new(6.0, 0.4, 7, 5, seed).unwrap()).unwrap()
}

fn moving_state() -> AsvState {
    let mut s = AsvState::at([3.0, -2.0, 0.01], [0.02, -0.01, 1.1]);
    s.velocity[0] = 0.7;
    s.velocity[1] = -0.1;
    s
}

fn close(a: &Vector6, b: &Vector6, tol: f64) -> bool {
    let scale = a.norm().max(b.norm()).max(1e-12);
    (*a - *b).norm() <= tol * scale
}

#[test]
fn net_force_is_sum_of_components() {
    let f = field(11);
    let table = ForceAmplitudeTable::new(&f, &geometry(), SEA_WATER_DENSITY, PitchLever::Breadth).unwrap();
    let state = moving_state();
    for t in [0.0, 1.3, 27.9] {
        let mut sum = Vector6::zeros();
        for i in 0..table.len() {
            sum += table.component_force(i, &state, t);
        }
        assert!(close(&sum, &table.net_force(&state, t), 1e-12));
    }
}

#[test]
fn force_scales_with_amplitude() {
    let f = field(3);
    let doubled = WaveField::from_waves(f.waves().iter().map(|w| w.scaled(2.0).unwrap()).collect());
    let geom = geometry();
    let a = ForceAmplitudeTable::new(&f, &geom, SEA_WATER_DENSITY, PitchLever::Breadth).unwrap();
    let b = ForceAmplitudeTable::new(&doubled, &geom, SEA_WATER_DENSITY, PitchLever::Breadth).unwrap();
    let state = moving_state();
    for t in [0.0, 4.2, 9.9] {
        assert!(close(&(a.net_force(&state, t) * 2.0), &b.net_force(&state, t), 1e-12));
    }
}

#[test]
fn single_wave_force_has_zero_mean_over_a_period() {
    let wave = RegularWave::new(0.1, 0.6, 0.7, 0.2).unwrap();
    let f = WaveField::from_waves(vec![wave]);
    let table = ForceAmplitudeTable::new(&f, &geometry(), SEA_WATER_DENSITY, PitchLever::Breadth).unwrap();
    let state = AsvState::at([1.0, 2.0, 0.0], [0.0, 0.0, 0.3]);
    let period = 1.0 / 0.6;
    let n = 4000;
    let mut mean = Vector6::zeros();
    let mut peak = 0.0f64;
    for i in 0..n {
        let force = table.net_force(&state, period * i as f64 / n as f64);
        peak = peak.max(force.norm());
        mean += force * (1.0 / n as f64);
    }
    assert!(mean.norm() < 1e-10 * peak, "{mean:?}");
}

#[test]
fn pressure_decays_with_depth() {
    let wave = RegularWave::new(0.2, 0.8, 0.0, 0.0).unwrap();
    let k = wave.wave_number();
    let omega = wave.circular_frequency();
    let mut last = f64::INFINITY;
    for i in 0..20 {
        let z = -0.05 * i as f64;
        let p = dynamic_pressure(&wave, 0.0, 0.0, z, 0.0, omega, 1000.0).unwrap();
        let expected = 1000.0 * 9.81 * 0.2 * (k * z).exp();
        assert!((p - expected).abs() < 1e-9 * expected);
        assert!(p < last);
        last = p;
    }
    assert!(dynamic_pressure(&wave, 0.0, 0.0, 0.01, 0.0, omega, 1000.0).is_err());
}

#[test]
fn table_matches_direct_pressure_evaluation() {
    let f = field(29);
    let geom = geometry();
    for lever in [PitchLever::Breadth, PitchLever::LengthBased] {
        let table = ForceAmplitudeTable::new(&f, &geom, SEA_WATER_DENSITY, lever).unwrap();
        let state = moving_state();
        let (sin_yaw, cos_yaw) = state.yaw().sin_cos();
        for t in [0.0, 2.5, 13.0] {
            let mut direct = Vector6::zeros();
            for wave in f.waves() {
                let omega_e = encounter_frequency(wave, state.speed(), state.course());
                let mut p = [0.0; 5];
                for point in PressurePoint::ALL {
                    let (fwd, stbd) = point.body_offset(geom.length, geom.breadth);
                    let x = state.position[0] + fwd * sin_yaw + stbd * cos_yaw;
                    let y = state.position[1] + fwd * cos_yaw - stbd * sin_yaw;
                    let z = geom.point_depth(point);
                    p[point.index()] = dynamic_pressure(wave, x, y, z, t, omega_e, SEA_WATER_DENSITY).unwrap();
                }
                direct += assemble_force(p, table.levers());
            }
            assert!(close(&direct, &table.net_force(&state, t), 1e-10), "{lever:?} t={t}");
        }
    }
}

#[test]
fn encounter_frequency_at_rest_is_wave_frequency() {
    for w in field(5).waves() {
        assert_eq!(encounter_frequency(w, 0.0, 1.0), w.circular_frequency());
        let head_on = encounter_frequency(w, 1.0, w.heading() + std::f64::consts::PI);
        assert!((head_on - (w.circular_frequency() + w.wave_number())).abs() < 1e-12);
    }
}
