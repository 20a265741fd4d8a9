use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swell_core::wave::{directional_density, pm_spectrum_density, PmSpectrum};
use swell_core::{SeaStateParams, WaveField};

#[test]
fn spectrum_is_never_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1_000_000 {
        let f = rng.gen_range(1e-3..20.0);
        let u = rng.gen_range(0.5..40.0);
        let s = pm_spectrum_density(f, u).unwrap();
        assert!(s >= 0.0 && s.is_finite(), "S({f}; {u}) = {s}");
    }
}

#[test]
fn directional_density_integrates_to_point_spectrum() {
    let u = 8.0;
    let f = PmSpectrum::new(u).unwrap().peak_frequency();
    let n = 20_000;
    let h = std::f64::consts::TAU / n as f64;
    let total: f64 = (0..n)
        .map(|i| directional_density(f, -std::f64::consts::PI + (i as f64 + 0.5) * h, u, 0.0).unwrap() * h)
        .sum();
    let point = pm_spectrum_density(f, u).unwrap();
    assert!((total - point).abs() < 1e-6 * point);
}

#[test]
fn ensemble_elevation_variance_matches_field_moment() {
    // one realisation is not ergodic, so average over seeds
    let mut ratio = 0.0;
    let seeds = 48;
    for seed in 0..seeds {
        let field = WaveField::generate(&SeaStateParams::new(10.0, 0.3, 15, 5, seed).unwrap()).unwrap();
        let n = 2000;
        let var = (0..n)
            .map(|i| field.surface_elevation(1.5, -4.0, i as f64 * 0.5).powi(2))
            .sum::<f64>()
            / n as f64;
        ratio += var / field.zeroth_moment() / seeds as f64;
    }
    assert!((ratio - 1.0).abs() < 0.15, "{ratio}");
}

#[test]
fn field_moment_is_close_to_spectral_moment() {
    let field = WaveField::generate(&SeaStateParams::new(10.0, 0.0, 15, 5, 1).unwrap()).unwrap();
    let m0 = PmSpectrum::new(10.0).unwrap().zeroth_moment();
    assert!((field.zeroth_moment() / m0 - 1.0).abs() < 0.02);
    assert!((field.significant_wave_height() - 4.0 * m0.sqrt()).abs() < 0.02 * 4.0 * m0.sqrt());
}
