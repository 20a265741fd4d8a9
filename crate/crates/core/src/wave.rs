//! Directional Pierson-Moskowitz sea and its discretization into regular waves.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::fmt::sig9;
use crate::GRAVITY;

/// Phillips constant of the Pierson-Moskowitz spectrum.
pub const PM_ALPHA: f64 = 8.10e-3;
/// Dimensionless shape constant of the Pierson-Moskowitz spectrum.
pub const PM_BETA: f64 = 0.74;
/// Lower threshold frequency as a multiple of the peak frequency.
pub const F_MIN_RATIO: f64 = 0.652;
/// Upper threshold frequency as a multiple of the peak frequency.
pub const F_MAX_RATIO: f64 = 5.946;

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed difference `a - b` wrapped into `(-π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// The two constants of the Pierson-Moskowitz spectrum for one wind speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmSpectrum {
    /// `A = αg²(2π)⁻⁴`, m²·Hz⁴.
    pub a: f64,
    /// `B = β(2πU/g)⁻⁴`, Hz⁴.
    pub b: f64,
}

impl PmSpectrum {
    pub fn new(wind_speed: f64) -> Result<Self> {
        if !(wind_speed > 0.0) || !wind_speed.is_finite() {
            return Err(Error::domain(format!("wind speed must be positive, got {wind_speed}")));
        }
        let a = PM_ALPHA * GRAVITY * GRAVITY * TAU.powi(-4);
        let b = PM_BETA * (TAU * wind_speed / GRAVITY).powi(-4);
        Ok(Self { a, b })
    }

    /// Spectral density at `f` Hz, m²/Hz.
    #[inline]
    pub fn density(&self, f: f64) -> f64 {
        let f4 = f * f * f * f;
        self.a / (f4 * f) * (-self.b / f4).exp()
    }

    /// Zeroth moment of the untruncated spectrum, `A / 4B`, m².
    pub fn zeroth_moment(&self) -> f64 {
        self.a / (4.0 * self.b)
    }

    /// Peak frequency `(4B/5)^¼`, Hz.
    pub fn peak_frequency(&self) -> f64 {
        (0.8 * self.b).powf(0.25)
    }
}

/// Pierson-Moskowitz spectral density `S(f)` in m²/Hz for wind speed `wind_speed`.
pub fn pm_spectrum_density(f: f64, wind_speed: f64) -> Result<f64> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(Error::domain(format!("frequency must be positive, got {f}")));
    }
    Ok(PmSpectrum::new(wind_speed)?.density(f))
}

/// Spreading function, peaking along `wind_direction` and zero beyond ±π/2 of it.
#[inline]
pub fn spreading(heading: f64, wind_direction: f64) -> f64 {
    let d = angle_difference(heading, wind_direction);
    if d.abs() <= FRAC_PI_2 {
        let c = d.cos();
        2.0 / PI * c * c
    } else {
        0.0
    }
}

/// Directional spectral density `S(f)·G(μ)` in m²/(Hz·rad).
pub fn directional_density(f: f64, heading: f64, wind_speed: f64, wind_direction: f64) -> Result<f64> {
    Ok(pm_spectrum_density(f, wind_speed)? * spreading(heading, wind_direction))
}

/// Peak, lower and upper threshold frequencies (Hz) for a wind speed.
pub fn frequency_bounds(wind_speed: f64) -> Result<(f64, f64, f64)> {
    let fp = PmSpectrum::new(wind_speed)?.peak_frequency();
    Ok((fp, F_MIN_RATIO * fp, F_MAX_RATIO * fp))
}

/// Wind speed whose untruncated spectrum has significant wave height `hs`.
///
/// Solved by bisection on `4√(A/4B) = hs` to a relative tolerance of 1e-12.
pub fn wind_speed_for_significant_height(hs: f64) -> Result<f64> {
    if !(hs > 0.0) || !hs.is_finite() {
        return Err(Error::domain(format!(
            "significant wave height must be positive, got {hs}"
        )));
    }
    let height = |u: f64| 4.0 * PmSpectrum::new(u).map(|s| s.zeroth_moment().sqrt()).unwrap_or(0.0);
    let (mut lo, mut hi) = (1e-3, 1.0);
    while height(hi) < hs {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::domain(format!("no wind speed produces Hs = {hs} m")));
        }
    }
    while (hi - lo) > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if height(mid) < hs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Parameters of a wind-generated sea.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeaStateParams {
    /// Wind speed, m/s.
    pub wind_speed: f64,
    /// Wind direction, radians clockwise from North, in `[0, 2π)`.
    pub wind_direction: f64,
    pub n_frequency_bands: usize,
    pub n_headings: usize,
    /// Seed of the phase generator.
    pub seed: u64,
}

impl SeaStateParams {
    /// Validates the parameters and normalizes the wind direction.
    pub fn new(
        wind_speed: f64,
        wind_direction: f64,
        n_frequency_bands: usize,
        n_headings: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(wind_speed > 0.0) || !wind_speed.is_finite() {
            return Err(Error::domain(format!("wind speed must be positive, got {wind_speed}")));
        }
        if !wind_direction.is_finite() {
            return Err(Error::domain("wind direction must be finite"));
        }
        if n_frequency_bands == 0 || n_headings == 0 {
            return Err(Error::domain("need at least one frequency band and one heading"));
        }
        Ok(Self {
            wind_speed,
            wind_direction: normalize_angle(wind_direction),
            n_frequency_bands,
            n_headings,
            seed,
        })
    }
}

/// One sinusoidal component of an irregular sea.
///
/// Deep-water dispersion is assumed, so the wave number is `ω²/g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularWave {
    amplitude: f64,
    frequency: f64,
    circular_frequency: f64,
    heading: f64,
    phase: f64,
    wave_number: f64,
}

impl RegularWave {
    /// `amplitude` in m, `frequency` in Hz, `heading` and `phase` in radians.
    pub fn new(amplitude: f64, frequency: f64, heading: f64, phase: f64) -> Result<Self> {
        if !(amplitude >= 0.0) || !amplitude.is_finite() {
            return Err(Error::domain(format!(
                "wave amplitude must be non-negative, got {amplitude}"
            )));
        }
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::domain(format!(
                "wave frequency must be positive, got {frequency}"
            )));
        }
        if !heading.is_finite() || !phase.is_finite() {
            return Err(Error::domain("wave heading and phase must be finite"));
        }
        let circular_frequency = TAU * frequency;
        Ok(Self {
            amplitude,
            frequency,
            circular_frequency,
            heading: normalize_angle(heading),
            phase: normalize_angle(phase),
            wave_number: circular_frequency * circular_frequency / GRAVITY,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn circular_frequency(&self) -> f64 {
        self.circular_frequency
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }

    /// Wave length `2π/k`, m.
    pub fn wave_length(&self) -> f64 {
        TAU / self.wave_number
    }

    /// Same wave with its amplitude multiplied by `factor` (≥ 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.amplitude * factor, self.frequency, self.heading, self.phase)
    }

    /// Phase argument `k(x sin μ + y cos μ) - ωt + ε` at a horizontal point.
    #[inline]
    pub fn phase_at(&self, x: f64, y: f64, t: f64, omega: f64) -> f64 {
        let (s, c) = self.heading.sin_cos();
        self.wave_number * (x * s + y * c) - omega * t + self.phase
    }

    /// Elevation of this wave alone, m.
    #[inline]
    pub fn elevation(&self, x: f64, y: f64, t: f64) -> f64 {
        self.amplitude * self.phase_at(x, y, t, self.circular_frequency).cos()
    }
}

/// Spectral bookkeeping for a field generated from a sea state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumInfo {
    pub params: SeaStateParams,
    /// Peak frequency, Hz.
    pub peak_frequency: f64,
    /// Lower threshold frequency, Hz.
    pub f_min: f64,
    /// Upper threshold frequency, Hz.
    pub f_max: f64,
}

/// An immutable set of component waves.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    waves: Vec<RegularWave>,
    spectrum: Option<SpectrumInfo>,
}

impl WaveField {
    /// Discretizes the directional spectrum into `n_headings × n_frequency_bands`
    /// regular waves.
    ///
    /// Bands are uniform in heading over `[θ-π/2, θ+π/2]` and in frequency over
    /// the threshold range; the spectrum is sampled at band midpoints and each
    /// band's variance becomes the variance of one wave. Waves are ordered
    /// heading-major, and phases are drawn from a ChaCha12 stream seeded with
    /// `params.seed` in that same order.
    pub fn generate(params: &SeaStateParams) -> Result<Self> {
        let params = SeaStateParams::new(
            params.wind_speed,
            params.wind_direction,
            params.n_frequency_bands,
            params.n_headings,
            params.seed,
        )?;
        let spectrum = PmSpectrum::new(params.wind_speed)?;
        let peak_frequency = spectrum.peak_frequency();
        let f_min = F_MIN_RATIO * peak_frequency;
        let f_max = F_MAX_RATIO * peak_frequency;
        let d_f = (f_max - f_min) / params.n_frequency_bands as f64;
        let d_mu = PI / params.n_headings as f64;
        let theta = params.wind_direction;

        let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
        let mut waves = Vec::with_capacity(params.n_frequency_bands * params.n_headings);
        for j in 0..params.n_headings {
            let offset = -FRAC_PI_2 + (j as f64 + 0.5) * d_mu;
            let heading = theta + offset;
            let c = offset.cos();
            let spread = 2.0 / PI * c * c;
            for i in 0..params.n_frequency_bands {
                let f = f_min + (i as f64 + 0.5) * d_f;
                let variance = spectrum.density(f) * spread * d_f * d_mu;
                let phase = rng.gen_range(0.0..TAU);
                waves.push(RegularWave::new((2.0 * variance).sqrt(), f, heading, phase)?);
            }
        }
        Ok(Self {
            waves,
            spectrum: Some(SpectrumInfo {
                params,
                peak_frequency,
                f_min,
                f_max,
            }),
        })
    }

    /// A field made of explicitly given waves (regular-wave tests, tank experiments).
    pub fn from_waves(waves: Vec<RegularWave>) -> Self {
        Self { waves, spectrum: None }
    }

    /// A field with no waves.
    pub fn calm() -> Self {
        Self::from_waves(Vec::new())
    }

    pub fn waves(&self) -> &[RegularWave] {
        &self.waves
    }

    pub fn len(&self) -> usize {
        self.waves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    /// Spectral parameters, when the field was generated from a sea state.
    pub fn spectrum(&self) -> Option<&SpectrumInfo> {
        self.spectrum.as_ref()
    }

    pub fn params(&self) -> Option<&SeaStateParams> {
        self.spectrum.as_ref().map(|s| &s.params)
    }

    /// Sea surface elevation at `(x, y)` and time `t`, m.
    pub fn surface_elevation(&self, x: f64, y: f64, t: f64) -> f64 {
        self.waves.iter().map(|w| w.elevation(x, y, t)).sum()
    }

    /// Variance of the discrete field, `Σ ζ²/2`, m².
    pub fn zeroth_moment(&self) -> f64 {
        self.waves.iter().map(|w| 0.5 * w.amplitude * w.amplitude).sum()
    }

    /// Significant wave height `4√m₀`, m.
    pub fn significant_wave_height(&self) -> f64 {
        4.0 * self.zeroth_moment().sqrt()
    }

    /// Writes one CSV row per component wave.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "amplitude_m,frequency_hz,heading_rad,phase_rad,wave_number_per_m")?;
        for w in &self.waves {
            writeln!(
                out,
                "{},{},{},{},{}",
                sig9(w.amplitude),
                sig9(w.frequency),
                sig9(w.heading),
                sig9(w.phase),
                sig9(w.wave_number)
            )?;
        }
        Ok(())
    }
}

/// Significant wave height of a field, m.
pub fn significant_wave_height(field: &WaveField) -> f64 {
    field.significant_wave_height()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sea(u: f64, nf: usize, nmu: usize, seed: u64) -> SeaStateParams {
        SeaStateParams::new(u, 0.3, nf, nmu, seed).unwrap()
    }

    #[test]
    fn spectrum_constants_at_ten_knots_of_wind() {
        let s = PmSpectrum::new(10.0).unwrap();
        assert_relative_eq!(s.a, 5.0015e-4, max_relative = 1e-4);
        assert_relative_eq!(s.b, 4.3973e-4, max_relative = 1e-4);
        let fp = s.peak_frequency();
        assert_relative_eq!(fp, 0.13695, max_relative = 1e-4);
        // B/fp⁴ = 5/4 by construction of the peak
        assert_relative_eq!(s.b / fp.powi(4), 1.25, max_relative = 1e-12);
        let density = pm_spectrum_density(fp, 10.0).unwrap();
        assert_relative_eq!(density, s.a / fp.powi(5) * (-1.25f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(density, 2.975, max_relative = 5e-4);
    }

    #[test]
    fn spectrum_tail_and_domain() {
        assert!(pm_spectrum_density(100.0, 10.0).unwrap() < 1e-12);
        assert!(pm_spectrum_density(1e-3, 10.0).unwrap() < 1e-12);
        assert!(matches!(pm_spectrum_density(0.0, 10.0), Err(Error::Domain(_))));
        assert!(matches!(pm_spectrum_density(-1.0, 10.0), Err(Error::Domain(_))));
        assert!(matches!(pm_spectrum_density(0.1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(frequency_bounds(-3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn spectrum_peaks_at_peak_frequency() {
        for &u in &[3.0, 10.0, 25.0] {
            let (fp, _, _) = frequency_bounds(u).unwrap();
            let peak = pm_spectrum_density(fp, u).unwrap();
            assert!(pm_spectrum_density(fp * 1.01, u).unwrap() < peak);
            assert!(pm_spectrum_density(fp * 0.99, u).unwrap() < peak);
        }
    }

    #[test]
    fn threshold_frequencies() {
        let (fp, lo, hi) = frequency_bounds(10.0).unwrap();
        assert_relative_eq!(fp, 0.13695, max_relative = 1e-4);
        assert_relative_eq!(lo, 0.08929, max_relative = 1e-4);
        assert_relative_eq!(hi, 0.81430, max_relative = 1e-4);
        assert_relative_eq!(hi / lo, 9.1196, max_relative = 1e-4);
        let (fp5, _, _) = frequency_bounds(5.0).unwrap();
        assert_relative_eq!(fp5 / fp, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn spreading_shape() {
        let theta = 1.1;
        assert_relative_eq!(spreading(theta, theta), 2.0 / PI);
        assert!(spreading(theta + FRAC_PI_2, theta) < 1e-30);
        assert!(spreading(theta - FRAC_PI_2, theta) < 1e-30);
        assert_eq!(spreading(theta + PI, theta), 0.0);
        // wraps across North
        assert_relative_eq!(
            spreading(0.1, TAU - 0.1),
            2.0 / PI * 0.2f64.cos().powi(2),
            max_relative = 1e-12
        );
        let s = directional_density(0.2, theta, 10.0, theta).unwrap();
        assert_relative_eq!(
            s,
            pm_spectrum_density(0.2, 10.0).unwrap() * 0.636619772,
            max_relative = 1e-9
        );
    }

    #[test]
    fn spreading_integrates_to_one() {
        // composite Simpson oracle
        let theta = 2.0;
        let n = 2000;
        let (a, b) = (theta - FRAC_PI_2, theta + FRAC_PI_2);
        let h = (b - a) / n as f64;
        let mut sum = spreading(a, theta) + spreading(b, theta);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * spreading(a + i as f64 * h, theta);
        }
        assert_relative_eq!(sum * h / 3.0, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn field_size_and_bounds() {
        let field = WaveField::generate(&sea(10.0, 15, 5, 7)).unwrap();
        assert_eq!(field.len(), 75);
        let info = field.spectrum().unwrap();
        for w in field.waves() {
            assert!(w.frequency() >= info.f_min && w.frequency() <= info.f_max);
            assert!(angle_difference(w.heading(), 0.3).abs() <= FRAC_PI_2);
            assert!((0.0..TAU).contains(&w.phase()));
            assert_eq!(w.wave_number(), w.circular_frequency().powi(2) / GRAVITY);
        }
    }

    #[test]
    fn amplitude_from_variance() {
        // a band of variance 0.02 m² becomes a 0.2 m wave
        assert_relative_eq!((2.0f64 * 0.02).sqrt(), 0.2, max_relative = 1e-15);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = WaveField::generate(&sea(8.0, 10, 4, 42)).unwrap();
        let b = WaveField::generate(&sea(8.0, 10, 4, 42)).unwrap();
        let c = WaveField::generate(&sea(8.0, 10, 4, 43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn discrete_variance_matches_banded_quadrature() {
        // independent midpoint evaluation of the double integral, same bands
        let p = sea(10.0, 15, 5, 1);
        let field = WaveField::generate(&p).unwrap();
        let (_, lo, hi) = frequency_bounds(10.0).unwrap();
        let (df, dmu) = ((hi - lo) / 15.0, PI / 5.0);
        let mut integral = 0.0;
        for j in 0..5 {
            let mu = p.wind_direction - FRAC_PI_2 + (j as f64 + 0.5) * dmu;
            for i in 0..15 {
                let f = lo + (i as f64 + 0.5) * df;
                integral += directional_density(f, mu, 10.0, p.wind_direction).unwrap() * df * dmu;
            }
        }
        assert_relative_eq!(field.zeroth_moment(), integral, max_relative = 1e-9);
        assert_relative_eq!(field.zeroth_moment(), 0.28435, max_relative = 0.02);
        assert_relative_eq!(field.significant_wave_height(), 2.133, max_relative = 0.02);
    }

    #[test]
    fn single_wave_elevation() {
        let w = RegularWave::new(0.7, 0.25, 0.4, 0.0).unwrap();
        let field = WaveField::from_waves(vec![w]);
        assert_relative_eq!(field.surface_elevation(0.0, 0.0, 0.0), 0.7);
        let period = TAU / w.circular_frequency();
        for &(x, y, t) in &[(1.0, 2.0, 0.3), (-5.0, 12.0, 7.7)] {
            let e0 = field.surface_elevation(x, y, t);
            let e1 = field.surface_elevation(x, y, t + period);
            assert!((e0 - e1).abs() < 1e-9);
        }
    }

    #[test]
    fn significant_height_formula() {
        assert_eq!(significant_wave_height(&WaveField::calm()), 0.0);
        let field = WaveField::from_waves(vec![RegularWave::new(0.5, 0.2, 0.0, 0.0).unwrap()]);
        assert_relative_eq!(significant_wave_height(&field), 1.41421356, max_relative = 1e-8);
    }

    #[test]
    fn wind_speed_inverts_significant_height() {
        for &hs in &[0.5, 1.25, 2.0] {
            let u = wind_speed_for_significant_height(hs).unwrap();
            let m0 = PmSpectrum::new(u).unwrap().zeroth_moment();
            assert_relative_eq!(4.0 * m0.sqrt(), hs, max_relative = 1e-10);
        }
        let u = wind_speed_for_significant_height(2.132984197134298).unwrap();
        assert_relative_eq!(u, 10.0, max_relative = 1e-9);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SeaStateParams::new(0.0, 0.0, 1, 1, 0).is_err());
        assert!(SeaStateParams::new(5.0, 0.0, 0, 1, 0).is_err());
        assert!(SeaStateParams::new(5.0, 0.0, 1, 0, 0).is_err());
        let p = SeaStateParams::new(5.0, -FRAC_PI_2, 1, 1, 0).unwrap();
        assert_relative_eq!(p.wind_direction, 1.5 * PI);
        assert!(RegularWave::new(-0.1, 0.2, 0.0, 0.0).is_err());
        assert!(RegularWave::new(0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn csv_dump_has_one_row_per_wave() {
        let field = WaveField::generate(&sea(6.0, 3, 2, 3)).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "amplitude_m,frequency_hz,heading_rad,phase_rad,wave_number_per_m"
        );
        assert_eq!(lines.count(), 6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn density_non_negative(f in 1e-4f64..50.0, u in 0.1f64..60.0) {
                let s = pm_spectrum_density(f, u).unwrap();
                prop_assert!(s >= 0.0 && s.is_finite());
            }

            #[test]
            fn headings_inside_window(theta in -10.0f64..10.0, nf in 1usize..8, nmu in 1usize..8, seed in any::<u64>()) {
                let p = SeaStateParams::new(7.0, theta, nf, nmu, seed).unwrap();
                let field = WaveField::generate(&p).unwrap();
                prop_assert_eq!(field.len(), nf * nmu);
                for w in field.waves() {
                    prop_assert!(angle_difference(w.heading(), p.wind_direction).abs() <= FRAC_PI_2 + 1e-12);
                }
            }
        }
    }
}
