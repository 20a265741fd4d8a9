//! Motion statistics.

/// Peak deviations from the mean between successive mean-crossings.
///
/// Only complete half-cycles count: the stretches before the first and after
/// the last crossing are dropped.
pub fn crossing_peaks(series: &[f64]) -> Vec<f64> {
    if series.len() < 3 {
        return Vec::new();
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let mut peaks = Vec::new();
    let mut sign = 0.0;
    let mut peak = 0.0f64;
    // the first lobe is only complete once a second crossing has been seen
    let mut complete = false;
    for &x in series {
        let d = x - mean;
        if d == 0.0 {
            continue;
        }
        let s = d.signum();
        if s != sign {
            if complete {
                peaks.push(peak);
            }
            complete = sign != 0.0;
            sign = s;
            peak = 0.0;
        }
        peak = peak.max(d.abs());
    }
    peaks
}

/// Mean of the highest third of the peaks (at least one peak).
pub fn mean_of_highest_third(peaks: &[f64]) -> f64 {
    if peaks.is_empty() {
        return 0.0;
    }
    let mut sorted = peaks.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let n = ((sorted.len() as f64) / 3.0).round().max(1.0) as usize;
    sorted[..n].iter().sum::<f64>() / n as f64
}

/// Significant amplitude of a motion record: the mean of the highest third of
/// the peak deviations between mean-crossings. A constant record gives 0.
pub fn significant_amplitude(series: &[f64]) -> f64 {
    let peaks = crossing_peaks(series);
    if peaks.len() < 20 && !peaks.is_empty() {
        log::debug!("significant amplitude from only {} half-cycles", peaks.len());
    }
    mean_of_highest_third(&peaks)
}

/// Population standard deviation.
pub fn std_dev(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    (series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn sinusoid() {
        let series: Vec<f64> = (0..20_000)
            .map(|i| 0.7 * (TAU * i as f64 / 400.0 + 0.3).sin() + 5.0)
            .collect();
        let a = significant_amplitude(&series);
        assert!((a - 0.7).abs() < 0.007, "{a}");
    }

    #[test]
    fn constant_is_zero() {
        assert_eq!(significant_amplitude(&[3.0; 100]), 0.0);
        assert_eq!(significant_amplitude(&[]), 0.0);
    }

    #[test]
    fn two_level_peaks() {
        // half-waves alternating in sign; peak magnitudes 1 and 2 in equal numbers
        let mut series = vec![0.0];
        for i in 0..60 {
            let amp = if (i / 2) % 2 == 0 { 1.0 } else { 2.0 };
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            for k in 1..10 {
                series.push(sign * amp * (std::f64::consts::PI * k as f64 / 10.0).sin());
            }
            series.push(0.0);
        }
        let peaks = crossing_peaks(&series);
        // brute-force oracle: sort descending and average the top third
        let mut sorted = peaks.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let top = &sorted[..sorted.len() / 3];
        let oracle = top.iter().sum::<f64>() / top.len() as f64;
        assert!((significant_amplitude(&series) - oracle).abs() < 1e-12);
        assert!((oracle - 2.0).abs() < 1e-12);
    }

    #[test]
    fn partial_half_cycles_are_dropped() {
        // one leading partial lobe of height 9 must not count
        let mut series = vec![9.0, 8.0];
        for i in 0..200 {
            series.push((TAU * i as f64 / 20.0).sin());
        }
        let peaks = crossing_peaks(&series);
        assert!(peaks.iter().all(|&p| p < 2.0), "{peaks:?}");
    }

    #[test]
    fn std_dev_basic() {
        assert_eq!(std_dev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]), 2.0);
    }
}
