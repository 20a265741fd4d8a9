//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use swell_core::experiment::forward_thrust_commands;
use swell_core::{Asv, AsvSpec, ForceAmplitudeTable, SeaStateParams, WaveField};

/// A 5 m/s sea with `n_headings × n_frequency_bands` waves.
pub fn sea(n_headings: usize, n_frequency_bands: usize) -> Arc<WaveField> {
    let params = SeaStateParams::new(5.0, 0.0, n_frequency_bands, n_headings, 1).expect("valid sea state");
    Arc::new(WaveField::generate(&params).expect("valid sea state"))
}

/// SMARTY under 4 N of forward thrust, with its phase-one table for `field`.
pub fn smarty(field: &WaveField) -> (Asv, ForceAmplitudeTable) {
    let spec = AsvSpec::smarty();
    let mut asv = Asv::new(spec.clone(), [0.0; 3], [0.0; 3]).expect("valid vehicle");
    asv.set_thrust(&forward_thrust_commands(&spec, 4.0));
    let table = asv.precompute(field).expect("valid table");
    (asv, table)
}
