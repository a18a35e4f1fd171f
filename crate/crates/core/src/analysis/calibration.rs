use serde::{Deserialize, Serialize};

use super::spectral::{DEFAULT_FFT_SIZE, DEFAULT_OVERLAP};
use super::transfer::transfer_function;
use crate::error::Result;
use crate::signals::SampleBuffer;

pub const DEFAULT_TOLERANCE_DB: f64 = 3.0;
pub const DEFAULT_CHECK_BAND: (f64, f64) = (20.0, 16_000.0);

/// Outcome of comparing two microphones on a common signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationVerdict {
    pub pass: bool,
    pub max_abs_deviation_db: f64,
    pub worst_freq_hz: f64,
    pub delay_s: f64,
}

/// Checks that `meas` tracks `reference` within `tolerance_db` across
/// `band` and that the two are time-aligned to within half a sample.
pub fn calibration_check(
    reference: &SampleBuffer,
    meas: &SampleBuffer,
    tolerance_db: f64,
    band: (f64, f64),
) -> Result<CalibrationVerdict> {
    let tf = transfer_function(reference, meas, DEFAULT_FFT_SIZE, DEFAULT_OVERLAP)?;
    let (mut worst, mut worst_f) = (0.0f64, band.0);
    for (f, m) in tf.freqs.iter().zip(&tf.magnitude_db) {
        if *f < band.0 || *f > band.1 {
            continue;
        }
        if m.abs() > worst {
            worst = m.abs();
            worst_f = *f;
        }
    }
    let half_sample = 0.5 / reference.sample_rate() as f64;
    Ok(CalibrationVerdict {
        pass: worst <= tolerance_db && tf.broadband_delay_s.abs() <= half_sample,
        max_abs_deviation_db: worst,
        worst_freq_hz: worst_f,
        delay_s: tf.broadband_delay_s,
    })
}
