//! Per-band ITD on octave-filtered channels.
//!
//! A steady tone correlates equally well at every whole period of lag, so
//! the carrier alone is ambiguous above a few hundred Hz. The estimate is
//! taken in two passes: the Hilbert envelopes of the band signals give a
//! coarse lag from onsets and offsets, then the carrier correlation peak
//! nearest that lag supplies the fine value.

use super::itd::{correlation_peak, Weighting, DEFAULT_MAX_LAG_S};
use crate::dsp::{filtfilt, hilbert_envelope, octave_bandpass};
use crate::error::{Error, Result};
use crate::signals::{SampleBuffer, StereoBuffer, SILENCE_RMS};

/// A band more than 80 dB below its channel counts as empty.
const BAND_FLOOR: f64 = 1e-4;

/// Low and high probe tones used for the per-band ITD comparison.
pub const LOW_BAND_HZ: f64 = 220.0;
pub const HIGH_BAND_HZ: f64 = 6000.0;

/// ITD in seconds within one octave band around `center_hz`.
pub fn band_itd_single(stereo: &StereoBuffer, center_hz: f64, max_lag_s: f64) -> Result<f64> {
    let fs = stereo.sample_rate() as f64;
    if !(center_hz > 0.0 && center_hz < fs / 2.0) {
        return Err(Error::invalid(
            "band center",
            format!("must lie in (0, {}) Hz, got {center_hz}", fs / 2.0),
        ));
    }
    let sections = octave_bandpass(center_hz, fs);
    let band = |b: &SampleBuffer| -> Result<Vec<f64>> {
        let y = b.with_samples(filtfilt(&sections, b.samples()));
        let threshold = (BAND_FLOOR * b.rms()).max(SILENCE_RMS);
        let rms = y.rms();
        if rms < threshold {
            return Err(Error::Silent { rms, threshold });
        }
        Ok(y.into_samples())
    };
    let left = band(stereo.left())?;
    let right = band(stereo.right())?;

    let max_lag = (max_lag_s * fs).ceil() as isize;
    if max_lag as usize >= stereo.len() {
        return Err(Error::invalid("max_lag", "exceeds the buffer length"));
    }
    let centered = |v: Vec<f64>| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.into_iter().map(|x| x - mean).collect::<Vec<_>>()
    };
    let env_l = centered(hilbert_envelope(&left));
    let env_r = centered(hilbert_envelope(&right));
    let coarse = correlation_peak(&env_l, &env_r, -max_lag, max_lag, Weighting::None).lag_samples();

    let half_period = 0.5 * fs / center_hz;
    let lo = (coarse - half_period).floor() as isize;
    let hi = (coarse + half_period).ceil() as isize;
    let fine = correlation_peak(&left, &right, lo, hi, Weighting::None);
    Ok(fine.lag_samples() / fs)
}

/// ITDs in the octave bands around `low_hz` and `high_hz`.
pub fn band_itd(stereo: &StereoBuffer, low_hz: f64, high_hz: f64) -> Result<(f64, f64)> {
    Ok((
        band_itd_single(stereo, low_hz, DEFAULT_MAX_LAG_S)?,
        band_itd_single(stereo, high_hz, DEFAULT_MAX_LAG_S)?,
    ))
}
