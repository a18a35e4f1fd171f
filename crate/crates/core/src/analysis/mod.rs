//! Measurement pipeline: dual-channel transfer function, cross-correlation
//! ITD, per-band ITD, and microphone-pair calibration.

mod band;
mod calibration;
mod itd;
mod spectral;
mod summary;
mod transfer;

use serde::{Deserialize, Serialize};

pub use band::{band_itd, band_itd_single, HIGH_BAND_HZ, LOW_BAND_HZ};
pub use calibration::{
    calibration_check, CalibrationVerdict, DEFAULT_CHECK_BAND, DEFAULT_TOLERANCE_DB,
};
pub use itd::{estimate_itd, itd_peak, CorrelationPeak, Weighting, DEFAULT_MAX_LAG_S};
pub use spectral::{hann, welch_psd, Psd, DEFAULT_FFT_SIZE, DEFAULT_OVERLAP};
pub use summary::{ild_spectrum_summary, OctaveLevel, OCTAVE_CENTERS_HZ};
pub use transfer::{transfer_function, TransferFunction};

use crate::error::{Error, Result};
use crate::signals::StereoBuffer;

/// Settings for [`analyze_capture`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub fft_size: usize,
    pub overlap: f64,
    pub weighting: Weighting,
    pub max_lag_s: f64,
    pub low_band_hz: f64,
    pub high_band_hz: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            fft_size: DEFAULT_FFT_SIZE,
            overlap: DEFAULT_OVERLAP,
            weighting: Weighting::None,
            max_lag_s: DEFAULT_MAX_LAG_S,
            low_band_hz: LOW_BAND_HZ,
            high_band_hz: HIGH_BAND_HZ,
        }
    }
}

/// Binaural cues of a two-channel capture, left ear as reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CueReport {
    /// Broadband ITD; positive when the right channel lags.
    pub itd_s: f64,
    /// `None` when the band carries no signal.
    pub itd_low_s: Option<f64>,
    pub itd_high_s: Option<f64>,
    /// Right relative to left: negative magnitude where the right ear is
    /// shadowed.
    pub ild_spectrum: TransferFunction,
    /// Per-bin IPD in degrees, positive when the right channel lags.
    pub ipd_spectrum: Vec<f64>,
}

/// Upper sanity bound on |ITD| for any plausible rig.
pub const MAX_PLAUSIBLE_ITD_S: f64 = 0.002;

pub fn analyze_capture(stereo: &StereoBuffer, config: &AnalysisConfig) -> Result<CueReport> {
    let itd_s = estimate_itd(stereo, config.max_lag_s, config.weighting)?;
    let band = |hz: f64| match band_itd_single(stereo, hz, config.max_lag_s) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Silent { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let itd_low_s = band(config.low_band_hz)?;
    let itd_high_s = band(config.high_band_hz)?;
    let ild_spectrum = transfer_function(
        stereo.left(),
        stereo.right(),
        config.fft_size,
        config.overlap,
    )?;
    let ipd_spectrum = ild_spectrum
        .phase_deg
        .iter()
        .map(|p| crate::cue_models::wrap_degrees(-p))
        .collect();
    Ok(CueReport {
        itd_s,
        itd_low_s,
        itd_high_s,
        ild_spectrum,
        ipd_spectrum,
    })
}
