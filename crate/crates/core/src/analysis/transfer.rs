use serde::{Deserialize, Serialize};

use super::itd::relative_delay;
use super::spectral::{bin_freqs, cross_spectra};
use crate::cue_models::wrap_degrees;
use crate::error::{Error, Result};
use crate::signals::SampleBuffer;

/// Magnitudes below this are reported at the floor instead of -inf.
const MAGNITUDE_FLOOR_DB: f64 = -240.0;

/// Dual-channel (H1) transfer function estimate of measurement over
/// reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    pub freqs: Vec<f64>,
    pub magnitude_db: Vec<f64>,
    /// Wrapped to (-180, 180]; negative when the measurement lags.
    pub phase_deg: Vec<f64>,
    pub coherence: Vec<f64>,
    pub broadband_delay_s: f64,
}

impl TransferFunction {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Frequency resolution in Hz.
    pub fn bin_width_hz(&self) -> f64 {
        self.freqs.get(1).copied().unwrap_or(0.0)
    }

    /// Index of the bin nearest `freq`.
    pub fn bin(&self, freq: f64) -> usize {
        let df = self.bin_width_hz();
        if df == 0.0 {
            return 0;
        }
        ((freq / df).round() as usize).min(self.len() - 1)
    }

    /// Phase unwrapped along frequency, starting from DC.
    pub fn unwrapped_phase_deg(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let mut offset = 0.0;
        let mut prev: Option<f64> = None;
        for &p in &self.phase_deg {
            if let Some(q) = prev {
                let step = p - q;
                offset -= 360.0 * (step / 360.0).round();
            }
            out.push(p + offset);
            prev = Some(p);
        }
        out
    }
}

/// Welch-averaged H1 estimate with Hann windows.
///
/// The broadband delay is the cross-correlation peak (refined to sub-sample
/// precision) of the measurement against the reference, searched within
/// half a frame.
pub fn transfer_function(
    reference: &SampleBuffer,
    measurement: &SampleBuffer,
    fft_size: usize,
    overlap: f64,
) -> Result<TransferFunction> {
    if reference.sample_rate() != measurement.sample_rate() {
        return Err(Error::SampleRateMismatch(
            reference.sample_rate(),
            measurement.sample_rate(),
        ));
    }
    if reference.len() != measurement.len() {
        return Err(Error::LengthMismatch(reference.len(), measurement.len()));
    }
    reference.ensure_audible()?;
    let spectra = cross_spectra(
        reference.samples(),
        measurement.samples(),
        fft_size,
        overlap,
    )?;

    let bins = spectra.sxx.len();
    let mut magnitude_db = Vec::with_capacity(bins);
    let mut phase_deg = Vec::with_capacity(bins);
    let mut coherence = Vec::with_capacity(bins);
    for k in 0..bins {
        let (sxx, syy, sxy) = (spectra.sxx[k], spectra.syy[k], spectra.sxy[k]);
        if sxx <= 0.0 {
            magnitude_db.push(MAGNITUDE_FLOOR_DB);
            phase_deg.push(0.0);
            coherence.push(0.0);
            continue;
        }
        let h = sxy / sxx;
        magnitude_db.push((20.0 * h.norm().log10()).max(MAGNITUDE_FLOOR_DB));
        phase_deg.push(wrap_degrees(h.arg().to_degrees()));
        let coh = if syy > 0.0 {
            sxy.norm_sqr() / (sxx * syy)
        } else {
            0.0
        };
        coherence.push(coh.clamp(0.0, 1.0));
    }

    let max_lag = (fft_size / 2).min(reference.len() - 1) as isize;
    let broadband_delay_s = if measurement.rms() > 0.0 {
        relative_delay(reference, measurement, max_lag)
    } else {
        0.0
    };

    Ok(TransferFunction {
        freqs: bin_freqs(fft_size, reference.sample_rate()),
        magnitude_db,
        phase_deg,
        coherence,
        broadband_delay_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{apply_fractional_delay, gen_pink_noise};

    #[test]
    fn identity() {
        let x = gen_pink_noise(2.0, 48_000, 1).unwrap();
        let tf = transfer_function(&x, &x, 4096, 0.5).unwrap();
        for k in 1..tf.len() {
            assert!(tf.magnitude_db[k].abs() < 1e-6);
            assert!(tf.phase_deg[k].abs() < 1e-6);
            assert!((tf.coherence[k] - 1.0).abs() < 1e-6);
        }
        assert_eq!(tf.broadband_delay_s, 0.0);
    }

    #[test]
    fn half_gain_is_minus_6_02() {
        let x = gen_pink_noise(2.0, 48_000, 2).unwrap();
        let y = x.scaled(0.5);
        let tf = transfer_function(&x, &y, 4096, 0.5).unwrap();
        let expect = 20.0 * 0.5f64.log10();
        for k in 1..tf.len() {
            assert!((tf.magnitude_db[k] - expect).abs() < 1e-9);
            assert!(tf.phase_deg[k].abs() < 1e-9);
        }
    }

    #[test]
    fn pure_delay_phase_law() {
        let x = gen_pink_noise(10.0, 48_000, 3).unwrap();
        let y = apply_fractional_delay(&x, 0.0005).unwrap();
        let tf = transfer_function(&x, &y, 8192, 0.5).unwrap();
        let k = tf.bin(500.0);
        assert!((tf.freqs[k] - 500.0).abs() < 3.0);
        let expect = -360.0 * tf.freqs[k] * 0.0005;
        assert!(
            (tf.phase_deg[k] - expect).abs() < 1.0,
            "{}",
            tf.phase_deg[k]
        );
        assert!(tf.coherence[k] > 0.98);
        assert!((tf.broadband_delay_s - 0.0005).abs() < 1.0 / 48_000.0);
    }

    #[test]
    fn mismatches_rejected() {
        let x = gen_pink_noise(1.0, 48_000, 3).unwrap();
        let short = gen_pink_noise(0.5, 48_000, 3).unwrap();
        let other_rate = gen_pink_noise(1.0, 44_100, 3).unwrap();
        assert!(transfer_function(&x, &short, 1024, 0.5).is_err());
        assert!(transfer_function(&x, &other_rate, 1024, 0.5).is_err());
        assert!(transfer_function(&x, &x, 1 << 17, 0.5).is_err());
        assert!(transfer_function(&x, &x, 1000, 0.5).is_err());
    }
}
