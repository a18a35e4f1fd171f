use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::transfer::TransferFunction;
use crate::error::{Error, Result};

/// Octave centers reported by default.
pub const OCTAVE_CENTERS_HZ: [f64; 7] = [125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OctaveLevel {
    pub center_hz: f64,
    pub level_db: f64,
}

/// Power-averaged magnitude of `tf` in each octave band
/// [center/sqrt2, center*sqrt2).
pub fn ild_spectrum_summary(tf: &TransferFunction, centers: &[f64]) -> Result<Vec<OctaveLevel>> {
    let min_hz = tf.freqs.get(1).copied().unwrap_or(0.0);
    let max_hz = tf.freqs.last().copied().unwrap_or(0.0);
    centers
        .iter()
        .map(|&center_hz| {
            let (lo, hi) = (center_hz / SQRT_2, center_hz * SQRT_2);
            if lo < min_hz || hi > max_hz {
                return Err(Error::BandOutOfRange {
                    low_hz: lo,
                    high_hz: hi,
                    min_hz,
                    max_hz,
                });
            }
            let (sum, n) = tf
                .freqs
                .iter()
                .zip(&tf.magnitude_db)
                .filter(|(f, _)| **f >= lo && **f < hi)
                .fold((0.0, 0usize), |(s, n), (_, m)| {
                    (s + 10f64.powf(m / 10.0), n + 1)
                });
            if n == 0 {
                return Err(Error::BandOutOfRange {
                    low_hz: lo,
                    high_hz: hi,
                    min_hz,
                    max_hz,
                });
            }
            Ok(OctaveLevel {
                center_hz,
                level_db: 10.0 * (sum / n as f64).log10(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(db: f64) -> TransferFunction {
        let freqs: Vec<f64> = (0..=4096).map(|k| k as f64 * 48_000.0 / 8192.0).collect();
        let n = freqs.len();
        TransferFunction {
            freqs,
            magnitude_db: vec![db; n],
            phase_deg: vec![0.0; n],
            coherence: vec![1.0; n],
            broadband_delay_s: 0.0,
        }
    }

    #[test]
    fn flat_zero() {
        for b in ild_spectrum_summary(&flat(0.0), &OCTAVE_CENTERS_HZ).unwrap() {
            assert!(b.level_db.abs() < 1e-12);
        }
    }

    #[test]
    fn flat_constant() {
        let g = 20.0 * 0.5f64.log10();
        for b in ild_spectrum_summary(&flat(g), &OCTAVE_CENTERS_HZ).unwrap() {
            assert!((b.level_db - g).abs() < 1e-9);
        }
    }

    #[test]
    fn band_out_of_range() {
        assert!(ild_spectrum_summary(&flat(0.0), &[20_000.0]).is_err());
        assert!(ild_spectrum_summary(&flat(0.0), &[4.0]).is_err());
    }
}
