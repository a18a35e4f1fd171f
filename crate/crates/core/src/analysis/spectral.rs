//! Welch-averaged auto- and cross-spectra.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Default analysis frame length at 48 kHz.
pub const DEFAULT_FFT_SIZE: usize = 8192;
pub const DEFAULT_OVERLAP: f64 = 0.5;

/// Periodic Hann window (sums to a constant at 50% overlap).
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

pub(crate) fn check_frame(fft_size: usize, overlap: f64, len: usize) -> Result<usize> {
    if fft_size < 2 || !fft_size.is_power_of_two() {
        return Err(Error::invalid(
            "fft_size",
            format!("must be a power of two >= 2, got {fft_size}"),
        ));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::invalid(
            "overlap",
            format!("must lie in [0, 1), got {overlap}"),
        ));
    }
    if len < fft_size {
        return Err(Error::invalid(
            "fft_size",
            format!("{fft_size} exceeds the signal length {len}"),
        ));
    }
    let hop = ((fft_size as f64) * (1.0 - overlap)).round().max(1.0) as usize;
    Ok(hop)
}

/// Averaged one-sided spectra of a pair of signals, unnormalized
/// (mean of windowed |X|^2, conj(X) Y, |Y|^2 over frames).
pub(crate) struct CrossSpectra {
    pub sxx: Vec<f64>,
    pub syy: Vec<f64>,
    pub sxy: Vec<Complex64>,
    pub frames: usize,
}

pub(crate) fn cross_spectra(
    x: &[f64],
    y: &[f64],
    fft_size: usize,
    overlap: f64,
) -> Result<CrossSpectra> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let hop = check_frame(fft_size, overlap, x.len())?;
    let window = hann(fft_size);
    let fft = FftPlanner::new().plan_fft_forward(fft_size);
    let bins = fft_size / 2 + 1;
    let mut out = CrossSpectra {
        sxx: vec![0.0; bins],
        syy: vec![0.0; bins],
        sxy: vec![Complex64::new(0.0, 0.0); bins],
        frames: 0,
    };
    let mut bx = vec![Complex64::new(0.0, 0.0); fft_size];
    let mut by = bx.clone();
    let mut start = 0;
    while start + fft_size <= x.len() {
        for i in 0..fft_size {
            bx[i] = Complex64::new(x[start + i] * window[i], 0.0);
            by[i] = Complex64::new(y[start + i] * window[i], 0.0);
        }
        fft.process(&mut bx);
        fft.process(&mut by);
        for k in 0..bins {
            out.sxx[k] += bx[k].norm_sqr();
            out.syy[k] += by[k].norm_sqr();
            out.sxy[k] += bx[k].conj() * by[k];
        }
        out.frames += 1;
        start += hop;
    }
    let inv = 1.0 / out.frames as f64;
    out.sxx.iter_mut().for_each(|v| *v *= inv);
    out.syy.iter_mut().for_each(|v| *v *= inv);
    out.sxy.iter_mut().for_each(|v| *v *= inv);
    Ok(out)
}

/// One-sided power spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub freqs: Vec<f64>,
    /// Power per Hz.
    pub density: Vec<f64>,
    pub bin_width_hz: f64,
}

impl Psd {
    /// Integral of the density; equals the signal's mean square.
    pub fn total_power(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width_hz
    }

    /// Mean density over [lo, hi) Hz.
    pub fn mean_density(&self, lo: f64, hi: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .freqs
            .iter()
            .zip(&self.density)
            .filter(|(f, _)| **f >= lo && **f < hi)
            .map(|(_, d)| *d)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

/// Welch PSD with a Hann window.
pub fn welch_psd(x: &[f64], sample_rate: u32, fft_size: usize, overlap: f64) -> Result<Psd> {
    let spectra = cross_spectra(x, x, fft_size, overlap)?;
    let fs = sample_rate as f64;
    let energy: f64 = hann(fft_size).iter().map(|w| w * w).sum();
    let last = fft_size / 2;
    let density = spectra
        .sxx
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let one_sided = if k == 0 || k == last { 1.0 } else { 2.0 };
            one_sided * p / (fs * energy)
        })
        .collect();
    Ok(Psd {
        freqs: bin_freqs(fft_size, sample_rate),
        density,
        bin_width_hz: fs / fft_size as f64,
    })
}

pub(crate) fn bin_freqs(fft_size: usize, sample_rate: u32) -> Vec<f64> {
    let df = sample_rate as f64 / fft_size as f64;
    (0..=fft_size / 2).map(|k| k as f64 * df).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{gen_pink_noise, gen_sine};

    fn db(x: f64) -> f64 {
        10.0 * x.log10()
    }

    #[test]
    fn parseval_pink() {
        let x = gen_pink_noise(10.0, 48_000, 11).unwrap();
        let psd = welch_psd(x.samples(), 48_000, 8192, 0.5).unwrap();
        let ms = x.samples().iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((db(psd.total_power()) - db(ms)).abs() < 0.1);
    }

    #[test]
    fn parseval_sine() {
        let x = gen_sine(1000.0, 2.0, 48_000, 0.5).unwrap();
        let psd = welch_psd(x.samples(), 48_000, 4096, 0.5).unwrap();
        assert!((db(psd.total_power()) - db(0.125)).abs() < 0.1);
    }

    #[test]
    fn frame_validation() {
        let x = vec![0.0; 100];
        assert!(welch_psd(&x, 48_000, 96, 0.5).is_err());
        assert!(welch_psd(&x, 48_000, 128, 0.5).is_err());
        assert!(welch_psd(&x, 48_000, 64, 1.0).is_err());
        assert!(welch_psd(&x, 48_000, 64, 0.5).is_ok());
    }
}
