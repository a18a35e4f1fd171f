//! Interaural time difference by generalized cross-correlation.

use std::cmp::Ordering;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signals::{SampleBuffer, StereoBuffer};

/// Default lag search range, comfortably above any head-sized ITD.
pub const DEFAULT_MAX_LAG_S: f64 = 0.002;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Plain cross-correlation.
    #[default]
    None,
    /// Phase transform: whitened cross-spectrum.
    Phat,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Weighting::None),
            "phat" => Ok(Weighting::Phat),
            _ => Err(Error::invalid(
                "weighting",
                format!("expected none|phat, got {s}"),
            )),
        }
    }
}

/// Location of a cross-correlation maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPeak {
    /// Integer lag in samples; positive when the second signal lags.
    pub lag: isize,
    /// Parabolic refinement in (-0.5, 0.5] samples.
    pub offset: f64,
    pub value: f64,
}

impl CorrelationPeak {
    pub fn lag_samples(&self) -> f64 {
        self.lag as f64 + self.offset
    }

    fn negated(self) -> Self {
        Self {
            lag: -self.lag,
            offset: -self.offset,
            value: self.value,
        }
    }
}

/// Cross-correlation r[l] = sum_n a[n] b[n + l] for l in [lo, hi].
pub(crate) fn cross_correlation(
    a: &[f64],
    b: &[f64],
    lo: isize,
    hi: isize,
    weighting: Weighting,
) -> Vec<f64> {
    let reach = lo.unsigned_abs().max(hi.unsigned_abs());
    let n = (a.len().max(b.len()) + reach + 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let pad = |x: &[f64]| {
        let mut v: Vec<Complex64> = x.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        v.resize(n, Complex64::new(0.0, 0.0));
        v
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fft.process(&mut fa);
    fft.process(&mut fb);
    let mut cross: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    if weighting == Weighting::Phat {
        // bins this far below the strongest one carry no usable phase
        let floor = 1e-12 * cross.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for c in cross.iter_mut() {
            let m = c.norm();
            *c = if m > floor {
                *c / m
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    }
    ifft.process(&mut cross);
    let scale = 1.0 / n as f64;
    (lo..=hi)
        .map(|l| cross[l.rem_euclid(n as isize) as usize].re * scale)
        .collect()
}

fn parabolic_offset(y0: f64, y1: f64, y2: f64) -> f64 {
    let denom = y0 - 2.0 * y1 + y2;
    if denom >= 0.0 || !denom.is_finite() {
        return 0.0;
    }
    (0.5 * (y0 - y2) / denom).clamp(-0.5, 0.5)
}

/// Finds the correlation maximum of (a, b) over lags [lo, hi] and refines it
/// with a parabola through the peak and its neighbours.
///
/// Arguments are put into a canonical order first, so swapping them yields
/// exactly the mirrored peak.
pub(crate) fn correlation_peak(
    a: &[f64],
    b: &[f64],
    lo: isize,
    hi: isize,
    weighting: Weighting,
) -> CorrelationPeak {
    match canonical_order(a, b) {
        Ordering::Greater => correlation_peak_ordered(b, a, -hi, -lo, weighting).negated(),
        // an autocorrelation peaks at zero lag
        Ordering::Equal if lo <= 0 && hi >= 0 => CorrelationPeak {
            lag: 0,
            offset: 0.0,
            value: a.iter().map(|x| x * x).sum(),
        },
        _ => correlation_peak_ordered(a, b, lo, hi, weighting),
    }
}

fn canonical_order(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn correlation_peak_ordered(
    a: &[f64],
    b: &[f64],
    lo: isize,
    hi: isize,
    weighting: Weighting,
) -> CorrelationPeak {
    // one extra lag on each side feeds the parabola at the range edges
    let r = cross_correlation(a, b, lo - 1, hi + 1, weighting);
    let mut best = 1;
    for i in 2..r.len() - 1 {
        if r[i] > r[best] {
            best = i;
        }
    }
    CorrelationPeak {
        lag: lo + best as isize - 1,
        offset: parabolic_offset(r[best - 1], r[best], r[best + 1]),
        value: r[best],
    }
}

fn lag_limit(max_lag_s: f64, sample_rate: u32, len: usize) -> Result<isize> {
    if !(max_lag_s >= 0.0) || !max_lag_s.is_finite() {
        return Err(Error::invalid("max_lag", "must be non-negative"));
    }
    let lag = (max_lag_s * sample_rate as f64).ceil() as usize;
    if lag >= len {
        return Err(Error::invalid(
            "max_lag",
            format!("{lag} samples exceeds the buffer length {len}"),
        ));
    }
    Ok(lag as isize)
}

/// Full peak information for a stereo capture; see [`estimate_itd`].
pub fn itd_peak(
    stereo: &StereoBuffer,
    max_lag_s: f64,
    weighting: Weighting,
) -> Result<CorrelationPeak> {
    stereo.left().ensure_audible()?;
    stereo.right().ensure_audible()?;
    let lag = lag_limit(max_lag_s, stereo.sample_rate(), stereo.len())?;
    Ok(correlation_peak(
        stereo.left().samples(),
        stereo.right().samples(),
        -lag,
        lag,
        weighting,
    ))
}

/// Interaural time difference in seconds, positive when the right channel
/// lags the left.
pub fn estimate_itd(stereo: &StereoBuffer, max_lag_s: f64, weighting: Weighting) -> Result<f64> {
    let peak = itd_peak(stereo, max_lag_s, weighting)?;
    Ok(peak.lag_samples() / stereo.sample_rate() as f64)
}

/// Delay of `measurement` relative to `reference`, in seconds.
pub(crate) fn relative_delay(
    reference: &SampleBuffer,
    measurement: &SampleBuffer,
    max_lag: isize,
) -> f64 {
    let peak = correlation_peak(
        reference.samples(),
        measurement.samples(),
        -max_lag,
        max_lag,
        Weighting::None,
    );
    peak.lag_samples() / reference.sample_rate() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{apply_fractional_delay, gen_impulse, gen_pink_noise};

    fn stereo(l: SampleBuffer, r: SampleBuffer) -> StereoBuffer {
        StereoBuffer::new(l, r).unwrap()
    }

    /// Direct O(n * lags) correlation.
    fn brute_force(a: &[f64], b: &[f64], lo: isize, hi: isize) -> Vec<f64> {
        (lo..=hi)
            .map(|l| {
                (0..a.len())
                    .filter_map(|n| {
                        let m = n as isize + l;
                        (m >= 0 && (m as usize) < b.len()).then(|| a[n] * b[m as usize])
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn fft_correlation_matches_brute_force() {
        let a = gen_pink_noise(0.02, 48_000, 1).unwrap();
        let b = gen_pink_noise(0.02, 48_000, 2).unwrap();
        let fast = cross_correlation(a.samples(), b.samples(), -40, 40, Weighting::None);
        let slow = brute_force(a.samples(), b.samples(), -40, 40);
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn impulses_33_apart() {
        let a = gen_impulse(0.1, 48_000, 100).unwrap();
        let b = gen_impulse(0.1, 48_000, 133).unwrap();
        let slow = brute_force(a.samples(), b.samples(), -96, 96);
        let argmax = slow
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .unwrap()
            .0 as isize
            - 96;
        assert_eq!(argmax, 33);
        let peak = itd_peak(&stereo(a, b), 0.002, Weighting::None).unwrap();
        assert_eq!(peak.lag, 33);
        assert_eq!(peak.offset, 0.0);
    }

    #[test]
    fn identical_channels_give_zero() {
        let x = gen_pink_noise(1.0, 48_000, 5).unwrap();
        let s = stereo(x.clone(), x);
        assert_eq!(estimate_itd(&s, 0.002, Weighting::None).unwrap(), 0.0);
        assert_eq!(estimate_itd(&s, 0.002, Weighting::Phat).unwrap(), 0.0);
    }

    #[test]
    fn fractional_delay_recovered_and_antisymmetric() {
        let x = gen_pink_noise(5.0, 48_000, 9).unwrap();
        let y = apply_fractional_delay(&x, 0.69e-3).unwrap();
        let s = stereo(x, y);
        for w in [Weighting::None, Weighting::Phat] {
            let itd = estimate_itd(&s, 0.002, w).unwrap();
            assert!((itd - 0.69e-3).abs() <= 1.0 / 48_000.0, "{w:?} {itd}");
            let swapped = estimate_itd(&s.swapped(), 0.002, w).unwrap();
            assert_eq!(swapped, -itd);
        }
    }

    #[test]
    fn silent_and_oversized_lag_rejected() {
        let x = gen_pink_noise(0.01, 48_000, 9).unwrap();
        let z = SampleBuffer::silence(x.len(), 48_000).unwrap();
        assert!(matches!(
            estimate_itd(&stereo(x.clone(), z), 0.002, Weighting::None),
            Err(Error::Silent { .. })
        ));
        assert!(estimate_itd(&stereo(x.clone(), x), 1.0, Weighting::None).is_err());
    }

    #[test]
    fn parabola_vertex() {
        // y = -(x - 0.3)^2 sampled at -1, 0, 1
        let f = |x: f64| -(x - 0.3) * (x - 0.3);
        assert!((parabolic_offset(f(-1.0), f(0.0), f(1.0)) - 0.3).abs() < 1e-12);
        assert_eq!(parabolic_offset(1.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn weighting_parses() {
        assert_eq!("PHAT".parse::<Weighting>().unwrap(), Weighting::Phat);
        assert!("foo".parse::<Weighting>().is_err());
    }
}
