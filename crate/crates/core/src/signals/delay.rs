//! Band-limited fractional delay by windowed-sinc interpolation.

use std::f64::consts::PI;

use super::SampleBuffer;
use crate::error::{Error, Result};

/// Taps on each side of the interpolation point (64 taps total).
pub const HALF_TAPS: usize = 32;

/// Kaiser window shape; about 90 dB stopband with a passband reaching
/// roughly 0.45 of the sample rate.
const KAISER_BETA: f64 = 9.0;

/// Delays `buf` by `delay` seconds, keeping the original length. Samples
/// before the start are taken as zero.
pub fn apply_fractional_delay(buf: &SampleBuffer, delay: f64) -> Result<SampleBuffer> {
    if !(delay >= 0.0) || !delay.is_finite() {
        return Err(Error::invalid(
            "delay",
            format!("must be non-negative, got {delay}"),
        ));
    }
    let samples = delay_samples(buf.samples(), delay * buf.sample_rate() as f64);
    Ok(buf.with_samples(samples))
}

/// Delays a raw slice by `delay` samples (non-negative).
pub(crate) fn delay_samples(x: &[f64], delay: f64) -> Vec<f64> {
    let whole = delay.floor();
    let frac = delay - whole;
    let shift = whole as usize;
    let n = x.len();
    let mut out = vec![0.0; n];
    if frac == 0.0 {
        if shift < n {
            out[shift..].copy_from_slice(&x[..n - shift]);
        }
        return out;
    }

    // y[i] = sum_j x[i - shift - j] * h(j - frac), j in (-HALF_TAPS, HALF_TAPS]
    let taps = interpolation_taps(frac);
    let lo = 1 - HALF_TAPS as isize;
    for (i, y) in out.iter_mut().enumerate() {
        let base = i as isize - shift as isize;
        let mut acc = 0.0;
        for (k, h) in taps.iter().enumerate() {
            let src = base - (lo + k as isize);
            if src >= 0 && (src as usize) < n {
                acc += h * x[src as usize];
            }
        }
        *y = acc;
    }
    out
}

fn interpolation_taps(frac: f64) -> Vec<f64> {
    let half = HALF_TAPS as f64;
    let norm = bessel_i0(KAISER_BETA);
    let mut taps: Vec<f64> = (1 - HALF_TAPS as isize..=HALF_TAPS as isize)
        .map(|j| {
            let t = j as f64 - frac;
            let r = t / half;
            let w = if r.abs() >= 1.0 {
                0.0
            } else {
                bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / norm
            };
            sinc(t) * w
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|h| *h /= dc);
    taps
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{gen_pink_noise, gen_sine};

    #[test]
    fn zero_delay_is_identity() {
        let x = gen_pink_noise(0.1, 48_000, 3).unwrap();
        let y = apply_fractional_delay(&x, 0.0).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn one_sample_delay_is_a_shift() {
        let x = gen_pink_noise(0.1, 48_000, 4).unwrap();
        let y = apply_fractional_delay(&x, 1.0 / 48_000.0).unwrap();
        for i in 1..x.len() {
            assert!((y.samples()[i] - x.samples()[i - 1]).abs() < 1e-6);
        }
        assert_eq!(y.samples()[0], 0.0);
    }

    #[test]
    fn negative_delay_rejected() {
        let x = gen_sine(100.0, 0.01, 48_000, 1.0).unwrap();
        assert!(apply_fractional_delay(&x, -1e-3).is_err());
    }

    #[test]
    fn bessel_matches_reference() {
        // I0(1) and I0(9) from Abramowitz & Stegun tables
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert!((bessel_i0(9.0) - 1_093.588_354_511_374_5).abs() < 1e-9);
    }

    #[test]
    fn taps_have_unit_dc_gain() {
        for frac in [0.1, 0.25, 0.5, 0.9] {
            let s: f64 = interpolation_taps(frac).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
