use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::SampleBuffer;
use crate::error::{Error, Result};

/// Peak level pink noise is normalized to. Leaves 6 dB of headroom so
/// delayed and filtered copies still fit in [-1, 1].
pub const PINK_PEAK: f64 = 0.5;

/// Samples discarded while the pinking filter's slowest pole settles.
const PINK_WARMUP: usize = 8192;

fn sample_count(duration: f64, sample_rate: u32) -> Result<usize> {
    if sample_rate == 0 {
        return Err(Error::invalid("sample_rate", "must be positive"));
    }
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(Error::invalid(
            "duration",
            format!("must be positive, got {duration}"),
        ));
    }
    Ok((duration * sample_rate as f64).round() as usize)
}

/// Sine at `freq` starting at phase zero.
pub fn gen_sine(
    freq: f64,
    duration: f64,
    sample_rate: u32,
    amplitude: f64,
) -> Result<SampleBuffer> {
    let n = sample_count(duration, sample_rate)?;
    let nyquist = sample_rate as f64 / 2.0;
    if !(freq > 0.0 && freq < nyquist) {
        return Err(Error::invalid(
            "freq",
            format!("must lie in (0, {nyquist}) Hz, got {freq}"),
        ));
    }
    if !(0.0..=1.0).contains(&amplitude) {
        return Err(Error::invalid(
            "amplitude",
            format!("must lie in [0, 1], got {amplitude}"),
        ));
    }
    let w = 2.0 * PI * freq / sample_rate as f64;
    let samples = (0..n).map(|i| amplitude * (w * i as f64).sin()).collect();
    SampleBuffer::new(samples, sample_rate)
}

/// Seeded Gaussian white noise shaped by Paul Kellet's refined pinking
/// filter, then normalized to [`PINK_PEAK`].
pub fn gen_pink_noise(duration: f64, sample_rate: u32, seed: u64) -> Result<SampleBuffer> {
    let n = sample_count(duration, sample_rate)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut filter = PinkingFilter::default();
    for _ in 0..PINK_WARMUP {
        filter.process(StandardNormal.sample(&mut rng));
    }
    let mut samples: Vec<f64> = (0..n)
        .map(|_| filter.process(StandardNormal.sample(&mut rng)))
        .collect();
    let peak = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak > 0.0 {
        let g = PINK_PEAK / peak;
        samples.iter_mut().for_each(|x| *x *= g);
    }
    SampleBuffer::new(samples, sample_rate)
}

/// Unit impulse at `offset`.
pub fn gen_impulse(duration: f64, sample_rate: u32, offset: usize) -> Result<SampleBuffer> {
    let n = sample_count(duration, sample_rate)?;
    if offset >= n {
        return Err(Error::invalid(
            "offset",
            format!("must be below the buffer length {n}, got {offset}"),
        ));
    }
    let mut samples = vec![0.0; n];
    samples[offset] = 1.0;
    SampleBuffer::new(samples, sample_rate)
}

/// Sum of first-order lowpass sections whose poles are spaced to give a
/// -3 dB/octave response across the audio band.
#[derive(Default)]
struct PinkingFilter {
    state: [f64; 7],
}

impl PinkingFilter {
    fn process(&mut self, white: f64) -> f64 {
        let s = &mut self.state;
        s[0] = 0.99886 * s[0] + white * 0.0555179;
        s[1] = 0.99332 * s[1] + white * 0.0750759;
        s[2] = 0.96900 * s[2] + white * 0.1538520;
        s[3] = 0.86650 * s[3] + white * 0.3104856;
        s[4] = 0.55000 * s[4] + white * 0.5329522;
        s[5] = -0.7616 * s[5] - white * 0.0168980;
        let out = s[..6].iter().sum::<f64>() + s[6] + white * 0.5362;
        s[6] = white * 0.115926;
        out
    }
}
