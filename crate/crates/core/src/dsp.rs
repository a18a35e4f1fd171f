//! Filters and spectral helpers shared by analysis, rig simulation, and
//! rendering.

use std::f64::consts::{PI, SQRT_2};

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Direct-form I biquad, normalized so a0 = 1 (RBJ cookbook designs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

impl Biquad {
    fn normalized(b: [f64; 3], a: [f64; 3]) -> Self {
        Self {
            b: [b[0] / a[0], b[1] / a[0], b[2] / a[0]],
            a: [a[1] / a[0], a[2] / a[0]],
        }
    }

    fn omega(freq: f64, sample_rate: f64) -> (f64, f64) {
        let w = 2.0 * PI * freq / sample_rate;
        (w.cos(), w.sin())
    }

    pub fn lowpass(freq: f64, q: f64, sample_rate: f64) -> Self {
        let (cos, sin) = Self::omega(freq, sample_rate);
        let alpha = sin / (2.0 * q);
        Self::normalized(
            [(1.0 - cos) / 2.0, 1.0 - cos, (1.0 - cos) / 2.0],
            [1.0 + alpha, -2.0 * cos, 1.0 - alpha],
        )
    }

    pub fn highpass(freq: f64, q: f64, sample_rate: f64) -> Self {
        let (cos, sin) = Self::omega(freq, sample_rate);
        let alpha = sin / (2.0 * q);
        Self::normalized(
            [(1.0 + cos) / 2.0, -(1.0 + cos), (1.0 + cos) / 2.0],
            [1.0 + alpha, -2.0 * cos, 1.0 - alpha],
        )
    }

    /// Shelf with unit slope; `gain_db` above the corner.
    pub fn high_shelf(freq: f64, gain_db: f64, sample_rate: f64) -> Self {
        let (cos, sin) = Self::omega(freq, sample_rate);
        let a = 10f64.powf(gain_db / 40.0);
        let alpha = sin / 2.0 * SQRT_2;
        let k = 2.0 * a.sqrt() * alpha;
        Self::normalized(
            [
                a * ((a + 1.0) + (a - 1.0) * cos + k),
                -2.0 * a * ((a - 1.0) + (a + 1.0) * cos),
                a * ((a + 1.0) + (a - 1.0) * cos - k),
            ],
            [
                (a + 1.0) - (a - 1.0) * cos + k,
                2.0 * ((a - 1.0) - (a + 1.0) * cos),
                (a + 1.0) - (a - 1.0) * cos - k,
            ],
        )
    }

    pub fn peaking(freq: f64, q: f64, gain_db: f64, sample_rate: f64) -> Self {
        let (cos, sin) = Self::omega(freq, sample_rate);
        let a = 10f64.powf(gain_db / 40.0);
        let alpha = sin / (2.0 * q);
        Self::normalized(
            [1.0 + alpha * a, -2.0 * cos, 1.0 - alpha * a],
            [1.0 + alpha / a, -2.0 * cos, 1.0 - alpha / a],
        )
    }

    /// Magnitude response in dB at `freq`.
    pub fn gain_db(&self, freq: f64, sample_rate: f64) -> f64 {
        let w = 2.0 * PI * freq / sample_rate;
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        let num = self.b[0] + z1 * self.b[1] + z2 * self.b[2];
        let den = 1.0 + z1 * self.a[0] + z2 * self.a[1];
        20.0 * (num / den).norm().log10()
    }

    pub fn process(&self, x: &[f64]) -> Vec<f64> {
        let [b0, b1, b2] = self.b;
        let [a1, a2] = self.a;
        let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
        x.iter()
            .map(|&x0| {
                let y0 = b0 * x0 + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
                x2 = x1;
                x1 = x0;
                y2 = y1;
                y1 = y0;
                y0
            })
            .collect()
    }
}

/// Runs a cascade of sections forwards.
pub fn cascade(sections: &[Biquad], x: &[f64]) -> Vec<f64> {
    sections.iter().fold(x.to_vec(), |acc, s| s.process(&acc))
}

/// Zero-phase filtering: the cascade is applied forwards, then backwards.
pub fn filtfilt(sections: &[Biquad], x: &[f64]) -> Vec<f64> {
    let mut y = cascade(sections, x);
    y.reverse();
    let mut z = cascade(sections, &y);
    z.reverse();
    z
}

/// Fourth-order band-pass (Butterworth high-pass and low-pass sections)
/// spanning one octave centered on `center_hz`.
pub fn octave_bandpass(center_hz: f64, sample_rate: f64) -> [Biquad; 2] {
    let q = 1.0 / SQRT_2;
    let lo = center_hz / SQRT_2;
    let hi = (center_hz * SQRT_2).min(0.49 * sample_rate);
    [
        Biquad::highpass(lo, q, sample_rate),
        Biquad::lowpass(hi, q, sample_rate),
    ]
}

/// Magnitude of the analytic signal.
pub fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len().next_power_of_two().max(2);
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(n, Complex64::new(0.0, 0.0));
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        if k == 0 || k == n / 2 {
            continue;
        }
        *c *= if k < n / 2 { 2.0 } else { 0.0 };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf[..x.len()].iter().map(|c| c.norm() * scale).collect()
}

/// Symmetric FIR of `2 * half + 1` taps whose magnitude follows
/// `gain_db(freq)`: the target is sampled on a `grid`-point frequency grid,
/// inverse transformed with zero phase and truncated under a Hann taper.
/// Apply it with [`fir_filter_centered`] to keep the group delay at zero.
pub fn zero_phase_fir(
    gain_db: impl Fn(f64) -> f64,
    sample_rate: f64,
    half: usize,
    grid: usize,
) -> Vec<f64> {
    assert!(grid.is_power_of_two() && grid >= 4 * half);
    let df = sample_rate / grid as f64;
    let mut spec: Vec<Complex64> = (0..grid)
        .map(|k| {
            let bin = if k <= grid / 2 { k } else { grid - k };
            Complex64::new(10f64.powf(gain_db(bin as f64 * df) / 20.0), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(grid).process(&mut spec);
    let scale = 1.0 / grid as f64;
    let width = (half + 1) as f64;
    let side: Vec<f64> = (0..=half)
        .map(|n| spec[n].re * scale * 0.5 * (1.0 + (PI * n as f64 / width).cos()))
        .collect();
    side[1..].iter().rev().chain(&side).copied().collect()
}

/// Magnitude response of an FIR in dB at `freq`.
pub fn fir_gain_db(h: &[f64], freq: f64, sample_rate: f64) -> f64 {
    let w = 2.0 * PI * freq / sample_rate;
    let acc: Complex64 = h
        .iter()
        .enumerate()
        .map(|(n, &c)| Complex64::from_polar(c, -w * n as f64))
        .sum();
    20.0 * acc.norm().log10()
}

/// Convolution with an odd-length FIR aligned on its centre tap, so a
/// symmetric `h` adds no delay. Output keeps the input length.
pub fn fir_filter_centered(h: &[f64], x: &[f64]) -> Vec<f64> {
    assert!(h.len() % 2 == 1);
    let c = h.len() / 2;
    let mut padded = x.to_vec();
    padded.resize(x.len() + c, 0.0);
    fir_filter(h, &padded).split_off(c)
}

/// Linear convolution truncated to the input length.
pub fn fir_filter(h: &[f64], x: &[f64]) -> Vec<f64> {
    if h.len() <= 64 || x.len() < 4 * h.len() {
        return (0..x.len())
            .map(|i| {
                h.iter()
                    .take(i + 1)
                    .enumerate()
                    .map(|(k, c)| c * x[i - k])
                    .sum()
            })
            .collect();
    }
    fft_convolve(h, x)
}

fn fft_convolve(h: &[f64], x: &[f64]) -> Vec<f64> {
    let n = (x.len() + h.len()).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let pad = |v: &[f64]| {
        let mut c: Vec<Complex64> = v.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        c.resize(n, Complex64::new(0.0, 0.0));
        c
    };
    let mut fx = pad(x);
    let mut fh = pad(h);
    fft.process(&mut fx);
    fft.process(&mut fh);
    fx.iter_mut().zip(&fh).for_each(|(a, b)| *a *= b);
    ifft.process(&mut fx);
    let scale = 1.0 / n as f64;
    fx[..x.len()].iter().map(|c| c.re * scale).collect()
}
