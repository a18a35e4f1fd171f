//! Binaural rendering of mono sources with model ITD and ILD.
//!
//! Panning alone only changes relative levels; here the far ear also gets
//! the interaural delay and the frequency-dependent shadow, so IPD follows
//! from the delay itself.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rigsim::{simulate_capture, RigKind, RigSpec, SourceSpec};
use crate::signals::{SampleBuffer, StereoBuffer, DEFAULT_SAMPLE_RATE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub rig: RigSpec,
    /// Radians in [-pi/2, pi/2]; positive is left, negative is right.
    pub azimuth: f64,
    pub temperature_c: f64,
    /// Output gain, attenuation only.
    pub gain_db: f64,
}

impl RenderSpec {
    pub fn new(rig: RigSpec, azimuth: f64, temperature_c: f64, gain_db: f64) -> Result<Self> {
        let spec = Self {
            rig,
            azimuth,
            temperature_c,
            gain_db,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn human(azimuth: f64) -> Self {
        Self {
            rig: RigSpec::preset(RigKind::HumanHead),
            azimuth,
            temperature_c: crate::cue_models::DEFAULT_TEMPERATURE_C,
            gain_db: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.azimuth.abs() <= FRAC_PI_2 + 1e-12) {
            return Err(Error::invalid(
                "azimuth",
                format!(
                    "must lie in [-90, 90] degrees (rear hemisphere unsupported), got {:.3}",
                    self.azimuth.to_degrees()
                ),
            ));
        }
        if !(self.gain_db <= 0.0) {
            return Err(Error::invalid(
                "gain_db",
                format!("must be <= 0 dB, got {}", self.gain_db),
            ));
        }
        self.rig.validate()
    }
}

fn render_raw(signal: &SampleBuffer, spec: &RenderSpec) -> Result<StereoBuffer> {
    spec.validate()?;
    if signal.is_empty() {
        return Err(Error::invalid("signal", "must not be empty"));
    }
    let src = SourceSpec::at_azimuth(spec.azimuth.abs().min(FRAC_PI_2))?;
    let capture = simulate_capture(&spec.rig, &src, signal, spec.temperature_c)?;
    let capture = if spec.azimuth < 0.0 {
        capture.swapped()
    } else {
        capture
    };
    Ok(if spec.gain_db == 0.0 {
        capture
    } else {
        capture.scaled(10f64.powf(spec.gain_db / 20.0))
    })
}

/// Renders `signal` for headphones. If filter overshoot would push the
/// output above full scale, both channels are scaled down together.
pub fn binauralize(signal: &SampleBuffer, spec: &RenderSpec) -> Result<StereoBuffer> {
    let out = render_raw(signal, spec)?;
    let peak = out.peak();
    Ok(if peak > 1.0 {
        out.scaled(1.0 / peak)
    } else {
        out
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneRender {
    pub stereo: StereoBuffer,
    /// Factor applied to the whole mix to keep it within full scale
    /// (1.0 when it did not clip).
    pub scale: f64,
}

/// Sums independently rendered sources, in list order. Shorter sources are
/// zero-padded to the longest.
pub fn binauralize_scene(sources: &[(SampleBuffer, RenderSpec)]) -> Result<SceneRender> {
    let Some(first) = sources.first() else {
        let empty = SampleBuffer::silence(0, DEFAULT_SAMPLE_RATE)?;
        return Ok(SceneRender {
            stereo: StereoBuffer::new(empty.clone(), empty)?,
            scale: 1.0,
        });
    };
    let fs = first.0.sample_rate();
    if let Some((b, _)) = sources.iter().find(|(b, _)| b.sample_rate() != fs) {
        return Err(Error::SampleRateMismatch(fs, b.sample_rate()));
    }
    let len = sources.iter().map(|(b, _)| b.len()).max().unwrap_or(0);
    let mut left = vec![0.0; len];
    let mut right = vec![0.0; len];
    for (signal, spec) in sources {
        let r = render_raw(signal, spec)?;
        for (acc, x) in left.iter_mut().zip(r.left().samples()) {
            *acc += x;
        }
        for (acc, x) in right.iter_mut().zip(r.right().samples()) {
            *acc += x;
        }
    }
    let stereo = StereoBuffer::new(SampleBuffer::new(left, fs)?, SampleBuffer::new(right, fs)?)?;
    let peak = stereo.peak();
    Ok(if peak > 1.0 {
        SceneRender {
            stereo: stereo.scaled(1.0 / peak),
            scale: 1.0 / peak,
        }
    } else {
        SceneRender { stereo, scale: 1.0 }
    })
}
