use serde::{Deserialize, Serialize};

use super::rig::{check_azimuth, free_field_itd, ortf_gains, RigSpec, SourceSpec};
use crate::cue_models::{check_temperature, head_shadow_ild, itd_simple, HeadGeometry};
use crate::dsp::{fir_filter_centered, zero_phase_fir};
use crate::error::{Error, Result};
use crate::signals::{delay_samples, SampleBuffer, StereoBuffer};

/// Length of the far-ear shadow filter at 48 kHz.
pub const SHADOW_FIR_TAPS: usize = 513;
const SHADOW_FIR_GRID: usize = 16_384;

/// Predicted ITD in seconds (right lags left for a source on the left).
pub fn predicted_itd(rig: &RigSpec, src: &SourceSpec, temperature_c: f64) -> Result<f64> {
    check_azimuth(src.azimuth)?;
    check_temperature(temperature_c)?;
    rig.validate()?;
    let theta = src.azimuth.min(std::f64::consts::FRAC_PI_2);
    Ok(match *rig {
        RigSpec::HumanHead { radius_m, .. } | RigSpec::FullDummy { radius_m, .. } => {
            itd_simple(&HeadGeometry::new(radius_m, temperature_c)?, theta)?
        }
        RigSpec::SemiDummy {
            mic_spacing_m,
            path_extension,
            ..
        }
        | RigSpec::Jecklin {
            mic_spacing_m,
            path_extension,
            ..
        } => path_extension * free_field_itd(mic_spacing_m, theta, temperature_c),
        RigSpec::Ortf { mic_spacing_m, .. } => free_field_itd(mic_spacing_m, theta, temperature_c),
    })
}

/// Predicted level of the near channel over the far channel, in dB.
pub fn predicted_ild_db(rig: &RigSpec, src: &SourceSpec, freq: f64) -> Result<f64> {
    check_azimuth(src.azimuth)?;
    Ok(match rig {
        RigSpec::Ortf {
            capsule_angle_deg, ..
        } => {
            let (near, far) = ortf_gains(*capsule_angle_deg, src.azimuth);
            20.0 * (near / far).log10()
        }
        other => {
            let shadow = other.shadow().expect("non-ORTF rigs carry a shadow");
            head_shadow_ild(shadow, src.azimuth, freq)
        }
    })
}

/// Zero-phase FIR realizing the rig's far-ear attenuation, or `None` when
/// the attenuation is zero everywhere. Apply it centred; any phase in the
/// filter would shift the cross-correlation peak away from the model ITD.
pub fn shadow_filter(rig: &RigSpec, src: &SourceSpec, sample_rate: u32) -> Option<Vec<f64>> {
    let shadow = *rig.shadow()?;
    if head_shadow_ild(&shadow, src.azimuth, sample_rate as f64 / 2.0) == 0.0 {
        return None;
    }
    let half = (SHADOW_FIR_TAPS / 2 * sample_rate as usize)
        .div_ceil(48_000)
        .max(32);
    let grid = SHADOW_FIR_GRID.max((4 * half).next_power_of_two());
    Some(zero_phase_fir(
        |f| -head_shadow_ild(&shadow, src.azimuth, f),
        sample_rate as f64,
        half,
        grid,
    ))
}

/// Two-channel capture of `signal` arriving from the left at `src`.
///
/// The left channel is the near ear and receives the signal unaltered
/// (apart from capsule gain on ORTF). The right channel is delayed by the
/// predicted ITD and filtered by the rig's shadow.
pub fn simulate_capture(
    rig: &RigSpec,
    src: &SourceSpec,
    signal: &SampleBuffer,
    temperature_c: f64,
) -> Result<StereoBuffer> {
    if signal.is_empty() {
        return Err(Error::invalid("signal", "must not be empty"));
    }
    let itd = predicted_itd(rig, src, temperature_c)?;
    let fs = signal.sample_rate();
    let mut far = delay_samples(signal.samples(), itd * fs as f64);
    if let Some(h) = shadow_filter(rig, src, fs) {
        far = fir_filter_centered(&h, &far);
    }
    let mut near = signal.samples().to_vec();
    if let RigSpec::Ortf {
        capsule_angle_deg, ..
    } = rig
    {
        let (gl, gr) = ortf_gains(*capsule_angle_deg, src.azimuth);
        near.iter_mut().for_each(|x| *x *= gl);
        far.iter_mut().for_each(|x| *x *= gr);
    }
    StereoBuffer::new(signal.with_samples(near), signal.with_samples(far))
}

/// Model ITD plus ILD at a set of frequencies, for sidecar files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigPrediction {
    pub rig: RigSpec,
    pub azimuth_deg: f64,
    pub temperature_c: f64,
    pub predicted_itd_s: f64,
    pub predicted_ild_db: Vec<IldAnchor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IldAnchor {
    pub freq_hz: f64,
    pub ild_db: f64,
}

/// Frequencies at which predictions are tabulated.
pub const ILD_ANCHOR_HZ: [f64; 6] = [250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0];

pub fn predict(rig: &RigSpec, src: &SourceSpec, temperature_c: f64) -> Result<RigPrediction> {
    Ok(RigPrediction {
        rig: *rig,
        azimuth_deg: src.azimuth.to_degrees(),
        temperature_c,
        predicted_itd_s: predicted_itd(rig, src, temperature_c)?,
        predicted_ild_db: ILD_ANCHOR_HZ
            .iter()
            .map(|&freq_hz| {
                Ok(IldAnchor {
                    freq_hz,
                    ild_db: predicted_ild_db(rig, src, freq_hz)?,
                })
            })
            .collect::<Result<_>>()?,
    })
}
