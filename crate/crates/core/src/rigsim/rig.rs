use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cue_models::{check_temperature, speed_of_sound, ShadowParams, DEFAULT_HEAD_RADIUS_M};
use crate::error::{Error, Result};

/// Fitted so a 19 cm pair reads 0.83 ms at 90 degrees and 18 C.
pub const SEMI_DUMMY_PATH_EXTENSION: f64 = 1.493;
/// Fitted so a 17.5 cm pair reads 0.58 ms at 90 degrees and 18 C.
pub const JECKLIN_PATH_EXTENSION: f64 = 1.133;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigKind {
    HumanHead,
    FullDummy,
    SemiDummy,
    Jecklin,
    Ortf,
}

impl RigKind {
    pub const ALL: [RigKind; 5] = [
        RigKind::HumanHead,
        RigKind::FullDummy,
        RigKind::SemiDummy,
        RigKind::Jecklin,
        RigKind::Ortf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RigKind::HumanHead => "human",
            RigKind::FullDummy => "full-dummy",
            RigKind::SemiDummy => "semi-dummy",
            RigKind::Jecklin => "jecklin",
            RigKind::Ortf => "ortf",
        }
    }
}

impl fmt::Display for RigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RigKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "human" | "human-head" | "hrtf" => Ok(RigKind::HumanHead),
            "full-dummy" | "dummy" => Ok(RigKind::FullDummy),
            "semi-dummy" => Ok(RigKind::SemiDummy),
            "jecklin" => Ok(RigKind::Jecklin),
            "ortf" => Ok(RigKind::Ortf),
            other => Err(Error::invalid(
                "kind",
                format!("unknown rig '{other}' (human, full-dummy, semi-dummy, jecklin, ortf)"),
            )),
        }
    }
}

/// Geometry of one capture rig.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RigSpec {
    HumanHead {
        radius_m: f64,
        shadow: ShadowParams,
    },
    FullDummy {
        radius_m: f64,
        shadow: ShadowParams,
    },
    SemiDummy {
        mic_spacing_m: f64,
        baffle: ShadowParams,
        path_extension: f64,
    },
    Jecklin {
        mic_spacing_m: f64,
        /// 33 cm as built; the classic design quotes about 35 cm.
        disc_diameter_m: f64,
        baffle: ShadowParams,
        path_extension: f64,
    },
    /// Two cardioids, near-coincident.
    Ortf {
        mic_spacing_m: f64,
        capsule_angle_deg: f64,
    },
}

impl RigSpec {
    pub fn preset(kind: RigKind) -> Self {
        match kind {
            RigKind::HumanHead => RigSpec::HumanHead {
                radius_m: DEFAULT_HEAD_RADIUS_M,
                shadow: ShadowParams::HUMAN_HEAD,
            },
            RigKind::FullDummy => RigSpec::FullDummy {
                radius_m: DEFAULT_HEAD_RADIUS_M,
                shadow: ShadowParams::FULL_DUMMY,
            },
            RigKind::SemiDummy => RigSpec::SemiDummy {
                mic_spacing_m: 0.19,
                baffle: ShadowParams::SEMI_DUMMY,
                path_extension: SEMI_DUMMY_PATH_EXTENSION,
            },
            RigKind::Jecklin => RigSpec::Jecklin {
                mic_spacing_m: 0.175,
                disc_diameter_m: 0.33,
                baffle: ShadowParams::JECKLIN,
                path_extension: JECKLIN_PATH_EXTENSION,
            },
            RigKind::Ortf => RigSpec::Ortf {
                mic_spacing_m: 0.17,
                capsule_angle_deg: 110.0,
            },
        }
    }

    pub fn kind(&self) -> RigKind {
        match self {
            RigSpec::HumanHead { .. } => RigKind::HumanHead,
            RigSpec::FullDummy { .. } => RigKind::FullDummy,
            RigSpec::SemiDummy { .. } => RigKind::SemiDummy,
            RigSpec::Jecklin { .. } => RigKind::Jecklin,
            RigSpec::Ortf { .. } => RigKind::Ortf,
        }
    }

    /// Shadowing filter on the far channel, if the rig has one.
    pub fn shadow(&self) -> Option<&ShadowParams> {
        match self {
            RigSpec::HumanHead { shadow, .. } | RigSpec::FullDummy { shadow, .. } => Some(shadow),
            RigSpec::SemiDummy { baffle, .. } | RigSpec::Jecklin { baffle, .. } => Some(baffle),
            RigSpec::Ortf { .. } => None,
        }
    }

    /// Microphone spacing of spaced-pair rigs.
    pub fn mic_spacing_m(&self) -> Option<f64> {
        match *self {
            RigSpec::SemiDummy { mic_spacing_m, .. }
            | RigSpec::Jecklin { mic_spacing_m, .. }
            | RigSpec::Ortf { mic_spacing_m, .. } => Some(mic_spacing_m),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive, got {v}")))
            }
        };
        let extension = |v: f64| {
            if v >= 1.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(
                    "path_extension",
                    format!("must be >= 1, got {v}"),
                ))
            }
        };
        match *self {
            RigSpec::HumanHead { radius_m, shadow } | RigSpec::FullDummy { radius_m, shadow } => {
                if !(0.05..=0.15).contains(&radius_m) {
                    return Err(Error::invalid(
                        "radius_m",
                        format!("must lie in [0.05, 0.15] m, got {radius_m}"),
                    ));
                }
                shadow.validate()
            }
            RigSpec::SemiDummy {
                mic_spacing_m,
                baffle,
                path_extension,
            } => {
                positive("mic_spacing_m", mic_spacing_m)?;
                extension(path_extension)?;
                baffle.validate()
            }
            RigSpec::Jecklin {
                mic_spacing_m,
                disc_diameter_m,
                baffle,
                path_extension,
            } => {
                positive("mic_spacing_m", mic_spacing_m)?;
                positive("disc_diameter_m", disc_diameter_m)?;
                extension(path_extension)?;
                baffle.validate()
            }
            RigSpec::Ortf {
                mic_spacing_m,
                capsule_angle_deg,
            } => {
                positive("mic_spacing_m", mic_spacing_m)?;
                if !(capsule_angle_deg > 0.0 && capsule_angle_deg <= 180.0) {
                    return Err(Error::invalid(
                        "capsule_angle_deg",
                        format!("must lie in (0, 180], got {capsule_angle_deg}"),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A far-field point source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    /// Radians, 0 ahead, +pi/2 hard left.
    pub azimuth: f64,
    pub distance_m: f64,
}

impl SourceSpec {
    pub const DEFAULT_DISTANCE_M: f64 = 3.0;

    pub fn new(azimuth: f64, distance_m: f64) -> Result<Self> {
        check_azimuth(azimuth)?;
        if !(distance_m >= 1.0) {
            return Err(Error::invalid(
                "distance_m",
                format!("far-field model needs >= 1 m, got {distance_m}"),
            ));
        }
        Ok(Self {
            azimuth,
            distance_m,
        })
    }

    pub fn at_azimuth(azimuth: f64) -> Result<Self> {
        Self::new(azimuth, Self::DEFAULT_DISTANCE_M)
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::at_azimuth(deg.to_radians())
    }
}

pub(crate) fn check_azimuth(azimuth: f64) -> Result<()> {
    // allow a hair of rounding from degree conversion
    if !(0.0..=FRAC_PI_2 + 1e-12).contains(&azimuth) {
        return Err(Error::invalid(
            "azimuth",
            format!(
                "must lie in [0, 90] degrees, got {:.3}",
                azimuth.to_degrees()
            ),
        ));
    }
    Ok(())
}

/// Cardioid sensitivity for a source `offset` radians off axis.
pub fn cardioid_gain(offset: f64) -> f64 {
    0.5 * (1.0 + offset.abs().cos())
}

/// (left, right) capsule gains of an ORTF pair for a source at `azimuth`.
pub fn ortf_gains(capsule_angle_deg: f64, azimuth: f64) -> (f64, f64) {
    let half = (capsule_angle_deg / 2.0).to_radians();
    (cardioid_gain(azimuth - half), cardioid_gain(azimuth + half))
}

pub(crate) fn free_field_itd(spacing_m: f64, azimuth: f64, temperature_c: f64) -> f64 {
    spacing_m * azimuth.min(FRAC_PI_2).sin() / speed_of_sound(temperature_c)
}

/// Multiplier that maps the free-field spaced-pair delay onto a measured
/// ITD.
pub fn fit_path_extension(
    rig: &RigSpec,
    measured_itd_s: f64,
    azimuth: f64,
    temperature_c: f64,
) -> Result<f64> {
    check_azimuth(azimuth)?;
    check_temperature(temperature_c)?;
    if azimuth == 0.0 {
        return Err(Error::invalid(
            "azimuth",
            "must be non-zero: the free-field delay vanishes at 0 degrees",
        ));
    }
    let spacing = rig.mic_spacing_m().ok_or_else(|| {
        Error::invalid("rig", format!("{} has no microphone spacing", rig.kind()))
    })?;
    Ok(measured_itd_s / free_field_itd(spacing, azimuth, temperature_c))
}
