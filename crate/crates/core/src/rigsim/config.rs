//! Flat `key = value` rig description.
//!
//! ```text
//! # semi dummy head with a narrower spacing
//! kind = semi-dummy
//! mic_spacing_m = 0.16
//! shadow.max_db = 12
//! ```
//!
//! Keys not given keep the preset value for `kind`. `kind` must come first.

use std::fmt::Write;

use super::rig::{RigKind, RigSpec};
use crate::cue_models::{Notch, ShadowParams};
use crate::error::{Error, Result};

pub const CONFIG_KEYS: [&str; 12] = [
    "kind",
    "radius_m",
    "mic_spacing_m",
    "disc_diameter_m",
    "capsule_angle_deg",
    "path_extension",
    "shadow.max_db",
    "shadow.corner_hz",
    "shadow.exponent",
    "shadow.notch_hz",
    "shadow.notch_depth_db",
    "shadow.notch_q",
];

pub fn parse_rig_config(text: &str) -> Result<RigSpec> {
    let mut rig: Option<RigSpec> = None;
    let mut notch: [Option<f64>; 3] = [None; 3];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |reason: String| Error::Config {
            line: line_no,
            reason,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "kind" {
            if rig.is_some() {
                return Err(err("duplicate key 'kind'".into()));
            }
            let kind: RigKind = value.parse().map_err(|e: Error| err(e.to_string()))?;
            rig = Some(RigSpec::preset(kind));
            continue;
        }
        let spec = rig
            .as_mut()
            .ok_or_else(|| err(format!("'{key}' before 'kind'")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| err(format!("key '{key}': '{value}' is not a number")))?;
        let unsupported = || {
            let kind = spec.kind();
            if CONFIG_KEYS.contains(&key) {
                err(format!("key '{key}' does not apply to rig '{kind}'"))
            } else {
                err(format!("unknown key '{key}'"))
            }
        };
        match key {
            "shadow.notch_hz" => notch[0] = Some(v),
            "shadow.notch_depth_db" => notch[1] = Some(v),
            "shadow.notch_q" => notch[2] = Some(v),
            _ => {
                let e = unsupported();
                if !set_key(spec, key, v) {
                    return Err(e);
                }
            }
        }
    }
    let mut spec = rig.ok_or_else(|| Error::Config {
        line: 0,
        reason: "missing 'kind'".into(),
    })?;
    match notch {
        [None, None, None] => {}
        [Some(center_hz), depth, q] => {
            let n = Notch {
                center_hz,
                depth_db: depth.unwrap_or(6.0),
                q: q.unwrap_or(4.0),
            };
            match shadow_mut(&mut spec) {
                Some(s) => s.notch = Some(n),
                None => {
                    return Err(Error::Config {
                        line: 0,
                        reason: format!("shadow.notch_* does not apply to rig '{}'", spec.kind()),
                    })
                }
            }
        }
        _ => {
            return Err(Error::Config {
                line: 0,
                reason: "shadow.notch_depth_db/notch_q given without shadow.notch_hz".into(),
            })
        }
    }
    spec.validate().map_err(|e| Error::Config {
        line: 0,
        reason: e.to_string(),
    })?;
    Ok(spec)
}

fn shadow_mut(spec: &mut RigSpec) -> Option<&mut ShadowParams> {
    match spec {
        RigSpec::HumanHead { shadow, .. } | RigSpec::FullDummy { shadow, .. } => Some(shadow),
        RigSpec::SemiDummy { baffle, .. } | RigSpec::Jecklin { baffle, .. } => Some(baffle),
        RigSpec::Ortf { .. } => None,
    }
}

fn set_key(spec: &mut RigSpec, key: &str, v: f64) -> bool {
    if let Some(rest) = key.strip_prefix("shadow.") {
        let Some(s) = shadow_mut(spec) else {
            return false;
        };
        match rest {
            "max_db" => s.max_attenuation_db = v,
            "corner_hz" => s.corner_hz = v,
            "exponent" => s.azimuth_exponent = v,
            _ => return false,
        }
        return true;
    }
    let slot = match (spec, key) {
        (RigSpec::HumanHead { radius_m, .. } | RigSpec::FullDummy { radius_m, .. }, "radius_m") => {
            radius_m
        }
        (
            RigSpec::SemiDummy { mic_spacing_m, .. }
            | RigSpec::Jecklin { mic_spacing_m, .. }
            | RigSpec::Ortf { mic_spacing_m, .. },
            "mic_spacing_m",
        ) => mic_spacing_m,
        (
            RigSpec::Jecklin {
                disc_diameter_m, ..
            },
            "disc_diameter_m",
        ) => disc_diameter_m,
        (
            RigSpec::Ortf {
                capsule_angle_deg, ..
            },
            "capsule_angle_deg",
        ) => capsule_angle_deg,
        (
            RigSpec::SemiDummy { path_extension, .. } | RigSpec::Jecklin { path_extension, .. },
            "path_extension",
        ) => path_extension,
        _ => return false,
    };
    *slot = v;
    true
}

/// Renders every key that applies to the rig; parses back to the same spec.
pub fn rig_config_string(spec: &RigSpec) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: f64| writeln!(out, "{k} = {v}").unwrap();
    let kind = spec.kind();
    match *spec {
        RigSpec::HumanHead { radius_m, .. } | RigSpec::FullDummy { radius_m, .. } => {
            put("radius_m", radius_m)
        }
        RigSpec::SemiDummy {
            mic_spacing_m,
            path_extension,
            ..
        } => {
            put("mic_spacing_m", mic_spacing_m);
            put("path_extension", path_extension);
        }
        RigSpec::Jecklin {
            mic_spacing_m,
            disc_diameter_m,
            path_extension,
            ..
        } => {
            put("mic_spacing_m", mic_spacing_m);
            put("disc_diameter_m", disc_diameter_m);
            put("path_extension", path_extension);
        }
        RigSpec::Ortf {
            mic_spacing_m,
            capsule_angle_deg,
        } => {
            put("mic_spacing_m", mic_spacing_m);
            put("capsule_angle_deg", capsule_angle_deg);
        }
    }
    if let Some(s) = spec.shadow() {
        put("shadow.max_db", s.max_attenuation_db);
        put("shadow.corner_hz", s.corner_hz);
        put("shadow.exponent", s.azimuth_exponent);
        if let Some(n) = s.notch {
            put("shadow.notch_hz", n.center_hz);
            put("shadow.notch_depth_db", n.depth_db);
            put("shadow.notch_q", n.q);
        }
    }
    format!("kind = {kind}\n{out}")
}
