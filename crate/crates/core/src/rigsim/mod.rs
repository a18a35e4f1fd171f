//! Parametric models of the five capture rigs: predicted cues and
//! synthetic two-channel captures.

mod config;
mod rig;
mod simulate;

pub use config::{parse_rig_config, rig_config_string, CONFIG_KEYS};
pub use rig::{
    cardioid_gain, fit_path_extension, ortf_gains, RigKind, RigSpec, SourceSpec,
    JECKLIN_PATH_EXTENSION, SEMI_DUMMY_PATH_EXTENSION,
};
pub use simulate::{
    predict, predicted_ild_db, predicted_itd, shadow_filter, simulate_capture, IldAnchor,
    RigPrediction, ILD_ANCHOR_HZ, SHADOW_FIR_TAPS,
};
