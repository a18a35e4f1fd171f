//! Binaural cue models, transfer-function measurement, and simulations of
//! binaural and quasi-binaural recording rigs.
//!
//! The crate covers four layers:
//!
//! * [`cue_models`]: closed-form ITD (Woodworth and its frequency-dependent
//!   variant), duplex-theory bands, IPD, and a parametric head-shadow ILD.
//! * [`analysis`]: the measurement side, a dual-channel transfer function
//!   (magnitude, phase, coherence), GCC delay estimation with parabolic
//!   refinement, per-band ITD, and a microphone-pair calibration check.
//! * [`rigsim`] and [`render`]: synthetic captures from five rig models
//!   (human head, full dummy, semi dummy, Jecklin disc, ORTF) and binaural
//!   rendering of mono sources.
//! * [`report`]: JSON/CSV reports and baseline comparisons.
//!
//! Azimuth is 0 straight ahead and +pi/2 hard left throughout; the right
//! ear is the far ear and ITDs are positive when the right channel lags.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cue_models;
pub mod dsp;
mod error;
pub mod render;
pub mod report;
pub mod rigsim;
pub mod signals;

pub use analysis::{
    analyze_capture, band_itd, calibration_check, estimate_itd, ild_spectrum_summary,
    transfer_function, AnalysisConfig, CalibrationVerdict, CueReport, TransferFunction, Weighting,
};
pub use cue_models::{
    duplex_classify, head_shadow_ild, ild_min_frequency, ipd_from_itd, itd_modified, itd_simple,
    speed_of_sound, CueBand, DuplexThresholds, HeadGeometry, ShadowParams,
};
pub use error::{Error, Result};
pub use render::{binauralize, binauralize_scene, RenderSpec, SceneRender};
pub use rigsim::{
    fit_path_extension, predicted_ild_db, predicted_itd, simulate_capture, RigKind, RigSpec,
    SourceSpec,
};
pub use signals::{
    apply_fractional_delay, gen_impulse, gen_pink_noise, gen_sine, read_wav, write_wav, Audio,
    SampleBuffer, StereoBuffer, WavEncoding,
};
