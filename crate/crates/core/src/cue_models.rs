//! Closed-form binaural cue models.
//!
//! Azimuth convention used throughout the crate: 0 is straight ahead,
//! +pi/2 is a source hard left. The left ear is then the near ear and the
//! right ear is the far, shadowed ear.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Head radius used by the human and dummy head presets, in meters.
pub const DEFAULT_HEAD_RADIUS_M: f64 = 0.089;

/// Room temperature at which c = 343 m/s.
pub const DEFAULT_TEMPERATURE_C: f64 = 20.0;

/// Speed of sound in air, linearized around 0 degrees Celsius.
pub fn speed_of_sound(temperature_c: f64) -> f64 {
    331.0 + 0.6 * temperature_c
}

fn check_azimuth(azimuth: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2).contains(&azimuth) {
        return Err(Error::invalid(
            "azimuth",
            format!("must lie in [0, pi/2] rad, got {azimuth}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_temperature(temperature_c: f64) -> Result<()> {
    if !(-20.0..=50.0).contains(&temperature_c) {
        return Err(Error::invalid(
            "temperature_c",
            format!("must lie in [-20, 50] C, got {temperature_c}"),
        ));
    }
    Ok(())
}

/// Spherical head radius plus the air temperature it sits in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadGeometry {
    radius_m: f64,
    temperature_c: f64,
}

impl HeadGeometry {
    pub fn new(radius_m: f64, temperature_c: f64) -> Result<Self> {
        if !(0.05..=0.15).contains(&radius_m) {
            return Err(Error::invalid(
                "radius_m",
                format!("must lie in [0.05, 0.15] m, got {radius_m}"),
            ));
        }
        check_temperature(temperature_c)?;
        Ok(Self {
            radius_m,
            temperature_c,
        })
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn temperature_c(&self) -> f64 {
        self.temperature_c
    }

    pub fn speed_of_sound(&self) -> f64 {
        speed_of_sound(self.temperature_c)
    }
}

impl Default for HeadGeometry {
    fn default() -> Self {
        Self {
            radius_m: DEFAULT_HEAD_RADIUS_M,
            temperature_c: DEFAULT_TEMPERATURE_C,
        }
    }
}

/// Woodworth's frequency-independent ITD, r(theta + sin theta)/c.
pub fn itd_simple(geom: &HeadGeometry, azimuth: f64) -> Result<f64> {
    check_azimuth(azimuth)?;
    Ok(geom.radius_m * (azimuth + azimuth.sin()) / geom.speed_of_sound())
}

/// Diffraction coefficient of the frequency-dependent ITD model.
///
/// 3 below 500 Hz, 2 from 500 Hz upwards. The model is only defined up to
/// 2 kHz; above that the 2 kHz value is carried on.
pub fn itd_coefficient(freq: f64) -> f64 {
    if freq < 500.0 {
        3.0
    } else {
        2.0
    }
}

/// Frequency-dependent ITD, a r sin(theta) / (331 + 0.6 T).
pub fn itd_modified(geom: &HeadGeometry, azimuth: f64, freq: f64) -> Result<f64> {
    check_azimuth(azimuth)?;
    if !(freq > 0.0) {
        return Err(Error::invalid(
            "freq",
            format!("must be positive, got {freq}"),
        ));
    }
    Ok(itd_coefficient(freq) * geom.radius_m * azimuth.sin() / geom.speed_of_sound())
}

/// Lowest frequency at which head shadowing produces a usable ILD: the
/// frequency whose wavelength is three head diameters.
pub fn ild_min_frequency(geom: &HeadGeometry) -> f64 {
    geom.speed_of_sound() / (3.0 * 2.0 * geom.radius_m)
}

/// Frequency breakpoints between the ITD and ILD regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuplexThresholds {
    pub itd_limit_hz: f64,
    pub ild_start_hz: f64,
    pub ild_min_hz: f64,
}

impl DuplexThresholds {
    /// ILD is "not especially efficient" across this band.
    pub const ILD_INEFFICIENT_BAND: (f64, f64) = (2000.0, 4000.0);

    pub fn new(itd_limit_hz: f64, ild_start_hz: f64, ild_min_hz: f64) -> Result<Self> {
        if !(itd_limit_hz > 0.0 && itd_limit_hz < ild_start_hz) {
            return Err(Error::invalid(
                "itd_limit_hz",
                "must be positive and below ild_start_hz",
            ));
        }
        if ild_start_hz > Self::ILD_INEFFICIENT_BAND.1 {
            return Err(Error::invalid("ild_start_hz", "must not exceed 4000 Hz"));
        }
        Ok(Self {
            itd_limit_hz,
            ild_start_hz,
            ild_min_hz,
        })
    }

    /// f_i = 1500 Hz, f_L = 2000 Hz, f_Lmin from the head size.
    pub fn for_head(geom: &HeadGeometry) -> Self {
        Self {
            itd_limit_hz: 1500.0,
            ild_start_hz: 2000.0,
            ild_min_hz: ild_min_frequency(geom),
        }
    }
}

impl Default for DuplexThresholds {
    fn default() -> Self {
        Self::for_head(&HeadGeometry::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CueBand {
    ItdEffective,
    Transition,
    IldInefficient,
    IldEffective,
}

impl CueBand {
    pub fn ild_usable(self) -> bool {
        matches!(self, CueBand::IldInefficient | CueBand::IldEffective)
    }
}

/// Assigns a frequency to its duplex-theory regime. Lower edges are
/// inclusive except f_i, which belongs to the ITD band.
pub fn duplex_classify(freq: f64, thresholds: &DuplexThresholds) -> CueBand {
    if freq <= thresholds.itd_limit_hz {
        CueBand::ItdEffective
    } else if freq < thresholds.ild_start_hz {
        CueBand::Transition
    } else if freq <= DuplexThresholds::ILD_INEFFICIENT_BAND.1 {
        CueBand::IldInefficient
    } else {
        CueBand::IldEffective
    }
}

/// IPD in degrees for a pure delay, wrapped to (-180, 180].
pub fn ipd_from_itd(freq: f64, itd: f64) -> f64 {
    wrap_degrees(360.0 * freq * itd)
}

/// Wraps an angle in degrees to (-180, 180].
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = deg - 360.0 * (deg / 360.0).round();
    if w <= -180.0 {
        w + 360.0
    } else if w > 180.0 {
        w - 360.0
    } else {
        w
    }
}

/// Steepness of the shadow curve: attenuation follows
/// 1 / (1 + (corner/f)^SHADOW_SLOPE), a logistic in ln f.
pub const SHADOW_SLOPE: f64 = 1.5;

/// A narrow dip added on top of the shadow curve, e.g. a baffle
/// resonance. Breaks monotonicity in frequency, so it is off by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Notch {
    pub center_hz: f64,
    pub depth_db: f64,
    pub q: f64,
}

/// Parameters of the far-ear attenuation curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowParams {
    pub max_attenuation_db: f64,
    pub corner_hz: f64,
    pub azimuth_exponent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notch: Option<Notch>,
}

impl ShadowParams {
    pub fn new(max_attenuation_db: f64, corner_hz: f64, azimuth_exponent: f64) -> Result<Self> {
        let p = Self {
            max_attenuation_db,
            corner_hz,
            azimuth_exponent,
            notch: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=30.0).contains(&self.max_attenuation_db) {
            return Err(Error::invalid(
                "shadow.max_db",
                format!("must lie in [0, 30] dB, got {}", self.max_attenuation_db),
            ));
        }
        if !(self.corner_hz > 0.0) {
            return Err(Error::invalid("shadow.corner_hz", "must be positive"));
        }
        if !(self.azimuth_exponent >= 0.0) {
            return Err(Error::invalid("shadow.exponent", "must be non-negative"));
        }
        if let Some(n) = self.notch {
            if !(n.center_hz > 0.0 && n.q > 0.0 && n.depth_db >= 0.0) {
                return Err(Error::invalid("shadow.notch", "center, q must be positive"));
            }
        }
        Ok(())
    }

    /// Human head: least-squares fit to far-ear attenuations of 1.5, 6,
    /// 10.5 and 15 dB at 250 Hz, 2, 4 and 8 kHz for a source at 90 degrees.
    pub const HUMAN_HEAD: ShadowParams = ShadowParams {
        max_attenuation_db: 18.994,
        corner_hz: 3376.4,
        azimuth_exponent: 1.0,
        notch: None,
    };

    /// PVC dummy head: 3-6 dB from 500 Hz to 8 kHz, flattening out above
    /// 4 kHz instead of following the human roll-off.
    pub const FULL_DUMMY: ShadowParams = ShadowParams {
        max_attenuation_db: 6.0,
        corner_hz: 350.0,
        azimuth_exponent: 1.0,
        notch: None,
    };

    /// Foam-baffled ear pair: under 3 dB to the high mids, rising from
    /// 2 kHz and steep from 4 kHz.
    pub const SEMI_DUMMY: ShadowParams = ShadowParams {
        max_attenuation_db: 14.0,
        corner_hz: 4500.0,
        azimuth_exponent: 1.0,
        notch: None,
    };

    /// Jecklin disc: under 3 dB below 6 kHz, about 8 dB across the top.
    pub const JECKLIN: ShadowParams = ShadowParams {
        max_attenuation_db: 10.0,
        corner_hz: 7500.0,
        azimuth_exponent: 1.0,
        notch: None,
    };
}

impl Default for ShadowParams {
    fn default() -> Self {
        Self::HUMAN_HEAD
    }
}

/// Frequency shape of the shadow, rising from 0 towards 1.
pub fn shadow_shape(corner_hz: f64, freq: f64) -> f64 {
    if freq <= 0.0 {
        return 0.0;
    }
    1.0 / (1.0 + (corner_hz / freq).powf(SHADOW_SLOPE))
}

/// Far-ear attenuation in dB (non-negative).
///
/// Mirror-symmetric in azimuth; angles beyond the side are clamped to pi/2.
pub fn head_shadow_ild(params: &ShadowParams, azimuth: f64, freq: f64) -> f64 {
    let theta = azimuth.abs().min(FRAC_PI_2);
    let lateral = theta.sin().powf(params.azimuth_exponent);
    if lateral == 0.0 {
        return 0.0;
    }
    let mut db = params.max_attenuation_db * lateral * shadow_shape(params.corner_hz, freq);
    if let Some(n) = params.notch {
        // Gaussian bump in octaves; q sets the width as center/bandwidth.
        let octaves = (freq.max(1e-9) / n.center_hz).log2();
        let width = 1.0 / n.q;
        db += n.depth_db * lateral * (-0.5 * (octaves / width).powi(2)).exp();
    }
    db
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn head(r: f64, t: f64) -> HeadGeometry {
        HeadGeometry::new(r, t).unwrap()
    }

    #[test]
    fn speed_of_sound_anchors() {
        assert_eq!(speed_of_sound(20.0), 343.0);
        assert!((speed_of_sound(18.0) - 341.8).abs() < 1e-12);
        assert_eq!(speed_of_sound(0.0), 331.0);
    }

    #[test]
    fn head_geometry_bounds() {
        assert!(HeadGeometry::new(0.89, 18.0).is_err());
        assert!(HeadGeometry::new(0.04, 18.0).is_err());
        assert!(HeadGeometry::new(0.089, 60.0).is_err());
        assert!(HeadGeometry::new(0.089, -20.0).is_ok());
    }

    #[test]
    fn woodworth_worked_example() {
        let itd = itd_simple(&head(0.089, 18.0), FRAC_PI_2).unwrap();
        assert!((itd * 1e3 - 0.669).abs() < 5e-4, "{itd}");
    }

    #[test]
    fn woodworth_at_20c() {
        let itd = itd_simple(&head(0.089, 20.0), FRAC_PI_2).unwrap();
        let hand = 0.089 * (FRAC_PI_2 + 1.0) / 343.0;
        assert!((itd - hand).abs() <= 1e-12 * hand);
        assert!((itd * 1e3 - 0.667).abs() < 5e-4);
        assert_eq!(itd_simple(&head(0.12, 5.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn azimuth_out_of_range() {
        let g = HeadGeometry::default();
        assert!(itd_simple(&g, -0.1).is_err());
        assert!(itd_simple(&g, 2.0).is_err());
        assert!(itd_modified(&g, 2.0, 100.0).is_err());
        assert!(itd_modified(&g, 1.0, 0.0).is_err());
    }

    #[test]
    fn modified_model_bands() {
        let g = head(0.089, 20.0);
        let low = itd_modified(&g, FRAC_PI_2, 220.0).unwrap();
        let mid = itd_modified(&g, FRAC_PI_2, 1000.0).unwrap();
        assert!((low - 3.0 * 0.089 / 343.0).abs() < 1e-15);
        assert!((low * 1e3 - 0.778).abs() < 5e-4);
        assert!((mid * 1e3 - 0.519).abs() < 5e-4);
        assert_eq!(itd_modified(&g, 0.0, 300.0).unwrap(), 0.0);
        // carried on above 2 kHz
        assert_eq!(
            itd_modified(&g, 1.0, 6000.0).unwrap(),
            itd_modified(&g, 1.0, 1999.0).unwrap()
        );
    }

    #[test]
    fn modified_model_has_single_step_at_500() {
        let g = HeadGeometry::default();
        let freqs: Vec<f64> = (1..=2000).map(|i| i as f64 * 5.0).collect();
        let vals: Vec<f64> = freqs
            .iter()
            .map(|&f| itd_modified(&g, 1.0, f).unwrap())
            .collect();
        let steps: Vec<f64> = freqs
            .windows(2)
            .zip(vals.windows(2))
            .filter(|(_, v)| v[0] != v[1])
            .map(|(f, _)| f[1])
            .collect();
        assert_eq!(steps, vec![500.0]);
    }

    #[test]
    fn modified_vs_simple_ordering() {
        // a >= pi/2 + 1 decides which model predicts the larger ITD at 90 degrees
        let g = HeadGeometry::default();
        let simple = itd_simple(&g, FRAC_PI_2).unwrap();
        assert!(itd_modified(&g, FRAC_PI_2, 220.0).unwrap() >= simple);
        assert!(itd_modified(&g, FRAC_PI_2, 1000.0).unwrap() < simple);
    }

    #[test]
    fn duplex_examples() {
        let t = DuplexThresholds::default();
        assert_eq!(duplex_classify(1000.0, &t), CueBand::ItdEffective);
        assert_eq!(duplex_classify(1500.0, &t), CueBand::ItdEffective);
        assert_eq!(duplex_classify(1750.0, &t), CueBand::Transition);
        assert_eq!(duplex_classify(2000.0, &t), CueBand::IldInefficient);
        assert_eq!(duplex_classify(3000.0, &t), CueBand::IldInefficient);
        assert_eq!(duplex_classify(4000.0, &t), CueBand::IldInefficient);
        assert_eq!(duplex_classify(4000.5, &t), CueBand::IldEffective);
        assert!(duplex_classify(3000.0, &t).ild_usable());
        assert!(!duplex_classify(1800.0, &t).ild_usable());
    }

    #[test]
    fn duplex_breakpoints_exact() {
        let t = DuplexThresholds::default();
        let mut changes = Vec::new();
        let mut prev = duplex_classify(1.0, &t);
        for i in 2..=20_000 {
            let f = i as f64 * 0.5;
            let c = duplex_classify(f, &t);
            if c != prev {
                changes.push(f);
                prev = c;
            }
        }
        // first frequency of each new band on a 0.5 Hz grid
        assert_eq!(changes, vec![1500.5, 2000.0, 4000.5]);
    }

    #[test]
    fn duplex_threshold_validation() {
        assert!(DuplexThresholds::new(2500.0, 2000.0, 600.0).is_err());
        assert!(DuplexThresholds::new(1500.0, 5000.0, 600.0).is_err());
    }

    #[test]
    fn ild_min_frequency_examples() {
        let f = ild_min_frequency(&head(0.089, 20.0));
        assert!((f - 343.0 / 0.534).abs() < 1e-9);
        assert!((f - 642.3).abs() < 0.1);
        let cold = ild_min_frequency(&head(0.089, 0.0));
        assert!((cold - 620.0).abs() < 0.5);
        let big = ild_min_frequency(&head(0.1, 20.0));
        let small = ild_min_frequency(&head(0.05, 20.0));
        assert!((small - 2.0 * big).abs() < 1e-9);
    }

    #[test]
    fn ipd_examples() {
        assert!((ipd_from_itd(500.0, 0.0005) - 90.0).abs() < 1e-9);
        assert_eq!(ipd_from_itd(800.0, 0.0), 0.0);
        assert!((ipd_from_itd(1000.0, 0.0015) - 180.0).abs() < 1e-9);
        assert_eq!(wrap_degrees(-180.0), 180.0);
        assert_eq!(wrap_degrees(540.0), 180.0);
    }

    #[test]
    fn shadow_anchors() {
        let p = ShadowParams::default();
        assert_eq!(head_shadow_ild(&p, 0.0, 8000.0), 0.0);
        assert!(head_shadow_ild(&p, FRAC_PI_2, 250.0) < 3.0);
        assert!((head_shadow_ild(&p, FRAC_PI_2, 2000.0) - 6.0).abs() <= 1.5);
        assert!(head_shadow_ild(&p, FRAC_PI_2, 4000.0) >= 10.0);
        assert!((head_shadow_ild(&p, FRAC_PI_2, 8000.0) - 15.0).abs() <= 3.0);
    }

    /// Brute-force grid search over (max_db, corner) for the least-squares
    /// fit to the four anchors; the shipped defaults must sit at its optimum.
    #[test]
    fn human_defaults_are_least_squares_fit() {
        let anchors = [(250.0, 1.5), (2000.0, 6.0), (4000.0, 10.5), (8000.0, 15.0)];
        let cost = |m: f64, fc: f64| -> f64 {
            anchors
                .iter()
                .map(|&(f, t)| {
                    let e = m / (1.0 + (fc / f).powf(1.5)) - t;
                    e * e
                })
                .sum()
        };
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=400 {
            let m = 15.0 + i as f64 * 0.02;
            for j in 0..=400 {
                let fc = 2500.0 + j as f64 * 5.0;
                let c = cost(m, fc);
                if c < best.0 {
                    best = (c, m, fc);
                }
            }
        }
        let p = ShadowParams::HUMAN_HEAD;
        assert!((best.1 - p.max_attenuation_db).abs() <= 0.02, "{best:?}");
        assert!((best.2 - p.corner_hz).abs() <= 5.0, "{best:?}");
        assert!(cost(p.max_attenuation_db, p.corner_hz) <= best.0 + 1e-4);
    }

    #[test]
    fn full_dummy_stays_in_three_to_six() {
        let p = ShadowParams::FULL_DUMMY;
        for f in [500.0, 1000.0, 2000.0, 4000.0, 8000.0] {
            let a = head_shadow_ild(&p, FRAC_PI_2, f);
            assert!((3.0..=6.0).contains(&a), "{f}: {a}");
        }
    }

    #[test]
    fn notch_adds_local_dip() {
        let mut p = ShadowParams::SEMI_DUMMY;
        let base = head_shadow_ild(&p, FRAC_PI_2, 4200.0);
        p.notch = Some(Notch {
            center_hz: 4200.0,
            depth_db: 6.0,
            q: 4.0,
        });
        let with = head_shadow_ild(&p, FRAC_PI_2, 4200.0);
        assert!((with - base - 6.0).abs() < 1e-9);
        assert!(
            (head_shadow_ild(&p, FRAC_PI_2, 1000.0)
                - head_shadow_ild(&ShadowParams::SEMI_DUMMY, FRAC_PI_2, 1000.0))
            .abs()
                < 1e-6
        );
    }

    #[test]
    fn shadow_params_validation() {
        assert!(ShadowParams::new(31.0, 1000.0, 1.0).is_err());
        assert!(ShadowParams::new(10.0, 0.0, 1.0).is_err());
        assert!(ShadowParams::new(10.0, 1000.0, 1.0).is_ok());
    }

    proptest! {
        #[test]
        fn simple_itd_increasing_and_linear(r in 0.05f64..0.15, t in -20f64..50.0, a in 0.0f64..1.5, b in 0.0f64..1.5) {
            let g = head(r, t);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(itd_simple(&g, lo).unwrap() < itd_simple(&g, hi).unwrap());
            let g2 = head(r / 2.0 + 0.025, t);
            let ratio = itd_simple(&g2, hi).unwrap() / itd_simple(&g, hi).unwrap();
            prop_assert!((ratio - (r / 2.0 + 0.025) / r).abs() < 1e-12);
        }

        #[test]
        fn ipd_range_and_period(f in 10f64..20_000.0, itd in -0.002f64..0.002, k in -5i32..5) {
            let a = ipd_from_itd(f, itd);
            prop_assert!(a > -180.0 && a <= 180.0);
            let b = ipd_from_itd(f, itd + k as f64 / f);
            let d = wrap_degrees(a - b).abs();
            prop_assert!(d < 1e-6, "{} vs {}", a, b);
        }

        #[test]
        fn shadow_monotone(f1 in 20f64..20_000.0, f2 in 20f64..20_000.0, t1 in 0f64..FRAC_PI_2, t2 in 0f64..FRAC_PI_2) {
            for p in [ShadowParams::HUMAN_HEAD, ShadowParams::FULL_DUMMY, ShadowParams::SEMI_DUMMY, ShadowParams::JECKLIN] {
                prop_assert_eq!(head_shadow_ild(&p, 0.0, f1), 0.0);
                let (fl, fh) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
                prop_assert!(head_shadow_ild(&p, t1, fl) <= head_shadow_ild(&p, t1, fh));
                let (tl, th) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
                prop_assert!(head_shadow_ild(&p, tl, f1) <= head_shadow_ild(&p, th, f1));
            }
        }

        #[test]
        fn duplex_is_total(f in 0.001f64..100_000.0) {
            let _ = duplex_classify(f, &DuplexThresholds::default());
        }
    }
}
