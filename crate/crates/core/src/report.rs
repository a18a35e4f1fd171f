//! Versioned JSON reports, CSV tables, and comparisons against a baseline.
//!
//! JSON keys appear in struct declaration order and floats use the
//! shortest round-trip representation, so identical inputs give
//! byte-identical output.

use std::fmt::Write;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::analysis::{
    ild_spectrum_summary, AnalysisConfig, CueReport, OctaveLevel, TransferFunction,
};
use crate::error::{Error, Result};
use crate::rigsim::{predicted_ild_db, predicted_itd, RigPrediction, RigSpec, SourceSpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to regenerate a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub sample_rate: u32,
    pub temperature_c: f64,
    pub seed: Option<u64>,
    pub rigs: Vec<RigSpec>,
    pub source: Option<String>,
    pub analysis: Option<AnalysisConfig>,
    /// Seconds since the Unix epoch; omitted in deterministic mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
}

impl Metadata {
    pub fn new(sample_rate: u32, temperature_c: f64) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            sample_rate,
            temperature_c,
            seed: None,
            rigs: Vec::new(),
            source: None,
            analysis: None,
            generated_at_unix: None,
        }
    }
}

/// Serializable summary of a [`CueReport`]: ITDs plus the octave ILD table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub itd_s: f64,
    pub itd_low_s: Option<f64>,
    pub itd_high_s: Option<f64>,
    /// Right over left in dB; negative where the right ear is shadowed.
    pub ild_octaves: Vec<OctaveLevel>,
    pub metadata: Metadata,
}

impl AnalysisReport {
    pub fn from_cues(cues: &CueReport, centers: &[f64], metadata: Metadata) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            itd_s: cues.itd_s,
            itd_low_s: cues.itd_low_s,
            itd_high_s: cues.itd_high_s,
            ild_octaves: ild_spectrum_summary(&cues.ild_spectrum, centers)?,
            metadata,
        })
    }

    /// Report built from the rig model instead of a capture. The ILD table
    /// holds the model value at each band center.
    pub fn from_model(
        rig: &RigSpec,
        src: &SourceSpec,
        temperature_c: f64,
        centers: &[f64],
        mut metadata: Metadata,
    ) -> Result<Self> {
        metadata.rigs = vec![*rig];
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            itd_s: predicted_itd(rig, src, temperature_c)?,
            itd_low_s: None,
            itd_high_s: None,
            ild_octaves: centers
                .iter()
                .map(|&center_hz| {
                    Ok(OctaveLevel {
                        center_hz,
                        level_db: -predicted_ild_db(rig, src, center_hz)?,
                    })
                })
                .collect::<Result<_>>()?,
            metadata,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedReport {
    pub name: String,
    pub report: AnalysisReport,
}

/// Candidate minus baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CueDelta {
    pub name: String,
    pub itd_delta_s: f64,
    pub ild_delta_db: Vec<OctaveLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub baseline: NamedReport,
    pub candidates: Vec<NamedReport>,
    pub deltas: Vec<CueDelta>,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
}

pub fn compare(baseline: NamedReport, candidates: Vec<NamedReport>) -> Result<ComparisonReport> {
    if candidates.is_empty() {
        return Err(Error::invalid(
            "candidates",
            "need at least one report to compare",
        ));
    }
    let grid: Vec<f64> = baseline
        .report
        .ild_octaves
        .iter()
        .map(|b| b.center_hz)
        .collect();
    let deltas = candidates
        .iter()
        .map(|c| {
            let theirs: Vec<f64> = c.report.ild_octaves.iter().map(|b| b.center_hz).collect();
            if theirs != grid {
                return Err(Error::IncompatibleBands(format!(
                    "'{}' has bands {theirs:?}, baseline '{}' has {grid:?}",
                    c.name, baseline.name
                )));
            }
            Ok(CueDelta {
                name: c.name.clone(),
                itd_delta_s: c.report.itd_s - baseline.report.itd_s,
                ild_delta_db: c
                    .report
                    .ild_octaves
                    .iter()
                    .zip(&baseline.report.ild_octaves)
                    .map(|(a, b)| OctaveLevel {
                        center_hz: a.center_hz,
                        level_db: a.level_db - b.level_db,
                    })
                    .collect(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ComparisonReport {
        schema_version: SCHEMA_VERSION,
        baseline,
        candidates,
        deltas,
        tool_version: TOOL_VERSION.to_string(),
        generated_at_unix: None,
    })
}

/// Sidecar written next to a simulated capture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub prediction: RigPrediction,
    pub metadata: Metadata,
}

impl SimulationReport {
    pub fn new(prediction: RigPrediction, metadata: Metadata) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            prediction,
            metadata,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if let Some(v) = value.get("schema_version") {
        if v.as_u64() != Some(SCHEMA_VERSION as u64) {
            return Err(Error::invalid(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, got {v}"),
            ));
        }
    }
    Ok(serde_json::from_value(value)?)
}

/// One row per bin: freq_hz, magnitude_db, phase_deg, coherence.
pub fn transfer_function_csv(tf: &TransferFunction) -> String {
    let mut out = String::from("freq_hz,magnitude_db,phase_deg,coherence\n");
    for i in 0..tf.len() {
        writeln!(
            out,
            "{},{},{},{}",
            tf.freqs[i], tf.magnitude_db[i], tf.phase_deg[i], tf.coherence[i]
        )
        .unwrap();
    }
    out
}

/// One row per report, baseline first; ILD columns are deltas.
pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("name,itd_s,itd_delta_s");
    for b in &report.baseline.report.ild_octaves {
        write!(out, ",ild_delta_{}hz_db", b.center_hz).unwrap();
    }
    out.push('\n');
    write!(
        out,
        "{},{},0",
        report.baseline.name, report.baseline.report.itd_s
    )
    .unwrap();
    for _ in &report.baseline.report.ild_octaves {
        out.push_str(",0");
    }
    out.push('\n');
    for (c, d) in report.candidates.iter().zip(&report.deltas) {
        write!(out, "{},{},{}", c.name, c.report.itd_s, d.itd_delta_s).unwrap();
        for b in &d.ild_delta_db {
            write!(out, ",{}", b.level_db).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Fixed-width table of candidates, closest ITD match first.
pub fn comparison_summary(report: &ComparisonReport) -> String {
    let mut rows: Vec<&CueDelta> = report.deltas.iter().collect();
    rows.sort_by(|a, b| a.itd_delta_s.abs().total_cmp(&b.itd_delta_s.abs()));
    let mut out = format!(
        "baseline: {} (ITD {:.3} ms)\n{:<20} {:>14}",
        report.baseline.name,
        report.baseline.report.itd_s * 1e3,
        "candidate",
        "dITD (ms)"
    );
    for b in &report.baseline.report.ild_octaves {
        write!(out, " {:>9}", format!("{}Hz", b.center_hz)).unwrap();
    }
    out.push('\n');
    for d in rows {
        write!(out, "{:<20} {:>+14.3}", d.name, d.itd_delta_s * 1e3).unwrap();
        for b in &d.ild_delta_db {
            write!(out, " {:>+9.2}", b.level_db).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigsim::RigKind;

    fn model(kind: RigKind) -> NamedReport {
        let src = SourceSpec::from_degrees(90.0).unwrap();
        NamedReport {
            name: kind.to_string(),
            report: AnalysisReport::from_model(
                &RigSpec::preset(kind),
                &src,
                18.0,
                &[500.0, 2000.0, 8000.0],
                Metadata::new(48_000, 18.0),
            )
            .unwrap(),
        }
    }

    #[test]
    fn self_comparison_is_zero() {
        let b = model(RigKind::HumanHead);
        let c = compare(b.clone(), vec![b]).unwrap();
        assert_eq!(c.deltas[0].itd_delta_s, 0.0);
        assert!(c.deltas[0].ild_delta_db.iter().all(|d| d.level_db == 0.0));
    }

    #[test]
    fn ortf_delta_sign() {
        let c = compare(model(RigKind::HumanHead), vec![model(RigKind::Ortf)]).unwrap();
        let d = c.deltas[0].itd_delta_s * 1e3;
        assert!((d - (0.17 / 341.8 * 1e3 - 0.6694)).abs() < 1e-3, "{d}");
        assert!(d < -0.15);
    }

    #[test]
    fn incompatible_bands() {
        let mut other = model(RigKind::Jecklin);
        other.report.ild_octaves.pop();
        assert!(matches!(
            compare(model(RigKind::HumanHead), vec![other]),
            Err(Error::IncompatibleBands(_))
        ));
        assert!(compare(model(RigKind::HumanHead), vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = compare(
            model(RigKind::HumanHead),
            vec![model(RigKind::SemiDummy), model(RigKind::Ortf)],
        )
        .unwrap();
        let text = to_json(&c).unwrap();
        let back: ComparisonReport = from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn schema_version_checked() {
        let r = model(RigKind::HumanHead).report;
        let text = to_json(&r)
            .unwrap()
            .replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(from_json::<AnalysisReport>(&text).is_err());
    }

    #[test]
    fn summary_orders_by_itd_delta() {
        let c = compare(
            model(RigKind::HumanHead),
            vec![
                model(RigKind::SemiDummy),
                model(RigKind::FullDummy),
                model(RigKind::Ortf),
            ],
        )
        .unwrap();
        let s = comparison_summary(&c);
        let pos = |n: &str| s.find(n).unwrap();
        // deltas: full dummy 0, semi dummy +0.16 ms, ORTF -0.17 ms
        assert!(pos("full-dummy") < pos("semi-dummy"));
        assert!(pos("semi-dummy") < pos("ortf"));
    }

    #[test]
    fn csv_shapes() {
        let c = compare(model(RigKind::HumanHead), vec![model(RigKind::Ortf)]).unwrap();
        let csv = comparison_csv(&c);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "name,itd_s,itd_delta_s,ild_delta_500hz_db,ild_delta_2000hz_db,ild_delta_8000hz_db"
        );
        assert!(lines.iter().all(|l| l.split(',').count() == 6));
    }
}
