use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use bincue::analysis::{analyze_capture, AnalysisConfig, Weighting};
use bincue::report::{
    compare, comparison_csv, comparison_summary, from_json, to_json, transfer_function_csv,
    AnalysisReport, Metadata, NamedReport, SimulationReport,
};
use bincue::rigsim::{parse_rig_config, predict, simulate_capture, RigKind, RigSpec, SourceSpec};
use bincue::signals::{
    gen_impulse, gen_pink_noise, gen_sine, read_wav_mono, read_wav_stereo, write_wav, Audio,
    SampleBuffer, WavEncoding,
};
use bincue::{binauralize, RenderSpec};

use crate::{Cli, Command, Encoding, Global, SignalKind, WeightingArg};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

const USAGE: u8 = 1;
const IO: u8 = 2;
const INVALID: u8 = 3;

type Outcome<T> = Result<T, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Library error with the offending flag named in front.
fn lib(flag: &str) -> impl FnOnce(bincue::Error) -> Failure + '_ {
    move |e| {
        let code = if e.is_io() { IO } else { INVALID };
        fail(code, format!("{flag}: {e}"))
    }
}

fn write_text(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| fail(IO, format!("cannot write {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| fail(IO, format!("cannot read {}: {e}", path.display())))
}

fn csv_beside(json: &Path) -> PathBuf {
    json.with_extension("csv")
}

fn metadata(g: &Global) -> Metadata {
    let mut m = Metadata::new(g.sample_rate, g.temperature_c);
    m.seed = Some(g.seed);
    if !g.deterministic {
        m.generated_at_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    m
}

fn load_rig(arg: &str) -> Outcome<RigSpec> {
    if let Ok(kind) = arg.parse::<RigKind>() {
        return Ok(RigSpec::preset(kind));
    }
    let path = Path::new(arg);
    if !path.exists() {
        let presets: Vec<&str> = RigKind::ALL.iter().map(|k| k.name()).collect();
        return Err(fail(
            IO,
            format!(
                "--rig: '{arg}' is neither a preset ({}) nor a readable file",
                presets.join(", ")
            ),
        ));
    }
    parse_rig_config(&read_text(path)?).map_err(|e| fail(INVALID, format!("--rig {arg}: {e}")))
}

fn check_range(flag: &str, value: f64, lo: f64, hi: f64) -> Outcome<()> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(fail(
            INVALID,
            format!("{flag}: {value} is outside [{lo}, {hi}]"),
        ))
    }
}

pub fn run(cli: Cli) -> Outcome<()> {
    let g = &cli.global;
    if g.sample_rate == 0 {
        return Err(fail(USAGE, "--sample-rate: must be positive"));
    }
    check_range("--temp", g.temperature_c, -20.0, 50.0)?;
    match cli.command {
        Command::Generate {
            kind,
            seconds,
            freq,
            amplitude,
            burst,
            offset,
            encoding,
        } => {
            if !(seconds > 0.0) || !seconds.is_finite() {
                return Err(fail(
                    INVALID,
                    format!("--seconds: must be positive, got {seconds}"),
                ));
            }
            let buf = match kind {
                SignalKind::Pink => {
                    gen_pink_noise(seconds, g.sample_rate, g.seed).map_err(lib("--seconds"))?
                }
                SignalKind::Sine => {
                    let nyquist = g.sample_rate as f64 / 2.0;
                    if !(freq > 0.0 && freq < nyquist) {
                        return Err(fail(
                            INVALID,
                            format!("--freq: must be in (0, {nyquist}) Hz, got {freq}"),
                        ));
                    }
                    check_range("--amplitude", amplitude, 0.0, 1.0)?;
                    gen_sine(freq, seconds, g.sample_rate, amplitude).map_err(lib("--freq"))?
                }
                SignalKind::Impulse => {
                    gen_impulse(seconds, g.sample_rate, offset).map_err(lib("--offset"))?
                }
            };
            let buf = match (burst, kind) {
                (None, _) => buf,
                (Some(_), SignalKind::Impulse) => {
                    return Err(fail(USAGE, "--burst: applies to pink and sine only"));
                }
                (Some(b), _) => {
                    check_range("--burst", b, f64::MIN_POSITIVE, seconds)?;
                    let keep = (b * g.sample_rate as f64).round() as usize;
                    let rate = buf.sample_rate();
                    let mut samples = buf.into_samples();
                    let keep = keep.min(samples.len());
                    samples[keep..].fill(0.0);
                    SampleBuffer::new(samples, rate).map_err(lib("--burst"))?
                }
            };
            let out = g
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{kind:?}.wav").to_lowercase()));
            let encoding = match encoding {
                Encoding::Pcm16 => WavEncoding::Pcm16,
                Encoding::Pcm24 => WavEncoding::Pcm24,
                Encoding::Float32 => WavEncoding::Float32,
            };
            write_wav(&out, &Audio::Mono(buf), encoding).map_err(lib("--out"))?;
            println!("wrote {}", out.display());
        }
        Command::Analyze {
            input,
            fft_size,
            overlap,
            weighting,
            bands,
            csv,
        } => {
            let stereo = read_wav_stereo(&input).map_err(lib("input"))?;
            let config = AnalysisConfig {
                fft_size,
                overlap,
                weighting: match weighting {
                    WeightingArg::None => Weighting::None,
                    WeightingArg::Phat => Weighting::Phat,
                },
                ..AnalysisConfig::default()
            };
            let cues = analyze_capture(&stereo, &config).map_err(lib("analyze"))?;
            let mut meta = metadata(g);
            meta.sample_rate = stereo.sample_rate();
            meta.seed = None;
            meta.source = Some(input.display().to_string());
            meta.analysis = Some(config);
            let report = AnalysisReport::from_cues(&cues, &bands, meta).map_err(lib("--bands"))?;
            let out = g
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("analysis.json"));
            write_text(&out, &to_json(&report).map_err(lib("report"))?)?;
            let csv = csv.unwrap_or_else(|| csv_beside(&out));
            write_text(&csv, &transfer_function_csv(&cues.ild_spectrum))?;
            println!(
                "ITD {:.4} ms; wrote {} and {}",
                report.itd_s * 1e3,
                out.display(),
                csv.display()
            );
        }
        Command::Simulate {
            rig,
            azimuth,
            signal,
            seconds,
        } => {
            let spec = load_rig(&rig)?;
            check_range("--azimuth", azimuth, 0.0, 90.0)?;
            let src = SourceSpec::from_degrees(azimuth).map_err(lib("--azimuth"))?;
            let mut meta = metadata(g);
            let input = if signal == "pink" {
                gen_pink_noise(seconds, g.sample_rate, g.seed).map_err(lib("--seconds"))?
            } else {
                meta.seed = None;
                meta.source = Some(signal.clone());
                read_wav_mono(&signal).map_err(lib("--signal"))?
            };
            meta.sample_rate = input.sample_rate();
            meta.rigs = vec![spec];
            let capture =
                simulate_capture(&spec, &src, &input, g.temperature_c).map_err(lib("simulate"))?;
            let prediction = predict(&spec, &src, g.temperature_c).map_err(lib("simulate"))?;
            let out = g
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("capture.wav"));
            let peak = capture.peak();
            let capture = if peak > 1.0 {
                capture.scaled(1.0 / peak)
            } else {
                capture
            };
            write_wav(&out, &Audio::Stereo(capture), WavEncoding::Float32).map_err(lib("--out"))?;
            let sidecar = out.with_extension("json");
            let report = SimulationReport::new(prediction, meta);
            write_text(&sidecar, &to_json(&report).map_err(lib("report"))?)?;
            println!(
                "predicted ITD {:.4} ms; wrote {} and {}",
                report.prediction.predicted_itd_s * 1e3,
                out.display(),
                sidecar.display()
            );
        }
        Command::Render {
            input,
            azimuth,
            rig,
            gain_db,
        } => {
            let spec = load_rig(&rig)?;
            check_range("--azimuth", azimuth, -90.0, 90.0)?;
            if gain_db > 0.0 {
                return Err(fail(
                    INVALID,
                    format!("--gain-db: must be at most 0, got {gain_db}"),
                ));
            }
            let mono = read_wav_mono(&input).map_err(lib("input"))?;
            let render = RenderSpec::new(spec, azimuth.to_radians(), g.temperature_c, gain_db)
                .map_err(lib("render"))?;
            let stereo = binauralize(&mono, &render).map_err(lib("render"))?;
            let out = g.out.clone().unwrap_or_else(|| PathBuf::from("render.wav"));
            write_wav(&out, &Audio::Stereo(stereo), WavEncoding::Float32).map_err(lib("--out"))?;
            println!("wrote {}", out.display());
        }
        Command::Compare {
            baseline,
            candidates,
            csv,
        } => {
            let load = |path: &Path| -> Outcome<NamedReport> {
                let report: AnalysisReport = from_json(&read_text(path)?)
                    .map_err(|e| fail(INVALID, format!("{}: {e}", path.display())))?;
                let name = path.file_stem().map_or_else(
                    || path.display().to_string(),
                    |s| s.to_string_lossy().into_owned(),
                );
                Ok(NamedReport { name, report })
            };
            let base = load(&baseline)?;
            let cands = candidates
                .iter()
                .map(|p| load(p))
                .collect::<Outcome<Vec<_>>>()?;
            let mut cmp = compare(base, cands).map_err(lib("compare"))?;
            cmp.generated_at_unix = metadata(g).generated_at_unix;
            let out = g
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("comparison.json"));
            write_text(&out, &to_json(&cmp).map_err(lib("report"))?)?;
            write_text(
                &csv.unwrap_or_else(|| csv_beside(&out)),
                &comparison_csv(&cmp),
            )?;
            print!("{}", comparison_summary(&cmp));
        }
    }
    Ok(())
}
