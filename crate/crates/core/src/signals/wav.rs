use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{SampleBuffer, StereoBuffer};
use crate::error::{Error, Result};

/// PCM encodings supported for writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WavEncoding {
    Pcm16,
    Pcm24,
    #[default]
    Float32,
}

impl WavEncoding {
    fn spec(self, channels: u16, sample_rate: u32) -> WavSpec {
        let (bits_per_sample, sample_format) = match self {
            WavEncoding::Pcm16 => (16, SampleFormat::Int),
            WavEncoding::Pcm24 => (24, SampleFormat::Int),
            WavEncoding::Float32 => (32, SampleFormat::Float),
        };
        WavSpec {
            channels,
            sample_rate,
            bits_per_sample,
            sample_format,
        }
    }
}

/// Contents of a WAV file: one or two channels.
#[derive(Debug, Clone, PartialEq)]
pub enum Audio {
    Mono(SampleBuffer),
    Stereo(StereoBuffer),
}

impl Audio {
    fn layout(&self) -> &'static str {
        match self {
            Audio::Mono(_) => "mono",
            Audio::Stereo(_) => "stereo",
        }
    }
}

impl From<SampleBuffer> for Audio {
    fn from(b: SampleBuffer) -> Self {
        Audio::Mono(b)
    }
}

impl From<StereoBuffer> for Audio {
    fn from(b: StereoBuffer) -> Self {
        Audio::Stereo(b)
    }
}

fn malformed(path: &Path, err: hound::Error) -> Error {
    match err {
        hound::Error::IoError(source) => Error::Io {
            path: path.to_owned(),
            source,
        },
        hound::Error::Unsupported => Error::UnsupportedEncoding("hound: unsupported".into()),
        other => Error::MalformedWav {
            path: path.to_owned(),
            reason: other.to_string(),
        },
    }
}

/// Reads a mono or stereo WAV. Integer PCM is scaled by 1/2^(bits-1).
pub fn read_wav(path: impl AsRef<Path>) -> Result<Audio> {
    let path = path.as_ref();
    let reader = WavReader::open(path).map_err(|e| malformed(path, e))?;
    let spec = reader.spec();
    if spec.channels == 0 || spec.channels > 2 {
        return Err(Error::ChannelCount(spec.channels));
    }
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<_, _>>()
            .map_err(|e| malformed(path, e))?,
        (SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let scale = 1.0 / (1u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 * scale))
                .collect::<Result<_, _>>()
                .map_err(|e| malformed(path, e))?
        }
        (fmt, bits) => {
            return Err(Error::UnsupportedEncoding(format!("{fmt:?} {bits}-bit")));
        }
    };
    let rate = spec.sample_rate;
    if spec.channels == 1 {
        return Ok(Audio::Mono(SampleBuffer::new(interleaved, rate)?));
    }
    let left = interleaved.iter().step_by(2).copied().collect();
    let right = interleaved.iter().skip(1).step_by(2).copied().collect();
    Ok(Audio::Stereo(StereoBuffer::new(
        SampleBuffer::new(left, rate)?,
        SampleBuffer::new(right, rate)?,
    )?))
}

pub fn read_wav_stereo(path: impl AsRef<Path>) -> Result<StereoBuffer> {
    match read_wav(path)? {
        Audio::Stereo(s) => Ok(s),
        other => Err(Error::ChannelLayout {
            expected: "stereo",
            actual: other.layout(),
        }),
    }
}

pub fn read_wav_mono(path: impl AsRef<Path>) -> Result<SampleBuffer> {
    match read_wav(path)? {
        Audio::Mono(s) => Ok(s),
        other => Err(Error::ChannelLayout {
            expected: "mono",
            actual: other.layout(),
        }),
    }
}

fn check_writable(samples: &[f64], offset: usize) -> Result<()> {
    for (i, &x) in samples.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite { index: offset + i });
        }
        if x.abs() > 1.0 {
            return Err(Error::Clipping {
                index: offset + i,
                value: x,
            });
        }
    }
    Ok(())
}

/// Writes mono or stereo audio. Samples outside [-1, 1] are an error.
pub fn write_wav(path: impl AsRef<Path>, audio: &Audio, encoding: WavEncoding) -> Result<()> {
    let path = path.as_ref();
    let channels: Vec<&[f64]> = match audio {
        Audio::Mono(b) => vec![b.samples()],
        Audio::Stereo(s) => vec![s.left().samples(), s.right().samples()],
    };
    for ch in &channels {
        check_writable(ch, 0)?;
    }
    let rate = match audio {
        Audio::Mono(b) => b.sample_rate(),
        Audio::Stereo(s) => s.sample_rate(),
    };
    let spec = encoding.spec(channels.len() as u16, rate);
    let mut writer = WavWriter::create(path, spec).map_err(|e| malformed(path, e))?;
    let frames = channels[0].len();
    for i in 0..frames {
        for ch in &channels {
            let x = ch[i];
            let res = match encoding {
                WavEncoding::Float32 => writer.write_sample(x as f32),
                WavEncoding::Pcm16 => writer.write_sample(quantize(x, 16)),
                WavEncoding::Pcm24 => writer.write_sample(quantize(x, 24)),
            };
            res.map_err(|e| malformed(path, e))?;
        }
    }
    writer.finalize().map_err(|e| malformed(path, e))
}

/// Round to the nearest code; +1.0 saturates at the largest positive code.
fn quantize(x: f64, bits: u32) -> i32 {
    let full = (1i64 << (bits - 1)) as f64;
    (x * full).round().min(full - 1.0) as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join(name);
        (dir, p)
    }

    #[test]
    fn float_stereo_round_trip_is_exact() {
        let l: Vec<f64> = (0..500)
            .map(|i| ((i as f64) * 0.37).sin() as f32 as f64)
            .collect();
        let r: Vec<f64> = l.iter().map(|x| -x * 0.5).collect();
        let s = StereoBuffer::new(
            SampleBuffer::new(l, 44_100).unwrap(),
            SampleBuffer::new(r, 44_100).unwrap(),
        )
        .unwrap();
        let (_d, p) = tmp("s.wav");
        write_wav(&p, &s.clone().into(), WavEncoding::Float32).unwrap();
        assert_eq!(read_wav_stereo(&p).unwrap(), s);
    }

    #[test]
    fn pcm16_scaled_by_32768() {
        let (_d, p) = tmp("i16.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 48_000,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(&p, spec).unwrap();
        for v in [i16::MIN, -16384, 0, 16384, i16::MAX] {
            w.write_sample(v).unwrap();
        }
        w.finalize().unwrap();
        let m = read_wav_mono(&p).unwrap();
        assert_eq!(m.samples(), &[-1.0, -0.5, 0.0, 0.5, 32767.0 / 32768.0][..]);
    }

    #[test]
    fn pcm24_round_trip_within_quantization() {
        let x: Vec<f64> = (0..200).map(|i| ((i as f64) * 0.11).cos() * 0.9).collect();
        let b = SampleBuffer::new(x.clone(), 48_000).unwrap();
        let (_d, p) = tmp("i24.wav");
        write_wav(&p, &b.into(), WavEncoding::Pcm24).unwrap();
        let back = read_wav_mono(&p).unwrap();
        for (a, b) in x.iter().zip(back.samples()) {
            assert!((a - b).abs() <= 0.5 / 8_388_608.0 + 1e-15);
        }
    }

    #[test]
    fn three_channels_rejected() {
        let (_d, p) = tmp("3ch.wav");
        let spec = WavSpec {
            channels: 3,
            sample_rate: 48_000,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(&p, spec).unwrap();
        for _ in 0..9 {
            w.write_sample(0i16).unwrap();
        }
        w.finalize().unwrap();
        assert!(matches!(read_wav(&p), Err(Error::ChannelCount(3))));
    }

    #[test]
    fn clipping_is_an_error() {
        let b = SampleBuffer::new(vec![0.0, 1.5], 48_000).unwrap();
        let (_d, p) = tmp("clip.wav");
        assert!(matches!(
            write_wav(&p, &b.into(), WavEncoding::Float32),
            Err(Error::Clipping { index: 1, .. })
        ));
    }

    #[test]
    fn garbage_is_malformed() {
        let (_d, p) = tmp("bad.wav");
        std::fs::write(&p, b"RIFF\x04\x00\x00\x00junkjunk").unwrap();
        assert!(read_wav(&p).is_err());
    }

    #[test]
    fn mono_where_stereo_expected() {
        let b = SampleBuffer::new(vec![0.1; 10], 48_000).unwrap();
        let (_d, p) = tmp("m.wav");
        write_wav(&p, &b.into(), WavEncoding::Pcm16).unwrap();
        assert!(matches!(
            read_wav_stereo(&p),
            Err(Error::ChannelLayout { .. })
        ));
    }
}
