//! Test-signal generation, fractional delay, and WAV I/O.

mod buffer;
mod delay;
mod generate;
mod wav;

pub use buffer::{SampleBuffer, StereoBuffer, SILENCE_RMS};
pub(crate) use delay::delay_samples;
pub use delay::{apply_fractional_delay, HALF_TAPS};
pub use generate::{gen_impulse, gen_pink_noise, gen_sine, PINK_PEAK};
pub use wav::{read_wav, read_wav_mono, read_wav_stereo, write_wav, Audio, WavEncoding};

/// Default sample rate for generated and simulated audio.
pub const DEFAULT_SAMPLE_RATE: u32 = 48_000;
