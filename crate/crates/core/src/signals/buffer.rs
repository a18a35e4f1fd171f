use crate::error::{Error, Result};

/// Silence threshold shared by every analysis that rejects empty input.
pub const SILENCE_RMS: f64 = 1e-6;

/// Uniformly sampled mono audio.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl SampleBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::invalid("sample_rate", "must be positive"));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn silence(len: usize, sample_rate: u32) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn rms(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        (self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64).sqrt()
    }

    pub fn scaled(&self, gain: f64) -> Self {
        self.map(|x| x * gain)
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            samples: self.samples.iter().map(|&x| f(x)).collect(),
            sample_rate: self.sample_rate,
        }
    }

    pub(crate) fn with_samples(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            sample_rate: self.sample_rate,
        }
    }

    pub(crate) fn ensure_audible(&self) -> Result<()> {
        let rms = self.rms();
        if rms < SILENCE_RMS {
            return Err(Error::Silent {
                rms,
                threshold: SILENCE_RMS,
            });
        }
        Ok(())
    }
}

/// Two equally long channels at one sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct StereoBuffer {
    left: SampleBuffer,
    right: SampleBuffer,
}

impl StereoBuffer {
    pub fn new(left: SampleBuffer, right: SampleBuffer) -> Result<Self> {
        if left.sample_rate != right.sample_rate {
            return Err(Error::SampleRateMismatch(
                left.sample_rate,
                right.sample_rate,
            ));
        }
        if left.len() != right.len() {
            return Err(Error::LengthMismatch(left.len(), right.len()));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &SampleBuffer {
        &self.left
    }

    pub fn right(&self) -> &SampleBuffer {
        &self.right
    }

    pub fn sample_rate(&self) -> u32 {
        self.left.sample_rate
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.left.peak().max(self.right.peak())
    }

    /// Returns the buffer with left and right exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn scaled(&self, gain: f64) -> Self {
        Self {
            left: self.left.scaled(gain),
            right: self.right.scaled(gain),
        }
    }

    pub fn into_channels(self) -> (SampleBuffer, SampleBuffer) {
        (self.left, self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sample_rate_rejected() {
        assert!(SampleBuffer::new(vec![0.0], 0).is_err());
    }

    #[test]
    fn stereo_rejects_mismatches() {
        let a = SampleBuffer::new(vec![0.0; 4], 48_000).unwrap();
        let b = SampleBuffer::new(vec![0.0; 5], 48_000).unwrap();
        let c = SampleBuffer::new(vec![0.0; 4], 44_100).unwrap();
        assert!(matches!(
            StereoBuffer::new(a.clone(), b),
            Err(Error::LengthMismatch(4, 5))
        ));
        assert!(matches!(
            StereoBuffer::new(a, c),
            Err(Error::SampleRateMismatch(48_000, 44_100))
        ));
    }

    #[test]
    fn silence_detection() {
        let quiet = SampleBuffer::new(vec![1e-8; 100], 48_000).unwrap();
        assert!(matches!(quiet.ensure_audible(), Err(Error::Silent { .. })));
        let loud = SampleBuffer::new(vec![0.1; 100], 48_000).unwrap();
        assert!(loud.ensure_audible().is_ok());
    }
}
