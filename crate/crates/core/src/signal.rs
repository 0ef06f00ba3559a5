//! Real↔analytic signal conversion, DFT machinery, window functions, and
//! synthetic test-signal generators.
//!
//! The analytic signal z[n] of a real signal x[n] is built with the standard
//! frequency-domain Hilbert construction: DFT the signal, zero the
//! negative-frequency half, double the strictly positive half, keep DC (and
//! Nyquist for even lengths) unchanged, inverse DFT. Re(z) reconstructs x
//! and the spectrum of z is one-sided.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// One labeled real-valued EEG recording.
///
/// Samples are in microvolts for real data; synthetic generators use
/// arbitrary units. `label` follows the pipeline convention `"healthy"` /
/// `"seizure"` when set by the dataset loader.
#[derive(Debug, Clone, PartialEq)]
pub struct EegSegment {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub label: Option<String>,
    pub source_id: String,
}

impl EegSegment {
    /// Build a segment, checking the length/finiteness/rate invariants.
    pub fn new(
        samples: Vec<f64>,
        sample_rate_hz: f64,
        label: Option<String>,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        let seg = EegSegment {
            samples,
            sample_rate_hz,
            label,
            source_id: source_id.into(),
        };
        seg.validate()?;
        Ok(seg)
    }

    /// Check N ≥ 2, all samples finite, positive sample rate.
    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "segment '{}' has {} samples, need at least 2",
                self.source_id,
                self.samples.len()
            )));
        }
        if !self.sample_rate_hz.is_finite() || self.sample_rate_hz <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "segment '{}' has non-positive sample rate {}",
                self.source_id, self.sample_rate_hz
            )));
        }
        if let Some(i) = self.samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "segment '{}' has non-finite sample at index {i}",
                self.source_id
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Complex signal with a one-sided spectrum whose real part is the original
/// real signal. Produced by [`analytic_signal`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    pub values: Vec<Complex64>,
    pub sample_rate_hz: f64,
}

impl AnalyticSignal {
    /// Check N ≥ 2, finite values, positive sample rate.
    pub fn validate(&self) -> Result<()> {
        if self.values.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "analytic signal has {} samples, need at least 2",
                self.values.len()
            )));
        }
        if !self.sample_rate_hz.is_finite() || self.sample_rate_hz <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "analytic signal has non-positive sample rate {}",
                self.sample_rate_hz
            )));
        }
        if let Some(i) = self
            .values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "analytic signal has non-finite value at index {i}"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Magnitude |z[n]| per sample.
    pub fn envelope(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Largest negative-frequency DFT magnitude relative to the overall
    /// maximum coefficient magnitude. Near zero for a proper analytic signal.
    pub fn negative_frequency_residue(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let spectrum = dft(&self.values, n).expect("length checked");
        let max_mag = spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max_mag == 0.0 {
            return 0.0;
        }
        // Strictly negative frequencies: indices N/2+1..N-1 for even N,
        // (N+1)/2..N-1 for odd N.
        let first_neg = n / 2 + 1;
        spectrum[first_neg..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            / max_mag
    }
}

/// Convert a real segment to its analytic signal via the frequency-domain
/// Hilbert transform (full-length DFT, no padding).
pub fn analytic_signal(segment: &EegSegment) -> Result<AnalyticSignal> {
    segment.validate()?;
    let n = segment.samples.len();
    let input: Vec<Complex64> = segment
        .samples
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    let mut spectrum = dft(&input, n)?;

    // Keep DC; double strictly positive frequencies; keep Nyquist for even
    // N; zero the strictly negative half.
    let half = n / 2;
    let pos_end = if n % 2 == 0 { half } else { half + 1 };
    for bin in spectrum.iter_mut().take(pos_end).skip(1) {
        *bin *= 2.0;
    }
    for bin in spectrum.iter_mut().skip(half + 1) {
        *bin = Complex64::new(0.0, 0.0);
    }

    let values = idft(&spectrum, n)?;
    Ok(AnalyticSignal {
        values,
        sample_rate_hz: segment.sample_rate_hz,
    })
}

/// Forward DFT, zero-padding the input to `size`. No normalization.
pub fn dft(values: &[Complex64], size: usize) -> Result<Vec<Complex64>> {
    if size == 0 {
        return Err(Error::InvalidInput("dft size must be positive".into()));
    }
    if values.len() > size {
        return Err(Error::InvalidInput(format!(
            "dft size {size} is smaller than input length {}",
            values.len()
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    buf[..values.len()].copy_from_slice(values);
    FftPlanner::new().plan_fft_forward(size).process(&mut buf);
    Ok(buf)
}

/// Inverse DFT with 1/size normalization, zero-padding the input to `size`.
pub fn idft(values: &[Complex64], size: usize) -> Result<Vec<Complex64>> {
    if size == 0 {
        return Err(Error::InvalidInput("idft size must be positive".into()));
    }
    if values.len() > size {
        return Err(Error::InvalidInput(format!(
            "idft size {size} is smaller than input length {}",
            values.len()
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    buf[..values.len()].copy_from_slice(values);
    FftPlanner::new().plan_fft_inverse(size).process(&mut buf);
    let scale = 1.0 / size as f64;
    for v in &mut buf {
        *v *= scale;
    }
    Ok(buf)
}

/// Window family for lag smoothing and spectrogram analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Hamming,
    Hann,
    Rectangular,
}

impl WindowKind {
    pub fn name(&self) -> &'static str {
        match self {
            WindowKind::Hamming => "hamming",
            WindowKind::Hann => "hann",
            WindowKind::Rectangular => "rectangular",
        }
    }
}

impl std::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" => Ok(WindowKind::Hamming),
            "hann" => Ok(WindowKind::Hann),
            "rectangular" | "rect" => Ok(WindowKind::Rectangular),
            other => Err(Error::InvalidConfig(format!("unknown window '{other}'"))),
        }
    }
}

/// Symmetric window specification. Lengths must be odd so the window has a
/// center sample where it peaks at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub length: usize,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, length: usize) -> Self {
        WindowSpec { kind, length }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 || self.length % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "window length must be odd and positive, got {}",
                self.length
            )));
        }
        Ok(())
    }
}

/// Evaluate a window. Symmetric, values in [0,1], peak 1 at the center.
pub fn make_window(spec: &WindowSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let len = spec.length;
    if len == 1 {
        return Ok(vec![1.0]);
    }
    let denom = (len - 1) as f64;
    let w = (0..len)
        .map(|n| {
            let phase = 2.0 * PI * n as f64 / denom;
            match spec.kind {
                WindowKind::Hamming => 0.54 - 0.46 * phase.cos(),
                WindowKind::Hann => 0.5 * (1.0 - phase.cos()),
                WindowKind::Rectangular => 1.0,
            }
        })
        .collect();
    Ok(w)
}

/// Deterministic cosine test tone: `amplitude · cos(2π f n / f_s)`.
pub fn synth_tone(
    freq_hz: f64,
    sample_rate_hz: f64,
    n_samples: usize,
    amplitude: f64,
) -> Result<EegSegment> {
    check_band(freq_hz, sample_rate_hz)?;
    let samples = (0..n_samples)
        .map(|n| amplitude * (2.0 * PI * freq_hz * n as f64 / sample_rate_hz).cos())
        .collect();
    EegSegment::new(
        samples,
        sample_rate_hz,
        None,
        format!("tone-{freq_hz}hz"),
    )
}

/// Linear-FM chirp whose instantaneous frequency sweeps `f0_hz` → `f1_hz`
/// across the segment.
pub fn synth_lfm_chirp(
    f0_hz: f64,
    f1_hz: f64,
    sample_rate_hz: f64,
    n_samples: usize,
) -> Result<EegSegment> {
    check_band(f0_hz, sample_rate_hz)?;
    check_band(f1_hz, sample_rate_hz)?;
    if n_samples < 2 {
        return Err(Error::InvalidInput(
            "chirp needs at least 2 samples".into(),
        ));
    }
    let duration = n_samples as f64 / sample_rate_hz;
    let sweep = (f1_hz - f0_hz) / duration;
    let samples = (0..n_samples)
        .map(|n| {
            let t = n as f64 / sample_rate_hz;
            // phase(t) = 2π (f0 t + sweep t² / 2) so that dφ/dt / 2π = f0 + sweep·t
            (2.0 * PI * (f0_hz * t + 0.5 * sweep * t * t)).cos()
        })
        .collect();
    EegSegment::new(
        samples,
        sample_rate_hz,
        None,
        format!("chirp-{f0_hz}to{f1_hz}hz"),
    )
}

fn check_band(freq_hz: f64, sample_rate_hz: f64) -> Result<()> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "sample rate must be positive, got {sample_rate_hz}"
        )));
    }
    if !(freq_hz > 0.0 && freq_hz < sample_rate_hz / 2.0) {
        return Err(Error::InvalidInput(format!(
            "frequency {freq_hz} Hz outside (0, {}) Hz",
            sample_rate_hz / 2.0
        )));
    }
    Ok(())
}
