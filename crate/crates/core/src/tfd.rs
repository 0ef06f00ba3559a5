//! Quadratic time-frequency distributions over analytic signals.
//!
//! All three kernels produce an N×M real matrix: N time rows (one per input
//! sample) and M frequency columns with column k at physical frequency
//! k·f_s/(2M), covering 0 … f_s/2.
//!
//! SWVD and CWD follow the kernelled-autocorrelation route: form the
//! instantaneous autocorrelation K[n,m] = z[n+m]·z*[n−m], smooth it (lag
//! window for SWVD, per-lag time convolution for CWD), then take twice the
//! real part of the M-point DFT over the lag index. The spectrogram is
//! computed directly as |STFT|² with a 2M-point transform so its frequency
//! axis matches the doubled-frequency convention of the other two kernels.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signal::{make_window, AnalyticSignal, WindowKind, WindowSpec};

/// Relative floor below which the Choi-Williams time kernel is truncated.
const CWD_TRUNCATION: f64 = 1e-6;

/// Kernel family plus its family-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// Smoothed Wigner-Ville: lag-direction amplitude window only.
    Swvd { smoothing_window: WindowSpec },
    /// Choi-Williams: per-lag Gaussian convolution along time,
    /// exp[−α(ητ)²] in the Doppler-lag domain.
    Cwd { alpha: f64 },
    /// Spectrogram: squared magnitude of the sliding-window DFT.
    Spectrogram { window: WindowSpec },
}

/// Full kernel configuration: family, lag extent, and frequency bin count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// Odd length of the lag support (SWVD/CWD) or analysis frame (SPEC).
    pub lag_window_length: usize,
    /// Number of frequency columns M; column k sits at k·f_s/(2M).
    pub fft_length_m: usize,
}

impl KernelSpec {
    /// Smoothed Wigner-Ville with a Hamming lag window of 127 and M = 512.
    pub fn swvd() -> Self {
        Self::swvd_with(WindowSpec::new(WindowKind::Hamming, 127), 512)
    }

    pub fn swvd_with(smoothing_window: WindowSpec, fft_length_m: usize) -> Self {
        KernelSpec {
            kind: KernelKind::Swvd { smoothing_window },
            lag_window_length: smoothing_window.length,
            fft_length_m,
        }
    }

    /// Choi-Williams with α = 1, lag support 127, M = 512.
    pub fn cwd() -> Self {
        Self::cwd_with(1.0, 127, 512)
    }

    pub fn cwd_with(alpha: f64, lag_window_length: usize, fft_length_m: usize) -> Self {
        KernelSpec {
            kind: KernelKind::Cwd { alpha },
            lag_window_length,
            fft_length_m,
        }
    }

    /// Spectrogram with a Hamming analysis window of 127, hop 1, M = 512.
    pub fn spectrogram() -> Self {
        Self::spectrogram_with(WindowSpec::new(WindowKind::Hamming, 127), 512)
    }

    pub fn spectrogram_with(window: WindowSpec, fft_length_m: usize) -> Self {
        KernelSpec {
            kind: KernelKind::Spectrogram { window },
            lag_window_length: window.length,
            fft_length_m,
        }
    }

    /// Short lowercase tag used in file names and reports.
    pub fn name(&self) -> &'static str {
        match self.kind {
            KernelKind::Swvd { .. } => "swvd",
            KernelKind::Cwd { .. } => "cwd",
            KernelKind::Spectrogram { .. } => "spec",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lag_window_length == 0 || self.lag_window_length % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "lag window length must be odd and positive, got {}",
                self.lag_window_length
            )));
        }
        if self.fft_length_m < self.lag_window_length {
            return Err(Error::InvalidConfig(format!(
                "fft length {} is smaller than lag window length {}",
                self.fft_length_m, self.lag_window_length
            )));
        }
        match self.kind {
            KernelKind::Swvd { smoothing_window } | KernelKind::Spectrogram { window: smoothing_window } => {
                smoothing_window.validate().map_err(|_| {
                    Error::InvalidConfig(format!(
                        "window length must be odd and positive, got {}",
                        smoothing_window.length
                    ))
                })?;
                if smoothing_window.length != self.lag_window_length {
                    return Err(Error::InvalidConfig(format!(
                        "window length {} does not match lag window length {}",
                        smoothing_window.length, self.lag_window_length
                    )));
                }
            }
            KernelKind::Cwd { alpha } => {
                if !alpha.is_finite() || alpha <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "cwd alpha must be positive, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// N×M real time-frequency matrix with its axis metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct TfdMatrix {
    /// Row n = time sample n, column k = frequency k·f_s/(2M).
    pub rho: Array2<f64>,
    pub sample_rate_hz: f64,
    pub kernel: KernelSpec,
}

impl TfdMatrix {
    pub fn n_time(&self) -> usize {
        self.rho.nrows()
    }

    pub fn n_freq(&self) -> usize {
        self.rho.ncols()
    }

    /// Physical frequency of column k, in Hz.
    pub fn bin_to_hz(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate_hz / (2.0 * self.n_freq() as f64)
    }

    /// Frequencies of all M columns: k·f_s/(2M) for k = 0 … M−1.
    pub fn freq_axis_hz(&self) -> Vec<f64> {
        (0..self.n_freq()).map(|k| self.bin_to_hz(k)).collect()
    }

    /// Check finiteness, and non-negativity for the spectrogram kernel.
    pub fn validate(&self) -> Result<()> {
        if !self.sample_rate_hz.is_finite() || self.sample_rate_hz <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "tfd matrix has non-positive sample rate {}",
                self.sample_rate_hz
            )));
        }
        if self.rho.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "tfd matrix has non-finite entries".into(),
            ));
        }
        if matches!(self.kernel.kind, KernelKind::Spectrogram { .. })
            && self.rho.iter().any(|&v| v < 0.0)
        {
            return Err(Error::InvalidInput(
                "spectrogram matrix has negative entries".into(),
            ));
        }
        Ok(())
    }
}

/// K[n, h+m] = z[n+m]·z̄[n−m] for m = −h … h, h = (L−1)/2, reading z as zero
/// outside [0, N). Column h+0 is |z[n]|²; negative-lag columns are the exact
/// conjugates of their positive counterparts.
pub fn instantaneous_autocorrelation(
    z: &AnalyticSignal,
    lag_window_length: usize,
) -> Result<Array2<Complex64>> {
    z.validate()?;
    if lag_window_length == 0 || lag_window_length % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "lag window length must be odd and positive, got {lag_window_length}"
        )));
    }
    let n = z.len();
    let h = (lag_window_length - 1) / 2;
    let mut k_mat = Array2::zeros((n, lag_window_length));
    for t in 0..n {
        // Lags where either read is out of range stay zero; both the +m and
        // −m entries touch the same pair of indices, so one guard covers both.
        let reach = t.min(n - 1 - t).min(h);
        for m in 0..=reach {
            let v = z.values[t + m] * z.values[t - m].conj();
            k_mat[[t, h + m]] = v;
            if m > 0 {
                k_mat[[t, h - m]] = v.conj();
            }
        }
    }
    Ok(k_mat)
}

/// Compute the quadratic TFD of an analytic signal for the given kernel.
pub fn qtfd(z: &AnalyticSignal, kernel: &KernelSpec) -> Result<TfdMatrix> {
    z.validate()?;
    kernel.validate()?;
    let rho = match kernel.kind {
        KernelKind::Swvd { smoothing_window } => swvd_rho(z, kernel, &smoothing_window)?,
        KernelKind::Cwd { alpha } => cwd_rho(z, kernel, alpha)?,
        KernelKind::Spectrogram { window } => spectrogram_rho(z, kernel, &window)?,
    };
    let out = TfdMatrix {
        rho,
        sample_rate_hz: z.sample_rate_hz,
        kernel: *kernel,
    };
    out.validate()?;
    Ok(out)
}

/// Shared final stage for SWVD and CWD: per time row, wrap the smoothed lag
/// values into an M-point buffer (negative lag m at index M+m), DFT, and
/// keep twice the real part.
fn lag_dft_stage(
    smoothed: &Array2<Complex64>,
    h: usize,
    m_len: usize,
) -> Array2<f64> {
    let n = smoothed.nrows();
    let fft = FftPlanner::new().plan_fft_forward(m_len);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex64::default(); m_len];
    let mut rho = Array2::zeros((n, m_len));
    for t in 0..n {
        buf.fill(Complex64::default());
        buf[0] = smoothed[[t, 0]];
        for m in 1..=h {
            let v = smoothed[[t, m]];
            buf[m] = v;
            buf[m_len - m] = v.conj();
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for k in 0..m_len {
            rho[[t, k]] = 2.0 * buf[k].re;
        }
    }
    rho
}

fn swvd_rho(z: &AnalyticSignal, kernel: &KernelSpec, window: &WindowSpec) -> Result<Array2<f64>> {
    let w = make_window(window)?;
    let l = kernel.lag_window_length;
    let h = (l - 1) / 2;
    let k_mat = instantaneous_autocorrelation(z, l)?;

    // Window the non-negative lags; the mirror step in lag_dft_stage
    // restores the (identically windowed) negative lags by conjugation.
    let n = z.len();
    let mut smoothed = Array2::zeros((n, h + 1));
    for t in 0..n {
        for m in 0..=h {
            smoothed[[t, m]] = k_mat[[t, h + m]] * w[h + m];
        }
    }
    Ok(lag_dft_stage(&smoothed, h, kernel.fft_length_m))
}

/// Number of time steps the Choi-Williams kernel extends on each side of
/// zero at lag m before dropping below `CWD_TRUNCATION` of its peak.
fn cwd_reach(alpha: f64, m: usize) -> usize {
    (2.0 * m as f64 * ((1.0 / CWD_TRUNCATION).ln() / alpha).sqrt()).floor() as usize
}

fn cwd_rho(z: &AnalyticSignal, kernel: &KernelSpec, alpha: f64) -> Result<Array2<f64>> {
    let l = kernel.lag_window_length;
    let h = (l - 1) / 2;
    let n = z.len();
    let k_mat = instantaneous_autocorrelation(z, l)?;

    let mut smoothed = Array2::zeros((n, h + 1));
    for t in 0..n {
        smoothed[[t, 0]] = k_mat[[t, h]];
    }

    // Per-lag convolution along time, done as FFT products on a common size
    // large enough for exact linear convolution at the widest lag.
    let reach_max = cwd_reach(alpha, h);
    let conv_len = (n + 2 * reach_max + 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(conv_len);
    let inv = planner.plan_fft_inverse(conv_len);
    let mut scratch = vec![
        Complex64::default();
        fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())
    ];
    let mut g_hat = vec![Complex64::default(); conv_len];
    let mut col = vec![Complex64::default(); conv_len];
    let inv_scale = 1.0 / conv_len as f64;

    for m in 1..=h {
        let reach = cwd_reach(alpha, m);
        let norm = (alpha / (4.0 * PI * (m * m) as f64)).sqrt();
        g_hat.fill(Complex64::default());
        for (i, slot) in g_hat.iter_mut().enumerate().take(2 * reach + 1) {
            let d = i as f64 - reach as f64;
            slot.re = norm * (-alpha * d * d / (4.0 * (m * m) as f64)).exp();
        }
        fwd.process_with_scratch(&mut g_hat, &mut scratch);

        col.fill(Complex64::default());
        for t in 0..n {
            col[t] = k_mat[[t, h + m]];
        }
        fwd.process_with_scratch(&mut col, &mut scratch);
        for (c, g) in col.iter_mut().zip(&g_hat) {
            *c *= g * inv_scale;
        }
        inv.process_with_scratch(&mut col, &mut scratch);
        for t in 0..n {
            smoothed[[t, m]] = col[t + reach];
        }
    }
    Ok(lag_dft_stage(&smoothed, h, kernel.fft_length_m))
}

fn spectrogram_rho(
    z: &AnalyticSignal,
    kernel: &KernelSpec,
    window: &WindowSpec,
) -> Result<Array2<f64>> {
    let w = make_window(window)?;
    let l = kernel.lag_window_length;
    let h = (l - 1) / 2;
    let n = z.len();
    let m_len = kernel.fft_length_m;

    // 2M-point transform so bin k lands at k·f_s/(2M), the same axis the
    // lag-domain kernels produce; only the analytic half 0 … M−1 is kept.
    let fft_len = 2 * m_len;
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(fft_len);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex64::default(); fft_len];
    let mut rho = Array2::zeros((n, m_len));
    for t in 0..n {
        buf.fill(Complex64::default());
        let lo = t.saturating_sub(h);
        let hi = (t + h).min(n - 1);
        for src in lo..=hi {
            buf[src + h - t] = z.values[src] * w[src + h - t];
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for k in 0..m_len {
            rho[[t, k]] = buf[k].norm_sqr();
        }
    }
    Ok(rho)
}

/// Write an 8-bit binary PGM: time left→right, frequency bottom→top (image
/// row 0 is the highest frequency column of ρ). Values are min-max scaled to
/// 0…255; a constant matrix renders as all-black.
pub fn render_greyscale(tfd: &TfdMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    tfd.validate()?;
    let n = tfd.n_time();
    let m = tfd.n_freq();
    let lo = tfd.rho.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tfd.rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;

    let mut bytes = Vec::with_capacity(n * m + 32);
    bytes.extend_from_slice(format!("P5\n{n} {m}\n255\n").as_bytes());
    for row in 0..m {
        let k = m - 1 - row;
        for t in 0..n {
            let pixel = if span > 0.0 {
                (255.0 * (tfd.rho[[t, k]] - lo) / span).round() as u8
            } else {
                0
            };
            bytes.push(pixel);
        }
    }

    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    Ok(())
}
