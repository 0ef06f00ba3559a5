//! Independent reference implementations used only by the acceptance suite.
//! Everything here is written as literal loops over the defining formulas:
//! no FFTs, no shared helpers with the library under test.

use num_complex::Complex64;
use std::f64::consts::PI;

pub fn unit(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

/// O(N^2) discrete Fourier transform.
pub fn naive_dft(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                acc += v * unit(-2.0 * PI * (k * j) as f64 / n as f64);
            }
            acc
        })
        .collect()
}

/// Instantaneous autocorrelation entry K[t, m] = z[t+m] conj(z[t-m]), zero
/// when either index leaves the signal.
fn k_at(z: &[Complex64], t: usize, m: usize) -> Complex64 {
    if t >= m && t + m < z.len() {
        z[t + m] * z[t - m].conj()
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Final lag-to-frequency stage shared by the lag-domain kernels: an M-point
/// transform of the smoothed lag row with negative lags mirrored by
/// conjugation onto index M-m, keeping twice the real part.
fn naive_lag_dft(smoothed: &[Vec<Complex64>], h: usize, m_len: usize) -> Vec<Vec<f64>> {
    let n = smoothed.len();
    let mut rho = vec![vec![0.0; m_len]; n];
    for t in 0..n {
        for k in 0..m_len {
            let mut acc = smoothed[t][0];
            for m in 1..=h {
                let v = smoothed[t][m];
                acc += v * unit(-2.0 * PI * (k * m) as f64 / m_len as f64);
                acc += v.conj() * unit(-2.0 * PI * (k * (m_len - m)) as f64 / m_len as f64);
            }
            rho[t][k] = 2.0 * acc.re;
        }
    }
    rho
}

/// Smoothed Wigner-Ville: lag window applied to the autocorrelation, then
/// the lag transform.
pub fn naive_swvd(z: &[Complex64], window: &[f64], m_len: usize) -> Vec<Vec<f64>> {
    let n = z.len();
    let h = (window.len() - 1) / 2;
    let mut smoothed = vec![vec![Complex64::new(0.0, 0.0); h + 1]; n];
    for (t, row) in smoothed.iter_mut().enumerate() {
        for (m, slot) in row.iter_mut().enumerate() {
            *slot = k_at(z, t, m) * window[h + m];
        }
    }
    naive_lag_dft(&smoothed, h, m_len)
}

/// Choi-Williams: per-lag Gaussian smoothing of the autocorrelation along
/// time, truncated where the kernel falls below 1e-6 of its peak, then the
/// lag transform. Lag zero passes through unsmoothed.
pub fn naive_cwd(z: &[Complex64], alpha: f64, lag_window_length: usize, m_len: usize) -> Vec<Vec<f64>> {
    let n = z.len();
    let h = (lag_window_length - 1) / 2;
    let mut smoothed = vec![vec![Complex64::new(0.0, 0.0); h + 1]; n];
    for (t, row) in smoothed.iter_mut().enumerate() {
        row[0] = k_at(z, t, 0);
    }
    for m in 1..=h {
        let reach = (2.0 * m as f64 * ((1.0 / 1e-6_f64).ln() / alpha).sqrt()).floor() as isize;
        let norm = (alpha / (4.0 * PI * (m * m) as f64)).sqrt();
        for t in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for d in -reach..=reach {
                let src = t as isize - d;
                if src < 0 || src >= n as isize {
                    continue;
                }
                let df = d as f64;
                let weight = norm * (-alpha * df * df / (4.0 * (m * m) as f64)).exp();
                acc += k_at(z, src as usize, m) * weight;
            }
            smoothed[t][m] = acc;
        }
    }
    naive_lag_dft(&smoothed, h, m_len)
}

/// Spectrogram: squared magnitude of the windowed short-time transform on a
/// 2M-point grid, keeping the analytic half 0..M-1.
pub fn naive_spec(z: &[Complex64], window: &[f64], m_len: usize) -> Vec<Vec<f64>> {
    let n = z.len();
    let h = (window.len() - 1) / 2;
    let fft_len = 2 * m_len;
    let mut rho = vec![vec![0.0; m_len]; n];
    for t in 0..n {
        let lo = t.saturating_sub(h);
        let hi = (t + h).min(n - 1);
        for (k, slot) in rho[t].iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for src in lo..=hi {
                let j = src + h - t;
                acc += z[src] * window[j] * unit(-2.0 * PI * (k * j) as f64 / fft_len as f64);
            }
            *slot = acc.norm_sqr();
        }
    }
    rho
}

fn oracle_median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Quartile spread with ranks (n+1)/4 and 3(n+1)/4, linearly interpolated
/// and clamped to the data range.
fn oracle_iqr(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let grab = |rank: f64| -> f64 {
        let rank = rank.max(1.0).min(n);
        let lower = rank.floor() as usize - 1;
        let frac = rank - rank.floor();
        if frac > 0.0 && lower + 1 < sorted.len() {
            sorted[lower] * (1.0 - frac) + sorted[lower + 1] * frac
        } else {
            sorted[lower]
        }
    };
    grab(3.0 * (n + 1.0) / 4.0) - grab((n + 1.0) / 4.0)
}

fn oracle_entropy_bits(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().map(|w| w.abs()).sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for w in weights {
        let p = w.abs() / total;
        if p > 0.0 {
            acc -= p * p.ln() / 2.0_f64.ln();
        }
    }
    acc
}

/// The ten envelope statistics.
pub fn oracle_envelope_stats(e: &[f64]) -> [f64; 10] {
    let n = e.len() as f64;
    let mean = e.iter().sum::<f64>() / n;
    let variance = e.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = variance.sqrt();
    let mut skew = 0.0;
    let mut kurt = 0.0;
    if variance > 0.0 {
        let m3: f64 = e.iter().map(|v| (v - mean).powi(3)).sum();
        let m4: f64 = e.iter().map(|v| (v - mean).powi(4)).sum();
        skew = m3 / (n * sd * sd * sd);
        kurt = m4 / (n * variance * variance);
    }
    let coeff_var = if mean != 0.0 { sd / mean } else { 0.0 };
    let mad = e.iter().map(|v| (v - mean).abs()).sum::<f64>() / n;
    let med = oracle_median(e);
    let dev: Vec<f64> = e.iter().map(|v| (v - med).abs()).collect();
    let median_abs_dev = oracle_median(&dev);
    let rms = (e.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let iqr = oracle_iqr(e);
    let entropy = oracle_entropy_bits(e);
    [
        mean, variance, skew, kurt, coeff_var, mad, median_abs_dev, rms, iqr, entropy,
    ]
}

pub struct FreqParams {
    pub band_split_divisor: f64,
    pub rolloff_lambda: f64,
    pub flux_frame_length: usize,
    pub flux_overlap: f64,
}

/// The seven spectral features on the one-sided N/2-bin spectrum of z.
pub fn oracle_freq_features(z: &[Complex64], p: &FreqParams) -> [f64; 7] {
    let n = z.len();
    let m = n / 2;
    let spectrum = naive_dft(z);
    let mags: Vec<f64> = spectrum[..m].iter().map(|c| c.norm()).collect();
    let powers: Vec<f64> = mags.iter().map(|v| v * v).collect();

    let delta = (m as f64 / p.band_split_divisor).floor() as usize;
    let mut low = 0.0;
    let mut high = 0.0;
    for (k, &pw) in powers.iter().enumerate() {
        if k <= delta {
            low += pw;
        } else {
            high += pw;
        }
    }

    // Flux: unit-sum normalized full-frame magnitude spectra at the hop
    // implied by the overlap; zero-total frames are unusable.
    let frame = p.flux_frame_length;
    let hop = ((frame as f64 * (1.0 - p.flux_overlap)).round() as usize).max(1);
    let mut frames: Vec<Option<Vec<f64>>> = Vec::new();
    if n >= frame {
        let mut start = 0;
        while start + frame <= n {
            let spec = naive_dft(&z[start..start + frame]);
            let fm: Vec<f64> = spec.iter().map(|c| c.norm()).collect();
            let total: f64 = fm.iter().sum();
            frames.push(if total > 0.0 {
                Some(fm.iter().map(|v| v / total).collect())
            } else {
                None
            });
            start += hop;
        }
    }
    let mut flux = 0.0;
    let mut pairs = 0;
    for w in frames.windows(2) {
        if let (Some(a), Some(b)) = (&w[0], &w[1]) {
            flux += a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
            pairs += 1;
        }
    }
    if pairs > 0 {
        flux /= pairs as f64;
    }

    let mag_total: f64 = mags.iter().sum();
    let centroid = if mag_total > 0.0 {
        mags.iter()
            .enumerate()
            .map(|(k, &v)| (k + 1) as f64 * v)
            .sum::<f64>()
            / mag_total
    } else {
        0.0
    };

    let rolloff = oracle_rolloff(&powers, p.rolloff_lambda);
    let flatness = oracle_flatness(&mags);

    let power_total: f64 = powers.iter().sum();
    let entropy = if power_total > 0.0 && m > 1 {
        let mut acc = 0.0;
        for &pw in &powers {
            let prob = pw / power_total;
            if prob > 0.0 {
                acc -= prob * prob.ln();
            }
        }
        acc / (m as f64).ln()
    } else {
        0.0
    };

    [low, high, flux, centroid, rolloff, flatness, entropy]
}

fn oracle_rolloff(weights: &[f64], lambda: f64) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 || weights.is_empty() {
        return 0.0;
    }
    let mut cum = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cum += w;
        if cum >= lambda * total {
            return (i + 1) as f64 / weights.len() as f64;
        }
    }
    1.0
}

fn oracle_flatness(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|&v| v == 0.0) {
        return 0.0;
    }
    let n = values.len() as f64;
    let geometric = values
        .iter()
        .fold(1.0_f64, |acc, &v| acc * v)
        .powf(1.0 / n);
    let arithmetic = values.iter().sum::<f64>() / n;
    geometric / arithmetic
}

/// The nine matrix statistics; rho[t][k] indexed time-major.
pub fn oracle_tf_time(rho: &[Vec<f64>]) -> [f64; 9] {
    let n_time = rho.len();
    let n_freq = rho[0].len();
    let flat: Vec<f64> = rho.iter().flatten().copied().collect();
    let total = flat.len() as f64;

    let mean = flat.iter().sum::<f64>() / total;
    let variance = flat.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / total;
    let mut skew = 0.0;
    let mut kurt = 0.0;
    if variance > 0.0 && total > 1.0 {
        let m3: f64 = flat.iter().map(|v| (v - mean).powi(3)).sum();
        let m4: f64 = flat.iter().map(|v| (v - mean).powi(4)).sum();
        skew = m3 / ((total - 1.0) * variance.powf(1.5));
        kurt = m4 / ((total - 1.0) * variance * variance);
    }
    let coeff_var = if mean != 0.0 {
        variance.sqrt() / mean
    } else {
        0.0
    };
    let mad = flat.iter().map(|v| (v - mean).abs()).sum::<f64>() / total;
    let med = oracle_median(&flat);
    let dev: Vec<f64> = flat.iter().map(|v| (v - med).abs()).collect();
    let median_abs_dev = oracle_median(&dev);

    let mut iqr_sum = 0.0;
    for k in 0..n_freq {
        let column: Vec<f64> = (0..n_time).map(|t| rho[t][k]).collect();
        iqr_sum += oracle_iqr(&column);
    }
    let mean_column_iqr = iqr_sum / n_freq as f64;

    let entropy = oracle_entropy_bits(&flat);

    [
        mean,
        variance,
        skew,
        kurt,
        coeff_var,
        mad,
        median_abs_dev,
        mean_column_iqr,
        entropy,
    ]
}

pub struct TfFreqParams {
    pub band_split_divisor: f64,
    pub rolloff_lambda: f64,
    pub tf_flux_lag: usize,
    pub renyi_alpha: i32,
}

/// The seven matrix spectral features.
pub fn oracle_tf_freq(rho: &[Vec<f64>], p: &TfFreqParams) -> [f64; 7] {
    let n = rho.len();
    let m = rho[0].len();
    let delta = (m as f64 / p.band_split_divisor).floor() as usize;

    let mut low = 0.0;
    let mut high = 0.0;
    for row in rho {
        for (k, &v) in row.iter().enumerate() {
            if k <= delta {
                low += v;
            } else {
                high += v;
            }
        }
    }

    let mut flux = 0.0;
    if p.tf_flux_lag < n {
        for t in 0..n - p.tf_flux_lag {
            for k in 0..m {
                let d = rho[t][k] - rho[t + p.tf_flux_lag][k];
                flux += d * d;
            }
        }
    }

    let grand: f64 = rho.iter().flatten().sum();
    let mean_if = if grand > 0.0 {
        let mut acc = 0.0;
        let mut used = 0;
        for row in rho {
            let row_total: f64 = row.iter().sum();
            if row_total > 0.0 {
                let moment: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| (k + 1) as f64 * v)
                    .sum();
                acc += moment / row_total;
                used += 1;
            }
        }
        if used > 0 {
            acc / used as f64
        } else {
            0.0
        }
    } else {
        0.0
    };

    let col_abs: Vec<f64> = (0..m)
        .map(|k| (0..n).map(|t| rho[t][k].abs()).sum())
        .collect();
    let rolloff = oracle_rolloff(&col_abs, p.rolloff_lambda);

    let abs_flat: Vec<f64> = rho.iter().flatten().map(|v| v.abs()).collect();
    let flatness = oracle_flatness(&abs_flat);

    let renyi = if grand > 0.0 {
        let mut power_sum = 0.0;
        for row in rho {
            for &v in row {
                power_sum += (v / grand).powi(p.renyi_alpha);
            }
        }
        if power_sum > 0.0 {
            power_sum.log2() / (1.0 - p.renyi_alpha as f64)
        } else {
            0.0
        }
    } else {
        0.0
    };

    [low, high, flux, mean_if, rolloff, flatness, renyi]
}

/// Box-Muller normal samples for the overlap fixture.
pub fn gaussian_samples(
    rng: &mut impl rand::Rng,
    mean: f64,
    sd: f64,
    count: usize,
) -> Vec<f64> {
    (0..count)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            mean + sd * (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
        })
        .collect()
}
