//! Per-segment feature extraction, four families:
//!
//! * `TiF1…TiF10`: statistics of the analytic envelope |z[n]|: mean,
//!   variance, skewness, kurtosis, coefficient of variation, mean absolute
//!   deviation, median absolute deviation, RMS, interquartile range,
//!   Shannon entropy.
//! * `FrF1…FrF7`: spectral statistics of the one-sided DFT of z: low/high
//!   band energies, flux, centroid, roll-off, flatness, normalized entropy.
//! * `TiTF1…TiTF9`: the same statistics as TiF, taken over all N·M entries
//!   of a time-frequency matrix (no RMS; the interquartile range becomes the
//!   mean per-frequency-column IQR along time).
//! * `FrTF1…FrTF7`: spectral statistics of the time-frequency matrix:
//!   low/high band energies, flux along time, mean instantaneous-frequency
//!   moment, roll-off, flatness, Rényi entropy.
//!
//! Every degenerate path (zero envelope, zero spectrum, zero variance, zero
//! matrix) returns 0 for the affected feature rather than NaN, so outputs
//! are always finite.

use crate::error::{Error, Result};
use crate::signal::{analytic_signal, dft, AnalyticSignal, EegSegment};
use crate::tfd::{qtfd, KernelSpec, TfdMatrix};

pub const TIME_FEATURE_NAMES: [&str; 10] = [
    "TiF1", "TiF2", "TiF3", "TiF4", "TiF5", "TiF6", "TiF7", "TiF8", "TiF9", "TiF10",
];
pub const FREQ_FEATURE_NAMES: [&str; 7] =
    ["FrF1", "FrF2", "FrF3", "FrF4", "FrF5", "FrF6", "FrF7"];
pub const TF_TIME_FEATURE_NAMES: [&str; 9] = [
    "TiTF1", "TiTF2", "TiTF3", "TiTF4", "TiTF5", "TiTF6", "TiTF7", "TiTF8", "TiTF9",
];
pub const TF_FREQ_FEATURE_NAMES: [&str; 7] = [
    "FrTF1", "FrTF2", "FrTF3", "FrTF4", "FrTF5", "FrTF6", "FrTF7",
];

const TIME_FREQ_NAMES: [&str; 17] = [
    "TiF1", "TiF2", "TiF3", "TiF4", "TiF5", "TiF6", "TiF7", "TiF8", "TiF9", "TiF10", "FrF1",
    "FrF2", "FrF3", "FrF4", "FrF5", "FrF6", "FrF7",
];
const TF_NAMES: [&str; 16] = [
    "TiTF1", "TiTF2", "TiTF3", "TiTF4", "TiTF5", "TiTF6", "TiTF7", "TiTF8", "TiTF9", "FrTF1",
    "FrTF2", "FrTF3", "FrTF4", "FrTF5", "FrTF6", "FrTF7",
];

/// Which feature families a vector carries: signal-domain (time + frequency,
/// 17 values) or time-frequency-domain (16 values).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySet {
    TimeFreq,
    Tf,
}

impl FamilySet {
    pub fn feature_names(&self) -> &'static [&'static str] {
        match self {
            FamilySet::TimeFreq => &TIME_FREQ_NAMES,
            FamilySet::Tf => &TF_NAMES,
        }
    }

    pub fn len(&self) -> usize {
        self.feature_names().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySet::TimeFreq => "time_freq",
            FamilySet::Tf => "tf",
        }
    }
}

impl std::str::FromStr for FamilySet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "time_freq" => Ok(FamilySet::TimeFreq),
            "tf" => Ok(FamilySet::Tf),
            other => Err(Error::InvalidConfig(format!(
                "unknown family set '{other}' (expected time_freq or tf)"
            ))),
        }
    }
}

/// Tunable extraction parameters. The defaults reproduce the reference
/// configuration: band split at f_s/8, 85% roll-off, 512-sample flux frames
/// at 50% overlap, flux lag 512, Rényi order 3.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    /// Band-split divisor f_δ; the low band is bins 0 … ⌊M/f_δ⌋.
    pub band_split_divisor: f64,
    /// Roll-off quantile λ ∈ (0,1).
    pub rolloff_lambda: f64,
    /// Frame length for the signal-domain spectral flux (FrF3).
    pub flux_frame_length: usize,
    /// Fractional frame overlap in [0,1) for FrF3.
    pub flux_overlap: f64,
    /// Row lag L for the time-frequency flux (FrTF3).
    pub tf_flux_lag: usize,
    /// Rényi entropy order α ≥ 2 (odd orders stay well-defined on signed
    /// time-frequency matrices).
    pub renyi_alpha: u32,
    /// Compute TiF1…TiF10 on the raw real signal instead of the envelope.
    pub time_features_on_raw: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            band_split_divisor: 4.0,
            rolloff_lambda: 0.85,
            flux_frame_length: 512,
            flux_overlap: 0.5,
            tf_flux_lag: 512,
            renyi_alpha: 3,
            time_features_on_raw: false,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.band_split_divisor.is_finite() || self.band_split_divisor <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "band split divisor must be positive, got {}",
                self.band_split_divisor
            )));
        }
        if !self.rolloff_lambda.is_finite()
            || self.rolloff_lambda <= 0.0
            || self.rolloff_lambda >= 1.0
        {
            return Err(Error::InvalidConfig(format!(
                "rolloff lambda must lie in (0,1), got {}",
                self.rolloff_lambda
            )));
        }
        if self.flux_frame_length == 0 {
            return Err(Error::InvalidConfig(
                "flux frame length must be positive".into(),
            ));
        }
        if !self.flux_overlap.is_finite() || !(0.0..1.0).contains(&self.flux_overlap) {
            return Err(Error::InvalidConfig(format!(
                "flux overlap must lie in [0,1), got {}",
                self.flux_overlap
            )));
        }
        if self.tf_flux_lag == 0 {
            return Err(Error::InvalidConfig("tf flux lag must be positive".into()));
        }
        if self.renyi_alpha < 2 {
            return Err(Error::InvalidConfig(format!(
                "renyi alpha must be at least 2, got {}",
                self.renyi_alpha
            )));
        }
        Ok(())
    }
}

/// One segment's features: values in the fixed declaration order of the
/// family set, so `names()[i]` labels `values[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub family_set: FamilySet,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn names(&self) -> &'static [&'static str] {
        self.family_set.feature_names()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names()
            .iter()
            .position(|&n| n == name)
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        self.names().iter().copied().zip(self.values.iter().copied())
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.family_set.len() {
            return Err(Error::InvalidInput(format!(
                "feature vector has {} values, family set {} declares {}",
                self.values.len(),
                self.family_set.name(),
                self.family_set.len()
            )));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "feature {} is not finite",
                self.names()[i]
            )));
        }
        Ok(())
    }
}

/// One labeled row of a feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub values: Vec<f64>,
    pub label: String,
    pub source_id: String,
}

/// Labeled feature table. `feature_names` names the columns; it equals the
/// family set's full name list unless columns were selected out.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub family_set: FamilySet,
    pub feature_names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureMatrix {
    pub fn from_vectors(items: Vec<(FeatureVector, String, String)>) -> Result<Self> {
        let family_set = match items.first() {
            Some((v, _, _)) => v.family_set,
            None => {
                return Err(Error::InvalidInput(
                    "cannot build a feature matrix from zero vectors".into(),
                ))
            }
        };
        let mut rows = Vec::with_capacity(items.len());
        for (vector, label, source_id) in items {
            if vector.family_set != family_set {
                return Err(Error::InvalidInput(format!(
                    "row '{source_id}' has family set {}, matrix is {}",
                    vector.family_set.name(),
                    family_set.name()
                )));
            }
            vector.validate()?;
            rows.push(FeatureRow {
                values: vector.values,
                label,
                source_id,
            });
        }
        Ok(FeatureMatrix {
            family_set,
            feature_names: family_set
                .feature_names()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            rows,
        })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self) -> Result<()> {
        for row in &self.rows {
            if row.values.len() != self.feature_names.len() {
                return Err(Error::InvalidInput(format!(
                    "row '{}' has {} values, expected {}",
                    row.source_id,
                    row.values.len(),
                    self.feature_names.len()
                )));
            }
            if row.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "row '{}' has non-finite values",
                    row.source_id
                )));
            }
        }
        Ok(())
    }

    /// Distinct labels in first-appearance order with their row counts.
    pub fn class_counts(&self) -> Vec<(String, usize)> {
        let mut counts: Vec<(String, usize)> = Vec::new();
        for row in &self.rows {
            match counts.iter_mut().find(|(l, _)| *l == row.label) {
                Some((_, c)) => *c += 1,
                None => counts.push((row.label.clone(), 1)),
            }
        }
        counts
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("no feature named '{name}'")))
    }

    pub fn feature_column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.feature_index(name)?;
        Ok(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    /// Project onto a subset of columns, preserving row order and labels.
    pub fn select_features(&self, names: &[&str]) -> Result<FeatureMatrix> {
        let indices: Vec<usize> = names
            .iter()
            .map(|n| self.feature_index(n))
            .collect::<Result<_>>()?;
        Ok(FeatureMatrix {
            family_set: self.family_set,
            feature_names: names.iter().map(|s| s.to_string()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| FeatureRow {
                    values: indices.iter().map(|&i| r.values[i]).collect(),
                    label: r.label.clone(),
                    source_id: r.source_id.clone(),
                })
                .collect(),
        })
    }
}

/// TiF1…TiF10 on the analytic envelope |z[n]|.
pub fn time_features(z: &AnalyticSignal) -> Result<[f64; 10]> {
    z.validate()?;
    if z.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "time features need at least 4 samples, got {}",
            z.len()
        )));
    }
    Ok(envelope_stats(&z.envelope()))
}

/// The ten envelope statistics on an arbitrary real sequence. Entropy
/// weights use |v| so the formula stays meaningful in raw-signal mode.
fn envelope_stats(values: &[f64]) -> [f64; 10] {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std_dev = variance.sqrt();

    let (skewness, kurtosis) = if variance > 0.0 {
        let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>();
        let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>();
        (m3 / (n * std_dev.powi(3)), m4 / (n * variance.powi(2)))
    } else {
        (0.0, 0.0)
    };

    let coeff_var = if mean != 0.0 { std_dev / mean } else { 0.0 };
    let mean_abs_dev = values.iter().map(|v| (v - mean).abs()).sum::<f64>() / n;

    let med = median(values);
    let abs_devs: Vec<f64> = values.iter().map(|v| (v - med).abs()).collect();
    let median_abs_dev = median(&abs_devs);

    let rms = (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt();

    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = interpolated_iqr(&sorted);

    let entropy = shannon_entropy_bits(values.iter().map(|v| v.abs()));

    [
        mean,
        variance,
        skewness,
        kurtosis,
        coeff_var,
        mean_abs_dev,
        median_abs_dev,
        rms,
        iqr,
        entropy,
    ]
}

/// FrF1…FrF7 on the one-sided spectrum Z[k] = DFT_N(z)[k], k = 0 … ⌊N/2⌋−1
/// (bin k sits at k·f_s/N, the same axis convention as the TFD columns).
pub fn freq_features(z: &AnalyticSignal, cfg: &FeatureConfig) -> Result<[f64; 7]> {
    z.validate()?;
    cfg.validate()?;
    let n = z.len();
    let m = n / 2;
    let spectrum = dft(&z.values, n)?;
    let mags: Vec<f64> = spectrum[..m].iter().map(|c| c.norm()).collect();
    let powers: Vec<f64> = spectrum[..m].iter().map(|c| c.norm_sqr()).collect();

    let delta = (m as f64 / cfg.band_split_divisor).floor() as usize;
    let low_energy: f64 = powers.iter().take(delta + 1).sum();
    let high_energy: f64 = powers.iter().skip(delta + 1).sum();

    let flux = spectral_flux(z, cfg)?;

    let mag_total: f64 = mags.iter().sum();
    let power_total: f64 = powers.iter().sum();

    let centroid = if mag_total > 0.0 {
        mags.iter()
            .enumerate()
            .map(|(k, &v)| (k + 1) as f64 * v)
            .sum::<f64>()
            / mag_total
    } else {
        0.0
    };

    let rolloff = rolloff_fraction(&powers, power_total, cfg.rolloff_lambda);
    let flatness = flatness_ratio(&mags);

    let entropy = if power_total > 0.0 && m > 1 {
        let mut acc = 0.0;
        for &p in &powers {
            let prob = p / power_total;
            if prob > 0.0 {
                acc -= prob * prob.ln();
            }
        }
        acc / (m as f64).ln()
    } else {
        0.0
    };

    Ok([
        low_energy,
        high_energy,
        flux,
        centroid,
        rolloff,
        flatness,
        entropy,
    ])
}

/// Mean squared difference of unit-sum-normalized frame magnitude spectra
/// over consecutive frames. Frames shorter than the configured length, or
/// pairs with an all-zero member, contribute nothing; fewer than two usable
/// frames yields 0.
fn spectral_flux(z: &AnalyticSignal, cfg: &FeatureConfig) -> Result<f64> {
    let frame_len = cfg.flux_frame_length;
    let hop = ((frame_len as f64 * (1.0 - cfg.flux_overlap)).round() as usize).max(1);
    if z.len() < frame_len {
        return Ok(0.0);
    }

    let mut normalized_frames: Vec<Option<Vec<f64>>> = Vec::new();
    let mut start = 0;
    while start + frame_len <= z.len() {
        let spectrum = dft(&z.values[start..start + frame_len], frame_len)?;
        let mags: Vec<f64> = spectrum.iter().map(|c| c.norm()).collect();
        let total: f64 = mags.iter().sum();
        normalized_frames.push(if total > 0.0 {
            Some(mags.iter().map(|v| v / total).collect())
        } else {
            None
        });
        start += hop;
    }

    let mut acc = 0.0;
    let mut pairs = 0usize;
    for pair in normalized_frames.windows(2) {
        if let (Some(prev), Some(curr)) = (&pair[0], &pair[1]) {
            acc += prev
                .iter()
                .zip(curr)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>();
            pairs += 1;
        }
    }
    Ok(if pairs > 0 { acc / pairs as f64 } else { 0.0 })
}

/// TiTF1…TiTF9 over all N·M matrix entries.
pub fn tf_time_features(rho: &TfdMatrix) -> Result<[f64; 9]> {
    rho.validate()?;
    let total = (rho.n_time() * rho.n_freq()) as f64;
    let values = rho.rho.as_slice().expect("row-major tfd matrix");

    let mean = values.iter().sum::<f64>() / total;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / total;

    // Third and fourth moments keep the 1/(NM−1) scaling of the reference
    // formulas, intentionally unlike the 1/N scaling of TiF3/TiF4.
    let (skewness, kurtosis) = if variance > 0.0 && total > 1.0 {
        let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>();
        let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>();
        let denom = total - 1.0;
        (
            m3 / (denom * variance.powf(1.5)),
            m4 / (denom * variance.powi(2)),
        )
    } else {
        (0.0, 0.0)
    };

    let coeff_var = if mean != 0.0 {
        variance.sqrt() / mean
    } else {
        0.0
    };
    let mean_abs_dev = values.iter().map(|v| (v - mean).abs()).sum::<f64>() / total;

    let med = median(values);
    let abs_devs: Vec<f64> = values.iter().map(|v| (v - med).abs()).collect();
    let median_abs_dev = median(&abs_devs);

    let mut col_buf = vec![0.0; rho.n_time()];
    let mut iqr_sum = 0.0;
    for k in 0..rho.n_freq() {
        for (t, slot) in col_buf.iter_mut().enumerate() {
            *slot = rho.rho[[t, k]];
        }
        col_buf.sort_unstable_by(f64::total_cmp);
        iqr_sum += interpolated_iqr(&col_buf);
    }
    let mean_column_iqr = iqr_sum / rho.n_freq() as f64;

    let entropy = shannon_entropy_bits(values.iter().map(|v| v.abs()));

    Ok([
        mean,
        variance,
        skewness,
        kurtosis,
        coeff_var,
        mean_abs_dev,
        median_abs_dev,
        mean_column_iqr,
        entropy,
    ])
}

/// FrTF1…FrTF7 over the time-frequency matrix.
pub fn tf_freq_features(rho: &TfdMatrix, cfg: &FeatureConfig) -> Result<[f64; 7]> {
    rho.validate()?;
    cfg.validate()?;
    let n = rho.n_time();
    let m = rho.n_freq();
    let values = rho.rho.as_slice().expect("row-major tfd matrix");

    let delta = (m as f64 / cfg.band_split_divisor).floor() as usize;
    let mut low_energy = 0.0;
    let mut high_energy = 0.0;
    for t in 0..n {
        for k in 0..m {
            if k <= delta {
                low_energy += rho.rho[[t, k]];
            } else {
                high_energy += rho.rho[[t, k]];
            }
        }
    }

    // Flux along time at row lag L; an empty pair range (L ≥ N) gives 0.
    let lag = cfg.tf_flux_lag;
    let mut flux = 0.0;
    if lag < n {
        for t in 0..(n - lag) {
            for k in 0..m {
                flux += (rho.rho[[t, k]] - rho.rho[[t + lag, k]]).powi(2);
            }
        }
    }

    let grand_total: f64 = values.iter().sum();

    // Mean per-row first moment over 1-indexed column ranks; rows whose own
    // total is not positive are skipped, and a non-positive grand total
    // degenerates the whole feature to 0.
    let mean_if = if grand_total > 0.0 {
        let mut acc = 0.0;
        let mut used = 0usize;
        for t in 0..n {
            let row_total: f64 = (0..m).map(|k| rho.rho[[t, k]]).sum();
            if row_total > 0.0 {
                let moment: f64 = (0..m)
                    .map(|k| (k + 1) as f64 * rho.rho[[t, k]])
                    .sum::<f64>();
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

    let col_abs_energy: Vec<f64> = (0..m)
        .map(|k| (0..n).map(|t| rho.rho[[t, k]].abs()).sum())
        .collect();
    let abs_total: f64 = col_abs_energy.iter().sum();
    let rolloff = rolloff_fraction(&col_abs_energy, abs_total, cfg.rolloff_lambda);

    let abs_values: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let flatness = flatness_ratio(&abs_values);

    // Rényi entropy on the signed normalized matrix; a non-positive power
    // sum has no defined logarithm, so it degenerates to 0 like the other
    // zero-spectrum paths.
    let renyi = if grand_total > 0.0 {
        let alpha = cfg.renyi_alpha as i32;
        let power_sum: f64 = values.iter().map(|v| (v / grand_total).powi(alpha)).sum();
        if power_sum > 0.0 {
            power_sum.log2() / (1.0 - alpha as f64)
        } else {
            0.0
        }
    } else {
        0.0
    };

    Ok([
        low_energy,
        high_energy,
        flux,
        mean_if,
        rolloff,
        flatness,
        renyi,
    ])
}

/// Full pipeline for one segment: analytic signal, then the family set's
/// features (the kernel only participates for the `Tf` set).
pub fn extract_all(
    segment: &EegSegment,
    kernel: &KernelSpec,
    cfg: &FeatureConfig,
    family_set: FamilySet,
) -> Result<FeatureVector> {
    cfg.validate()?;
    let z = analytic_signal(segment)?;
    let values = match family_set {
        FamilySet::TimeFreq => {
            let time = if cfg.time_features_on_raw {
                if z.len() < 4 {
                    return Err(Error::InvalidInput(format!(
                        "time features need at least 4 samples, got {}",
                        z.len()
                    )));
                }
                envelope_stats(&segment.samples)
            } else {
                time_features(&z)?
            };
            let freq = freq_features(&z, cfg)?;
            time.into_iter().chain(freq).collect()
        }
        FamilySet::Tf => {
            let rho = qtfd(&z, kernel)?;
            let tf_time = tf_time_features(&rho)?;
            let tf_freq = tf_freq_features(&rho, cfg)?;
            tf_time.into_iter().chain(tf_freq).collect()
        }
    };
    let vector = FeatureVector { family_set, values };
    vector.validate()?;
    Ok(vector)
}

/// Median with the even-count mean-of-central-pair convention.
fn median(values: &[f64]) -> f64 {
    let n = values.len();
    let mut buf = values.to_vec();
    let mid = n / 2;
    let (_, upper_mid, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper_mid = *upper_mid;
    if n % 2 == 1 {
        upper_mid
    } else {
        let lower_mid = buf[..mid]
            .iter()
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        (lower_mid + upper_mid) / 2.0
    }
}

/// Interquartile range of presorted data, linearly interpolating at the
/// 1-indexed fractional ranks (n+1)/4 and 3(n+1)/4 (ranks clamp to the ends
/// for very short inputs).
fn interpolated_iqr(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let at_rank = |rank: f64| -> f64 {
        let rank = rank.clamp(1.0, n);
        let idx = rank.floor() as usize - 1;
        let frac = rank - rank.floor();
        if frac > 0.0 && idx + 1 < sorted.len() {
            sorted[idx] + frac * (sorted[idx + 1] - sorted[idx])
        } else {
            sorted[idx]
        }
    };
    at_rank(3.0 * (n + 1.0) / 4.0) - at_rank((n + 1.0) / 4.0)
}

/// −Σ p·log₂ p with p = w/Σw over nonnegative weights; all-zero weights
/// give 0.
fn shannon_entropy_bits(weights: impl Iterator<Item = f64> + Clone) -> f64 {
    let total: f64 = weights.clone().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for w in weights {
        let p = w / total;
        if p > 0.0 {
            acc -= p * p.log2();
        }
    }
    acc
}

/// Smallest 1-indexed prefix count r with cumulative weight ≥ λ·total,
/// reported as r/len; zero total gives 0.
fn rolloff_fraction(weights: &[f64], total: f64, lambda: f64) -> f64 {
    if total <= 0.0 || weights.is_empty() {
        return 0.0;
    }
    let target = lambda * total;
    let mut cum = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cum += w;
        if cum >= target {
            return (i + 1) as f64 / weights.len() as f64;
        }
    }
    1.0
}

/// Geometric over arithmetic mean of nonnegative values; any exact zero (or
/// an empty slice) gives 0.
fn flatness_ratio(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|&v| v == 0.0) {
        return 0.0;
    }
    let n = values.len() as f64;
    let log_mean = values.iter().map(|v| v.ln()).sum::<f64>() / n;
    let arith_mean = values.iter().sum::<f64>() / n;
    log_mean.exp() / arith_mean
}
