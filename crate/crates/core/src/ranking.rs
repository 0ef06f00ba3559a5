//! Information-gain feature ranking over equal-width discretized columns.
//!
//! IG(feature) = H(labels) − Σ_b (n_b/n)·H(labels | bin b), in bits. Ranking
//! runs on the full labeled matrix and sorts descending, breaking ties by
//! feature name.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

/// Features ordered by descending information gain.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    /// (feature name, IG in bits), descending; ties sorted by name.
    pub entries: Vec<(String, f64)>,
}

impl RankingResult {
    /// Names of the first k entries (all of them if k exceeds the count).
    pub fn top_k(&self, k: usize) -> Vec<&str> {
        self.entries
            .iter()
            .take(k)
            .map(|(name, _)| name.as_str())
            .collect()
    }

    /// Position of a feature, 1-based.
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| i + 1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,feature,ig_bits\n");
        for (i, (name, ig)) in self.entries.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, name, ig));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for pair in self.entries.windows(2) {
            let ordered = pair[0].1 > pair[1].1
                || (pair[0].1 == pair[1].1 && pair[0].0 < pair[1].0);
            if !ordered {
                return Err(Error::InvalidInput(format!(
                    "ranking entries '{}' and '{}' out of order",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if self.entries.iter().any(|(_, ig)| !ig.is_finite() || *ig < 0.0) {
            return Err(Error::InvalidInput(
                "ranking has a negative or non-finite ig value".into(),
            ));
        }
        Ok(())
    }
}

/// Equal-width binning over the column's own [min, max] range;
/// bin = min(⌊(v − min)/width⌋, n_bins − 1), and a constant column maps
/// entirely to bin 0.
pub fn discretize(column: &[f64], n_bins: usize) -> Result<Vec<usize>> {
    if n_bins < 2 {
        return Err(Error::InvalidInput(format!(
            "discretization needs at least 2 bins, got {n_bins}"
        )));
    }
    if column.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "cannot discretize non-finite values".into(),
        ));
    }
    let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Ok(vec![0; column.len()]);
    }
    let width = (hi - lo) / n_bins as f64;
    Ok(column
        .iter()
        .map(|&v| (((v - lo) / width).floor() as usize).min(n_bins - 1))
        .collect())
}

/// Shannon entropy of a label multiset, in bits.
fn label_entropy_bits(counts: &BTreeMap<&str, usize>, total: usize) -> f64 {
    let total = total as f64;
    let mut h = 0.0;
    for &count in counts.values() {
        if count > 0 {
            let p = count as f64 / total;
            h -= p * p.log2();
        }
    }
    h
}

/// Information gain of a discretized column about the labels, in bits.
pub fn info_gain(bins: &[usize], labels: &[&str]) -> Result<f64> {
    if bins.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} bins vs {} labels",
            bins.len(),
            labels.len()
        )));
    }
    if bins.is_empty() {
        return Err(Error::InvalidInput(
            "information gain needs at least one row".into(),
        ));
    }
    let n = bins.len();

    let mut label_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for &label in labels {
        *label_counts.entry(label).or_insert(0) += 1;
    }
    let h_labels = label_entropy_bits(&label_counts, n);

    let max_bin = *bins.iter().max().expect("nonempty");
    let mut per_bin: Vec<BTreeMap<&str, usize>> = vec![BTreeMap::new(); max_bin + 1];
    let mut bin_totals = vec![0usize; max_bin + 1];
    for (&bin, &label) in bins.iter().zip(labels) {
        *per_bin[bin].entry(label).or_insert(0) += 1;
        bin_totals[bin] += 1;
    }

    let mut conditional = 0.0;
    for (counts, &total) in per_bin.iter().zip(&bin_totals) {
        if total > 0 {
            conditional +=
                (total as f64 / n as f64) * label_entropy_bits(counts, total);
        }
    }
    Ok(h_labels - conditional)
}

/// Rank every feature of the matrix by information gain on the full data.
pub fn rank_features(matrix: &FeatureMatrix, n_bins: usize) -> Result<RankingResult> {
    matrix.validate()?;
    if matrix.class_counts().len() < 2 {
        return Err(Error::InvalidInput(
            "ranking needs at least 2 classes".into(),
        ));
    }
    let labels: Vec<&str> = matrix.rows.iter().map(|r| r.label.as_str()).collect();
    let mut entries: Vec<(String, f64)> = Vec::with_capacity(matrix.n_features());
    for (j, name) in matrix.feature_names.iter().enumerate() {
        let column: Vec<f64> = matrix.rows.iter().map(|r| r.values[j]).collect();
        let bins = discretize(&column, n_bins)?;
        entries.push((name.clone(), info_gain(&bins, &labels)?));
    }
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let result = RankingResult { entries };
    result.validate()?;
    Ok(result)
}
