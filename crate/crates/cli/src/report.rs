//! Evaluation statistics and histogram reporting.

use std::f64::consts::PI;

use eegtf::{evaluate, fit, split, Error, FeatureMatrix, Result, SplitSpec};

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_stddev(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Total accuracy (fraction) for each of `n_seeds` consecutive seeds starting
/// at the base split's seed.
pub fn seed_accuracies(
    matrix: &FeatureMatrix,
    base: &SplitSpec,
    n_seeds: usize,
) -> Result<Vec<f64>> {
    (0..n_seeds)
        .map(|i| {
            let spec = SplitSpec {
                train_fraction: base.train_fraction,
                seed: base.seed + i as u64,
                stratified: base.stratified,
            };
            let (train, test) = split(matrix, &spec)?;
            let model = fit(&train)?;
            Ok(evaluate(&model, &test)?.total_accuracy)
        })
        .collect()
}

fn normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    (-d * d / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
}

/// Overlap coefficient of two fitted normal densities: the integral of their
/// pointwise minimum, by the trapezoid rule over both means extended by six
/// pooled standard deviations, refined until successive estimates agree to
/// 1e-4 relative.
pub fn overlap_coefficient(mean_a: f64, var_a: f64, mean_b: f64, var_b: f64) -> Result<f64> {
    for v in [var_a, var_b] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "overlap coefficient needs positive variances, got {v}"
            )));
        }
    }
    let pooled = ((var_a + var_b) / 2.0).sqrt();
    let lo = mean_a.min(mean_b) - 6.0 * pooled;
    let hi = mean_a.max(mean_b) + 6.0 * pooled;
    let f = |x: f64| normal_pdf(x, mean_a, var_a).min(normal_pdf(x, mean_b, var_b));

    let trapezoid = |n: usize| -> f64 {
        let h = (hi - lo) / n as f64;
        let interior: f64 = (1..n).map(|i| f(lo + i as f64 * h)).sum();
        h * (0.5 * (f(lo) + f(hi)) + interior)
    };
    let mut n = 64;
    let mut prev = trapezoid(n);
    loop {
        n *= 2;
        let cur = trapezoid(n);
        if (cur - prev).abs() <= 1e-4 * cur.abs() || n >= (1 << 20) {
            return Ok(cur);
        }
        prev = cur;
    }
}

#[derive(Debug, Clone)]
pub struct ClassHistogram {
    pub label: String,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub bin_counts: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct HistogramReport {
    pub feature: String,
    /// Bin edges of the pooled range; length n_bins + 1.
    pub edges: Vec<f64>,
    /// Exactly two classes, lexical label order.
    pub classes: Vec<ClassHistogram>,
    pub overlap: f64,
}

/// Per-class histogram of one feature over the pooled value range, plus
/// fitted normal parameters and the overlap coefficient of the two fits.
pub fn histogram_report(
    matrix: &FeatureMatrix,
    feature: &str,
    n_bins: usize,
) -> Result<HistogramReport> {
    let column = matrix.feature_column(feature)?;
    let labels: Vec<String> = matrix.rows.iter().map(|r| r.label.clone()).collect();
    let mut distinct: Vec<String> = labels.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "histogram needs exactly 2 classes, got {}",
            distinct.len()
        )));
    }
    let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!(
            "feature '{feature}' is constant; histogram range is empty"
        )));
    }
    let width = (hi - lo) / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins).map(|i| lo + i as f64 * width).collect();

    let mut classes = Vec::new();
    for label in &distinct {
        let values: Vec<f64> = column
            .iter()
            .zip(&labels)
            .filter(|(_, l)| *l == label)
            .map(|(v, _)| *v)
            .collect();
        if values.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "class '{label}' has fewer than 2 rows"
            )));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let mut bin_counts = vec![0usize; n_bins];
        for v in &values {
            let bin = (((v - lo) / width) as usize).min(n_bins - 1);
            bin_counts[bin] += 1;
        }
        classes.push(ClassHistogram {
            label: label.clone(),
            count: values.len(),
            mean,
            variance,
            bin_counts,
        });
    }

    let overlap = overlap_coefficient(
        classes[0].mean,
        classes[0].variance,
        classes[1].mean,
        classes[1].variance,
    )?;
    Ok(HistogramReport {
        feature: feature.to_string(),
        edges,
        classes,
        overlap,
    })
}

/// Comment preamble with the fitted parameters, then a CSV body of bin edges
/// and per-class counts.
pub fn render_histogram_csv(report: &HistogramReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# feature {}\n", report.feature));
    for class in &report.classes {
        out.push_str(&format!(
            "# class {}: count {} mean {} variance {}\n",
            class.label, class.count, class.mean, class.variance
        ));
    }
    out.push_str(&format!("# overlap_coefficient {}\n", report.overlap));
    out.push_str(&format!(
        "bin_low,bin_high,{},{}\n",
        report.classes[0].label, report.classes[1].label
    ));
    let n_bins = report.classes[0].bin_counts.len();
    for i in 0..n_bins {
        out.push_str(&format!(
            "{},{},{},{}\n",
            report.edges[i],
            report.edges[i + 1],
            report.classes[0].bin_counts[i],
            report.classes[1].bin_counts[i]
        ));
    }
    out
}
