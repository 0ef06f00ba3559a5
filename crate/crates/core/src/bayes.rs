//! Gaussian Naive Bayes with stratified train/test splitting.
//!
//! Scoring runs entirely in the log domain; posteriors come from a
//! max-shifted softmax over the class scores, so feature magnitudes up to
//! 1e12 stay finite. Class order inside a model is always lexical, which
//! doubles as the documented tie-break rule.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, FeatureRow};

/// Per-class Gaussian parameters, one (mean, variance) pair per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub tag: String,
    pub prior: f64,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
}

/// Trained model. `classes` is sorted by tag; every variance is at least
/// `variance_floor`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnbModel {
    pub feature_names: Vec<String>,
    pub classes: Vec<ClassStats>,
    pub variance_floor: f64,
}

impl GnbModel {
    pub fn validate(&self) -> Result<()> {
        if self.classes.len() < 2 {
            return Err(Error::Training(format!(
                "model needs at least 2 classes, has {}",
                self.classes.len()
            )));
        }
        if !self.classes.windows(2).all(|w| w[0].tag < w[1].tag) {
            return Err(Error::Training(
                "model classes must be strictly sorted by tag".into(),
            ));
        }
        let prior_sum: f64 = self.classes.iter().map(|c| c.prior).sum();
        if (prior_sum - 1.0).abs() > 1e-12 {
            return Err(Error::Training(format!(
                "class priors sum to {prior_sum}, expected 1"
            )));
        }
        for class in &self.classes {
            if !(class.prior > 0.0 && class.prior < 1.0) {
                return Err(Error::Training(format!(
                    "class '{}' has prior {} outside (0,1)",
                    class.tag, class.prior
                )));
            }
            if class.means.len() != self.feature_names.len()
                || class.variances.len() != self.feature_names.len()
            {
                return Err(Error::Training(format!(
                    "class '{}' has {} stats, expected {}",
                    class.tag,
                    class.means.len(),
                    self.feature_names.len()
                )));
            }
            if class
                .variances
                .iter()
                .any(|&v| !v.is_finite() || v < self.variance_floor || v <= 0.0)
            {
                return Err(Error::Training(format!(
                    "class '{}' has a variance below the floor {}",
                    class.tag, self.variance_floor
                )));
            }
            if class.means.iter().any(|m| !m.is_finite()) {
                return Err(Error::Training(format!(
                    "class '{}' has a non-finite mean",
                    class.tag
                )));
            }
        }
        Ok(())
    }

    /// Write the model as plain text, one `stat` line per (class, feature).
    /// Values use shortest round-trip decimal formatting, so load returns
    /// bit-identical parameters.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.validate()?;
        for name in &self.feature_names {
            if name.split_whitespace().count() != 1 {
                return Err(Error::InvalidInput(format!(
                    "feature name '{name}' cannot be persisted (contains whitespace)"
                )));
            }
        }
        for class in &self.classes {
            if class.tag.split_whitespace().count() != 1 {
                return Err(Error::InvalidInput(format!(
                    "class tag '{}' cannot be persisted (contains whitespace)",
                    class.tag
                )));
            }
        }
        let mut out = String::new();
        out.push_str("# gaussian naive bayes model\n");
        out.push_str(&format!("floor {}\n", self.variance_floor));
        for name in &self.feature_names {
            out.push_str(&format!("feature {name}\n"));
        }
        for class in &self.classes {
            out.push_str(&format!("class {} {}\n", class.tag, class.prior));
        }
        for class in &self.classes {
            for (j, name) in self.feature_names.iter().enumerate() {
                out.push_str(&format!(
                    "stat {} {} {} {}\n",
                    class.tag, name, class.means[j], class.variances[j]
                ));
            }
        }
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GnbModel> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut feature_names: Vec<String> = Vec::new();
        let mut classes: Vec<ClassStats> = Vec::new();
        let mut variance_floor = 0.0f64;

        let parse_num = |token: &str, line_no: usize| -> Result<f64> {
            token.parse::<f64>().map_err(|_| {
                Error::file_format(path, line_no, format!("bad number '{token}'"))
            })
        };

        for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["floor", v] => variance_floor = parse_num(v, line_no)?,
                ["feature", name] => feature_names.push(name.to_string()),
                ["class", tag, prior] => classes.push(ClassStats {
                    tag: tag.to_string(),
                    prior: parse_num(prior, line_no)?,
                    means: Vec::new(),
                    variances: Vec::new(),
                }),
                ["stat", tag, name, mean, var] => {
                    let class = classes
                        .iter_mut()
                        .find(|c| c.tag == *tag)
                        .ok_or_else(|| {
                            Error::file_format(path, line_no, format!("unknown class '{tag}'"))
                        })?;
                    let expected = feature_names.get(class.means.len());
                    if expected.map(String::as_str) != Some(*name) {
                        return Err(Error::file_format(
                            path,
                            line_no,
                            format!("stat for '{name}' out of declared feature order"),
                        ));
                    }
                    class.means.push(parse_num(mean, line_no)?);
                    class.variances.push(parse_num(var, line_no)?);
                }
                _ => {
                    return Err(Error::file_format(
                        path,
                        line_no,
                        format!("unrecognized line '{line}'"),
                    ))
                }
            }
        }

        let model = GnbModel {
            feature_names,
            classes,
            variance_floor,
        };
        model.validate().map_err(|e| {
            Error::file_format(path, 0, format!("inconsistent model: {e}"))
        })?;
        Ok(model)
    }
}

/// Train/test partition parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.3,
            seed: 0,
            stratified: true,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.train_fraction.is_finite()
            || self.train_fraction <= 0.0
            || self.train_fraction >= 1.0
        {
            return Err(Error::InvalidConfig(format!(
                "train fraction must lie in (0,1), got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }
}

/// Deterministic train/test partition. Stratified mode draws
/// round(fraction × class size) rows per class; rows are shuffled from a
/// source_id-sorted order, so the partition depends only on the seed and the
/// row contents, never on input row order.
pub fn split(
    matrix: &FeatureMatrix,
    spec: &SplitSpec,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    matrix.validate()?;
    spec.validate()?;
    let counts = matrix.class_counts();
    for (label, count) in &counts {
        if *count < 2 {
            return Err(Error::InvalidInput(format!(
                "class '{label}' has {count} rows, need at least 2 to split"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut in_train = vec![false; matrix.rows.len()];

    let sorted_indices = |predicate: &dyn Fn(&FeatureRow) -> bool| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..matrix.rows.len())
            .filter(|&i| predicate(&matrix.rows[i]))
            .collect();
        idx.sort_by(|&a, &b| matrix.rows[a].source_id.cmp(&matrix.rows[b].source_id));
        idx
    };

    if spec.stratified {
        let mut labels: Vec<String> = counts.iter().map(|(l, _)| l.clone()).collect();
        labels.sort();
        for label in labels {
            let mut idx = sorted_indices(&|row: &FeatureRow| row.label == label);
            let take = (spec.train_fraction * idx.len() as f64).round() as usize;
            if take < 2 {
                return Err(Error::InvalidInput(format!(
                    "class '{label}' would get {take} training rows at fraction {}, need at least 2",
                    spec.train_fraction
                )));
            }
            idx.shuffle(&mut rng);
            for &i in &idx[..take] {
                in_train[i] = true;
            }
        }
    } else {
        let mut idx = sorted_indices(&|_| true);
        let take = (spec.train_fraction * idx.len() as f64).round() as usize;
        if take < 2 {
            return Err(Error::InvalidInput(format!(
                "split would get {take} training rows at fraction {}, need at least 2",
                spec.train_fraction
            )));
        }
        idx.shuffle(&mut rng);
        for &i in &idx[..take] {
            in_train[i] = true;
        }
    }

    let project = |wanted: bool| -> FeatureMatrix {
        FeatureMatrix {
            family_set: matrix.family_set,
            feature_names: matrix.feature_names.clone(),
            rows: matrix
                .rows
                .iter()
                .zip(&in_train)
                .filter(|(_, &flag)| flag == wanted)
                .map(|(row, _)| row.clone())
                .collect(),
        }
    };
    Ok((project(true), project(false)))
}

/// Fit per-class Gaussian parameters with population (1/n) variances.
///
/// Accumulation per class runs in source_id order, so training-row order
/// never changes the fitted bits. Variances are floored at 1e−9 times the
/// mean raw variance (1e−9 absolute when every feature is constant).
pub fn fit(train: &FeatureMatrix) -> Result<GnbModel> {
    train.validate()?;
    let n_features = train.n_features();
    let mut labels: Vec<String> = train
        .class_counts()
        .into_iter()
        .map(|(label, _)| label)
        .collect();
    labels.sort();
    if labels.len() < 2 {
        return Err(Error::Training(format!(
            "training set has {} class(es), need at least 2",
            labels.len()
        )));
    }

    let total = train.rows.len() as f64;
    let mut classes = Vec::with_capacity(labels.len());
    for label in &labels {
        let mut idx: Vec<usize> = (0..train.rows.len())
            .filter(|&i| &train.rows[i].label == label)
            .collect();
        idx.sort_by(|&a, &b| train.rows[a].source_id.cmp(&train.rows[b].source_id));
        if idx.len() < 2 {
            return Err(Error::Training(format!(
                "class '{label}' has {} training rows, need at least 2",
                idx.len()
            )));
        }
        let n = idx.len() as f64;
        let mut means = vec![0.0; n_features];
        let mut variances = vec![0.0; n_features];
        for j in 0..n_features {
            let mut sum = 0.0;
            for &i in &idx {
                sum += train.rows[i].values[j];
            }
            let mean = sum / n;
            let mut sq = 0.0;
            for &i in &idx {
                sq += (train.rows[i].values[j] - mean).powi(2);
            }
            means[j] = mean;
            variances[j] = sq / n;
        }
        classes.push(ClassStats {
            tag: label.clone(),
            prior: idx.len() as f64 / total,
            means,
            variances,
        });
    }

    let var_count = (classes.len() * n_features) as f64;
    let var_mean: f64 = classes
        .iter()
        .flat_map(|c| c.variances.iter())
        .sum::<f64>()
        / var_count;
    let variance_floor = if var_mean > 0.0 { 1e-9 * var_mean } else { 1e-9 };
    for class in &mut classes {
        for v in &mut class.variances {
            *v = v.max(variance_floor);
        }
    }

    let model = GnbModel {
        feature_names: train.feature_names.clone(),
        classes,
        variance_floor,
    };
    model.validate()?;
    Ok(model)
}

/// Predicted class plus the full posterior distribution (class, probability)
/// in model class order.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: String,
    pub posteriors: Vec<(String, f64)>,
}

/// Score one feature vector against every class. `names` must match the
/// model's feature names exactly (same order).
pub fn predict(model: &GnbModel, names: &[&str], values: &[f64]) -> Result<Prediction> {
    if names.len() != model.feature_names.len()
        || names
            .iter()
            .zip(&model.feature_names)
            .any(|(a, b)| *a != b.as_str())
    {
        return Err(Error::InvalidInput(format!(
            "feature names {:?} do not match model features {:?}",
            names, model.feature_names
        )));
    }
    if values.len() != names.len() {
        return Err(Error::InvalidInput(format!(
            "got {} values for {} features",
            values.len(),
            names.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "cannot predict on non-finite feature values".into(),
        ));
    }

    let scores: Vec<f64> = model
        .classes
        .iter()
        .map(|class| {
            let mut score = class.prior.ln();
            for (j, &x) in values.iter().enumerate() {
                let var = class.variances[j];
                score += -0.5 * (2.0 * PI * var).ln()
                    - (x - class.means[j]).powi(2) / (2.0 * var);
            }
            score
        })
        .collect();

    // Max-shifted softmax; classes are in lexical order, so keeping the
    // first maximum implements the lexical tie-break.
    let max_score = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (s - max_score).exp()).collect();
    let weight_sum: f64 = weights.iter().sum();
    let posteriors: Vec<(String, f64)> = model
        .classes
        .iter()
        .zip(&weights)
        .map(|(c, &w)| (c.tag.clone(), w / weight_sum))
        .collect();
    let best = scores
        .iter()
        .enumerate()
        .fold(0usize, |best, (i, &s)| if s > scores[best] { i } else { best });
    Ok(Prediction {
        class: model.classes[best].tag.clone(),
        posteriors,
    })
}

/// Accuracy summary over a test set. Classes follow model order; the
/// confusion matrix is indexed `[true class][predicted class]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub classes: Vec<String>,
    pub total_accuracy: f64,
    pub per_class_accuracy: Vec<f64>,
    pub confusion: Vec<Vec<usize>>,
    pub n_correct: usize,
    pub n_total: usize,
}

/// Run the model over every test row and tabulate accuracy.
pub fn evaluate(model: &GnbModel, test: &FeatureMatrix) -> Result<AccuracyReport> {
    if test.rows.is_empty() {
        return Err(Error::InvalidInput("test set is empty".into()));
    }
    test.validate()?;
    let names: Vec<&str> = test.feature_names.iter().map(String::as_str).collect();
    let class_index = |tag: &str| -> Result<usize> {
        model
            .classes
            .iter()
            .position(|c| c.tag == tag)
            .ok_or_else(|| Error::InvalidInput(format!("test label '{tag}' not in model")))
    };

    let k = model.classes.len();
    let mut confusion = vec![vec![0usize; k]; k];
    for row in &test.rows {
        let truth = class_index(&row.label)?;
        let prediction = predict(model, &names, &row.values)?;
        let predicted = class_index(&prediction.class)?;
        confusion[truth][predicted] += 1;
    }

    let n_total = test.rows.len();
    let n_correct: usize = (0..k).map(|i| confusion[i][i]).sum();
    let per_class_accuracy: Vec<f64> = (0..k)
        .map(|i| {
            let class_total: usize = confusion[i].iter().sum();
            if class_total > 0 {
                confusion[i][i] as f64 / class_total as f64
            } else {
                0.0
            }
        })
        .collect();

    Ok(AccuracyReport {
        classes: model.classes.iter().map(|c| c.tag.clone()).collect(),
        total_accuracy: n_correct as f64 / n_total as f64,
        per_class_accuracy,
        confusion,
        n_correct,
        n_total,
    })
}
