use clap::{Parser, Subcommand};
use std::path::PathBuf;

/// Batch EEG seizure-detection pipeline: quadratic time-frequency features,
/// Gaussian naive Bayes classification, information-gain ranking.
#[derive(Debug, Parser)]
#[command(name = "eegtf", version)]
pub struct Cli {
    /// Plain-text run configuration, one `key = value` per line. Flags take
    /// precedence over the file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Corpus manifest file (see `synth` for the expected layout).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Kernel selector: swvd | cwd | spec | all.
    #[arg(long, global = true)]
    pub kernel: Option<String>,

    /// Feature family selector: tf | time_freq | both.
    #[arg(long, global = true)]
    pub family: Option<String>,

    /// Directory for generated CSVs, reports and images.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    /// Number of train/test splits per evaluation.
    #[arg(long, global = true)]
    pub n_seeds: Option<usize>,

    /// Size of the top-ranked feature subset.
    #[arg(long, global = true)]
    pub best_k: Option<usize>,

    /// Discretization bins for information gain.
    #[arg(long, global = true)]
    pub n_bins: Option<usize>,

    /// Fraction of each class used for training.
    #[arg(long, global = true)]
    pub train_fraction: Option<f64>,

    /// Base RNG seed (corpus generation and train/test splits).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Lag smoothing window length (odd).
    #[arg(long, global = true)]
    pub lag_window: Option<usize>,

    /// Number of frequency bins M of the lag transform.
    #[arg(long, global = true)]
    pub fft_length: Option<usize>,

    /// Width parameter of the Choi-Williams kernel.
    #[arg(long, global = true)]
    pub cwd_alpha: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a deterministic labeled surrogate corpus with a manifest.
    Synth {
        /// Segments per class.
        #[arg(long, default_value_t = 50)]
        per_class: usize,
        /// Corpus directory (default: <output_dir>/corpus).
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Compute feature CSVs for the configured families and kernels.
    Extract,
    /// Train and score the classifier over seeds; write a grid report.
    Evaluate {
        /// Evaluate one specific feature CSV instead of the configured set.
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Rank features by information gain and write a ranking CSV.
    Rank {
        /// Rank one specific feature CSV instead of the configured set.
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Render time-frequency matrices as PGM greyscale images.
    Render {
        /// Source ids to render (default: first segment of each class).
        #[arg(long = "segment")]
        segments: Vec<String>,
    },
    /// Per-class histogram and fitted-normal overlap for one feature.
    Histogram {
        /// Feature name, e.g. TiTF1.
        feature: String,
        /// Read this feature CSV instead of the one implied by the name.
        #[arg(long)]
        features: Option<PathBuf>,
    },
}
