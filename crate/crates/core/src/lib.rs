//! Seizure detection from single-channel EEG via quadratic time-frequency
//! analysis.
//!
//! The processing chain: a real segment becomes an analytic signal, a
//! quadratic time-frequency distribution (smoothed Wigner-Ville,
//! Choi-Williams, or spectrogram) turns it into a time-by-frequency energy
//! matrix, fixed feature families summarize either the signal and its
//! spectrum or the matrix itself, a Gaussian naive Bayes model separates
//! seizure from seizure-free segments, and an information-gain ranking
//! orders the features by how much label information each one carries.
//!
//! ```
//! use eegtf::{analytic_signal, qtfd, synth_tone, KernelSpec};
//!
//! let tone = synth_tone(20.0, 173.61, 1024, 1.0).unwrap();
//! let z = analytic_signal(&tone).unwrap();
//! let rho = qtfd(&z, &KernelSpec::swvd()).unwrap();
//! assert_eq!(rho.n_time(), 1024);
//! assert_eq!(rho.n_freq(), 512);
//! ```

pub mod bayes;
pub mod dataset;
pub mod error;
pub mod features;
pub mod ranking;
pub mod signal;
pub mod tfd;

pub use bayes::{
    evaluate, fit, predict, split, AccuracyReport, GnbModel, Prediction, SplitSpec,
};
pub use dataset::{
    load_set, read_segment_text, synth_corpus, write_segment_text, DatasetManifest, SetTag,
    LABEL_HEALTHY, LABEL_SEIZURE,
};
pub use error::{Error, Result};
pub use features::{
    extract_all, freq_features, tf_freq_features, tf_time_features, time_features, FamilySet,
    FeatureConfig, FeatureMatrix, FeatureRow, FeatureVector,
};
pub use ranking::{discretize, info_gain, rank_features, RankingResult};
pub use signal::{
    analytic_signal, dft, idft, make_window, synth_lfm_chirp, synth_tone, AnalyticSignal,
    EegSegment, WindowKind, WindowSpec,
};
pub use tfd::{
    instantaneous_autocorrelation, qtfd, render_greyscale, KernelKind, KernelSpec, TfdMatrix,
};
