use anyhow::{bail, Context, Result};
use std::path::{Path, PathBuf};

use eegtf::{FamilySet, FeatureConfig, KernelSpec, SplitSpec, WindowKind, WindowSpec};

use crate::args::Cli;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelChoice {
    Swvd,
    Cwd,
    Spec,
    All,
}

impl KernelChoice {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "swvd" => Ok(KernelChoice::Swvd),
            "cwd" => Ok(KernelChoice::Cwd),
            "spec" => Ok(KernelChoice::Spec),
            "all" => Ok(KernelChoice::All),
            other => bail!("unknown kernel '{other}' (expected swvd | cwd | spec | all)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    Tf,
    TimeFreq,
    Both,
}

impl FamilyChoice {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(FamilyChoice::Tf),
            "time_freq" => Ok(FamilyChoice::TimeFreq),
            "both" => Ok(FamilyChoice::Both),
            other => bail!("unknown family '{other}' (expected tf | time_freq | both)"),
        }
    }
}

/// Fully resolved run settings: defaults, then the config file, then flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub kernel: KernelChoice,
    pub family: FamilyChoice,
    pub feature: FeatureConfig,
    pub split: SplitSpec,
    pub n_seeds: usize,
    pub output_dir: PathBuf,
    pub best_k: usize,
    pub n_bins: usize,
    pub lag_window_length: usize,
    pub fft_length: usize,
    pub cwd_alpha: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifest: None,
            kernel: KernelChoice::All,
            family: FamilyChoice::Both,
            feature: FeatureConfig::default(),
            split: SplitSpec::default(),
            n_seeds: 10,
            output_dir: PathBuf::from("."),
            best_k: 4,
            n_bins: 10,
            lag_window_length: 127,
            fft_length: 512,
            cwd_alpha: 1.0,
        }
    }
}

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        if let Some(path) = &cli.config {
            config.apply_file(path)?;
        }
        config.apply_flags(cli)?;
        config.validate()?;
        Ok(config)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key = value", path.display(), idx + 1))?;
            self.set_key(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), idx + 1))?;
        }
        Ok(())
    }

    fn set_key(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| anyhow::anyhow!("bad value '{value}' for {key}"))
        }
        match key {
            "manifest" => self.manifest = Some(PathBuf::from(value)),
            "kernel" => self.kernel = KernelChoice::parse(value)?,
            "family" => self.family = FamilyChoice::parse(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "n_seeds" => self.n_seeds = num(key, value)?,
            "best_k" => self.best_k = num(key, value)?,
            "n_bins" => self.n_bins = num(key, value)?,
            "train_fraction" => self.split.train_fraction = num(key, value)?,
            "seed" => self.split.seed = num(key, value)?,
            "stratified" => self.split.stratified = num(key, value)?,
            "lag_window_length" => self.lag_window_length = num(key, value)?,
            "fft_length" => self.fft_length = num(key, value)?,
            "cwd_alpha" => self.cwd_alpha = num(key, value)?,
            "band_split_divisor" => self.feature.band_split_divisor = num(key, value)?,
            "rolloff_lambda" => self.feature.rolloff_lambda = num(key, value)?,
            "flux_frame_length" => self.feature.flux_frame_length = num(key, value)?,
            "flux_overlap" => self.feature.flux_overlap = num(key, value)?,
            "tf_flux_lag" => self.feature.tf_flux_lag = num(key, value)?,
            "renyi_alpha" => self.feature.renyi_alpha = num(key, value)?,
            "time_features_on_raw" => self.feature.time_features_on_raw = num(key, value)?,
            other => bail!("unknown config key '{other}'"),
        }
        Ok(())
    }

    fn apply_flags(&mut self, cli: &Cli) -> Result<()> {
        if let Some(v) = &cli.manifest {
            self.manifest = Some(v.clone());
        }
        if let Some(v) = &cli.kernel {
            self.kernel = KernelChoice::parse(v)?;
        }
        if let Some(v) = &cli.family {
            self.family = FamilyChoice::parse(v)?;
        }
        if let Some(v) = &cli.output_dir {
            self.output_dir = v.clone();
        }
        if let Some(v) = cli.n_seeds {
            self.n_seeds = v;
        }
        if let Some(v) = cli.best_k {
            self.best_k = v;
        }
        if let Some(v) = cli.n_bins {
            self.n_bins = v;
        }
        if let Some(v) = cli.train_fraction {
            self.split.train_fraction = v;
        }
        if let Some(v) = cli.seed {
            self.split.seed = v;
        }
        if let Some(v) = cli.lag_window {
            self.lag_window_length = v;
        }
        if let Some(v) = cli.fft_length {
            self.fft_length = v;
        }
        if let Some(v) = cli.cwd_alpha {
            self.cwd_alpha = v;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.feature.validate()?;
        self.split.validate()?;
        for kernel in self.kernels() {
            kernel.validate()?;
        }
        if self.n_seeds == 0 {
            bail!("n_seeds must be at least 1");
        }
        if self.n_bins < 2 {
            bail!("n_bins must be at least 2");
        }
        for family in self.families() {
            if self.best_k == 0 || self.best_k > family.len() {
                bail!(
                    "best_k ({}) must be in 1..={} for family {}",
                    self.best_k,
                    family.len(),
                    family.name()
                );
            }
        }
        Ok(())
    }

    /// Selected kernels with the configured window, FFT length and alpha.
    pub fn kernels(&self) -> Vec<KernelSpec> {
        let window = WindowSpec::new(WindowKind::Hamming, self.lag_window_length);
        let swvd = KernelSpec::swvd_with(window, self.fft_length);
        let cwd = KernelSpec::cwd_with(self.cwd_alpha, self.lag_window_length, self.fft_length);
        let spec = KernelSpec::spectrogram_with(window, self.fft_length);
        match self.kernel {
            KernelChoice::Swvd => vec![swvd],
            KernelChoice::Cwd => vec![cwd],
            KernelChoice::Spec => vec![spec],
            KernelChoice::All => vec![swvd, cwd, spec],
        }
    }

    pub fn families(&self) -> Vec<FamilySet> {
        match self.family {
            FamilyChoice::Tf => vec![FamilySet::Tf],
            FamilyChoice::TimeFreq => vec![FamilySet::TimeFreq],
            FamilyChoice::Both => vec![FamilySet::TimeFreq, FamilySet::Tf],
        }
    }

    pub fn manifest_path(&self) -> Result<&Path> {
        let path = self
            .manifest
            .as_deref()
            .context("no manifest configured; pass --manifest or generate one with `synth`")?;
        if !path.is_file() {
            bail!("manifest {} does not exist", path.display());
        }
        Ok(path)
    }
}
