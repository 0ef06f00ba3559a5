//! Corpus loading and generation.
//!
//! Real data follows the five-set EEG database layout: one plain-text file
//! per segment, one numeric sample per line, grouped into subdirectories for
//! sets A through E. A manifest file points at the root and names the
//! subdirectory of each set. When the real corpus is absent, `synth_corpus`
//! generates a labeled surrogate with the same shape: band-limited noise for
//! the healthy class, plus a dominant low-frequency rhythm for the seizure
//! class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::signal::EegSegment;

pub const LABEL_HEALTHY: &str = "healthy";
pub const LABEL_SEIZURE: &str = "seizure";

pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 173.61;
pub const DEFAULT_SEGMENT_LENGTH: usize = 4096;

/// The five canonical set names of the source database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetTag {
    A,
    B,
    C,
    D,
    E,
}

impl SetTag {
    pub const ALL: [SetTag; 5] = [SetTag::A, SetTag::B, SetTag::C, SetTag::D, SetTag::E];

    pub fn name(&self) -> &'static str {
        match self {
            SetTag::A => "A",
            SetTag::B => "B",
            SetTag::C => "C",
            SetTag::D => "D",
            SetTag::E => "E",
        }
    }

    /// Manifest key for this set's subdirectory, e.g. `set_a`.
    fn manifest_key(&self) -> &'static str {
        match self {
            SetTag::A => "set_a",
            SetTag::B => "set_b",
            SetTag::C => "set_c",
            SetTag::D => "set_d",
            SetTag::E => "set_e",
        }
    }
}

impl std::str::FromStr for SetTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(SetTag::A),
            "B" => Ok(SetTag::B),
            "C" => Ok(SetTag::C),
            "D" => Ok(SetTag::D),
            "E" => Ok(SetTag::E),
            other => Err(Error::InvalidConfig(format!(
                "unknown set tag '{other}' (expected A-E)"
            ))),
        }
    }
}

/// Resolved corpus description: which files belong to which set, plus the
/// sampling parameters every segment shares.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub root_path: PathBuf,
    pub sets: BTreeMap<SetTag, Vec<PathBuf>>,
    pub sample_rate_hz: f64,
    pub segment_length: usize,
}

impl DatasetManifest {
    /// Parse a manifest file of `key = value` lines. Recognized keys:
    /// `root` (default: the manifest's own directory), `set_a` … `set_e`
    /// (subdirectory names; only listed sets are scanned),
    /// `sample_rate_hz`, `segment_length`. Files inside each set directory
    /// are collected in lexical filename order.
    pub fn from_file(path: impl AsRef<Path>) -> Result<DatasetManifest> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut root: Option<PathBuf> = None;
        let mut subdirs: Vec<(SetTag, String)> = Vec::new();
        let mut sample_rate_hz = DEFAULT_SAMPLE_RATE_HZ;
        let mut segment_length = DEFAULT_SEGMENT_LENGTH;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::file_format(path, line_no, format!("expected key = value, got '{line}'"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "root" => root = Some(PathBuf::from(value)),
                "sample_rate_hz" => {
                    sample_rate_hz = value.parse().map_err(|_| {
                        Error::file_format(path, line_no, format!("bad sample rate '{value}'"))
                    })?
                }
                "segment_length" => {
                    segment_length = value.parse().map_err(|_| {
                        Error::file_format(path, line_no, format!("bad segment length '{value}'"))
                    })?
                }
                key => {
                    let tag = SetTag::ALL
                        .iter()
                        .find(|t| t.manifest_key() == key)
                        .ok_or_else(|| {
                            Error::file_format(path, line_no, format!("unknown key '{key}'"))
                        })?;
                    subdirs.push((*tag, value.to_string()));
                }
            }
        }

        // Relative roots resolve against the manifest's own directory so a
        // data tree can be moved as a unit.
        let manifest_dir = path.parent().unwrap_or(Path::new("."));
        let root_path = match root {
            Some(r) if r.is_absolute() => r,
            Some(r) => manifest_dir.join(r),
            None => manifest_dir.to_path_buf(),
        };

        let mut sets = BTreeMap::new();
        for (tag, subdir) in subdirs {
            let dir = root_path.join(&subdir);
            let entries = std::fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            sets.insert(tag, files);
        }

        let manifest = DatasetManifest {
            root_path,
            sets,
            sample_rate_hz,
            segment_length,
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sample_rate_hz.is_finite() || self.sample_rate_hz <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "manifest sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        if self.segment_length < 2 {
            return Err(Error::InvalidConfig(format!(
                "manifest segment length must be at least 2, got {}",
                self.segment_length
            )));
        }
        let mut seen: BTreeMap<&Path, SetTag> = BTreeMap::new();
        for (&tag, files) in &self.sets {
            for file in files {
                if !file.is_file() {
                    return Err(Error::InvalidInput(format!(
                        "manifest lists missing file {}",
                        file.display()
                    )));
                }
                if let Some(other) = seen.insert(file.as_path(), tag) {
                    return Err(Error::InvalidInput(format!(
                        "file {} appears in both set {} and set {}",
                        file.display(),
                        other.name(),
                        tag.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn set_files(&self, tag: SetTag) -> Result<&[PathBuf]> {
        self.sets
            .get(&tag)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidInput(format!("manifest has no set {}", tag.name())))
    }
}

/// Load every file of one set as a labeled segment, truncating each to the
/// manifest's segment length. Files are processed in the manifest's lexical
/// order; the source id is the file stem.
pub fn load_set(
    manifest: &DatasetManifest,
    tag: SetTag,
    label: &str,
) -> Result<Vec<EegSegment>> {
    manifest.validate()?;
    let files = manifest.set_files(tag)?;
    files
        .iter()
        .map(|path| {
            let source_id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            read_segment_text(
                path,
                manifest.sample_rate_hz,
                manifest.segment_length,
                Some(label.to_string()),
                source_id,
            )
        })
        .collect()
}

/// Parse a one-sample-per-line text file into a segment of exactly
/// `segment_length` samples (longer files are truncated, shorter ones are an
/// error).
pub fn read_segment_text(
    path: impl AsRef<Path>,
    sample_rate_hz: f64,
    segment_length: usize,
    label: Option<String>,
    source_id: impl Into<String>,
) -> Result<EegSegment> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut samples = Vec::with_capacity(segment_length);
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        if samples.len() == segment_length {
            break;
        }
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| {
            Error::file_format(path, idx + 1, format!("not a number: '{trimmed}'"))
        })?;
        samples.push(value);
    }
    if samples.len() < segment_length {
        return Err(Error::file_format(
            path,
            samples.len(),
            format!(
                "only {} samples, segment length is {segment_length}",
                samples.len()
            ),
        ));
    }
    EegSegment::new(samples, sample_rate_hz, label, source_id)
}

/// Write a segment as one sample per line using shortest round-trip decimal
/// formatting, so reloading reproduces the exact bits.
pub fn write_segment_text(segment: &EegSegment, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::with_capacity(segment.len() * 8);
    for sample in &segment.samples {
        text.push_str(&format!("{sample}\n"));
    }
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Deterministic surrogate corpus: `per_class` healthy segments (sum of 30
/// random 1–40 Hz tones, normalized to unit RMS) and `per_class` seizure
/// segments (the same noise model plus an amplitude-4 rhythm at 3–5 Hz over
/// a random window covering at least half the segment).
pub fn synth_corpus(seed: u64, per_class: usize) -> Result<Vec<EegSegment>> {
    if per_class < 2 {
        return Err(Error::InvalidInput(format!(
            "surrogate corpus needs at least 2 segments per class, got {per_class}"
        )));
    }
    let n = DEFAULT_SEGMENT_LENGTH;
    let fs = DEFAULT_SAMPLE_RATE_HZ;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let band_noise = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let tones: Vec<(f64, f64)> = (0..30)
            .map(|_| (rng.gen_range(1.0..40.0), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let mut samples = vec![0.0; n];
        for (freq, phase) in tones {
            let step = 2.0 * PI * freq / fs;
            for (i, s) in samples.iter_mut().enumerate() {
                *s += (step * i as f64 + phase).sin();
            }
        }
        let rms = (samples.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        for s in &mut samples {
            *s /= rms;
        }
        samples
    };

    let mut corpus = Vec::with_capacity(2 * per_class);
    for i in 0..per_class {
        let samples = band_noise(&mut rng);
        corpus.push(EegSegment::new(
            samples,
            fs,
            Some(LABEL_HEALTHY.to_string()),
            format!("synth_healthy_{i:03}"),
        )?);
    }
    for i in 0..per_class {
        let mut samples = band_noise(&mut rng);
        let freq = rng.gen_range(3.0..5.0);
        let phase = rng.gen_range(0.0..2.0 * PI);
        let len = rng.gen_range(n / 2..=n);
        let start = rng.gen_range(0..=n - len);
        let step = 2.0 * PI * freq / fs;
        for t in start..start + len {
            samples[t] += 4.0 * (step * t as f64 + phase).sin();
        }
        corpus.push(EegSegment::new(
            samples,
            fs,
            Some(LABEL_SEIZURE.to_string()),
            format!("synth_seizure_{i:03}"),
        )?);
    }
    Ok(corpus)
}
