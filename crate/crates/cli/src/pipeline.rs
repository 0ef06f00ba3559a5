//! Corpus plumbing shared by the subcommands: the A-versus-E task loads set A
//! as healthy and set E as seizure, and feature extraction fans out over
//! segments on a worker pool (collect preserves input order, so runs are
//! deterministic regardless of thread count).

use rayon::prelude::*;
use std::path::{Path, PathBuf};

use eegtf::{
    extract_all, load_set, write_segment_text, DatasetManifest, EegSegment, Error, FamilySet,
    FeatureConfig, FeatureMatrix, KernelSpec, Result, SetTag, LABEL_HEALTHY, LABEL_SEIZURE,
};

pub fn load_corpus(manifest_path: &Path) -> Result<Vec<EegSegment>> {
    let manifest = DatasetManifest::from_file(manifest_path)?;
    let mut segments = load_set(&manifest, SetTag::A, LABEL_HEALTHY)?;
    segments.extend(load_set(&manifest, SetTag::E, LABEL_SEIZURE)?);
    Ok(segments)
}

pub fn extract_matrix(
    segments: &[EegSegment],
    kernel: &KernelSpec,
    cfg: &FeatureConfig,
    family: FamilySet,
) -> Result<FeatureMatrix> {
    let items = segments
        .par_iter()
        .map(|seg| {
            let label = seg.label.clone().ok_or_else(|| {
                Error::InvalidInput(format!("segment '{}' has no label", seg.source_id))
            })?;
            let vector = extract_all(seg, kernel, cfg, family)?;
            Ok((vector, label, seg.source_id.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    FeatureMatrix::from_vectors(items)
}

/// Lay a labeled corpus out on disk in the manifest format `load_corpus`
/// reads back: healthy under A/, seizure under E/, one text file per segment.
pub fn write_corpus(corpus: &[EegSegment], dir: &Path) -> Result<PathBuf> {
    let first = corpus.first().ok_or_else(|| {
        Error::InvalidInput("cannot write an empty corpus".to_string())
    })?;
    let healthy_dir = dir.join("A");
    let seizure_dir = dir.join("E");
    for sub in [&healthy_dir, &seizure_dir] {
        std::fs::create_dir_all(sub).map_err(|e| Error::io(sub, e))?;
    }
    for seg in corpus {
        let sub = match seg.label.as_deref() {
            Some(LABEL_HEALTHY) => &healthy_dir,
            Some(LABEL_SEIZURE) => &seizure_dir,
            other => {
                return Err(Error::InvalidInput(format!(
                    "segment '{}' has unsupported label {other:?}",
                    seg.source_id
                )))
            }
        };
        write_segment_text(seg, sub.join(format!("{}.txt", seg.source_id)))?;
    }
    let manifest_path = dir.join("manifest.txt");
    let text = format!(
        "# surrogate corpus\nroot = .\nset_a = A\nset_e = E\nsample_rate_hz = {}\nsegment_length = {}\n",
        first.sample_rate_hz,
        first.len()
    );
    std::fs::write(&manifest_path, text).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest_path)
}
