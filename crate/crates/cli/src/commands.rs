use anyhow::{anyhow, bail, Context, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use eegtf::{
    analytic_signal, qtfd, rank_features, render_greyscale, synth_corpus, EegSegment, FamilySet,
    FeatureMatrix, KernelSpec, LABEL_HEALTHY, LABEL_SEIZURE,
};

use crate::config::RunConfig;
use crate::matrix_io::{read_matrix_csv, write_matrix_csv};
use crate::pipeline;
use crate::report::{histogram_report, mean_stddev, render_histogram_csv, seed_accuracies};

/// One (family, kernel) cell of the configured run. The time_freq family
/// involves no kernel, so it is a single job.
pub struct FeatureJob {
    pub family: FamilySet,
    pub kernel: Option<KernelSpec>,
    pub tag: String,
    pub csv_path: PathBuf,
}

pub fn feature_jobs(config: &RunConfig) -> Vec<FeatureJob> {
    let mut jobs = Vec::new();
    for family in config.families() {
        match family {
            FamilySet::TimeFreq => jobs.push(FeatureJob {
                family,
                kernel: None,
                tag: "time_freq".to_string(),
                csv_path: config.output_dir.join("features_time_freq.csv"),
            }),
            FamilySet::Tf => {
                for kernel in config.kernels() {
                    jobs.push(FeatureJob {
                        family,
                        kernel: Some(kernel),
                        tag: format!("tf_{}", kernel.name()),
                        csv_path: config
                            .output_dir
                            .join(format!("features_tf_{}.csv", kernel.name())),
                    });
                }
            }
        }
    }
    jobs
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "features".to_string())
}

fn read_required(path: &Path) -> Result<FeatureMatrix> {
    if !path.is_file() {
        bail!("{} not found; run `extract` first", path.display());
    }
    Ok(read_matrix_csv(path)?)
}

pub fn cmd_synth(config: &RunConfig, per_class: usize, dir: Option<&Path>) -> Result<()> {
    let corpus = synth_corpus(config.split.seed, per_class)?;
    let dir = dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output_dir.join("corpus"));
    let manifest = pipeline::write_corpus(&corpus, &dir)
        .with_context(|| format!("writing corpus under {}", dir.display()))?;
    println!(
        "wrote {} ({per_class} healthy + {per_class} seizure segments)",
        manifest.display()
    );
    Ok(())
}

pub fn cmd_extract(config: &RunConfig) -> Result<()> {
    let manifest = config.manifest_path()?;
    let segments = pipeline::load_corpus(manifest)
        .with_context(|| format!("loading corpus from {}", manifest.display()))?;
    std::fs::create_dir_all(&config.output_dir)?;
    let fallback = config.kernels()[0];
    for job in feature_jobs(config) {
        let kernel = job.kernel.unwrap_or(fallback);
        let matrix = pipeline::extract_matrix(&segments, &kernel, &config.feature, job.family)
            .with_context(|| format!("extracting {}", job.tag))?;
        write_matrix_csv(&matrix, &job.csv_path)?;
        println!("wrote {}", job.csv_path.display());
    }
    Ok(())
}

struct SetResult {
    label: String,
    per_seed_pct: Vec<f64>,
    mean: f64,
    sd: f64,
}

/// Accuracy of the full feature set and of the top-best_k subset per the
/// information-gain ranking of this matrix, over the configured seeds.
fn evaluate_matrix(config: &RunConfig, matrix: &FeatureMatrix) -> Result<(SetResult, SetResult)> {
    let to_pct = |acc: Vec<f64>| -> Vec<f64> { acc.into_iter().map(|a| a * 100.0).collect() };
    let full = to_pct(seed_accuracies(matrix, &config.split, config.n_seeds)?);
    let (full_mean, full_sd) = mean_stddev(&full);

    let ranking = rank_features(matrix, config.n_bins)?;
    let top = ranking.top_k(config.best_k);
    let best_matrix = matrix.select_features(&top)?;
    let best = to_pct(seed_accuracies(&best_matrix, &config.split, config.n_seeds)?);
    let (best_mean, best_sd) = mean_stddev(&best);

    Ok((
        SetResult {
            label: format!("full ({})", matrix.n_features()),
            per_seed_pct: full,
            mean: full_mean,
            sd: full_sd,
        },
        SetResult {
            label: format!("best-{} ({})", config.best_k, top.join(", ")),
            per_seed_pct: best,
            mean: best_mean,
            sd: best_sd,
        },
    ))
}

fn fmt_seeds(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn report_preamble(config: &RunConfig) -> String {
    format!(
        "classification accuracy (%), mean ± stddev over {} seeds (base {}), train fraction {}, {}",
        config.n_seeds,
        config.split.seed,
        config.split.train_fraction,
        if config.split.stratified {
            "stratified"
        } else {
            "unstratified"
        }
    )
}

pub fn cmd_evaluate(config: &RunConfig, features: Option<&Path>) -> Result<()> {
    std::fs::create_dir_all(&config.output_dir)?;
    if let Some(path) = features {
        return evaluate_single(config, path);
    }

    // Rows are feature sets, columns are kernels; the time_freq rows repeat
    // one kernel-independent evaluation across all columns.
    let kernel_names: Vec<&'static str> = config.kernels().iter().map(|k| k.name()).collect();
    let mut grid: Vec<(FamilySet, Vec<(String, SetResult, SetResult)>)> = Vec::new();
    for family in config.families() {
        let mut cols = Vec::new();
        match family {
            FamilySet::TimeFreq => {
                let path = config.output_dir.join("features_time_freq.csv");
                let matrix = read_required(&path)?;
                let (full, best) = evaluate_matrix(config, &matrix)?;
                cols.push(("*".to_string(), full, best));
            }
            FamilySet::Tf => {
                for kernel in config.kernels() {
                    let path = config
                        .output_dir
                        .join(format!("features_tf_{}.csv", kernel.name()));
                    let matrix = read_required(&path)?;
                    let (full, best) = evaluate_matrix(config, &matrix)?;
                    cols.push((kernel.name().to_string(), full, best));
                }
            }
        }
        grid.push((family, cols));
    }

    let mut text = String::new();
    writeln!(text, "{}", report_preamble(config))?;
    writeln!(text)?;
    write!(text, "{:<26}", "feature set")?;
    for name in &kernel_names {
        write!(text, "{:>18}", name)?;
    }
    writeln!(text)?;
    for (family, cols) in &grid {
        let spans_all = cols.len() == 1 && cols[0].0 == "*";
        for (set_idx, set_name) in ["full", format!("best-{}", config.best_k).as_str()]
            .iter()
            .enumerate()
        {
            let row_label = if *set_name == "full" {
                format!("{} full ({})", family.name(), family.len())
            } else {
                format!("{} {}", family.name(), set_name)
            };
            write!(text, "{:<26}", row_label)?;
            for name in &kernel_names {
                let cell = if spans_all {
                    &cols[0]
                } else {
                    cols.iter()
                        .find(|c| c.0 == *name)
                        .ok_or_else(|| anyhow!("missing kernel column {name}"))?
                };
                let result = if set_idx == 0 { &cell.1 } else { &cell.2 };
                write!(text, "{:>18}", format!("{:.2} ± {:.2}", result.mean, result.sd))?;
            }
            writeln!(text)?;
        }
    }
    if grid.iter().any(|(f, _)| *f == FamilySet::TimeFreq) && kernel_names.len() > 1 {
        writeln!(
            text,
            "\ntime_freq features involve no kernel; those rows repeat one evaluation."
        )?;
    }
    writeln!(text, "\nper-seed accuracy (%):")?;
    for (family, cols) in &grid {
        for (kernel_name, full, best) in cols {
            let prefix = if kernel_name == "*" {
                family.name().to_string()
            } else {
                format!("{}/{}", family.name(), kernel_name)
            };
            writeln!(text, "  {prefix} {}: {}", full.label, fmt_seeds(&full.per_seed_pct))?;
            writeln!(text, "  {prefix} {}: {}", best.label, fmt_seeds(&best.per_seed_pct))?;
        }
    }

    let out = config.output_dir.join("report.txt");
    std::fs::write(&out, &text)?;
    print!("{text}");
    println!("wrote {}", out.display());
    Ok(())
}

fn evaluate_single(config: &RunConfig, path: &Path) -> Result<()> {
    let matrix = read_required(path)?;
    let (full, best) = evaluate_matrix(config, &matrix)?;
    let mut text = String::new();
    writeln!(text, "{}", report_preamble(config))?;
    writeln!(text, "feature CSV: {}", path.display())?;
    writeln!(text)?;
    writeln!(text, "{}: {:.2} ± {:.2}", full.label, full.mean, full.sd)?;
    writeln!(text, "{}: {:.2} ± {:.2}", best.label, best.mean, best.sd)?;
    writeln!(text, "\nper-seed accuracy (%):")?;
    writeln!(text, "  {}: {}", full.label, fmt_seeds(&full.per_seed_pct))?;
    writeln!(text, "  {}: {}", best.label, fmt_seeds(&best.per_seed_pct))?;

    let out = config
        .output_dir
        .join(format!("report_{}.txt", stem_of(path)));
    std::fs::write(&out, &text)?;
    print!("{text}");
    println!("wrote {}", out.display());
    Ok(())
}

pub fn cmd_rank(config: &RunConfig, features: Option<&Path>) -> Result<()> {
    std::fs::create_dir_all(&config.output_dir)?;
    let jobs: Vec<(String, PathBuf)> = match features {
        Some(path) => vec![(stem_of(path), path.to_path_buf())],
        None => feature_jobs(config)
            .into_iter()
            .map(|j| (j.tag, j.csv_path))
            .collect(),
    };
    for (tag, path) in jobs {
        let matrix = read_required(&path)?;
        let ranking = rank_features(&matrix, config.n_bins)?;
        let out = config.output_dir.join(format!("ranking_{tag}.csv"));
        std::fs::write(&out, ranking.to_csv())?;
        println!(
            "top-{} ({tag}): {}",
            config.best_k,
            ranking.top_k(config.best_k).join(", ")
        );
        println!("wrote {}", out.display());
    }
    Ok(())
}

pub fn cmd_render(config: &RunConfig, selectors: &[String]) -> Result<()> {
    let manifest = config.manifest_path()?;
    let segments = pipeline::load_corpus(manifest)
        .with_context(|| format!("loading corpus from {}", manifest.display()))?;
    std::fs::create_dir_all(&config.output_dir)?;
    let chosen: Vec<&EegSegment> = if selectors.is_empty() {
        let firsts: Vec<&EegSegment> = [LABEL_HEALTHY, LABEL_SEIZURE]
            .iter()
            .filter_map(|label| {
                segments
                    .iter()
                    .find(|s| s.label.as_deref() == Some(*label))
            })
            .collect();
        if firsts.is_empty() {
            bail!("corpus has no segments to render");
        }
        firsts
    } else {
        selectors
            .iter()
            .map(|id| {
                segments
                    .iter()
                    .find(|s| s.source_id == *id)
                    .ok_or_else(|| anyhow!("no segment with source id '{id}'"))
            })
            .collect::<Result<_>>()?
    };
    for seg in chosen {
        let z = analytic_signal(seg)?;
        for kernel in config.kernels() {
            let rho = qtfd(&z, &kernel)?;
            let path = config
                .output_dir
                .join(format!("{}_{}.pgm", seg.source_id, kernel.name()));
            render_greyscale(&rho, &path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn default_csv_for_feature(config: &RunConfig, feature: &str) -> Result<PathBuf> {
    if FamilySet::Tf.feature_names().contains(&feature) {
        let kernel = config.kernels()[0];
        Ok(config
            .output_dir
            .join(format!("features_tf_{}.csv", kernel.name())))
    } else if FamilySet::TimeFreq.feature_names().contains(&feature) {
        Ok(config.output_dir.join("features_time_freq.csv"))
    } else {
        bail!("unknown feature '{feature}'")
    }
}

pub fn cmd_histogram(config: &RunConfig, feature: &str, features: Option<&Path>) -> Result<()> {
    std::fs::create_dir_all(&config.output_dir)?;
    let path = match features {
        Some(p) => p.to_path_buf(),
        None => default_csv_for_feature(config, feature)?,
    };
    let matrix = read_required(&path)?;
    let report = histogram_report(&matrix, feature, 20)?;
    let out = config.output_dir.join(format!("histogram_{feature}.csv"));
    std::fs::write(&out, render_histogram_csv(&report))?;
    println!("overlap_coefficient {}", report.overlap);
    println!("wrote {}", out.display());
    Ok(())
}
