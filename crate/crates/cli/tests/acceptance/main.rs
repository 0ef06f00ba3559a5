//! Acceptance gate for the detection pipeline. Each numbered check prints a
//! single [PASS], [SKIP], or [FAIL] line; run with `--nocapture` to see them.
//!
//! Checks 1-4 and the real-data half of check 10 need the Bonn corpus on
//! disk: point BONN_EEG_DIR at a directory holding the healthy set under A/
//! and the seizure set under E/, one sample per line per file. Without the
//! variable those checks report [SKIP]. Everything else runs self-contained.

mod oracle;

use std::sync::{Arc, OnceLock};
use std::time::Instant;

use eegtf::{
    analytic_signal, fit, freq_features, info_gain, make_window, predict, qtfd, rank_features,
    synth_corpus, synth_lfm_chirp, synth_tone, tf_freq_features, tf_time_features, time_features,
    AnalyticSignal, EegSegment, FamilySet, FeatureConfig, FeatureMatrix, FeatureRow, KernelSpec,
    SplitSpec, TfdMatrix, WindowKind, WindowSpec,
};
use eegtf_cli::pipeline::{extract_matrix, load_corpus};
use eegtf_cli::report::{histogram_report, overlap_coefficient, seed_accuracies};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(criterion: usize, detail: &str) {
    println!("[PASS] criterion {criterion}: {detail}");
}

fn skip(criterion: usize, reason: &str) {
    println!("[SKIP] criterion {criterion}: {reason}");
}

fn check(criterion: usize, ok: bool, detail: &str) {
    if !ok {
        println!("[FAIL] criterion {criterion}: {detail}");
        panic!("criterion {criterion}: {detail}");
    }
}

const SKIP_REASON: &str = "BONN_EEG_DIR not set; real corpus unavailable";

/// Feature matrices for the real corpus, extracted once and shared across
/// checks. Extraction time is recorded so the runtime budget in check 1
/// holds regardless of which test triggers the build.
struct RealData {
    tf: Vec<(&'static str, FeatureMatrix)>,
    time_freq: FeatureMatrix,
    build_seconds: f64,
}

static REAL: OnceLock<Option<Arc<RealData>>> = OnceLock::new();

fn real_data() -> Option<Arc<RealData>> {
    REAL.get_or_init(|| {
        let root = std::env::var("BONN_EEG_DIR").ok()?;
        let started = Instant::now();
        let dir = tempfile::tempdir().expect("tempdir for the corpus manifest");
        let manifest_path = dir.path().join("manifest.txt");
        std::fs::write(
            &manifest_path,
            format!("root = {root}\nset_a = A\nset_e = E\n"),
        )
        .expect("write corpus manifest");
        let corpus = load_corpus(&manifest_path).expect("load real corpus");
        let cfg = FeatureConfig::default();
        let tf = all_kernels()
            .iter()
            .map(|k| {
                let matrix =
                    extract_matrix(&corpus, k, &cfg, FamilySet::Tf).expect("TF extraction");
                (k.name(), matrix)
            })
            .collect();
        let time_freq = extract_matrix(&corpus, &KernelSpec::swvd(), &cfg, FamilySet::TimeFreq)
            .expect("signal-domain extraction");
        Some(Arc::new(RealData {
            tf,
            time_freq,
            build_seconds: started.elapsed().as_secs_f64(),
        }))
    })
    .clone()
}

fn all_kernels() -> [KernelSpec; 3] {
    [
        KernelSpec::swvd(),
        KernelSpec::cwd(),
        KernelSpec::spectrogram(),
    ]
}

/// Mean total accuracy (percent) over consecutive split seeds 0..n_seeds.
fn mean_accuracy_pct(matrix: &FeatureMatrix, n_seeds: usize) -> f64 {
    let accs =
        seed_accuracies(matrix, &SplitSpec::default(), n_seeds).expect("split/fit/evaluate");
    100.0 * accs.iter().sum::<f64>() / accs.len() as f64
}

fn population_stats(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

#[test]
fn criterion_01_real_tf_accuracy_and_runtime() {
    let Some(data) = real_data() else {
        skip(1, SKIP_REASON);
        return;
    };
    let started = Instant::now();
    let mut details = Vec::new();
    for (name, matrix) in &data.tf {
        let mean = mean_accuracy_pct(matrix, 10);
        check(
            1,
            mean >= 97.0,
            &format!("{name} mean accuracy {mean:.2}% below 97%"),
        );
        details.push(format!("{name} {mean:.2}%"));
    }
    let total = data.build_seconds + started.elapsed().as_secs_f64();
    check(1, total < 600.0, &format!("runtime {total:.0}s over budget"));
    pass(
        1,
        &format!("TF accuracy {} over 10 seeds in {total:.0}s", details.join(", ")),
    );
}

#[test]
fn criterion_02_real_signal_domain_band() {
    let Some(data) = real_data() else {
        skip(2, SKIP_REASON);
        return;
    };
    let baseline = mean_accuracy_pct(&data.time_freq, 10);
    check(
        2,
        (91.0..=100.0).contains(&baseline),
        &format!("signal-domain accuracy {baseline:.2}% outside [91, 100]"),
    );
    for (name, matrix) in &data.tf {
        let tf = mean_accuracy_pct(matrix, 10);
        check(
            2,
            tf >= baseline,
            &format!("{name} TF {tf:.2}% below signal-domain {baseline:.2}%"),
        );
    }
    pass(
        2,
        &format!("signal-domain {baseline:.2}% in band; every TF kernel at or above it"),
    );
}

#[test]
fn criterion_03_real_best_four_subset() {
    let Some(data) = real_data() else {
        skip(3, SKIP_REASON);
        return;
    };
    let subset = ["TiTF1", "TiTF8", "TiTF2", "FrTF2"];
    let mut details = Vec::new();
    for (name, matrix) in &data.tf {
        let full = mean_accuracy_pct(matrix, 10);
        let selected = matrix.select_features(&subset).expect("subset selection");
        let best = mean_accuracy_pct(&selected, 10);
        check(
            3,
            best >= 95.0,
            &format!("{name} four-feature accuracy {best:.2}% below 95%"),
        );
        check(
            3,
            best >= full - 4.0,
            &format!("{name} four-feature {best:.2}% trails full set {full:.2}% by over 4 points"),
        );
        details.push(format!("{name} {best:.2}% (full {full:.2}%)"));
    }
    pass(3, &format!("{{TiTF1, TiTF8, TiTF2, FrTF2}}: {}", details.join(", ")));
}

#[test]
fn criterion_04_real_ranking_order() {
    let Some(data) = real_data() else {
        skip(4, SKIP_REASON);
        return;
    };
    let mut rank_one_hits = 0;
    for (name, matrix) in &data.tf {
        let ranking = rank_features(matrix, 10).expect("ranking");
        let top4 = ranking.top_k(4);
        if top4.first() == Some(&"TiTF1") {
            rank_one_hits += 1;
        }
        for needed in ["TiTF1", "TiTF8", "TiTF2"] {
            check(
                4,
                top4.contains(&needed),
                &format!("{name}: {needed} missing from top-4 {top4:?}"),
            );
        }
    }
    check(
        4,
        rank_one_hits >= 2,
        &format!("TiTF1 ranked first on only {rank_one_hits} of 3 kernels"),
    );
    pass(
        4,
        &format!(
            "TiTF1 first on {rank_one_hits}/3 kernels; TiTF1/TiTF8/TiTF2 in every top-4"
        ),
    );
}

#[test]
fn criterion_05_surrogate_corpus_gate() {
    let corpus = synth_corpus(0, 50).expect("surrogate corpus");
    let cfg = FeatureConfig::default();
    let baseline_matrix =
        extract_matrix(&corpus, &KernelSpec::swvd(), &cfg, FamilySet::TimeFreq)
            .expect("signal-domain extraction");
    let baseline = mean_accuracy_pct(&baseline_matrix, 10);
    let mut details = Vec::new();
    for kernel in all_kernels() {
        let matrix =
            extract_matrix(&corpus, &kernel, &cfg, FamilySet::Tf).expect("TF extraction");
        let tf = mean_accuracy_pct(&matrix, 10);
        check(
            5,
            tf >= 95.0,
            &format!("{} surrogate TF {tf:.2}% below 95%", kernel.name()),
        );
        check(
            5,
            tf >= baseline - 2.0,
            &format!(
                "{} surrogate TF {tf:.2}% more than 2 points below signal-domain {baseline:.2}%",
                kernel.name()
            ),
        );
        details.push(format!("{} {tf:.2}%", kernel.name()));
    }
    pass(
        5,
        &format!(
            "surrogate TF {} against signal-domain {baseline:.2}%",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_06_tfd_matches_brute_force() {
    let started = Instant::now();

    // Direct comparison against the literal double-loop evaluation.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<f64> = (0..256).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let segment =
        EegSegment::new(samples, 173.61, None, "accept-256").expect("segment");
    let z = analytic_signal(&segment).expect("analytic signal");
    let window =
        make_window(&WindowSpec::new(WindowKind::Hamming, 127)).expect("lag window");
    let m_len = 512;
    let references = [
        (KernelSpec::swvd(), oracle::naive_swvd(&z.values, &window, m_len)),
        (KernelSpec::cwd(), oracle::naive_cwd(&z.values, 1.0, 127, m_len)),
        (
            KernelSpec::spectrogram(),
            oracle::naive_spec(&z.values, &window, m_len),
        ),
    ];
    for (spec, reference) in &references {
        let fast = qtfd(&z, spec).expect("distribution");
        let peak = reference
            .iter()
            .flatten()
            .fold(0.0_f64, |a, &b| a.max(b.abs()));
        let mut worst = 0.0_f64;
        for t in 0..fast.n_time() {
            for k in 0..fast.n_freq() {
                worst = worst.max((fast.rho[[t, k]] - reference[t][k]).abs());
            }
        }
        check(
            6,
            worst <= 1e-9 * peak,
            &format!(
                "{}: max deviation {worst:.3e} exceeds 1e-9 of peak {peak:.3e}",
                spec.name()
            ),
        );
    }

    // A 20 Hz tone at 173.61 Hz with M = 512 concentrates in column 118.
    let tone = synth_tone(20.0, 173.61, 4096, 1.0).expect("tone");
    let zt = analytic_signal(&tone).expect("analytic tone");
    for spec in all_kernels() {
        let rho = qtfd(&zt, &spec).expect("distribution");
        let mut best_k = 0;
        let mut best_energy = f64::NEG_INFINITY;
        for k in 0..rho.n_freq() {
            let energy: f64 = (0..rho.n_time()).map(|t| rho.rho[[t, k]].abs()).sum();
            if energy > best_energy {
                best_energy = energy;
                best_k = k;
            }
        }
        check(
            6,
            (best_k as i64 - 118).abs() <= 1,
            &format!("{}: tone energy peaks at bin {best_k}, expected 118 +/- 1", spec.name()),
        );
        if spec.name() == "spec" {
            let min = rho.rho.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            check(
                6,
                min >= 0.0,
                &format!("spectrogram has negative entry {min:.3e}"),
            );
        }
    }

    // A 10 -> 40 Hz sweep: per-time ridge tracks the instantaneous frequency.
    let chirp = synth_lfm_chirp(10.0, 40.0, 173.61, 4096).expect("chirp");
    let zc = analytic_signal(&chirp).expect("analytic chirp");
    let rho = qtfd(&zc, &KernelSpec::swvd()).expect("distribution");
    let n = rho.n_time();
    let bin_hz = 173.61 / (2.0 * rho.n_freq() as f64);
    let mut worst_hz = 0.0_f64;
    let mut t = n / 10;
    while t < n * 9 / 10 {
        let mut ridge = 0;
        for k in 1..rho.n_freq() {
            if rho.rho[[t, k]] > rho.rho[[t, ridge]] {
                ridge = k;
            }
        }
        let estimated = ridge as f64 * bin_hz;
        let expected = 10.0 + 30.0 * t as f64 / n as f64;
        worst_hz = worst_hz.max((estimated - expected).abs());
        t += 97;
    }
    check(
        6,
        worst_hz <= 2.0,
        &format!("chirp ridge off by {worst_hz:.2} Hz, tolerance 2 Hz"),
    );

    let elapsed = started.elapsed().as_secs_f64();
    check(6, elapsed < 60.0, &format!("took {elapsed:.1}s, budget 60s"));
    pass(
        6,
        &format!(
            "brute-force match on 256 samples, tone at bin 118, chirp ridge within {worst_hz:.2} Hz, {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_07_analytic_signal_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let lengths = [64usize, 128, 200, 256];
    for trial in 0..100 {
        let n = lengths[rng.gen_range(0..lengths.len())];
        let samples: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let segment = EegSegment::new(samples.clone(), 173.61, None, format!("rand-{trial}"))
            .expect("segment");
        let z = analytic_signal(&segment).expect("analytic signal");

        let scale = samples.iter().fold(1.0_f64, |a, &b| a.max(b.abs()));
        let worst_re = z
            .values
            .iter()
            .zip(&samples)
            .map(|(zv, &x)| (zv.re - x).abs())
            .fold(0.0, f64::max);
        check(
            7,
            worst_re <= 1e-9 * scale,
            &format!("trial {trial}: real part deviates by {worst_re:.3e}"),
        );

        let spectrum = oracle::naive_dft(&z.values);
        let total: f64 = spectrum.iter().map(|c| c.norm_sqr()).sum();
        let negative: f64 = spectrum[n / 2 + 1..].iter().map(|c| c.norm_sqr()).sum();
        check(
            7,
            negative <= 1e-9 * total,
            &format!("trial {trial}: negative-frequency energy {negative:.3e} of {total:.3e}"),
        );
    }
    pass(7, "100 random signals: one-sided spectra, exact real-part recovery");
}

fn compare_features(names: &[&str], lib: &[f64], reference: &[f64]) {
    for ((name, &a), &b) in names.iter().zip(lib).zip(reference) {
        let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
        check(
            8,
            (a - b).abs() <= tol,
            &format!("{name}: library {a:.17e} vs reference {b:.17e}"),
        );
    }
}

fn check_invariant(names: &[&str], indices: &[usize], base: &[f64], scaled: &[f64]) {
    for &i in indices {
        let tol = 1e-9 * base[i].abs().max(1.0);
        check(
            8,
            (scaled[i] - base[i]).abs() <= tol,
            &format!(
                "{} not scale invariant: {} vs {}",
                names[i], base[i], scaled[i]
            ),
        );
    }
}

#[test]
fn criterion_08_features_match_naive_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    // Short frames and a short matrix lag keep the flux features non-trivial
    // at these input sizes.
    let cfg = FeatureConfig {
        flux_frame_length: 16,
        tf_flux_lag: 3,
        ..FeatureConfig::default()
    };

    let samples: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let segment = EegSegment::new(samples, 173.61, None, "feat-64").expect("segment");
    let z = analytic_signal(&segment).expect("analytic signal");
    let signal_names = FamilySet::TimeFreq.feature_names();

    let lib_time = time_features(&z).expect("envelope statistics");
    let ref_time = oracle::oracle_envelope_stats(&z.envelope());
    compare_features(&signal_names[..10], &lib_time, &ref_time);

    let lib_freq = freq_features(&z, &cfg).expect("spectral features");
    let ref_freq = oracle::oracle_freq_features(
        &z.values,
        &oracle::FreqParams {
            band_split_divisor: cfg.band_split_divisor,
            rolloff_lambda: cfg.rolloff_lambda,
            flux_frame_length: cfg.flux_frame_length,
            flux_overlap: cfg.flux_overlap,
        },
    );
    compare_features(&signal_names[10..], &lib_freq, &ref_freq);

    // Matrix families on an 8x8 grid with signed entries.
    let grid: Vec<Vec<f64>> = (0..8)
        .map(|_| (0..8).map(|_| rng.gen_range(-1.0..2.0)).collect())
        .collect();
    let rho = TfdMatrix {
        rho: Array2::from_shape_fn((8, 8), |(t, k)| grid[t][k]),
        sample_rate_hz: 173.61,
        kernel: KernelSpec::swvd(),
    };
    let matrix_names = FamilySet::Tf.feature_names();

    let lib_tf_time = tf_time_features(&rho).expect("matrix statistics");
    let ref_tf_time = oracle::oracle_tf_time(&grid);
    compare_features(&matrix_names[..9], &lib_tf_time, &ref_tf_time);

    let lib_tf_freq = tf_freq_features(&rho, &cfg).expect("matrix spectral features");
    let ref_tf_freq = oracle::oracle_tf_freq(
        &grid,
        &oracle::TfFreqParams {
            band_split_divisor: cfg.band_split_divisor,
            rolloff_lambda: cfg.rolloff_lambda,
            tf_flux_lag: cfg.tf_flux_lag,
            renyi_alpha: cfg.renyi_alpha as i32,
        },
    );
    compare_features(&matrix_names[9..], &lib_tf_freq, &ref_tf_freq);

    // Amplitude scaling must leave the normalized features untouched.
    let c = 3.7;
    let scaled_z = AnalyticSignal {
        values: z.values.iter().map(|v| v * c).collect(),
        sample_rate_hz: z.sample_rate_hz,
    };
    let scaled_time = time_features(&scaled_z).expect("scaled envelope statistics");
    let scaled_freq = freq_features(&scaled_z, &cfg).expect("scaled spectral features");
    check_invariant(&signal_names[..10], &[2, 3, 4, 9], &lib_time, &scaled_time);
    check_invariant(&signal_names[10..], &[2, 3, 4, 5, 6], &lib_freq, &scaled_freq);

    let scaled_rho = TfdMatrix {
        rho: rho.rho.mapv(|v| v * c),
        sample_rate_hz: rho.sample_rate_hz,
        kernel: rho.kernel,
    };
    let scaled_tf_time = tf_time_features(&scaled_rho).expect("scaled matrix statistics");
    let scaled_tf_freq =
        tf_freq_features(&scaled_rho, &cfg).expect("scaled matrix spectral features");
    check_invariant(&matrix_names[..9], &[2, 3, 4, 8], &lib_tf_time, &scaled_tf_time);
    check_invariant(&matrix_names[9..], &[3, 4, 5, 6], &lib_tf_freq, &scaled_tf_freq);

    pass(8, "all 33 features match literal-loop references; scale invariants hold");
}

#[test]
fn criterion_09_classifier_and_gain_fixtures() {
    let row = |v: f64, label: &str, id: &str| FeatureRow {
        values: vec![v],
        label: label.into(),
        source_id: id.into(),
    };
    let matrix = FeatureMatrix {
        family_set: FamilySet::TimeFreq,
        feature_names: vec!["TiF1".into()],
        rows: vec![
            row(0.0, "a", "s0"),
            row(1.0, "a", "s1"),
            row(4.0, "b", "s2"),
            row(5.0, "b", "s3"),
        ],
    };
    let model = fit(&matrix).expect("fit");

    // Hand-computed Gaussian Bayes: class means 0.5 and 4.5, both variances
    // 0.25, equal priors.
    let pdf = |x: f64, mean: f64, var: f64| {
        (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
    };
    for x in [1.25_f64, 2.0, 3.1] {
        let pa = 0.5 * pdf(x, 0.5, 0.25);
        let pb = 0.5 * pdf(x, 4.5, 0.25);
        let expected_a = pa / (pa + pb);
        let prediction = predict(&model, &["TiF1"], &[x]).expect("predict");
        let got_a = prediction
            .posteriors
            .iter()
            .find(|(l, _)| l == "a")
            .expect("class a posterior")
            .1;
        check(
            9,
            (got_a - expected_a).abs() <= 1e-12,
            &format!("posterior at {x}: {got_a:.17} vs hand value {expected_a:.17}"),
        );
    }

    // Equidistant point: both posteriors exactly one half.
    let midpoint = predict(&model, &["TiF1"], &[2.5]).expect("predict");
    for (label, p) in &midpoint.posteriors {
        check(
            9,
            (p - 0.5).abs() <= 1e-12,
            &format!("midpoint posterior for {label} is {p:.17}, expected 0.5"),
        );
    }

    // Information gain fixtures in bits.
    let fixtures: [(&[usize], &[&str], f64); 3] = [
        (&[0, 0, 1, 1], &["a", "a", "b", "b"], 1.0),
        (&[0, 1, 0, 1], &["a", "a", "b", "b"], 0.0),
        (&[0, 0, 1], &["a", "a", "b"], 0.9182958340544896),
    ];
    for (bins, labels, expected) in fixtures {
        let gain = info_gain(bins, labels).expect("info gain");
        check(
            9,
            (gain - expected).abs() <= 1e-12,
            &format!("gain {gain:.17} vs expected {expected:.17}"),
        );
    }

    pass(9, "posteriors match hand Bayes; midpoint is 0.5/0.5; gain fixtures exact");
}

#[test]
fn criterion_10_overlap_separates_features() {
    // Distant unit normals: fitted overlap must be near zero.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let a = oracle::gaussian_samples(&mut rng, 0.0, 1.0, 1000);
    let b = oracle::gaussian_samples(&mut rng, 10.0, 1.0, 1000);
    let (mean_a, var_a) = population_stats(&a);
    let (mean_b, var_b) = population_stats(&b);
    let synthetic = overlap_coefficient(mean_a, var_a, mean_b, var_b).expect("overlap");
    check(
        10,
        synthetic < 0.01,
        &format!("overlap of N(0,1) vs N(10,1) samples is {synthetic:.4}"),
    );

    match real_data() {
        None => {
            pass(
                10,
                &format!("synthetic N(0,1)/N(10,1) overlap {synthetic:.2e}"),
            );
            skip(10, "real-data overlap comparison needs BONN_EEG_DIR");
        }
        Some(data) => {
            let matrix = &data.tf[0].1;
            let strong = histogram_report(matrix, "TiTF1", 20)
                .expect("TiTF1 histogram")
                .overlap;
            let weak = histogram_report(matrix, "TiTF3", 20)
                .expect("TiTF3 histogram")
                .overlap;
            check(
                10,
                strong < weak,
                &format!("TiTF1 overlap {strong:.4} not below TiTF3 overlap {weak:.4}"),
            );
            pass(
                10,
                &format!(
                    "synthetic overlap {synthetic:.2e}; real TiTF1 {strong:.4} < TiTF3 {weak:.4}"
                ),
            );
        }
    }
}
