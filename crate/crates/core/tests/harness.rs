use rnla::harness::experiment::{run_experiment, Algorithm, ExperimentConfig, InstanceSpec, Params};
use rnla::harness::gen::{gen_matrix, MatrixFamily};
use rnla::harness::io::{read_matrix, write_matrix};
use rnla::harness::report::Report;
use rnla::linalg::{frobenius_norm, thin_svd};
use rnla::matmul::expected_frobenius_error;
use rnla::sampling::optimal_probs;
use rnla::DenseMatrix;

fn matmul_config(trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        algorithm: Algorithm::Matmul,
        instance: Some(InstanceSpec::Generated {
            generator: MatrixFamily::Gaussian { m: 3, n: 6 },
            seed: 2,
        }),
        params: Params {
            c: Some(3),
            ..Params::default()
        },
        trials,
        base_seed: 100,
        diagnostics: true,
    }
}

#[test]
fn identity_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("i.mtx");
    write_matrix(&p, &DenseMatrix::identity(2)).unwrap();
    let first = std::fs::read(&p).unwrap();
    write_matrix(&p, &read_matrix(&p).unwrap()).unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), first);
    assert!(String::from_utf8(first)
        .unwrap()
        .starts_with("%%MatrixMarket matrix array real general\n2 2\n"));
}

#[test]
fn random_round_trip_is_exact() {
    let a = gen_matrix(&MatrixFamily::Gaussian { m: 9, n: 7 }, 4)
        .unwrap()
        .a
        .scale(1e-7);
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.mtx", "a.bin"] {
        let p = dir.path().join(name);
        write_matrix(&p, &a).unwrap();
        assert_eq!(read_matrix(&p).unwrap(), a, "{name}");
    }
}

#[test]
fn matmul_monte_carlo_within_expected_error() {
    let config = matmul_config(10_000);
    let report = run_experiment(&config).unwrap();
    let inst = gen_matrix(&MatrixFamily::Gaussian { m: 3, n: 6 }, 2).unwrap();
    let bt = inst.a.transpose();
    let bound = expected_frobenius_error(&inst.a, &bt, 3, &optimal_probs(&inst.a, &bt).unwrap()).unwrap();
    let s = report.aggregate.metrics["err_fro_sq"];
    assert!(s.mean <= bound + 3.0 * s.std_err, "{} vs {bound}", s.mean);
    assert_eq!(report.aggregate.completed, 10_000);
}

#[test]
fn thread_count_does_not_change_report() {
    let config = matmul_config(64);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = single
        .install(|| run_experiment(&config))
        .unwrap()
        .without_timing();
    let b = run_experiment(&config).unwrap().without_timing();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn report_json_round_trip() {
    let report = run_experiment(&matmul_config(5)).unwrap();
    let back = Report::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.meta.rng, rnla::rng::RNG_ALGORITHM);
    let v: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    for key in ["config", "trials", "aggregate", "meta"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn newer_schema_is_rejected() {
    let report = run_experiment(&matmul_config(1)).unwrap();
    let text = report
        .to_json()
        .unwrap()
        .replace("\"schema_version\": 1", "\"schema_version\": 2");
    assert!(Report::from_json(&text).is_err());
}

#[test]
fn generated_low_rank_tail_is_tiny() {
    let fam = MatrixFamily::LowrankPlusNoise {
        m: 128,
        n: 64,
        rank: 4,
        decay: 0.7,
        tail: 1e-3,
        noise: 0.0,
    };
    let a = gen_matrix(&fam, 1).unwrap().a;
    let svd = thin_svd(&a).unwrap();
    assert!((svd.sigma[0] - 1.0).abs() < 1e-10);
    assert!((svd.sigma[3] - 0.343).abs() < 1e-10);
    assert!((svd.sigma[4] - 1e-3).abs() < 1e-10);
    let tail: f64 = svd.sigma.iter().skip(4).map(|s| s * s).sum::<f64>().sqrt();
    assert!(tail < 1e-2 * frobenius_norm(&a));
}
