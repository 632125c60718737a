//! Artifact-level behavior: cache reuse, file layout, metadata.

use rindler_cli::cache::{load_or_compute_curve, CacheStatus};
use rindler_cli::config::parse_config;
use rindler_cli::sweep::run_scenario;
use rindler_core::modes::{GridControl, ModeFamily};

#[test]
fn curve_cache_misses_then_hits_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let family = ModeFamily::default();
    let ctrl = GridControl::default();
    let grid = [0.1, 0.5, 1.0];

    let (fresh, status) = load_or_compute_curve(&family, &ctrl, &grid, Some(dir.path())).unwrap();
    assert_eq!(status, CacheStatus::Miss);
    let (cached, status) = load_or_compute_curve(&family, &ctrl, &grid, Some(dir.path())).unwrap();
    assert_eq!(status, CacheStatus::Hit);
    assert_eq!(fresh.knots(), cached.knots(), "cache must round-trip exactly");

    // A different resolution is a different cache entry.
    let (_, status) = load_or_compute_curve(
        &family,
        &ctrl.with_points_per_wavelength(48),
        &grid,
        Some(dir.path()),
    )
    .unwrap();
    assert_eq!(status, CacheStatus::Miss);
}

#[test]
fn two_dimensional_sweep_reuses_the_cached_curve() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(
        "sweep = negativity_2d\naccel_points = 12\nsqueezing = 1.0\ncurve_grid = 0.1,0.5,1.0",
    )
    .unwrap();
    let first = run_scenario(&config, Some(dir.path())).unwrap();
    assert_eq!(first.metadata.curve_cache, "miss");
    assert_eq!(first.rows.len(), 12 * 12);
    // 144 grid points, but the curve file is the only overlap computation.
    let second = run_scenario(&config, Some(dir.path())).unwrap();
    assert_eq!(second.metadata.curve_cache, "hit");
    assert_eq!(first.csv_bytes(), second.csv_bytes());
}

#[test]
fn sweep_writes_csv_and_metadata_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(
        "sweep = alpha_curve\ncurve_grid = 0.1,0.5,1.0\nout_name = overlap_test",
    )
    .unwrap();
    let artifact = run_scenario(&config, None).unwrap();
    artifact.write(dir.path()).unwrap();

    let csv = std::fs::read_to_string(dir.path().join("overlap_test.csv")).unwrap();
    assert!(csv.starts_with("acceleration,alpha\n"));
    assert_eq!(csv.lines().count(), 1 + artifact.rows.len());

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("overlap_test.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["config"]["sweep"], "alpha_curve");
    assert_eq!(meta["rows"], artifact.rows.len());
    assert_eq!(meta["table_hash"], artifact.metadata.table_hash);
    assert!(meta["timestamp"].as_u64().is_some());
}

#[test]
fn locc_sweep_optimized_column_dominates_under_asymmetry() {
    let config = parse_config(
        "sweep = locc_comparison\naccel_points = 6\nsqueezing = 3.5\ncurve_grid = 0.1,0.3,0.5,0.7,1.0",
    )
    .unwrap();
    let artifact = run_scenario(&config, None).unwrap();
    let col = |name: &str| artifact.header.iter().position(|&h| h == name).unwrap();
    let (ai, aii) = (col("alpha_i"), col("alpha_ii"));
    let (raw_f, opt_f) = (col("fidelity"), col("fidelity_optimized"));
    let (raw_h, opt_h) = (col("mutual_information"), col("mutual_information_optimized"));
    let mut asymmetric_rows = 0;
    for row in &artifact.rows {
        if (row[ai] - row[aii]).abs() >= 0.1 {
            asymmetric_rows += 1;
            assert!(
                row[opt_f] >= row[raw_f],
                "optimized fidelity below raw on an asymmetric row: {row:?}"
            );
            assert!(
                row[opt_h] >= row[raw_h],
                "optimized information below raw on an asymmetric row: {row:?}"
            );
        }
    }
    assert!(asymmetric_rows > 10, "grid should contain asymmetric rows");
}

#[test]
fn mutual_info_sweep_carries_monte_carlo_columns_when_asked() {
    let config = parse_config(
        "sweep = mutual_info_1d\naccel_grid = 0.0,1.0\nsqueezing = 1.0\nsamples = 12000\ncurve_grid = 0.1,1.0",
    )
    .unwrap();
    let artifact = run_scenario(&config, None).unwrap();
    assert!(artifact.header.contains(&"mc_estimate"));
    let mc_col = artifact.header.iter().position(|&h| h == "mc_estimate").unwrap();
    let h_col = artifact
        .header
        .iter()
        .position(|&h| h == "mutual_information")
        .unwrap();
    let err_col = artifact.header.iter().position(|&h| h == "mc_std_error").unwrap();
    for row in &artifact.rows {
        assert!(
            (row[mc_col] - row[h_col]).abs() <= 4.0 * row[err_col] + 5e-3,
            "MC column disagrees with the closed form: {row:?}"
        );
    }
}
