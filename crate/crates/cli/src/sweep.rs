//! Scenario runner: evaluates a sweep over its parameter grid and emits a
//! deterministic CSV table with a JSON metadata sidecar.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::Serialize;

use rindler_core::channel::accelerated_tmsv;
use rindler_core::gaussian::log_negativity;
use rindler_core::modes::GridControl;
use rindler_core::protocols::{
    build_locc_compensation, dense_coding_mutual_information, monte_carlo_dense_coding,
    monte_carlo_teleportation, optimal_fidelity_lower_bound, optimized_fidelity,
    optimized_mutual_information, symmetric_reference_resource, teleportation_fidelity,
    teleportation_fidelity_closed_form,
};

use crate::cache::{fnv1a, load_or_compute_curve};
use crate::config::{ScenarioConfig, SweepKind};

/// Descriptive name -> sweep kind map covering every figure-style output the
/// pipeline reproduces.
pub const SCENARIO_CATALOG: &[(&str, SweepKind)] = &[
    ("overlap-vs-acceleration", SweepKind::AlphaCurve),
    ("entanglement-symmetric-acceleration", SweepKind::Negativity1d),
    ("entanglement-acceleration-plane", SweepKind::Negativity2d),
    ("teleportation-symmetric-acceleration", SweepKind::Fidelity1d),
    ("teleportation-acceleration-plane", SweepKind::Fidelity2d),
    ("teleportation-vs-optimal-bound", SweepKind::Fidelity2d),
    ("dense-coding-symmetric-acceleration", SweepKind::MutualInfo1d),
    ("dense-coding-acceleration-plane", SweepKind::MutualInfo2d),
    ("asymmetry-compensation-comparison", SweepKind::LoccComparison),
];

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub library: String,
    pub version: String,
    /// Unix seconds; excluded from determinism guarantees.
    pub timestamp: u64,
    /// FNV-1a of the CSV table bytes.
    pub table_hash: String,
    pub rows: usize,
    pub curve_cache: String,
    pub config: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct SweepArtifact {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

impl SweepArtifact {
    /// The deterministic CSV table (header plus 12-significant-digit rows).
    pub fn csv_bytes(&self) -> Vec<u8> {
        let mut out = self.header.join(",").into_bytes();
        out.push(b'\n');
        for row in &self.rows {
            let line = row
                .iter()
                .map(|v| format!("{v:.12e}"))
                .collect::<Vec<_>>()
                .join(",");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
        out
    }

    /// Write `<name>.csv` and `<name>.meta.json` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output dir {}", dir.display()))?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&csv_path, self.csv_bytes())
            .with_context(|| format!("writing {}", csv_path.display()))?;
        let meta_path = dir.join(format!("{}.meta.json", self.name));
        let json = serde_json::to_string_pretty(&self.metadata)?;
        std::fs::write(&meta_path, json)
            .with_context(|| format!("writing {}", meta_path.display()))?;
        Ok(())
    }
}

fn coherent_input() -> Matrix2<f64> {
    Matrix2::identity()
}

struct Axes {
    /// (accel_i, accel_ii) pairs in row-major order.
    pairs: Vec<(f64, f64)>,
}

fn axes_for(config: &ScenarioConfig) -> Axes {
    let grid = &config.accel_grid;
    let pairs = if config.sweep.is_two_dimensional() {
        grid.iter()
            .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
            .collect()
    } else {
        grid.iter().map(|&a| (a, a)).collect()
    };
    Axes { pairs }
}

fn header_for(kind: SweepKind, with_mc: bool) -> Vec<&'static str> {
    let mut header: Vec<&'static str> = match kind {
        SweepKind::AlphaCurve => vec!["acceleration", "alpha"],
        SweepKind::Negativity1d => vec!["acceleration", "r", "alpha", "log_negativity"],
        SweepKind::Negativity2d => vec![
            "accel_i",
            "accel_ii",
            "r",
            "alpha_i",
            "alpha_ii",
            "log_negativity",
        ],
        SweepKind::Fidelity1d => vec!["acceleration", "r", "alpha", "fidelity", "lower_bound"],
        SweepKind::Fidelity2d => vec![
            "accel_i",
            "accel_ii",
            "r",
            "alpha_i",
            "alpha_ii",
            "fidelity",
            "fidelity_clipped",
            "lower_bound",
        ],
        SweepKind::MutualInfo1d => vec!["acceleration", "r", "n", "alpha", "mutual_information"],
        SweepKind::MutualInfo2d => vec![
            "accel_i",
            "accel_ii",
            "r",
            "n",
            "alpha_i",
            "alpha_ii",
            "mutual_information",
        ],
        SweepKind::LoccComparison => vec![
            "accel_i",
            "accel_ii",
            "r",
            "n",
            "alpha_i",
            "alpha_ii",
            "epsilon",
            "nu",
            "fidelity",
            "fidelity_optimized",
            "fidelity_reference",
            "mutual_information",
            "mutual_information_optimized",
            "mutual_information_reference",
        ],
    };
    if with_mc && matches!(kind, SweepKind::Fidelity1d | SweepKind::MutualInfo1d) {
        header.push("mc_estimate");
        header.push("mc_std_error");
    }
    header
}

fn evaluate_point(
    kind: SweepKind,
    accel_i: f64,
    accel_ii: f64,
    alpha_i: f64,
    alpha_ii: f64,
    r: f64,
    n: f64,
    samples: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let resource = accelerated_tmsv(alpha_i, alpha_ii, r);
    let row = match kind {
        SweepKind::AlphaCurve => unreachable!("handled separately"),
        SweepKind::Negativity1d => vec![
            accel_i,
            r,
            alpha_i,
            log_negativity(&resource).log_negativity,
        ],
        SweepKind::Negativity2d => vec![
            accel_i,
            accel_ii,
            r,
            alpha_i,
            alpha_ii,
            log_negativity(&resource).log_negativity,
        ],
        SweepKind::Fidelity1d => {
            let fidelity = teleportation_fidelity_closed_form(alpha_i, alpha_ii, r);
            let bound = optimal_fidelity_lower_bound(&resource);
            let mut row = vec![accel_i, r, alpha_i, fidelity, bound];
            if samples > 0 {
                let mc = monte_carlo_teleportation(&resource, samples, seed)?;
                row.push(mc.mean);
                row.push(mc.std_error);
            }
            row
        }
        SweepKind::Fidelity2d => {
            let fidelity = teleportation_fidelity(&resource, &coherent_input())?;
            vec![
                accel_i,
                accel_ii,
                r,
                alpha_i,
                alpha_ii,
                fidelity.fidelity,
                fidelity.fidelity.max(0.5),
                fidelity.lower_bound,
            ]
        }
        SweepKind::MutualInfo1d => {
            let info = dense_coding_mutual_information(&resource, n)?;
            let mut row = vec![accel_i, r, n, alpha_i, info.mutual_information];
            if samples > 0 {
                let mc = monte_carlo_dense_coding(&resource, n, samples, seed)?;
                row.push(mc.mean);
                row.push(mc.std_error);
            }
            row
        }
        SweepKind::MutualInfo2d => {
            let info = dense_coding_mutual_information(&resource, n)?;
            vec![
                accel_i,
                accel_ii,
                r,
                n,
                alpha_i,
                alpha_ii,
                info.mutual_information,
            ]
        }
        SweepKind::LoccComparison => {
            let channel = build_locc_compensation(alpha_i, alpha_ii, r)?;
            let reference = symmetric_reference_resource(alpha_i, alpha_ii, r)?;
            let fidelity = teleportation_fidelity_closed_form(alpha_i, alpha_ii, r);
            let f_opt = optimized_fidelity(alpha_i, alpha_ii, r)?;
            let f_ref = teleportation_fidelity(&reference, &coherent_input())?.fidelity;
            let info = dense_coding_mutual_information(&resource, n)?.mutual_information;
            let info_opt = optimized_mutual_information(alpha_i, alpha_ii, r, n)?;
            let info_ref = dense_coding_mutual_information(&reference, n)?.mutual_information;
            let (nu, _) = rindler_core::gaussian::symplectic_eigenvalues(
                &rindler_core::gaussian::partial_transpose(&resource).covariance,
            );
            vec![
                accel_i,
                accel_ii,
                r,
                n,
                alpha_i,
                alpha_ii,
                channel.epsilon,
                nu,
                fidelity,
                f_opt,
                f_ref,
                info,
                info_opt,
                info_ref,
            ]
        }
    };
    Ok(row)
}

/// Run a scenario end to end. Grid points are evaluated in parallel and
/// assembled in deterministic row-major order.
pub fn run_scenario(config: &ScenarioConfig, cache_dir: Option<&Path>) -> Result<SweepArtifact> {
    let ctrl = GridControl::default()
        .with_points_per_wavelength(config.points_per_wavelength);
    let (curve, cache_status) =
        load_or_compute_curve(&config.family, &ctrl, &config.curve_grid, cache_dir)?;

    let rows: Vec<Vec<f64>> = if config.sweep == SweepKind::AlphaCurve {
        curve.knots().iter().map(|&(a, v)| vec![a, v]).collect()
    } else {
        let axes = axes_for(config);
        let mut jobs = Vec::new();
        for &(accel_i, accel_ii) in &axes.pairs {
            for &r in &config.squeezing {
                jobs.push((accel_i, accel_ii, r));
            }
        }
        let results: Result<Vec<Vec<f64>>> = jobs
            .par_iter()
            .enumerate()
            .map(|(row_index, &(accel_i, accel_ii, r))| {
                let alpha_i = curve.alpha_at(accel_i)?;
                let alpha_ii = curve.alpha_at(accel_ii)?;
                evaluate_point(
                    config.sweep,
                    accel_i,
                    accel_ii,
                    alpha_i,
                    alpha_ii,
                    r,
                    config.photon_number,
                    config.samples,
                    config.seed.wrapping_add(row_index as u64),
                )
                .with_context(|| {
                    format!("at grid point (A_I = {accel_i}, A_II = {accel_ii}, r = {r})")
                })
            })
            .collect();
        results?
    };

    let header = header_for(config.sweep, config.samples > 0);
    for row in &rows {
        debug_assert_eq!(row.len(), header.len());
    }
    let mut artifact = SweepArtifact {
        name: config.out_name(),
        header,
        rows,
        metadata: Metadata {
            library: "rindler-core".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            table_hash: String::new(),
            rows: 0,
            curve_cache: format!("{cache_status:?}").to_lowercase(),
            config: config.echo(),
        },
    };
    artifact.metadata.rows = artifact.rows.len();
    artifact.metadata.table_hash = format!("{:016x}", fnv1a(&artifact.csv_bytes()));
    Ok(artifact)
}
