//! Command-line front end for the accelerated-observer protocol pipeline.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nalgebra::Matrix2;
use serde_json::json;

use rindler_cli::cache::cache_dir;
use rindler_cli::config::{load_config, ScenarioConfig};
use rindler_cli::resolve_alpha;
use rindler_cli::sweep::run_scenario;
use rindler_core::channel::accelerated_tmsv;
use rindler_core::gaussian::{log_negativity, partial_transpose, symplectic_eigenvalues};
use rindler_core::modes::{
    build_inertial_mode, build_rindler_mode, compute_overlaps, project_positive_frequency,
    GridControl, Wedge,
};
use rindler_core::protocols::{
    build_locc_compensation, decompose_locc, dense_coding_mutual_information,
    monte_carlo_dense_coding, monte_carlo_teleportation, optimized_fidelity,
    optimized_mutual_information, symmetric_reference_resource, teleportation_fidelity,
    LoccSide,
};

#[derive(Parser)]
#[command(
    name = "rindler",
    about = "Wavepacket overlaps, acceleration channels, and continuous-variable protocol metrics for uniformly accelerated observers",
    version
)]
struct Cli {
    /// Scenario/parameter config file (flat key = value format).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for sweep artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the config seed for Monte-Carlo validation.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overlap-curve cache directory (falls back to $RINDLER_CACHE_DIR).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PointArgs {
    /// Proper acceleration of the sender's packet.
    #[arg(long, default_value_t = 0.1)]
    accel_i: f64,
    /// Proper acceleration of the receiver's packet.
    #[arg(long, default_value_t = 0.1)]
    accel_ii: f64,
    /// Squeezing parameter of the resource.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Bogoliubov overlap coefficients at given accelerations.
    Overlaps {
        /// Proper acceleration (within the directly computable box).
        #[arg(long)]
        accel: f64,
        /// Second acceleration; defaults to the first.
        #[arg(long)]
        accel_ii: Option<f64>,
        /// Dump the sampled wavepackets as CSV files into this directory.
        #[arg(long)]
        dump_modes: Option<PathBuf>,
    },
    /// Logarithmic negativity of the accelerated resource state.
    Negativity {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Teleportation fidelity through the accelerated resource.
    Teleport {
        #[command(flatten)]
        point: PointArgs,
        /// Monte-Carlo validation samples (0 = closed form only).
        #[arg(long, default_value_t = 0)]
        samples: u64,
    },
    /// Dense-coding mutual information through the accelerated resource.
    Densecode {
        #[command(flatten)]
        point: PointArgs,
        /// Message-distribution width.
        #[arg(long, default_value_t = 10.0)]
        n: f64,
        #[arg(long, default_value_t = 0)]
        samples: u64,
    },
    /// Asymmetry-compensating LOCC step and compensated metrics.
    Optimize {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 10.0)]
        n: f64,
    },
    /// Run a configured sweep and write CSV + metadata artifacts.
    Sweep,
    /// Parse, validate, and echo the config.
    Validate,
}

fn base_config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn grid_control(config: &ScenarioConfig) -> GridControl {
    GridControl::default().with_points_per_wavelength(config.points_per_wavelength)
}

fn alphas_for(
    cli: &Cli,
    config: &ScenarioConfig,
    accel_i: f64,
    accel_ii: f64,
) -> Result<(f64, f64)> {
    let ctrl = grid_control(config);
    let dir = cache_dir(cli.cache.as_deref());
    let alpha_i = resolve_alpha(accel_i, &config.family, &ctrl, &config.curve_grid, dir.as_deref())?;
    let alpha_ii = if accel_ii == accel_i {
        alpha_i
    } else {
        resolve_alpha(accel_ii, &config.family, &ctrl, &config.curve_grid, dir.as_deref())?
    };
    Ok((alpha_i, alpha_ii))
}

fn print_json(value: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let config = base_config(&cli)?;

    match &cli.command {
        Command::Overlaps {
            accel,
            accel_ii,
            dump_modes,
        } => {
            let accel_ii = accel_ii.unwrap_or(*accel);
            let ctrl = grid_control(&config);
            let coeffs = compute_overlaps(*accel, accel_ii, &config.family, &ctrl)?;
            if let Some(dir) = dump_modes {
                dump_mode_profiles(&config, &ctrl, *accel, dir)?;
            }
            print_json(json!({
                "accel_i": accel,
                "accel_ii": accel_ii,
                "alpha_i": coeffs.alpha_i.re,
                "alpha_ii": coeffs.alpha_ii.re,
                "beta_ratio_i": coeffs.beta_ratio_i(),
                "beta_ratio_ii": coeffs.beta_ratio_ii(),
            }))
        }
        Command::Negativity { point } => {
            let (alpha_i, alpha_ii) = alphas_for(&cli, &config, point.accel_i, point.accel_ii)?;
            let state = accelerated_tmsv(alpha_i, alpha_ii, point.r);
            let report = log_negativity(&state);
            print_json(json!({
                "accel_i": point.accel_i,
                "accel_ii": point.accel_ii,
                "r": point.r,
                "alpha_i": alpha_i,
                "alpha_ii": alpha_ii,
                "log_negativity": report.log_negativity,
                "nu_pt_min": report.nu_pt_min,
                "delta": report.delta,
            }))
        }
        Command::Teleport { point, samples } => {
            let (alpha_i, alpha_ii) = alphas_for(&cli, &config, point.accel_i, point.accel_ii)?;
            let state = accelerated_tmsv(alpha_i, alpha_ii, point.r);
            let result = teleportation_fidelity(&state, &Matrix2::identity())?;
            let mut out = json!({
                "accel_i": point.accel_i,
                "accel_ii": point.accel_ii,
                "r": point.r,
                "alpha_i": alpha_i,
                "alpha_ii": alpha_ii,
                "fidelity": result.fidelity,
                "lower_bound": result.lower_bound,
                "classical_threshold_exceeded": result.classical_threshold_exceeded,
            });
            if *samples > 0 {
                let mc = monte_carlo_teleportation(&state, *samples, config.seed)?;
                out["mc_fidelity"] = json!(mc.mean);
                out["mc_std_error"] = json!(mc.std_error);
            }
            print_json(out)
        }
        Command::Densecode { point, n, samples } => {
            let (alpha_i, alpha_ii) = alphas_for(&cli, &config, point.accel_i, point.accel_ii)?;
            let state = accelerated_tmsv(alpha_i, alpha_ii, point.r);
            let result = dense_coding_mutual_information(&state, *n)?;
            let mut out = json!({
                "accel_i": point.accel_i,
                "accel_ii": point.accel_ii,
                "r": point.r,
                "n": n,
                "alpha_i": alpha_i,
                "alpha_ii": alpha_ii,
                "mutual_information": result.mutual_information,
                "v_q_plus": result.v_q_plus,
                "v_p_minus": result.v_p_minus,
            });
            if *samples > 0 {
                let mc = monte_carlo_dense_coding(&state, *n, *samples, config.seed)?;
                out["mc_mutual_information"] = json!(mc.mean);
                out["mc_std_error"] = json!(mc.std_error);
            }
            print_json(out)
        }
        Command::Optimize { point, n } => {
            let (alpha_i, alpha_ii) = alphas_for(&cli, &config, point.accel_i, point.accel_ii)?;
            let state = accelerated_tmsv(alpha_i, alpha_ii, point.r);
            let channel = build_locc_compensation(alpha_i, alpha_ii, point.r)?;
            let (transmissivity, side) = decompose_locc(&channel);
            let reference = symmetric_reference_resource(alpha_i, alpha_ii, point.r)?;
            let (nu, _) = symplectic_eigenvalues(&partial_transpose(&state).covariance);
            print_json(json!({
                "accel_i": point.accel_i,
                "accel_ii": point.accel_ii,
                "r": point.r,
                "n": n,
                "alpha_i": alpha_i,
                "alpha_ii": alpha_ii,
                "epsilon": channel.epsilon,
                "theta": channel.theta,
                "transmissivity": transmissivity,
                "attenuated_side": match side { LoccSide::I => "I", LoccSide::II => "II" },
                "nu_pt_min": nu,
                "fidelity": teleportation_fidelity(&state, &Matrix2::identity())?.fidelity,
                "fidelity_optimized": optimized_fidelity(alpha_i, alpha_ii, point.r)?,
                "fidelity_reference": teleportation_fidelity(&reference, &Matrix2::identity())?.fidelity,
                "mutual_information": dense_coding_mutual_information(&state, *n)?.mutual_information,
                "mutual_information_optimized": optimized_mutual_information(alpha_i, alpha_ii, point.r, *n)?,
                "mutual_information_reference": dense_coding_mutual_information(&reference, *n)?.mutual_information,
            }))
        }
        Command::Sweep => {
            let dir = cache_dir(cli.cache.as_deref());
            let artifact = run_scenario(&config, dir.as_deref())?;
            artifact.write(&cli.out)?;
            eprintln!(
                "wrote {} rows to {}/{}.csv (table hash {})",
                artifact.rows.len(),
                cli.out.display(),
                artifact.name,
                artifact.metadata.table_hash
            );
            Ok(())
        }
        Command::Validate => {
            for (key, value) in config.echo() {
                println!("{key} = {value}");
            }
            Ok(())
        }
    }
}

/// Write the sampled inertial and accelerated packets (and their projected
/// versions) for one acceleration as debug CSVs.
fn dump_mode_profiles(
    config: &ScenarioConfig,
    ctrl: &GridControl,
    accel: f64,
    dir: &PathBuf,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    // Mirror the overlap pipeline, which admits the full acceleration box.
    let relaxed = ctrl.with_horizon_ratio(0.0);
    let phi_spec = config.family.inertial_spec(Wedge::I, 1.0 / accel);
    let psi_spec = config.family.rindler_spec(Wedge::I, accel);
    for (label, mode) in [
        ("inertial", build_inertial_mode(&phi_spec, &relaxed)?),
        ("accelerated", build_rindler_mode(&psi_spec, &relaxed)?),
    ] {
        let raw = std::fs::File::create(dir.join(format!("{label}.csv")))?;
        mode.write_csv(std::io::BufWriter::new(raw))?;
        let (projected, _) = project_positive_frequency(&mode)?;
        let file = std::fs::File::create(dir.join(format!("{label}_projected.csv")))?;
        projected.write_csv(std::io::BufWriter::new(file))?;
    }
    Ok(())
}
