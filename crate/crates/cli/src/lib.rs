//! Scenario configuration, caching, and sweep execution behind the `rindler`
//! binary.

pub mod cache;
pub mod config;
pub mod sweep;

use anyhow::Result;
use rindler_core::modes::{compute_overlaps, GridControl, ModeFamily, MIN_DIRECT_ACCELERATION};

/// The overlap alpha(A) for a single acceleration: exact 1 at rest, a direct
/// overlap computation inside the supported box, and the interpolated curve
/// below it (where the packet center escapes to infinity).
pub fn resolve_alpha(
    accel: f64,
    family: &ModeFamily,
    ctrl: &GridControl,
    curve_grid: &[f64],
    cache_dir: Option<&std::path::Path>,
) -> Result<f64> {
    if accel == 0.0 {
        return Ok(1.0);
    }
    if accel >= MIN_DIRECT_ACCELERATION {
        let coeffs = compute_overlaps(accel, accel, family, ctrl)?;
        return Ok(coeffs.alpha_i.re);
    }
    let (curve, _) = cache::load_or_compute_curve(family, ctrl, curve_grid, cache_dir)?;
    Ok(curve.alpha_at(accel)?)
}
