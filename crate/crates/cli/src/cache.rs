//! Disk cache for computed overlap curves, keyed by the packet parameters
//! and grid resolution.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rindler_core::channel::AlphaCurve;
use rindler_core::modes::{GridControl, ModeFamily};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "RINDLER_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    Disabled,
}

/// 64-bit FNV-1a, used for cache keys and table checksums.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn curve_cache_file(family: &ModeFamily, ctrl: &GridControl, grid: &[f64]) -> String {
    let mut key = format!(
        "m={:.17e};L={:.17e};omega0={:.17e};ppw={};",
        family.mass, family.width, family.omega0, ctrl.points_per_wavelength
    );
    for a in grid {
        key.push_str(&format!("{a:.17e},"));
    }
    format!("alpha-curve-{:016x}.csv", fnv1a(key.as_bytes()))
}

/// Resolve the cache directory: an explicit flag wins, then the environment
/// variable; neither means caching is off.
pub fn cache_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
}

/// Load the curve from the cache or compute and store it.
pub fn load_or_compute_curve(
    family: &ModeFamily,
    ctrl: &GridControl,
    grid: &[f64],
    dir: Option<&Path>,
) -> Result<(AlphaCurve, CacheStatus)> {
    let Some(dir) = dir else {
        let curve = AlphaCurve::compute(family, ctrl, grid)?;
        return Ok((curve, CacheStatus::Disabled));
    };
    let path = dir.join(curve_cache_file(family, ctrl, grid));
    if let Ok(text) = std::fs::read_to_string(&path) {
        let curve = AlphaCurve::from_csv(&text)
            .with_context(|| format!("corrupt curve cache {}", path.display()))?;
        return Ok((curve, CacheStatus::Hit));
    }
    let curve = AlphaCurve::compute(family, ctrl, grid)?;
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating cache dir {}", dir.display()))?;
    std::fs::write(&path, curve.to_csv())
        .with_context(|| format!("writing curve cache {}", path.display()))?;
    Ok((curve, CacheStatus::Miss))
}
