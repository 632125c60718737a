//! Flat key-value scenario configuration.
//!
//! The format is one `key = value` pair per line; `#` starts a comment.
//! Lists are comma-separated. Unknown or repeated keys are rejected. An
//! empty file yields the pure defaults (the overlap curve at the standard
//! packet parameters m = 0.1, L = 2, Omega0 = 5).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rindler_core::channel::default_curve_grid;
use rindler_core::modes::ModeFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    AlphaCurve,
    Negativity1d,
    Negativity2d,
    Fidelity1d,
    Fidelity2d,
    MutualInfo1d,
    MutualInfo2d,
    LoccComparison,
}

impl SweepKind {
    pub const ALL: [SweepKind; 8] = [
        SweepKind::AlphaCurve,
        SweepKind::Negativity1d,
        SweepKind::Negativity2d,
        SweepKind::Fidelity1d,
        SweepKind::Fidelity2d,
        SweepKind::MutualInfo1d,
        SweepKind::MutualInfo2d,
        SweepKind::LoccComparison,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::AlphaCurve => "alpha_curve",
            SweepKind::Negativity1d => "negativity_1d",
            SweepKind::Negativity2d => "negativity_2d",
            SweepKind::Fidelity1d => "fidelity_1d",
            SweepKind::Fidelity2d => "fidelity_2d",
            SweepKind::MutualInfo1d => "mutual_info_1d",
            SweepKind::MutualInfo2d => "mutual_info_2d",
            SweepKind::LoccComparison => "locc_comparison",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == text)
            .with_context(|| {
                format!(
                    "unknown sweep kind `{text}` (expected one of: {})",
                    Self::ALL.map(|k| k.name()).join(", ")
                )
            })
    }

    pub fn is_two_dimensional(self) -> bool {
        matches!(
            self,
            SweepKind::Negativity2d
                | SweepKind::Fidelity2d
                | SweepKind::MutualInfo2d
                | SweepKind::LoccComparison
        )
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub sweep: SweepKind,
    pub family: ModeFamily,
    /// Acceleration axis (both axes for 2-D sweeps).
    pub accel_grid: Vec<f64>,
    /// Squeezing parameters to sweep.
    pub squeezing: Vec<f64>,
    /// Message-distribution width for dense coding.
    pub photon_number: f64,
    pub points_per_wavelength: u32,
    /// Nodes at which the overlap curve is computed directly.
    pub curve_grid: Vec<f64>,
    /// Monte-Carlo validation samples per point (0 disables the columns).
    pub samples: u64,
    pub seed: u64,
    /// Output basename; defaults to the sweep kind.
    pub out_name: Option<String>,
}

pub const DEFAULT_ACCEL_POINTS: usize = 40;

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64)
        .collect()
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            sweep: SweepKind::AlphaCurve,
            family: ModeFamily::default(),
            accel_grid: linspace(0.0, 1.0, DEFAULT_ACCEL_POINTS),
            squeezing: vec![1.0, 2.0, 3.0],
            photon_number: 10.0,
            points_per_wavelength: 32,
            curve_grid: default_curve_grid(),
            samples: 0,
            seed: 8353,
            out_name: None,
        }
    }
}

impl ScenarioConfig {
    pub fn out_name(&self) -> String {
        self.out_name
            .clone()
            .unwrap_or_else(|| self.sweep.name().to_string())
    }

    /// Normalized key-value echo of every field, for metadata and `validate`.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let list = |values: &[f64]| {
            values
                .iter()
                .map(|v| format!("{v}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut map = BTreeMap::new();
        map.insert("sweep".into(), self.sweep.name().into());
        map.insert("mass".into(), format!("{}", self.family.mass));
        map.insert("packet_width".into(), format!("{}", self.family.width));
        map.insert("omega0".into(), format!("{}", self.family.omega0));
        map.insert("accel_grid".into(), list(&self.accel_grid));
        map.insert("squeezing".into(), list(&self.squeezing));
        map.insert("photon_number".into(), format!("{}", self.photon_number));
        map.insert(
            "points_per_wavelength".into(),
            format!("{}", self.points_per_wavelength),
        );
        map.insert("curve_grid".into(), list(&self.curve_grid));
        map.insert("samples".into(), format!("{}", self.samples));
        map.insert("seed".into(), format!("{}", self.seed));
        map.insert("out_name".into(), self.out_name());
        map
    }

    fn validate(&self) -> Result<()> {
        if !(self.family.mass > 0.0) {
            bail!("mass: must be positive, got {}", self.family.mass);
        }
        if !(self.family.width > 0.0) {
            bail!("packet_width: must be positive, got {}", self.family.width);
        }
        if !(self.family.omega0 > self.family.mass) {
            bail!(
                "omega0: must exceed the mass ({} <= {})",
                self.family.omega0,
                self.family.mass
            );
        }
        if self.points_per_wavelength < 16 {
            bail!(
                "points_per_wavelength: minimum 16, got {}",
                self.points_per_wavelength
            );
        }
        check_grid("curve_grid", &self.curve_grid, 0.03 - 1e-12, 1.0 + 1e-12)?;
        let curve_max = *self.curve_grid.last().unwrap();
        check_grid("accel_grid", &self.accel_grid, 0.0, curve_max + 1e-12)?;
        if self.squeezing.is_empty() {
            bail!("squeezing: need at least one value");
        }
        for &r in &self.squeezing {
            if !(r >= 0.0) {
                bail!("squeezing: must be non-negative, got {r}");
            }
            if self.sweep == SweepKind::LoccComparison && r == 0.0 {
                bail!("squeezing: locc_comparison needs positive squeezing");
            }
        }
        if !(self.photon_number > 0.0) {
            bail!("photon_number: must be positive, got {}", self.photon_number);
        }
        Ok(())
    }
}

fn check_grid(key: &str, grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.is_empty() {
        bail!("{key}: empty grid");
    }
    for pair in grid.windows(2) {
        if pair[1] == pair[0] {
            bail!("{key}: duplicate value {}", pair[0]);
        }
        if pair[1] < pair[0] {
            bail!("{key}: values must ascend ({} after {})", pair[1], pair[0]);
        }
    }
    for &v in grid {
        if !(lo..=hi).contains(&v) {
            bail!("{key}: {v} outside [{lo}, {hi}]");
        }
    }
    Ok(())
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse()
        .with_context(|| format!("{key}: not a number: `{value}`"))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|part| parse_f64(key, part))
        .collect()
}

/// Parse and validate the documented flat key-value format.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut config = ScenarioConfig::default();
    let mut seen = BTreeMap::new();
    let mut accel_range: (Option<f64>, Option<f64>, Option<usize>) = (None, None, None);
    let mut explicit_grid = false;

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected `key = value`, got `{raw}`", line_no + 1))?;
        let key = key.trim();
        let value = value.trim();
        if let Some(previous) = seen.insert(key.to_string(), line_no + 1) {
            bail!("line {}: key `{key}` already set on line {previous}", line_no + 1);
        }
        match key {
            "sweep" => config.sweep = SweepKind::parse(value)?,
            "mass" => config.family.mass = parse_f64(key, value)?,
            "packet_width" => config.family.width = parse_f64(key, value)?,
            "omega0" => config.family.omega0 = parse_f64(key, value)?,
            "accel_min" => accel_range.0 = Some(parse_f64(key, value)?),
            "accel_max" => accel_range.1 = Some(parse_f64(key, value)?),
            "accel_points" => {
                accel_range.2 = Some(
                    value
                        .parse()
                        .with_context(|| format!("{key}: not a count: `{value}`"))?,
                )
            }
            "accel_grid" => {
                config.accel_grid = parse_list(key, value)?;
                explicit_grid = true;
            }
            "squeezing" => config.squeezing = parse_list(key, value)?,
            "photon_number" => config.photon_number = parse_f64(key, value)?,
            "points_per_wavelength" => {
                config.points_per_wavelength = value
                    .parse()
                    .with_context(|| format!("{key}: not a count: `{value}`"))?
            }
            "curve_grid" => config.curve_grid = parse_list(key, value)?,
            "samples" => {
                config.samples = value
                    .parse()
                    .with_context(|| format!("{key}: not a count: `{value}`"))?
            }
            "seed" => {
                config.seed = value
                    .parse()
                    .with_context(|| format!("{key}: not a seed: `{value}`"))?
            }
            "out_name" => config.out_name = Some(value.to_string()),
            other => bail!("line {}: unknown key `{other}`", line_no + 1),
        }
    }

    match accel_range {
        (None, None, None) => {}
        (lo, hi, points) if explicit_grid => {
            let _ = (lo, hi, points);
            bail!("accel_grid cannot be combined with accel_min/accel_max/accel_points");
        }
        (lo, hi, points) => {
            let lo = lo.unwrap_or(0.0);
            let hi = hi.unwrap_or(1.0);
            let points = points.unwrap_or(DEFAULT_ACCEL_POINTS);
            if points < 2 {
                bail!("accel_points: need at least 2, got {points}");
            }
            if !(hi > lo) {
                bail!("accel_max: must exceed accel_min ({hi} <= {lo})");
            }
            config.accel_grid = linspace(lo, hi, points);
        }
    }

    config.validate()?;
    Ok(config)
}

/// Read, parse, and validate a config file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_pure_defaults() {
        let config = parse_config("").unwrap();
        assert_eq!(config, ScenarioConfig::default());
        assert_eq!(config.sweep, SweepKind::AlphaCurve);
        assert_eq!(config.family.mass, 0.1);
        assert_eq!(config.family.width, 2.0);
        assert_eq!(config.family.omega0, 5.0);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let config = parse_config("# a comment\n\nsweep = fidelity_1d # trailing\n").unwrap();
        assert_eq!(config.sweep, SweepKind::Fidelity1d);
    }

    #[test]
    fn negative_mass_rejected_naming_the_key() {
        let err = parse_config("mass = -0.1").unwrap_err().to_string();
        assert!(err.contains("mass"), "{err}");
    }

    #[test]
    fn duplicate_accelerations_rejected() {
        let err = parse_config("accel_grid = 0.1,0.1,0.2")
            .unwrap_err()
            .to_string();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = parse_config("masss = 0.1").unwrap_err().to_string();
        assert!(err.contains("unknown key"), "{err}");
        assert!(err.contains("masss"), "{err}");
    }

    #[test]
    fn repeated_keys_rejected() {
        let err = parse_config("mass = 0.1\nmass = 0.2").unwrap_err().to_string();
        assert!(err.contains("already set"), "{err}");
    }

    #[test]
    fn accel_range_expands_to_grid() {
        let config =
            parse_config("accel_min = 0.0\naccel_max = 0.5\naccel_points = 6").unwrap();
        assert_eq!(config.accel_grid.len(), 6);
        assert_eq!(config.accel_grid[0], 0.0);
        assert_eq!(*config.accel_grid.last().unwrap(), 0.5);
    }

    #[test]
    fn range_and_grid_conflict() {
        let err = parse_config("accel_grid = 0.1,0.2\naccel_min = 0.0")
            .unwrap_err()
            .to_string();
        assert!(err.contains("cannot be combined"), "{err}");
    }

    #[test]
    fn accelerations_beyond_curve_rejected() {
        let err = parse_config("accel_grid = 0.5,1.5").unwrap_err().to_string();
        assert!(err.contains("accel_grid"), "{err}");
    }

    #[test]
    fn locc_needs_positive_squeezing() {
        let err = parse_config("sweep = locc_comparison\nsqueezing = 0.0,1.0")
            .unwrap_err()
            .to_string();
        assert!(err.contains("squeezing"), "{err}");
    }

    #[test]
    fn sweep_kind_names_round_trip() {
        for kind in SweepKind::ALL {
            assert_eq!(SweepKind::parse(kind.name()).unwrap(), kind);
        }
        assert!(SweepKind::parse("negativity").is_err());
    }

    #[test]
    fn echo_lists_every_key() {
        let echo = ScenarioConfig::default().echo();
        for key in [
            "sweep",
            "mass",
            "packet_width",
            "omega0",
            "accel_grid",
            "squeezing",
            "photon_number",
            "points_per_wavelength",
            "curve_grid",
            "samples",
            "seed",
            "out_name",
        ] {
            assert!(echo.contains_key(key), "missing {key}");
        }
    }
}
