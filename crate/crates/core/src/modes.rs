//! Localized wavepacket modes in the inertial and uniformly accelerated
//! charts, Klein-Gordon inner products, positive-frequency projection, and
//! the Bogoliubov overlap coefficients.
//!
//! Conventions:
//! - The t = 0 and eta = 0 slices coincide, and on that slice the Rindler
//!   spatial coordinate chi equals the inertial x, so both charts sample the
//!   same axis and the Klein-Gordon product `i int dx (a* d_t b - d_t a* b)`
//!   serves both.
//! - The accelerated packet's `d_tau psi = -/+ i Omega0 psi` condition is
//!   anchored at the packet center; converting through the chart at eta = 0
//!   gives `d_t psi = -i Omega0 (x0/chi) psi` with the signed ratio positive
//!   in both wedges (the wedge-II mode is the mirror image of wedge I, which
//!   keeps its Klein-Gordon norm positive).
//! - Grids are uniform in x over `[x0 e^{-s_l}, x0 e^{+s_r}]` with the log
//!   radii chosen so the envelope is below 1e-10 of its peak at the ends.
//!   For accelerated packets the right edge is additionally capped at the
//!   Bessel turning point `chi = Omega0 / (A m)`, beyond which the radial
//!   profile grows exponentially instead of decaying; the cap only binds for
//!   `A * width` large, where the envelope has not yet died out there.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::special::ImagOrderBessel;

/// Rindler wedge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wedge {
    I,
    II,
}

impl Wedge {
    /// The `+/-` sign carried by the packet amplitude.
    pub fn sign(self) -> f64 {
        match self {
            Wedge::I => 1.0,
            Wedge::II => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Minkowski,
    Rindler,
}

/// Parameters of one wavepacket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub wedge: Wedge,
    /// Center position; positive in wedge I, negative in wedge II.
    pub x0: f64,
    /// Packet width L.
    pub width: f64,
    /// Central frequency Omega0 (must exceed the mass).
    pub omega0: f64,
    /// Field mass m >= 0.
    pub mass: f64,
    /// Proper acceleration A of the packet center; 0 for inertial packets.
    pub acceleration: f64,
    pub chart: Chart,
}

/// Shared packet-shape parameters (mass, width, central frequency) from which
/// per-wedge specs are derived. Defaults are m = 0.1, L = 2, Omega0 = 5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFamily {
    pub mass: f64,
    pub width: f64,
    pub omega0: f64,
}

impl Default for ModeFamily {
    fn default() -> Self {
        Self {
            mass: 0.1,
            width: 2.0,
            omega0: 5.0,
        }
    }
}

impl ModeFamily {
    /// Inertial packet centered a distance `center` from the origin.
    pub fn inertial_spec(&self, wedge: Wedge, center: f64) -> ModeSpec {
        ModeSpec {
            wedge,
            x0: wedge.sign() * center,
            width: self.width,
            omega0: self.omega0,
            mass: self.mass,
            acceleration: 0.0,
            chart: Chart::Minkowski,
        }
    }

    /// Accelerated packet with proper acceleration `accel` (center at 1/accel).
    pub fn rindler_spec(&self, wedge: Wedge, accel: f64) -> ModeSpec {
        ModeSpec {
            wedge,
            x0: wedge.sign() / accel,
            width: self.width,
            omega0: self.omega0,
            mass: self.mass,
            acceleration: accel,
            chart: Chart::Rindler,
        }
    }
}

/// Grid and validation controls for mode construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridControl {
    /// Samples per central wavelength `2 pi / sqrt(Omega0^2 - m^2)`.
    pub points_per_wavelength: u32,
    /// Horizon-distance gate: require `1/A >= horizon_ratio * width` for
    /// accelerated packets. Set to 0 to disable.
    pub horizon_ratio: f64,
    /// Rigid shift of the chart origin (and with it the packet) along x;
    /// overlaps are invariant under it.
    pub origin_offset: f64,
}

impl Default for GridControl {
    fn default() -> Self {
        Self {
            points_per_wavelength: 32,
            horizon_ratio: 5.0,
            origin_offset: 0.0,
        }
    }
}

impl GridControl {
    pub fn with_horizon_ratio(mut self, ratio: f64) -> Self {
        self.horizon_ratio = ratio;
        self
    }

    pub fn with_points_per_wavelength(mut self, ppw: u32) -> Self {
        self.points_per_wavelength = ppw;
        self
    }

    pub fn with_origin_offset(mut self, offset: f64) -> Self {
        self.origin_offset = offset;
        self
    }
}

// Log-radius multipliers (in units of width/x0) placing the envelope below
// 1e-10 of peak at the grid ends: exp(-2 * 3.7^2) ~ 1.3e-12 on the right,
// exp(-2 * 4.0^2) ~ 1.3e-14 on the left (the left end also carries the x0/chi
// derivative factor).
const SUPPORT_LOG_RADIUS_RIGHT: f64 = 3.7;
const SUPPORT_LOG_RADIUS_LEFT: f64 = 4.0;
// The accelerated profile oscillates at the blueshifted local wavenumber
// nu/chi; the grid must resolve it wherever the envelope is above ~1e-7
// (exp(-2 * 2.84^2)), or the aliased tail leaks into the overlaps.
const ALIAS_LOG_RADIUS: f64 = 2.84;

/// Discretized Cauchy data of a mode on the t = 0 slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMode {
    pub spec: ModeSpec,
    /// Strictly increasing, uniform; positive for wedge-I coordinates.
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Inertial-time derivative on the slice.
    pub t_derivative: Vec<Complex64>,
    /// Klein-Gordon norm before unit normalization.
    pub kg_norm: f64,
}

impl SampledMode {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    pub fn peak_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// The complex-conjugate mode (also a solution; its KG norm is negated).
    pub fn conjugated(&self) -> Self {
        Self {
            spec: self.spec,
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
            t_derivative: self.t_derivative.iter().map(|v| v.conj()).collect(),
            kg_norm: -self.kg_norm,
        }
    }

    /// Mirror through the origin: maps a wedge-I mode to its wedge-II twin.
    fn mirrored(&self, spec: ModeSpec) -> Self {
        Self {
            spec,
            grid: self.grid.iter().rev().map(|x| -x).collect(),
            values: self.values.iter().rev().map(|v| -v).collect(),
            t_derivative: self.t_derivative.iter().rev().map(|v| -v).collect(),
            kg_norm: self.kg_norm,
        }
    }

    /// Debug dump: `coordinate, re(value), im(value), re(dt), im(dt)`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "coordinate,re_value,im_value,re_dt,im_dt")?;
        for i in 0..self.len() {
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                self.grid[i],
                self.values[i].re,
                self.values[i].im,
                self.t_derivative[i].re,
                self.t_derivative[i].im
            )?;
        }
        Ok(())
    }
}

/// What the zero-frequency cutoff removed from a mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionReport {
    /// Negative-frequency fraction of the squared norm that was removed.
    pub removed_norm_fraction: f64,
    /// Sup-norm change of the spatial profile relative to its peak.
    pub sup_norm_change: f64,
}

/// Klein-Gordon overlaps between the accelerated and inertial packets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    pub alpha_i: Complex64,
    pub alpha_ii: Complex64,
    pub beta_i: Complex64,
    pub beta_ii: Complex64,
}

impl BogoliubovCoefficients {
    pub fn beta_ratio_i(&self) -> f64 {
        self.beta_i.norm() / self.alpha_i.norm()
    }

    pub fn beta_ratio_ii(&self) -> f64 {
        self.beta_ii.norm() / self.alpha_ii.norm()
    }

    pub fn max_beta_ratio(&self) -> f64 {
        self.beta_ratio_i().max(self.beta_ratio_ii())
    }
}

fn validate_spec(spec: &ModeSpec, ctrl: &GridControl) -> Result<()> {
    if !(spec.width > 0.0) {
        return Err(Error::InvalidModeSpec(format!(
            "width must be positive, got {}",
            spec.width
        )));
    }
    if !(spec.mass >= 0.0) {
        return Err(Error::InvalidModeSpec(format!(
            "mass must be non-negative, got {}",
            spec.mass
        )));
    }
    if !(spec.omega0 > spec.mass) {
        return Err(Error::InvalidModeSpec(format!(
            "omega0 = {} must exceed the mass {}",
            spec.omega0, spec.mass
        )));
    }
    if spec.x0 * spec.wedge.sign() <= 0.0 {
        return Err(Error::InvalidModeSpec(format!(
            "x0 = {} has the wrong sign for wedge {:?}",
            spec.x0, spec.wedge
        )));
    }
    match spec.chart {
        Chart::Minkowski => {
            if spec.acceleration != 0.0 {
                return Err(Error::InvalidModeSpec(
                    "inertial spec must have acceleration 0".into(),
                ));
            }
        }
        Chart::Rindler => {
            if !(spec.acceleration > 0.0) {
                return Err(Error::InvalidModeSpec(
                    "accelerated spec needs a positive acceleration".into(),
                ));
            }
            if !(spec.mass > 0.0) {
                return Err(Error::InvalidModeSpec(
                    "accelerated packet profile needs a positive mass".into(),
                ));
            }
            let x0a = spec.x0.abs();
            if (x0a * spec.acceleration - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidModeSpec(format!(
                    "|x0| = {x0a} must equal 1/A = {}",
                    1.0 / spec.acceleration
                )));
            }
            if ctrl.horizon_ratio > 0.0 {
                let required = ctrl.horizon_ratio * spec.width;
                if x0a < required {
                    return Err(Error::TooCloseToHorizon {
                        horizon_distance: x0a,
                        required,
                    });
                }
            }
        }
    }
    if ctrl.points_per_wavelength < 16 {
        return Err(Error::GridTooCoarse {
            points_per_wavelength: ctrl.points_per_wavelength,
        });
    }
    Ok(())
}

fn central_wavenumber(spec: &ModeSpec) -> f64 {
    (spec.omega0 * spec.omega0 - spec.mass * spec.mass).sqrt()
}

/// The highest wavenumber the grid must resolve. Inertial packets oscillate
/// at the central wavenumber everywhere; accelerated ones blueshift towards
/// the horizon, so the step follows the local wavenumber at the point where
/// the envelope has fallen to ~1e-7 (below that, the residual amplitude is
/// within the overlap error budget even when aliased).
fn required_wavenumber(spec: &ModeSpec) -> f64 {
    let k0 = central_wavenumber(spec);
    match spec.chart {
        Chart::Minkowski => k0,
        Chart::Rindler => {
            let x0a = spec.x0.abs();
            let u_alias = (ALIAS_LOG_RADIUS * spec.width / x0a)
                .min(SUPPORT_LOG_RADIUS_LEFT * spec.width / x0a);
            k0.max(spec.omega0 / spec.acceleration / x0a * u_alias.exp())
        }
    }
}

fn grid_step(spec: &ModeSpec, ctrl: &GridControl) -> f64 {
    2.0 * std::f64::consts::PI / required_wavenumber(spec) / ctrl.points_per_wavelength as f64
}

/// Right support edge of the sampled profile, relative to the center in log
/// units.
fn support_log_right(spec: &ModeSpec) -> f64 {
    let x0a = spec.x0.abs();
    let mut u_right = SUPPORT_LOG_RADIUS_RIGHT * spec.width / x0a;
    if spec.chart == Chart::Rindler {
        // Turning point of I_{i nu}(m chi) at chi = nu/m = Omega0/(A m).
        let u_turning = (spec.omega0 / (spec.mass * spec.acceleration * x0a)).ln();
        u_right = u_right.min(u_turning);
    }
    u_right
}

fn grid_spanning(x0a: f64, x_min: f64, x_max: f64, h: f64, offset: f64) -> Vec<f64> {
    // Floor on the left keeps the first point at a positive coordinate (the
    // support edge is exponentially close to the horizon at large A * width).
    let n_left = ((x0a - x_min) / h).floor() as i64;
    let n_right = ((x_max - x0a) / h).ceil() as i64;
    let center = x0a + offset;
    (-n_left..=n_right).map(|j| center + j as f64 * h).collect()
}

/// Uniform wedge-I grid covering the envelope support, anchored so the packet
/// center is a sample point. Coordinates are physical x (offset included).
fn make_grid(spec: &ModeSpec, ctrl: &GridControl) -> Vec<f64> {
    let x0a = spec.x0.abs();
    let u_left = SUPPORT_LOG_RADIUS_LEFT * spec.width / x0a;
    grid_spanning(
        x0a,
        x0a * (-u_left).exp(),
        x0a * support_log_right(spec).exp(),
        grid_step(spec, ctrl),
        ctrl.origin_offset,
    )
}

fn log_envelope(spec: &ModeSpec, xi: f64) -> f64 {
    let x0a = spec.x0.abs();
    let arg = (x0a / spec.width) * (xi / x0a).ln();
    -2.0 * arg * arg
}

/// Trapezoid rule on a uniform grid.
fn trapezoid(h: f64, integrand: impl ExactSizeIterator<Item = Complex64>) -> Complex64 {
    let n = integrand.len();
    let mut sum = Complex64::ZERO;
    for (j, v) in integrand.enumerate() {
        if j == 0 || j == n - 1 {
            sum += 0.5 * v;
        } else {
            sum += v;
        }
    }
    h * sum
}

fn kg_quadrature(h: f64, a: &SampledMode, b: &SampledMode) -> Complex64 {
    Complex64::I
        * trapezoid(
            h,
            (0..a.len()).map(|j| {
                a.values[j].conj() * b.t_derivative[j] - a.t_derivative[j].conj() * b.values[j]
            }),
        )
}

fn normalize(mode: &mut SampledMode) {
    let norm = kg_quadrature(mode.spacing(), mode, mode).re;
    mode.kg_norm = norm;
    let scale = 1.0 / norm.sqrt();
    for v in &mut mode.values {
        *v *= scale;
    }
    for v in &mut mode.t_derivative {
        *v *= scale;
    }
}

/// Raw inertial Cauchy data on a given wedge-I grid (offset already applied).
fn sample_inertial(spec: &ModeSpec, grid: &[f64], offset: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let x0a = spec.x0.abs();
    let k0 = central_wavenumber(spec);
    let mut values = Vec::with_capacity(grid.len());
    let mut derivative = Vec::with_capacity(grid.len());
    for &x in grid {
        let xi = x - offset;
        let value = if xi > 0.0 {
            Complex64::new(log_envelope(spec, xi).exp() * (k0 * (xi - x0a)).sin(), 0.0)
        } else {
            Complex64::ZERO
        };
        values.push(value);
        derivative.push(-Complex64::I * spec.omega0 * value);
    }
    (values, derivative)
}

/// Raw accelerated Cauchy data on a given wedge-I grid. Values past the
/// radial turning point (where the profile stops decaying) are truncated to
/// zero; `chi_cut` is where that happens.
fn sample_rindler(
    spec: &ModeSpec,
    grid: &[f64],
    offset: f64,
    chi_cut: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let x0a = spec.x0.abs();
    let nu = spec.omega0 / spec.acceleration;
    let mut series = ImagOrderBessel::new(nu)?;
    let center = series.eval(spec.mass * x0a)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut derivative = Vec::with_capacity(grid.len());
    for &x in grid {
        let chi = x - offset;
        if chi <= 0.0 || chi > chi_cut {
            values.push(Complex64::ZERO);
            derivative.push(Complex64::ZERO);
            continue;
        }
        let at_chi = series.eval(spec.mass * chi)?;
        let v = (log_envelope(spec, chi) + at_chi.log_magnitude - center.log_magnitude).exp()
            * (at_chi.phase - center.phase).sin();
        let value = Complex64::new(v, 0.0);
        values.push(value);
        derivative.push(-Complex64::I * spec.omega0 * (x0a / chi) * value);
    }
    Ok((values, derivative))
}

fn build_wedge_i_mode(spec: &ModeSpec, ctrl: &GridControl) -> Result<SampledMode> {
    let grid = make_grid(spec, ctrl);
    let (values, t_derivative) = match spec.chart {
        Chart::Minkowski => sample_inertial(spec, &grid, ctrl.origin_offset),
        Chart::Rindler => {
            let chi_cut = *grid.last().unwrap() - ctrl.origin_offset + 1.0;
            sample_rindler(spec, &grid, ctrl.origin_offset, chi_cut)?
        }
    };
    let mut mode = SampledMode {
        spec: *spec,
        grid,
        values,
        t_derivative,
        kg_norm: 0.0,
    };
    normalize(&mut mode);
    // Rescaling breaks the pointwise derivative relation at the last ulp;
    // restate it exactly from the normalized values.
    let x0a = spec.x0.abs();
    for j in 0..mode.len() {
        if mode.values[j] == Complex64::ZERO {
            mode.t_derivative[j] = Complex64::ZERO;
            continue;
        }
        let factor = match spec.chart {
            Chart::Minkowski => 1.0,
            Chart::Rindler => x0a / (mode.grid[j] - ctrl.origin_offset),
        };
        mode.t_derivative[j] = -Complex64::I * spec.omega0 * factor * mode.values[j];
    }
    Ok(mode)
}

fn build_mode(spec: &ModeSpec, ctrl: &GridControl) -> Result<SampledMode> {
    validate_spec(spec, ctrl)?;
    match spec.wedge {
        Wedge::I => build_wedge_i_mode(spec, ctrl),
        Wedge::II => {
            let twin = ModeSpec {
                wedge: Wedge::I,
                x0: -spec.x0,
                ..*spec
            };
            Ok(build_wedge_i_mode(&twin, ctrl)?.mirrored(*spec))
        }
    }
}

/// Discretize the inertial packet: log-Gaussian envelope times a sine with
/// wavenumber `sqrt(Omega0^2 - m^2)`, with `d_t phi = -i Omega0 phi`. Not yet
/// frequency-projected.
pub fn build_inertial_mode(spec: &ModeSpec, ctrl: &GridControl) -> Result<SampledMode> {
    if spec.chart != Chart::Minkowski {
        return Err(Error::InvalidModeSpec(
            "build_inertial_mode needs a Minkowski-chart spec".into(),
        ));
    }
    build_mode(spec, ctrl)
}

/// Discretize the accelerated packet: the same envelope with the imaginary-
/// order Bessel radial profile, and the inertial-time derivative obtained by
/// converting `d_tau psi = -/+ i Omega0 psi` through the chart at eta = 0.
pub fn build_rindler_mode(spec: &ModeSpec, ctrl: &GridControl) -> Result<SampledMode> {
    if spec.chart != Chart::Rindler {
        return Err(Error::InvalidModeSpec(
            "build_rindler_mode needs a Rindler-chart spec".into(),
        ));
    }
    build_mode(spec, ctrl)
}

fn check_uniform(mode: &SampledMode) -> Result<f64> {
    let h = mode.spacing();
    for w in mode.grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(h)
}

/// Decompose the Cauchy pair into plane waves, zero every strictly-negative-
/// frequency amplitude, reconstruct, and renormalize. Returns the projected
/// mode together with the measured removed fraction and profile change.
pub fn project_positive_frequency(mode: &SampledMode) -> Result<(SampledMode, ProjectionReport)> {
    let h = check_uniform(mode)?;
    let n = mode.len();
    let m = mode.spec.mass;

    let mut f_hat = mode.values.clone();
    let mut g_hat = mode.t_derivative.clone();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    fft.process(&mut f_hat);
    fft.process(&mut g_hat);

    let mut positive = vec![Complex64::ZERO; n];
    let mut pos_weight = 0.0;
    let mut neg_weight = 0.0;
    for j in 0..n {
        let index = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        let k = 2.0 * std::f64::consts::PI * index / (n as f64 * h);
        let omega = (k * k + m * m).sqrt();
        if omega < 1e-12 {
            // Massless zero mode: no frequency sign to keep; count it as removed.
            neg_weight += 1e-12 * f_hat[j].norm_sqr();
            continue;
        }
        let a = (omega * f_hat[j] + Complex64::I * g_hat[j]) / (2.0 * omega);
        let b = (omega * f_hat[j] - Complex64::I * g_hat[j]) / (2.0 * omega);
        pos_weight += omega * a.norm_sqr();
        neg_weight += omega * b.norm_sqr();
        positive[j] = a;
    }
    let removed = neg_weight / (pos_weight + neg_weight);
    if removed > 0.10 {
        return Err(Error::ExcessNegativeFrequency { fraction: removed });
    }

    let mut f_new = positive.clone();
    let mut g_new: Vec<Complex64> = (0..n)
        .map(|j| {
            let index = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            let k = 2.0 * std::f64::consts::PI * index / (n as f64 * h);
            let omega = (k * k + m * m).sqrt();
            -Complex64::I * omega * positive[j]
        })
        .collect();
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut f_new);
    ifft.process(&mut g_new);
    let scale = 1.0 / n as f64;
    for v in &mut f_new {
        *v *= scale;
    }
    for v in &mut g_new {
        *v *= scale;
    }

    let peak = mode.peak_abs();
    let sup_change = mode
        .values
        .iter()
        .zip(&f_new)
        .map(|(old, new)| (old - new).norm())
        .fold(0.0, f64::max)
        / peak;

    let mut projected = SampledMode {
        spec: mode.spec,
        grid: mode.grid.clone(),
        values: f_new,
        t_derivative: g_new,
        kg_norm: 0.0,
    };
    normalize(&mut projected);
    Ok((
        projected,
        ProjectionReport {
            removed_norm_fraction: removed,
            sup_norm_change: sup_change,
        },
    ))
}

fn grids_identical(a: &SampledMode, b: &SampledMode) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let h = a.spacing();
    (a.grid[0] - b.grid[0]).abs() <= 1e-9 * h
        && (a.grid[a.len() - 1] - b.grid[b.len() - 1]).abs() <= 1e-9 * h
}

fn supports_disjoint(a: &SampledMode, b: &SampledMode) -> bool {
    a.grid[a.len() - 1] < b.grid[0] || b.grid[b.len() - 1] < a.grid[0]
}

/// Catmull-Rom interpolation of uniformly sampled complex data; zero outside.
fn interpolate(mode: &SampledMode, data: &[Complex64], x: f64) -> Complex64 {
    let h = mode.spacing();
    let t = (x - mode.grid[0]) / h;
    if t < 0.0 || t > (mode.len() - 1) as f64 {
        return Complex64::ZERO;
    }
    let j = (t.floor() as usize).min(mode.len() - 2);
    let s = t - j as f64;
    let at = |i: i64| -> Complex64 {
        let idx = (j as i64 + i).clamp(0, mode.len() as i64 - 1) as usize;
        data[idx]
    };
    let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
    0.5 * ((2.0 * p1)
        + (p2 - p0) * s
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s
        + (3.0 * p1 - p0 - 3.0 * p2 + p3) * s * s * s)
}

/// Klein-Gordon scalar product `i int dx (a* d_t b - d_t a* b)` by composite
/// quadrature. Identical grids take the exact path; overlapping grids are
/// resampled onto their union; disjoint supports give 0.
pub fn kg_inner_product(a: &SampledMode, b: &SampledMode) -> Complex64 {
    if grids_identical(a, b) {
        return kg_quadrature(a.spacing(), a, b);
    }
    if supports_disjoint(a, b) {
        return Complex64::ZERO;
    }
    let h = a.spacing().min(b.spacing());
    let start = a.grid[0].min(b.grid[0]);
    let end = a.grid[a.len() - 1].max(b.grid[b.len() - 1]);
    let n = ((end - start) / h).ceil() as usize + 1;
    let integrand = (0..n).map(|j| {
        let x = start + j as f64 * h;
        let av = interpolate(a, &a.values, x);
        let ad = interpolate(a, &a.t_derivative, x);
        let bv = interpolate(b, &b.values, x);
        let bd = interpolate(b, &b.t_derivative, x);
        av.conj() * bd - ad.conj() * bv
    });
    Complex64::I * trapezoid(h, integrand)
}

/// Supported box for direct overlap computation.
pub const MIN_DIRECT_ACCELERATION: f64 = 0.03;
pub const MAX_DIRECT_ACCELERATION: f64 = 1.0;

/// One wedge's overlaps: builds the inertial and accelerated packets on a
/// shared grid, projects both onto positive frequencies, fixes the global
/// phase so alpha is real and non-negative, and returns (alpha, beta).
fn wedge_overlap(
    accel: f64,
    family: &ModeFamily,
    ctrl: &GridControl,
) -> Result<(Complex64, Complex64)> {
    // The full supported acceleration box intentionally overrides the
    // horizon-distance gate; see the module docs for the domain rule that
    // keeps the construction sane there.
    let relaxed = ctrl.with_horizon_ratio(0.0);
    let spec_phi = family.inertial_spec(Wedge::I, 1.0 / accel);
    let spec_psi = family.rindler_spec(Wedge::I, accel);
    validate_spec(&spec_phi, &relaxed)?;
    validate_spec(&spec_psi, &relaxed)?;

    // Shared grid: the accelerated mode sets the step (blueshift) and the
    // right edge (turning point); the envelope sets everything else. The
    // inertial packet keeps < 1e-7 of its norm beyond the shared edge.
    let x0a = spec_phi.x0.abs();
    let h = grid_step(&spec_phi, &relaxed).min(grid_step(&spec_psi, &relaxed));
    let u_left = SUPPORT_LOG_RADIUS_LEFT * family.width / x0a;
    let u_right = support_log_right(&spec_phi).min(support_log_right(&spec_psi));
    let grid = grid_spanning(
        x0a,
        x0a * (-u_left).exp(),
        x0a * u_right.exp(),
        h,
        relaxed.origin_offset,
    );
    let chi_cut = *grid.last().unwrap() - relaxed.origin_offset;

    let (phi_values, phi_derivative) = sample_inertial(&spec_phi, &grid, relaxed.origin_offset);
    let mut phi = SampledMode {
        spec: spec_phi,
        grid: grid.clone(),
        values: phi_values,
        t_derivative: phi_derivative,
        kg_norm: 0.0,
    };
    normalize(&mut phi);

    let (psi_values, psi_derivative) =
        sample_rindler(&spec_psi, &grid, relaxed.origin_offset, chi_cut)?;
    let mut psi = SampledMode {
        spec: spec_psi,
        grid,
        values: psi_values,
        t_derivative: psi_derivative,
        kg_norm: 0.0,
    };
    normalize(&mut psi);

    let (phi, _) = project_positive_frequency(&phi)?;
    let (psi, _) = project_positive_frequency(&psi)?;

    let alpha_raw = kg_inner_product(&psi, &phi);
    let beta_raw = -kg_inner_product(&psi, &phi.conjugated());
    let phase = alpha_raw.arg();
    let alpha = Complex64::new(alpha_raw.norm(), 0.0);
    let beta = beta_raw * Complex64::from_polar(1.0, -phase);
    Ok((alpha, beta))
}

/// Bogoliubov coefficients `alpha = (psi, phi)`, `beta = -(psi, phi*)` for
/// both wedges. Wedge II is the spatial reflection of wedge I, under which
/// every Klein-Gordon product is invariant, so its coefficients equal those
/// of a wedge-I computation at the same acceleration (exactly, by running the
/// identical computation).
pub fn compute_overlaps(
    accel_i: f64,
    accel_ii: f64,
    family: &ModeFamily,
    ctrl: &GridControl,
) -> Result<BogoliubovCoefficients> {
    for accel in [accel_i, accel_ii] {
        if !(MIN_DIRECT_ACCELERATION - 1e-12..=MAX_DIRECT_ACCELERATION + 1e-12).contains(&accel) {
            return Err(Error::AccelerationOutOfRange(
                accel,
                MIN_DIRECT_ACCELERATION,
                MAX_DIRECT_ACCELERATION,
            ));
        }
    }
    let (alpha_i, beta_i) = wedge_overlap(accel_i, family, ctrl)?;
    let (alpha_ii, beta_ii) = if accel_ii == accel_i {
        (alpha_i, beta_i)
    } else {
        wedge_overlap(accel_ii, family, ctrl)?
    };
    Ok(BogoliubovCoefficients {
        alpha_i,
        alpha_ii,
        beta_i,
        beta_ii,
    })
}
