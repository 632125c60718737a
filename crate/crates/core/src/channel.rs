//! The acceleration-induced Gaussian channel `sigma -> M sigma M^T + N` and
//! the overlap curve alpha(A) with its low-acceleration interpolation.

use nalgebra::{Matrix2, Matrix4};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{direct_sum, hermitian_psd, symplectic_form, GaussianState};
use crate::modes::{compute_overlaps, BogoliubovCoefficients, GridControl, ModeFamily};

/// Which matrix construction to use for `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelForm {
    /// `M = alpha_I 1 (+) alpha_II 1`, valid when beta is negligible.
    Simplified,
    /// The full Re/Im(alpha -/+ beta) block structure; paired with the
    /// simplified noise matrix (the general noise form is out of scope).
    GeneralM,
}

/// Affine two-mode Gaussian channel `(M, N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeChannel {
    pub matrix: Matrix4<f64>,
    pub noise: Matrix4<f64>,
}

impl TwoModeChannel {
    pub fn identity() -> Self {
        Self {
            matrix: Matrix4::identity(),
            noise: Matrix4::zeros(),
        }
    }

    /// Complete positivity: `N + i Omega - i M Omega M^T >= 0`.
    pub fn is_completely_positive(&self, slack: f64) -> bool {
        let omega = symplectic_form();
        let imag = omega - self.matrix * omega * self.matrix.transpose();
        hermitian_psd(&self.noise, &imag, slack)
    }
}

const BETA_NEGLIGIBLE: f64 = 1e-6;

/// Build the channel from overlap coefficients.
pub fn build_channel(
    coeffs: &BogoliubovCoefficients,
    form: ChannelForm,
) -> Result<TwoModeChannel> {
    let ratio = coeffs.max_beta_ratio();
    let matrix = match form {
        ChannelForm::Simplified => {
            if ratio > BETA_NEGLIGIBLE {
                return Err(Error::BetaTooLarge(ratio, BETA_NEGLIGIBLE));
            }
            let a_i = coeffs.alpha_i.norm();
            let a_ii = coeffs.alpha_ii.norm();
            direct_sum(&(Matrix2::identity() * a_i), &(Matrix2::identity() * a_ii))
        }
        ChannelForm::GeneralM => {
            let block = |alpha: num_complex::Complex64, beta: num_complex::Complex64| {
                Matrix2::new(
                    (alpha - beta).re,
                    -(alpha + beta).im,
                    (alpha - beta).im,
                    (alpha + beta).re,
                )
            };
            direct_sum(
                &block(coeffs.alpha_i, coeffs.beta_i),
                &block(coeffs.alpha_ii, coeffs.beta_ii),
            )
        }
    };
    let n_i = 1.0 - coeffs.alpha_i.norm_sqr();
    let n_ii = 1.0 - coeffs.alpha_ii.norm_sqr();
    Ok(TwoModeChannel {
        matrix,
        noise: direct_sum(&(Matrix2::identity() * n_i), &(Matrix2::identity() * n_ii)),
    })
}

/// Apply the channel: `X -> M X`, `sigma -> M sigma M^T + N`.
pub fn apply_channel(channel: &TwoModeChannel, state: &GaussianState) -> GaussianState {
    GaussianState {
        first_moments: channel.matrix * state.first_moments,
        covariance: channel.matrix * state.covariance * channel.matrix.transpose()
            + channel.noise,
    }
}

/// Closed form of the two-mode squeezed vacuum after the simplified channel:
/// `a = 1 - alpha_I^2 + alpha_I^2 cosh 2r`, `b` likewise with `alpha_II`,
/// `c = alpha_I alpha_II sinh 2r`.
pub fn accelerated_tmsv(alpha_i: f64, alpha_ii: f64, r: f64) -> GaussianState {
    assert!((0.0..=1.0).contains(&alpha_i) && (0.0..=1.0).contains(&alpha_ii));
    assert!(r >= 0.0);
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let a = 1.0 - alpha_i * alpha_i + alpha_i * alpha_i * ch;
    let b = 1.0 - alpha_ii * alpha_ii + alpha_ii * alpha_ii * ch;
    let c = alpha_i * alpha_ii * sh;
    GaussianState {
        first_moments: nalgebra::Vector4::zeros(),
        covariance: Matrix4::from_row_slice(&[
            a, 0.0, -c, 0.0, //
            0.0, a, 0.0, c, //
            -c, 0.0, b, 0.0, //
            0.0, c, 0.0, b,
        ]),
    }
}

/// The overlap curve alpha(A): computed nodes on an ascending grid plus the
/// exact inertial anchor (0, 1), with monotone cubic interpolation between.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCurve {
    /// `(acceleration, alpha)` knots, starting with the anchor (0, 1).
    knots: Vec<(f64, f64)>,
    /// Interpolant slopes at the knots (shape-preserving).
    slopes: Vec<f64>,
}

/// The default node set: 0.03, 0.05, then 0.05 steps from 0.1 to 1.0.
pub fn default_curve_grid() -> Vec<f64> {
    let mut grid = vec![0.03, 0.05];
    for k in 2..=20 {
        grid.push(k as f64 * 0.05);
    }
    grid
}

impl AlphaCurve {
    /// Validate and assemble a curve from computed `(A, alpha)` nodes; the
    /// anchor (0, 1) is prepended automatically.
    pub fn from_nodes(nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidAlphaCurve("no nodes".into()));
        }
        let mut knots = Vec::with_capacity(nodes.len() + 1);
        knots.push((0.0, 1.0));
        knots.extend(nodes);
        for pair in knots.windows(2) {
            let ((a0, v0), (a1, v1)) = (pair[0], pair[1]);
            if a1 <= a0 {
                return Err(Error::InvalidAlphaCurve(format!(
                    "accelerations not ascending at {a1}"
                )));
            }
            if !(v1 < v0) {
                return Err(Error::InvalidAlphaCurve(format!(
                    "alpha not strictly decreasing at A = {a1} ({v1} >= {v0})"
                )));
            }
            if !(v1 > 0.0 && v1 <= 1.0) {
                return Err(Error::InvalidAlphaCurve(format!(
                    "alpha({a1}) = {v1} outside (0, 1]"
                )));
            }
        }
        let slopes = monotone_slopes(&knots);
        Ok(Self { knots, slopes })
    }

    /// Compute the curve at the given grid nodes (parallel over nodes,
    /// deterministic order).
    pub fn compute(family: &ModeFamily, ctrl: &GridControl, grid: &[f64]) -> Result<Self> {
        let nodes: Result<Vec<(f64, f64)>> = grid
            .par_iter()
            .map(|&accel| {
                let coeffs = compute_overlaps(accel, accel, family, ctrl)?;
                Ok((accel, coeffs.alpha_i.re))
            })
            .collect();
        Self::from_nodes(nodes?)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn max_acceleration(&self) -> f64 {
        self.knots.last().unwrap().0
    }

    /// Monotone shape-preserving interpolation; exact at the knots.
    pub fn alpha_at(&self, accel: f64) -> Result<f64> {
        let max = self.max_acceleration();
        if !(0.0..=max + 1e-12).contains(&accel) {
            return Err(Error::AccelerationOutOfRange(accel, 0.0, max));
        }
        let i = match self
            .knots
            .binary_search_by(|(a, _)| a.total_cmp(&accel))
        {
            Ok(exact) => return Ok(self.knots[exact].1),
            Err(0) => unreachable!("accel >= 0 checked above"),
            Err(pos) => (pos - 1).min(self.knots.len() - 2),
        };
        let (x0, y0) = self.knots[i];
        let (x1, y1) = self.knots[i + 1];
        let h = x1 - x0;
        let t = (accel - x0) / h;
        let (m0, m1) = (self.slopes[i], self.slopes[i + 1]);
        // Cubic Hermite basis.
        let t2 = t * t;
        let t3 = t2 * t;
        Ok(y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * h * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * h * (t3 - t2))
    }

    /// CSV with header `acceleration,alpha`, anchor row first. Written with
    /// 17 significant digits so a cached curve round-trips bit-exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("acceleration,alpha\n");
        for (a, v) in &self.knots {
            out.push_str(&format!("{a:.17e},{v:.17e}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("acceleration,alpha") => {}
            other => {
                return Err(Error::Parse(format!(
                    "bad alpha-curve header: {other:?}"
                )))
            }
        }
        let mut nodes = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, ',');
            let a: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad curve row: {line}")))?;
            let v: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad curve row: {line}")))?;
            nodes.push((a, v));
        }
        // Drop the serialized anchor; from_nodes re-adds it.
        if let Some(&(first_a, first_v)) = nodes.first() {
            if first_a == 0.0 && first_v == 1.0 {
                nodes.remove(0);
            }
        }
        Self::from_nodes(nodes)
    }
}

/// Fritsch-Carlson shape-preserving slopes for monotone data.
fn monotone_slopes(knots: &[(f64, f64)]) -> Vec<f64> {
    let n = knots.len();
    let h: Vec<f64> = knots.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let d: Vec<f64> = knots
        .windows(2)
        .zip(&h)
        .map(|(w, &h)| (w[1].1 - w[0].1) / h)
        .collect();
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    // One-sided ends, clamped to preserve monotonicity.
    let end_slope = |d0: f64, d1: f64, h0: f64, h1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if (s / d0).abs() > 3.0 {
            3.0 * d0
        } else {
            s
        }
    };
    if n >= 3 {
        m[0] = end_slope(d[0], d[1], h[0], h[1]);
        m[n - 1] = end_slope(d[n - 2], d[n - 3], h[n - 2], h[n - 3]);
    } else {
        m[0] = d[0];
        m[n - 1] = d[0];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::tmsv_state;
    use crate::modes::{MAX_DIRECT_ACCELERATION, MIN_DIRECT_ACCELERATION};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn coeffs(alpha_i: f64, alpha_ii: f64) -> BogoliubovCoefficients {
        BogoliubovCoefficients {
            alpha_i: Complex64::new(alpha_i, 0.0),
            alpha_ii: Complex64::new(alpha_ii, 0.0),
            beta_i: Complex64::ZERO,
            beta_ii: Complex64::ZERO,
        }
    }

    #[test]
    fn identity_and_full_attenuation() {
        let id = build_channel(&coeffs(1.0, 1.0), ChannelForm::Simplified).unwrap();
        assert_eq!(id.matrix, Matrix4::identity());
        assert_eq!(id.noise, Matrix4::zeros());
        let state = tmsv_state(0.7);
        assert_eq!(apply_channel(&id, &state).covariance, state.covariance);

        let dead = build_channel(&coeffs(0.0, 0.0), ChannelForm::Simplified).unwrap();
        let out = apply_channel(&dead, &tmsv_state(2.0));
        assert_eq!(out.covariance, Matrix4::identity());
    }

    #[test]
    fn general_m_reduces_to_simplified_for_real_alpha() {
        let c = coeffs(0.8, 0.55);
        let simplified = build_channel(&c, ChannelForm::Simplified).unwrap();
        let general = build_channel(&c, ChannelForm::GeneralM).unwrap();
        assert_eq!(simplified.matrix, general.matrix);
        assert_eq!(simplified.noise, general.noise);
    }

    #[test]
    fn simplified_form_rejects_large_beta() {
        let mut c = coeffs(0.9, 0.9);
        c.beta_i = Complex64::new(1e-3, 0.0);
        assert!(matches!(
            build_channel(&c, ChannelForm::Simplified),
            Err(Error::BetaTooLarge(..))
        ));
        // The general form accepts it (M only; simplified noise).
        assert!(build_channel(&c, ChannelForm::GeneralM).is_ok());
    }

    #[test]
    fn closed_form_matches_channel_pipeline() {
        for (ai, aii, r) in [(1.0, 1.0, 1.0), (0.9, 0.6, 3.0), (0.3, 0.8, 0.5), (1.0, 0.0, 2.0)] {
            let direct = accelerated_tmsv(ai, aii, r);
            let channel = build_channel(&coeffs(ai, aii), ChannelForm::Simplified).unwrap();
            let piped = apply_channel(&channel, &tmsv_state(r));
            let diff = (direct.covariance - piped.covariance).abs().max();
            let scale = direct.covariance.abs().max();
            assert!(diff <= 1e-12 * scale, "diff {diff} at ({ai}, {aii}, {r})");
        }
    }

    #[test]
    fn accelerated_tmsv_limits() {
        let inertial = accelerated_tmsv(1.0, 1.0, 1.3);
        assert_eq!(inertial.covariance, tmsv_state(1.3).covariance);

        // alpha_II = 0: mode I thermal-like, mode II vacuum, no correlations.
        let product = accelerated_tmsv(1.0, 0.0, 2.0);
        let ch = (4.0f64).cosh();
        assert_relative_eq!(product.covariance[(0, 0)], ch, max_relative = 1e-15);
        assert_eq!(product.covariance[(2, 2)], 1.0);
        assert_eq!(product.covariance[(0, 2)], 0.0);
    }

    #[test]
    fn channel_composition_attenuation_semigroup() {
        // Applying the simplified channel twice with alpha equals once with alpha^2.
        let alpha = 0.85;
        let once = build_channel(&coeffs(alpha, alpha), ChannelForm::Simplified).unwrap();
        let squared = build_channel(&coeffs(alpha * alpha, alpha * alpha), ChannelForm::Simplified)
            .unwrap();
        let state = tmsv_state(1.7);
        let twice = apply_channel(&once, &apply_channel(&once, &state));
        let direct = apply_channel(&squared, &state);
        assert!((twice.covariance - direct.covariance).abs().max() < 1e-12);
    }

    #[test]
    fn alpha_curve_validation() {
        assert!(AlphaCurve::from_nodes(vec![(0.1, 0.9), (0.2, 0.95)]).is_err());
        assert!(AlphaCurve::from_nodes(vec![(0.2, 0.9), (0.1, 0.8)]).is_err());
        assert!(AlphaCurve::from_nodes(vec![(0.1, 1.2)]).is_err());
        assert!(AlphaCurve::from_nodes(vec![(0.1, 0.99), (0.2, 0.9)]).is_ok());
    }

    #[test]
    fn alpha_curve_interpolation_basics() {
        let curve =
            AlphaCurve::from_nodes(vec![(0.03, 0.995), (0.1, 0.97), (0.5, 0.6), (1.0, 0.2)])
                .unwrap();
        assert_eq!(curve.alpha_at(0.0).unwrap(), 1.0);
        assert_eq!(curve.alpha_at(0.1).unwrap(), 0.97);
        assert_eq!(curve.alpha_at(1.0).unwrap(), 0.2);
        assert!(curve.alpha_at(1.5).is_err());
        assert!(curve.alpha_at(-0.1).is_err());
    }

    #[test]
    fn alpha_curve_csv_round_trip() {
        let curve =
            AlphaCurve::from_nodes(vec![(0.03, 0.995), (0.1, 0.97), (0.5, 0.6)]).unwrap();
        let text = curve.to_csv();
        let back = AlphaCurve::from_csv(&text).unwrap();
        assert_eq!(curve.knots(), back.knots());
    }

    #[test]
    fn default_grid_shape() {
        let grid = default_curve_grid();
        assert_eq!(grid[0], 0.03);
        assert_eq!(grid[1], 0.05);
        assert_relative_eq!(grid[2], 0.1);
        assert_relative_eq!(*grid.last().unwrap(), 1.0);
        assert_eq!(grid.len(), 21);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert!(grid
            .iter()
            .all(|&a| (MIN_DIRECT_ACCELERATION..=MAX_DIRECT_ACCELERATION).contains(&a)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn two_path_equivalence(ai in 0.0f64..=1.0, aii in 0.0f64..=1.0, r in 0.0f64..4.0) {
            let direct = accelerated_tmsv(ai, aii, r);
            let channel = build_channel(&coeffs(ai, aii), ChannelForm::Simplified).unwrap();
            let piped = apply_channel(&channel, &tmsv_state(r));
            let scale = direct.covariance.abs().max();
            prop_assert!((direct.covariance - piped.covariance).abs().max() <= 1e-12 * scale);
        }

        #[test]
        fn channels_are_completely_positive_and_preserve_physicality(
            ai in 0.0f64..=1.0,
            aii in 0.0f64..=1.0,
            r in 0.0f64..3.0,
            phase_a in -3.0f64..3.0,
            phase_b in -3.0f64..3.0,
            squeeze in -0.7f64..0.7,
            mix in -1.5f64..1.5,
        ) {
            let channel = build_channel(&coeffs(ai, aii), ChannelForm::Simplified).unwrap();
            prop_assert!(channel.is_completely_positive(1e-10));
            // Random physical input: a symplectic dressing of the squeezed pair.
            let local = crate::gaussian::direct_sum(
                &(crate::gaussian::rotation(phase_a) * crate::gaussian::squeezer(squeeze)),
                &crate::gaussian::rotation(phase_b),
            );
            let symp = crate::gaussian::beam_splitter(mix) * local;
            let state = crate::gaussian::GaussianState {
                first_moments: nalgebra::Vector4::zeros(),
                covariance: symp * tmsv_state(r).covariance * symp.transpose(),
            };
            prop_assert!(state.is_physical(1e-9));
            let out = apply_channel(&channel, &state);
            prop_assert!(out.is_physical(1e-9));
        }

        #[test]
        fn interpolant_is_monotone_between_nodes(scale in 0.2f64..0.9) {
            let nodes = vec![
                (0.03, 0.999 * scale + (1.0 - scale) * 0.9),
                (0.1, 0.9 * scale),
                (0.3, 0.7 * scale),
                (0.6, 0.5 * scale),
                (1.0, 0.2 * scale),
            ];
            let curve = AlphaCurve::from_nodes(nodes).unwrap();
            // Scan at 10x the node density.
            let mut last = f64::INFINITY;
            let mut a = 0.0;
            while a <= 1.0 {
                let v = curve.alpha_at(a).unwrap();
                prop_assert!(v <= last + 1e-12, "overshoot at {a}: {v} > {last}");
                prop_assert!(v > 0.0 && v <= 1.0);
                last = v;
                a += 0.005;
            }
        }
    }
}
