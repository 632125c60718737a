//! Monte-Carlo simulation of the two protocols at the phase-space level,
//! used as an independent check of the closed forms.
//!
//! Sampling draws from the Wigner function (covariance `sigma / 2` in the
//! vacuum = identity convention). Runs are split into a fixed number of
//! chunks, each with its own counter-derived random stream, and the chunk
//! statistics are folded in chunk order, so a run is bit-reproducible for a
//! given `(seed, samples)` independent of the worker count.

use nalgebra::{Matrix2, Matrix2x6, Matrix4, Matrix6, Vector2, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;

/// Result of a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

const CHUNKS: u64 = 32;
const MIN_SAMPLES: u64 = 10_000;

fn chunk_sizes(samples: u64) -> Vec<u64> {
    let base = samples / CHUNKS;
    let rem = samples % CHUNKS;
    (0..CHUNKS)
        .map(|c| base + u64::from(c < rem))
        .collect()
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk + 1);
    rng
}

fn validate_run(resource: &GaussianState, samples: u64) -> Result<()> {
    let mean = resource.first_moments.norm();
    if mean > 1e-12 {
        return Err(Error::NonZeroMeanResource(mean));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    Ok(())
}

/// Simulate the measure-communicate-displace teleportation protocol on
/// coherent inputs drawn from a fixed Gaussian ensemble and return the
/// empirical mean fidelity (which is input-independent).
pub fn monte_carlo_teleportation(
    resource: &GaussianState,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    validate_run(resource, samples)?;

    // Joint Wigner covariance of (q_in, p_in, q_I, p_I, q_II, p_II).
    let mut joint = Matrix6::<f64>::identity();
    joint
        .fixed_view_mut::<4, 4>(2, 2)
        .copy_from(&resource.covariance);
    let wigner = joint * 0.5;
    let chol = nalgebra::linalg::Cholesky::new(wigner).ok_or(Error::NotPositiveDefinite)?;
    let sampling = chol.l();

    // Measured pair: u = q_in + q_I, v = p_in - p_I (commuting EPR quadratures).
    let t = Matrix2x6::from_rows(&[
        nalgebra::RowVector6::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0),
        nalgebra::RowVector6::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0),
    ]);
    // Target pair: Bob's (q_II, p_II).
    let s = Matrix2x6::from_rows(&[
        nalgebra::RowVector6::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0),
        nalgebra::RowVector6::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0),
    ]);

    let w_mm = t * wigner * t.transpose();
    let w_bm = s * wigner * t.transpose();
    let w_bb = s * wigner * s.transpose();
    let w_mm_inv = w_mm.try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let gain = w_bm * w_mm_inv;
    let w_cond = w_bb - gain * (t * wigner * s.transpose());

    // Output covariance in the vacuum = identity convention, and the
    // coherent-overlap kernel F = c0 exp(-delta^T M delta).
    let sigma_out = 2.0 * w_cond;
    let denom = sigma_out + Matrix2::identity();
    let det = denom.determinant();
    if det <= 0.0 {
        return Err(Error::SingularGamma(det));
    }
    let kernel = denom.try_inverse().ok_or(Error::SingularGamma(det))?;
    let prefactor = 2.0 / det.sqrt();
    let delta_map = gain + Matrix2::identity();

    let sizes = chunk_sizes(samples);
    let stats: Vec<(f64, f64)> = sizes
        .par_iter()
        .enumerate()
        .map(|(c, &count)| {
            let mut rng = chunk_rng(seed, c as u64);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                // Unknown coherent input: mean sampled per shot.
                let input_mean = Vector2::new(
                    std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal),
                    std::f64::consts::SQRT_2 * rng.sample::<f64, _>(StandardNormal),
                );
                let z = Vector6::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
                let mut y = sampling * z;
                y[0] += input_mean[0];
                y[1] += input_mean[1];
                // Measurement outcome, centered on the input mean.
                let centered = Vector2::new(y[0] + y[2] - input_mean[0], y[1] - y[3] - input_mean[1]);
                // Bob displaces by the outcome; the output-vs-input mean
                // mismatch collapses to (I + gain) * centered.
                let delta = delta_map * centered;
                let fidelity = prefactor * (-(delta.dot(&(kernel * delta)))).exp();
                sum += fidelity;
                sum_sq += fidelity * fidelity;
            }
            (sum, sum_sq)
        })
        .collect();

    let (sum, sum_sq) = stats
        .iter()
        .fold((0.0, 0.0), |(a, b), &(s, s2)| (a + s, b + s2));
    let n = samples as f64;
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (variance / n).sqrt(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct ChannelMoments {
    count: f64,
    sum_s: f64,
    sum_ss: f64,
    sum_m: f64,
    sum_mm: f64,
    sum_sm: f64,
}

impl ChannelMoments {
    fn push(&mut self, signal: f64, measured: f64) {
        self.count += 1.0;
        self.sum_s += signal;
        self.sum_ss += signal * signal;
        self.sum_m += measured;
        self.sum_mm += measured * measured;
        self.sum_sm += signal * measured;
    }

    fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.sum_s += other.sum_s;
        self.sum_ss += other.sum_ss;
        self.sum_m += other.sum_m;
        self.sum_mm += other.sum_mm;
        self.sum_sm += other.sum_sm;
    }

    /// Plug-in Gaussian mutual information (bits) from the sample moments.
    fn mutual_information(&self) -> f64 {
        let n = self.count;
        let var_s = self.sum_ss / n - (self.sum_s / n).powi(2);
        let var_m = self.sum_mm / n - (self.sum_m / n).powi(2);
        let cov = self.sum_sm / n - (self.sum_s / n) * (self.sum_m / n);
        if var_s <= 0.0 || var_m <= 0.0 {
            return 0.0;
        }
        let rho_sq = (cov * cov / (var_s * var_m)).clamp(0.0, 1.0 - 1e-15);
        -0.5 * (1.0 - rho_sq).log2()
    }
}

/// Simulate the displace-transmit-interfere-measure dense-coding protocol:
/// messages drawn from `P(x) = exp(-|x|^2/n)/(pi n)` are encoded as
/// displacements of mode I, the modes interfere on a 50/50 beam splitter,
/// and the mutual information between message and homodyne readout is
/// estimated from the sampled in/out covariances.
pub fn monte_carlo_dense_coding(
    resource: &GaussianState,
    n: f64,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    validate_run(resource, samples)?;
    if !(n >= 0.0) {
        return Err(Error::Parse(format!("message width n must be >= 0, got {n}")));
    }

    let wigner: Matrix4<f64> = resource.covariance * 0.5;
    let chol = nalgebra::linalg::Cholesky::new(wigner).ok_or(Error::NotPositiveDefinite)?;
    let sampling = chol.l();
    let signal_sd = (n / 2.0).sqrt();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;

    let sizes = chunk_sizes(samples);
    let stats: Vec<(ChannelMoments, ChannelMoments)> = sizes
        .par_iter()
        .enumerate()
        .map(|(c, &count)| {
            let mut rng = chunk_rng(seed, c as u64);
            let mut q_channel = ChannelMoments::default();
            let mut p_channel = ChannelMoments::default();
            for _ in 0..count {
                let s_q = signal_sd * rng.sample::<f64, _>(StandardNormal);
                let s_p = signal_sd * rng.sample::<f64, _>(StandardNormal);
                let z = nalgebra::Vector4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
                let y = sampling * z;
                // Message displaces mode I; beam-splitter outputs give the
                // q_I + q_II and -p_I + p_II combinations.
                let q_out = (y[0] + s_q + y[2]) * inv_sqrt2;
                let p_out = (-(y[1] + s_p) + y[3]) * inv_sqrt2;
                q_channel.push(s_q, q_out);
                p_channel.push(s_p, p_out);
            }
            (q_channel, p_channel)
        })
        .collect();

    let mut q_total = ChannelMoments::default();
    let mut p_total = ChannelMoments::default();
    let mut per_chunk = Vec::with_capacity(stats.len());
    for (q, p) in &stats {
        q_total.merge(q);
        p_total.merge(p);
        per_chunk.push(q.mutual_information() + p.mutual_information());
    }
    let mean = q_total.mutual_information() + p_total.mutual_information();
    let k = per_chunk.len() as f64;
    let chunk_mean = per_chunk.iter().sum::<f64>() / k;
    let chunk_var = per_chunk
        .iter()
        .map(|h| (h - chunk_mean).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (chunk_var / k).sqrt(),
        samples,
    })
}
