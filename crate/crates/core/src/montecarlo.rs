//! Trajectory sampler: draws Bell and heterodyne results from their exact
//! Gaussian laws and averages per-trajectory fidelities.
//!
//! All states involved are Gaussian, so outcome sampling is plain
//! multivariate-normal sampling. Every shot gets its own ChaCha stream
//! `(seed, stream = shot index)`, and per-shot samples are reduced in shot
//! order, so results do not depend on how many threads ran them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{build_cm, channel_params, Receiver};
use crate::error::{invalid, Result};
use crate::gaussian::{ComplexAmplitude, GaussianState};
use crate::linalg::Matrix;
use crate::protocols::{coop_trajectory, noncoop_trajectory, pre_heterodyne_state, BellStage};

pub const DEFAULT_ENSEMBLE_STD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub shots: u64,
    pub seed: u64,
    pub alpha: f64,
    /// Standard deviation of each component of the random input amplitude.
    pub input_ensemble_std: f64,
}

impl McConfig {
    pub fn new(alpha: f64, shots: u64, seed: u64) -> Self {
        Self {
            shots,
            seed,
            alpha,
            input_ensemble_std: DEFAULT_ENSEMBLE_STD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(invalid("shots must be at least 1"));
        }
        if !(self.input_ensemble_std.is_finite() && self.input_ensemble_std >= 0.0) {
            return Err(invalid(format!(
                "input ensemble std must be finite and >= 0, got {}",
                self.input_ensemble_std
            )));
        }
        channel_params(self.alpha)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub f_tr_hat: f64,
    pub f_ab_hat: f64,
    pub f_ac_hat: f64,
    pub stderr_tr: f64,
    pub stderr_ab: f64,
    pub stderr_ac: f64,
    /// Sample standard deviation of the per-shot fidelities.
    pub spread_tr: f64,
    pub spread_ab: f64,
    pub spread_ac: f64,
    pub shots: u64,
}

/// RNG for one shot.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Draws from `N(mean, cov)` for a 2x2 covariance (Cholesky).
pub fn sample_normal2<R: Rng + ?Sized>(mean: [f64; 2], cov: &Matrix<f64>, rng: &mut R) -> [f64; 2] {
    let z0: f64 = rng.sample(StandardNormal);
    let z1: f64 = rng.sample(StandardNormal);
    let l00 = cov[(0, 0)].max(0.0).sqrt();
    let l10 = if l00 > 0.0 { cov[(1, 0)] / l00 } else { 0.0 };
    let l11 = (cov[(1, 1)] - l10 * l10).max(0.0).sqrt();
    [mean[0] + l00 * z0, mean[1] + l10 * z0 + l11 * z1]
}

/// Draws `η = -X₋ + i P₊` from the post-beam-splitter state.
pub fn sample_bell_outcome<R: Rng + ?Sized>(
    stage: &BellStage<f64>,
    rng: &mut R,
) -> ComplexAmplitude<f64> {
    let law = stage.bell_outcome_law();
    let s = sample_normal2([law.mean[0], law.mean[1]], &law.cov, rng);
    ComplexAmplitude { re: s[0], im: s[1] }
}

/// Draws a heterodyne result `μ` for `mode`.
pub fn sample_heterodyne_outcome<R: Rng + ?Sized>(
    state: &GaussianState<f64>,
    mode: usize,
    rng: &mut R,
) -> Result<ComplexAmplitude<f64>> {
    let d = state.heterodyne_outcome_distribution(mode)?;
    let q = sample_normal2(d.mean.to_quadratures(), &d.cov_quadrature, rng);
    Ok(ComplexAmplitude::from_quadratures(q))
}

/// Per-trajectory `(F_tr, F_AB, F_AC)` samples in shot order.
pub fn fidelity_samples(config: &McConfig) -> Result<Vec<[f64; 3]>> {
    config.validate()?;
    let params = channel_params(config.alpha)?;
    let channel = build_cm(&params)?;
    (0..config.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(config.seed, shot);
            let z0: f64 = rng.sample(StandardNormal);
            let z1: f64 = rng.sample(StandardNormal);
            let s = config.input_ensemble_std;
            let phi = ComplexAmplitude {
                re: s * z0,
                im: s * z1,
            };

            let stage = BellStage::with_channel(params, &channel, phi)?;
            let eta = sample_bell_outcome(&stage, &mut rng);
            let f_tr = noncoop_trajectory(&stage, eta)?
                .bob
                .fidelity_vs_coherent(phi)?;

            let pre = pre_heterodyne_state(&stage, eta, Receiver::Charlie)?;
            let mu = sample_heterodyne_outcome(&pre, 1, &mut rng)?;
            let coop = coop_trajectory(&stage, eta, mu, Receiver::Charlie)?;
            Ok([
                f_tr,
                coop.bob.fidelity_vs_coherent(phi)?,
                coop.charlie.fidelity_vs_coherent(phi)?,
            ])
        })
        .collect()
}

fn mean_and_sd(xs: impl Iterator<Item = f64> + Clone, n: f64) -> (f64, f64) {
    let mean = xs.clone().sum::<f64>() / n;
    let var = if n > 1.0 {
        xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

pub fn estimate_fidelities(config: &McConfig) -> Result<McEstimate> {
    let samples = fidelity_samples(config)?;
    let n = samples.len() as f64;
    let col = |k: usize| mean_and_sd(samples.iter().map(move |s| s[k]), n);
    let (f_tr_hat, spread_tr) = col(0);
    let (f_ab_hat, spread_ab) = col(1);
    let (f_ac_hat, spread_ac) = col(2);
    let root_n = n.sqrt();
    Ok(McEstimate {
        f_tr_hat,
        f_ab_hat,
        f_ac_hat,
        stderr_tr: spread_tr / root_n,
        stderr_ab: spread_ab / root_n,
        stderr_ac: spread_ac / root_n,
        spread_tr,
        spread_ab,
        spread_ac,
        shots: config.shots,
    })
}

/// [`estimate_fidelities`] on a dedicated pool of `threads` workers.
pub fn estimate_fidelities_with_threads(config: &McConfig, threads: usize) -> Result<McEstimate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?;
    pool.install(|| estimate_fidelities(config))
}
