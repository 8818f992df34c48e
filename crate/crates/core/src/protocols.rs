//! The two receiver strategies, each evaluated twice: through closed forms in
//! `κ(α)`, and by pushing the input coherent state through the channel with
//! the phase-space primitives of [`crate::gaussian`].
//!
//! A single run of a pipeline conditions on one Bell result `η` (and one
//! heterodyne result `μ`), giving a per-trajectory output whose fidelity
//! depends on the outcomes. The teleported state is the average over the
//! outcome law. Since every output mean is affine in the outcomes and the
//! conditional covariance is outcome-independent, that average is again
//! Gaussian: `mean = G m + h`, `cov = σ + G S Gᵀ` for outcomes `o ~ N(m, S)`.
//! The pipelines compute `G` and `h` by probing the conditional dynamics, so
//! the averaged fidelities never touch the closed forms.

use crate::channel::{build_cm, channel_params, ChannelParams, Receiver};
use crate::error::{Error, Result};
use crate::gaussian::{physicality, ComplexAmplitude, GaussianState, Quadrature, QuadratureVector};
use crate::linalg::Matrix;
use crate::scalar::{half, Real};

/// Non-cooperative (standard telecloning) fidelity `1/κ(α)`.
pub fn f_noncoop<T: Real>(alpha: T) -> Result<T> {
    Ok(channel_params(alpha)?.kappa().recip())
}

/// Fidelity of the receiver who heterodynes: `1/(κ(α)+1)`.
pub fn f_ac_coop<T: Real>(alpha: T) -> Result<T> {
    Ok((channel_params(alpha)?.kappa() + T::one()).recip())
}

/// Fidelity of the receiver who applies the modified shift:
/// `(α+2) / ((α+2)κ - 2(δ-γ)²)`.
pub fn f_ab_coop<T: Real>(alpha: T) -> Result<T> {
    let p = channel_params(alpha)?;
    let two = T::lit(2.0);
    let a2 = p.alpha + two;
    let dg = p.delta - p.gamma;
    Ok(a2 / (a2 * p.kappa() - two * dg * dg))
}

/// Mean of the two cooperative fidelities.
pub fn f_coop_avg<T: Real>(alpha: T) -> Result<T> {
    Ok((f_ab_coop(alpha)? + f_ac_coop(alpha)?) * half())
}

/// Fidelity each receiver gets when the measuring role alternates between
/// game instances.
pub fn alternation_fidelity<T: Real>(alpha: T) -> Result<T> {
    f_coop_avg(alpha)
}

/// Unit-gain coherent-state teleportation fidelity through the two-mode
/// resource `[[A, C], [Cᵀ, B]]` (sender block `A`, receiver block `B`):
/// `det(Γ)^{-1/2}` with `Γ = I + ZAZ + B - ZC - CᵀZ`.
pub fn two_mode_teleport_fidelity<T: Real>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
) -> Result<T> {
    for (name, m) in [("A", a), ("B", b), ("C", c)] {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::InvalidInput(format!("block {name} must be 2x2")));
        }
    }
    let mut v = Matrix::zeros(4, 4);
    v.set_block(0, 0, a);
    v.set_block(2, 2, b);
    v.set_block(0, 2, c);
    v.set_block(2, 0, &c.transpose());
    if !physicality(&v).map_err(|e| Error::Domain(e.to_string()))? {
        return Err(Error::Domain(
            "resource covariance violates the uncertainty principle".into(),
        ));
    }
    let z = Matrix::from_diagonal(&[T::one(), -T::one()]);
    let zaz = &(&z * a) * &z;
    let zc = &z * c;
    let ctz = &c.transpose() * &z;
    let gamma = &(&(&(&Matrix::identity(2) + &zaz) + b) - &zc) - &ctz;
    Ok(gamma.det2().sqrt().recip())
}

/// `η' = η + (β + 1/2)⁻¹ (δ - γ)(μ - η)`.
pub fn modified_shift<T: Real>(
    eta: ComplexAmplitude<T>,
    mu: ComplexAmplitude<T>,
    params: &ChannelParams<T>,
) -> ComplexAmplitude<T> {
    let g = (params.delta - params.gamma) / (params.beta + half());
    eta + (mu - eta) * g
}

/// Multivariate normal law of a stack of outcomes (amplitude units).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLaw<T> {
    pub mean: Vec<T>,
    pub cov: Matrix<T>,
}

/// Input mode, channel, beam splitter: everything up to Alice's homodynes.
///
/// Mode layout of [`BellStage::post_beam_splitter`]: `0` carries `P₊`, `1`
/// carries `X₋`, `2` is Bob, `3` is Charlie.
#[derive(Debug, Clone)]
pub struct BellStage<T> {
    params: ChannelParams<T>,
    input: ComplexAmplitude<T>,
    post_bs: GaussianState<T>,
}

const IN: usize = 0;
const A: usize = 1;

impl<T: Real> BellStage<T> {
    pub fn prepare(alpha: T, input: ComplexAmplitude<T>) -> Result<Self> {
        let params = channel_params(alpha)?;
        Self::with_channel(params, &build_cm(&params)?, input)
    }

    /// Reuses an already built channel state.
    pub fn with_channel(
        params: ChannelParams<T>,
        channel: &GaussianState<T>,
        input: ComplexAmplitude<T>,
    ) -> Result<Self> {
        let joint = GaussianState::coherent(input)?.tensor(channel);
        let post_bs = joint.beam_splitter_50_50(A, IN)?;
        Ok(Self {
            params,
            input,
            post_bs,
        })
    }

    pub fn params(&self) -> &ChannelParams<T> {
        &self.params
    }

    pub fn input(&self) -> ComplexAmplitude<T> {
        self.input
    }

    pub fn post_beam_splitter(&self) -> &GaussianState<T> {
        &self.post_bs
    }

    /// Law of `η = -X₋ + i P₊`.
    pub fn bell_outcome_law(&self) -> GaussianLaw<T> {
        let v = self.post_bs.cov().matrix();
        let (xm, pp) = (2 * A, 2 * IN + 1);
        let m = self.post_bs.mean().as_slice();
        GaussianLaw {
            mean: vec![-m[xm], m[pp]],
            cov: Matrix::from_rows(&[[v[(xm, xm)], -v[(xm, pp)]], [-v[(pp, xm)], v[(pp, pp)]]]),
        }
    }

    /// Conditional state of `(b, c)` given Bell result `η`, before any
    /// receiver acts.
    pub fn condition(&self, eta: ComplexAmplitude<T>) -> Result<GaussianState<T>> {
        eta.validate()?;
        self.post_bs
            .homodyne_update(A, Quadrature::X, -eta.re)?
            .homodyne_update(IN, Quadrature::P, eta.im)
    }
}

/// Index of a receiver inside the conditioned `(b, c)` state.
fn local_index(r: Receiver) -> usize {
    match r {
        Receiver::Bob => 0,
        Receiver::Charlie => 1,
    }
}

/// Per-trajectory outputs of one game instance.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    pub bob: GaussianState<T>,
    pub charlie: GaussianState<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn receiver(&self, r: Receiver) -> &GaussianState<T> {
        match r {
            Receiver::Bob => &self.bob,
            Receiver::Charlie => &self.charlie,
        }
    }
}

/// Both receivers displace by `η` and ignore each other.
pub fn noncoop_trajectory<T: Real>(
    stage: &BellStage<T>,
    eta: ComplexAmplitude<T>,
) -> Result<Trajectory<T>> {
    let out = stage.condition(eta)?.displace(0, eta)?.displace(1, eta)?;
    Ok(Trajectory {
        bob: out.partial_trace(&[0])?,
        charlie: out.partial_trace(&[1])?,
    })
}

/// State of `(b, c)` right before `measurer` heterodynes: conditioned on
/// `η` and with the measurer's mode displaced by `η`.
pub fn pre_heterodyne_state<T: Real>(
    stage: &BellStage<T>,
    eta: ComplexAmplitude<T>,
    measurer: Receiver,
) -> Result<GaussianState<T>> {
    stage.condition(eta)?.displace(local_index(measurer), eta)
}

/// Displacement rule of the correcting receiver, `(η, μ, params) -> η'`.
pub type ShiftRule<T> =
    fn(ComplexAmplitude<T>, ComplexAmplitude<T>, &ChannelParams<T>) -> ComplexAmplitude<T>;

/// `measurer` displaces by `η`, heterodynes (result `μ`) and re-prepares
/// `|μ⟩`; the other receiver displaces by `η'`.
pub fn coop_trajectory<T: Real>(
    stage: &BellStage<T>,
    eta: ComplexAmplitude<T>,
    mu: ComplexAmplitude<T>,
    measurer: Receiver,
) -> Result<Trajectory<T>> {
    coop_trajectory_with_shift(stage, eta, mu, measurer, modified_shift)
}

pub fn coop_trajectory_with_shift<T: Real>(
    stage: &BellStage<T>,
    eta: ComplexAmplitude<T>,
    mu: ComplexAmplitude<T>,
    measurer: Receiver,
    shift: ShiftRule<T>,
) -> Result<Trajectory<T>> {
    let pre = pre_heterodyne_state(stage, eta, measurer)?;
    let shifted = shift(eta, mu, stage.params());
    let corrector = pre
        .heterodyne_update(local_index(measurer), mu)?
        .displace(0, shifted)?;
    let reconstructed = GaussianState::coherent(mu)?;
    Ok(match measurer {
        Receiver::Charlie => Trajectory {
            bob: corrector,
            charlie: reconstructed,
        },
        Receiver::Bob => Trajectory {
            bob: reconstructed,
            charlie: corrector,
        },
    })
}

/// Joint law of `(η, μ)` when `measurer` heterodynes.
pub fn coop_outcome_law<T: Real>(
    stage: &BellStage<T>,
    measurer: Receiver,
) -> Result<GaussianLaw<T>> {
    let eta_law = stage.bell_outcome_law();
    let k = local_index(measurer);
    // μ | η ~ N(L η + l, Σ); probe the affine map L, l.
    let mu_mean = |o: &[T]| -> Result<[T; 2]> {
        let d = pre_heterodyne_state(stage, ComplexAmplitude { re: o[0], im: o[1] }, measurer)?
            .heterodyne_outcome_distribution(k)?;
        Ok([d.mean.re, d.mean.im])
    };
    let (l, l0) = probe_affine(2, mu_mean)?;
    let sigma = pre_heterodyne_state(stage, ComplexAmplitude::zero(), measurer)?
        .heterodyne_outcome_distribution(k)?
        .cov_amplitude();

    let s = &eta_law.cov;
    let s_lt = s * &l.transpose();
    let l_s_lt = &(&l * s) * &l.transpose();
    let mut cov = Matrix::zeros(4, 4);
    cov.set_block(0, 0, s);
    cov.set_block(0, 2, &s_lt);
    cov.set_block(2, 0, &s_lt.transpose());
    cov.set_block(2, 2, &(&l_s_lt + &sigma));
    let lm = l.mul_vec(&eta_law.mean);
    let mut mean = eta_law.mean.clone();
    mean.extend([lm[0] + l0[0], lm[1] + l0[1]]);
    Ok(GaussianLaw { mean, cov })
}

/// `f(o) = G o + h` for an affine `f` on `dim` inputs; returns `(G, h)`.
fn probe_affine<T: Real>(
    dim: usize,
    f: impl Fn(&[T]) -> Result<[T; 2]>,
) -> Result<(Matrix<T>, [T; 2])> {
    let mut o = vec![T::zero(); dim];
    let h = f(&o)?;
    let mut g = Matrix::zeros(2, dim);
    for k in 0..dim {
        o[k] = T::one();
        let v = f(&o)?;
        o[k] = T::zero();
        g[(0, k)] = v[0] - h[0];
        g[(1, k)] = v[1] - h[1];
    }
    Ok((g, h))
}

/// Outcome-averaged single-mode output: Gaussian mixture of the conditional
/// outputs over `law`.
pub fn average_output<T: Real>(
    law: &GaussianLaw<T>,
    conditional_cov: &Matrix<T>,
    output_mean: impl Fn(&[T]) -> Result<[T; 2]>,
) -> Result<GaussianState<T>> {
    let (g, h) = probe_affine(law.mean.len(), output_mean)?;
    let gm = g.mul_vec(&law.mean);
    let spread = &(&g * &law.cov) * &g.transpose();
    Ok(GaussianState::from_parts(
        vec![gm[0] + h[0], gm[1] + h[1]],
        conditional_cov + &spread,
    ))
}

/// Result of one pipeline run.
///
/// `fidelity_*` and `mean_residual_bob` describe the outcome-averaged
/// (teleported) output; `trajectory_fidelity_*` belong to the outcomes the
/// run was conditioned on.
#[derive(Debug, Clone)]
pub struct StrategyOutcome<T> {
    pub fidelity_bob: T,
    pub fidelity_charlie: T,
    pub trajectory_fidelity_bob: T,
    pub trajectory_fidelity_charlie: T,
    pub conditional_cov_bob: Matrix<T>,
    pub mean_residual_bob: QuadratureVector<T>,
}

fn residual<T: Real>(
    state: &GaussianState<T>,
    input: ComplexAmplitude<T>,
) -> Result<QuadratureVector<T>> {
    let m = state.mode_mean(0);
    let t = input.to_quadratures();
    QuadratureVector::new(vec![m[0] - t[0], m[1] - t[1]])
}

pub fn run_noncoop_pipeline<T: Real>(
    alpha: T,
    input_amp: ComplexAmplitude<T>,
    bell_outcome: ComplexAmplitude<T>,
) -> Result<StrategyOutcome<T>> {
    let stage = BellStage::prepare(alpha, input_amp)?;
    let traj = noncoop_trajectory(&stage, bell_outcome)?;
    let law = stage.bell_outcome_law();
    let averaged = |r: Receiver| {
        average_output(&law, traj.receiver(r).cov().matrix(), |o| {
            Ok(
                noncoop_trajectory(&stage, ComplexAmplitude { re: o[0], im: o[1] })?
                    .receiver(r)
                    .mode_mean(0),
            )
        })
    };
    let bob = averaged(Receiver::Bob)?;
    let charlie = averaged(Receiver::Charlie)?;
    Ok(StrategyOutcome {
        fidelity_bob: bob.fidelity_vs_coherent(input_amp)?,
        fidelity_charlie: charlie.fidelity_vs_coherent(input_amp)?,
        trajectory_fidelity_bob: traj.bob.fidelity_vs_coherent(input_amp)?,
        trajectory_fidelity_charlie: traj.charlie.fidelity_vs_coherent(input_amp)?,
        conditional_cov_bob: traj.bob.cov().matrix().clone(),
        mean_residual_bob: residual(&bob, input_amp)?,
    })
}

/// Cooperative strategy with Charlie measuring.
pub fn run_coop_pipeline<T: Real>(
    alpha: T,
    input_amp: ComplexAmplitude<T>,
    bell_outcome: ComplexAmplitude<T>,
    het_outcome: ComplexAmplitude<T>,
) -> Result<StrategyOutcome<T>> {
    run_coop_pipeline_with_roles(
        alpha,
        input_amp,
        bell_outcome,
        het_outcome,
        Receiver::Charlie,
    )
}

pub fn run_coop_pipeline_with_roles<T: Real>(
    alpha: T,
    input_amp: ComplexAmplitude<T>,
    bell_outcome: ComplexAmplitude<T>,
    het_outcome: ComplexAmplitude<T>,
    measurer: Receiver,
) -> Result<StrategyOutcome<T>> {
    run_coop_pipeline_with_shift(
        alpha,
        input_amp,
        bell_outcome,
        het_outcome,
        measurer,
        modified_shift,
    )
}

/// Cooperative pipeline with a caller-supplied correction rule.
pub fn run_coop_pipeline_with_shift<T: Real>(
    alpha: T,
    input_amp: ComplexAmplitude<T>,
    bell_outcome: ComplexAmplitude<T>,
    het_outcome: ComplexAmplitude<T>,
    measurer: Receiver,
    shift: ShiftRule<T>,
) -> Result<StrategyOutcome<T>> {
    let stage = BellStage::prepare(alpha, input_amp)?;
    let traj = coop_trajectory_with_shift(&stage, bell_outcome, het_outcome, measurer, shift)?;
    let law = coop_outcome_law(&stage, measurer)?;
    let averaged = |r: Receiver| {
        average_output(&law, traj.receiver(r).cov().matrix(), |o| {
            let eta = ComplexAmplitude { re: o[0], im: o[1] };
            let mu = ComplexAmplitude { re: o[2], im: o[3] };
            Ok(
                coop_trajectory_with_shift(&stage, eta, mu, measurer, shift)?
                    .receiver(r)
                    .mode_mean(0),
            )
        })
    };
    let bob = averaged(Receiver::Bob)?;
    let charlie = averaged(Receiver::Charlie)?;
    Ok(StrategyOutcome {
        fidelity_bob: bob.fidelity_vs_coherent(input_amp)?,
        fidelity_charlie: charlie.fidelity_vs_coherent(input_amp)?,
        trajectory_fidelity_bob: traj.bob.fidelity_vs_coherent(input_amp)?,
        trajectory_fidelity_charlie: traj.charlie.fidelity_vs_coherent(input_amp)?,
        conditional_cov_bob: traj.bob.cov().matrix().clone(),
        mean_residual_bob: residual(&bob, input_amp)?,
    })
}

/// Per-receiver fidelity when roles alternate, computed from both role
/// assignments of the cooperative pipeline: `(F_B + F_C) / 2` averaged over
/// the two assignments.
pub fn alternation_fidelity_pipeline<T: Real>(
    alpha: T,
    input_amp: ComplexAmplitude<T>,
) -> Result<(T, T)> {
    let z = ComplexAmplitude::zero();
    let c = run_coop_pipeline_with_roles(alpha, input_amp, z, z, Receiver::Charlie)?;
    let b = run_coop_pipeline_with_roles(alpha, input_amp, z, z, Receiver::Bob)?;
    let h = half::<T>();
    Ok((
        (c.fidelity_bob + b.fidelity_bob) * h,
        (c.fidelity_charlie + b.fidelity_charlie) * h,
    ))
}
