//! Continuous-variable teleportation game: one sender, two receivers, a
//! symmetric three-mode Gaussian channel.
//!
//! The receivers either act independently (standard telecloning) or
//! cooperate: one heterodynes and passes the result on, the other applies a
//! corrected displacement. Every fidelity is available both in closed form
//! ([`protocols`]) and as the output of a phase-space simulation of the
//! protocol ([`protocols`] pipelines, [`montecarlo`] sampler).
//!
//! The numerical core is generic over [`Real`] (`f32` / `f64`); the aliases
//! below fix it to `f64`.

pub mod analysis;
pub mod channel;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod montecarlo;
pub mod protocols;
pub mod scalar;

pub use channel::{
    build_cm, channel_params, exchange_symmetry_check, kappa, reduced_channel, ChannelParams,
    Receiver,
};
pub use error::{Error, Result};
pub use gaussian::{
    make_coherent, physicality, ComplexAmplitude, CovarianceMatrix, GaussianState, Quadrature,
    QuadratureVector,
};
pub use linalg::Matrix;
pub use protocols::{
    alternation_fidelity, f_ab_coop, f_ac_coop, f_coop_avg, f_noncoop, modified_shift,
    run_coop_pipeline, run_noncoop_pipeline, two_mode_teleport_fidelity, StrategyOutcome,
};
pub use scalar::Real;

pub type Amplitude = ComplexAmplitude<f64>;
pub type State = GaussianState<f64>;
pub type Covariance = CovarianceMatrix<f64>;
pub type Params = ChannelParams<f64>;
pub type Outcome = StrategyOutcome<f64>;
pub type Row = analysis::SweepRow<f64>;
pub type Threshold = analysis::ThresholdResult<f64>;

pub type Amplitude32 = ComplexAmplitude<f32>;
pub type State32 = GaussianState<f32>;
