//! The one-parameter tripartite channel shared by Alice (mode `a`), Bob
//! (mode `b`) and Charlie (mode `c`).
//!
//! Covariance blocks: `(a,a) = αI`, `(b,b) = (c,c) = βI`,
//! `(a,b) = (a,c) = δZ`, `(b,c) = γI` with `Z = diag(1, -1)` and
//! `β = (α+1)/2`, `γ = α/2`, `δ = √((2α-1)(α+1))/2`, `α ≥ 1/2`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::Matrix;
use crate::scalar::{half, Real};

/// Mode indices of [`build_cm`].
pub const MODE_A: usize = 0;
pub const MODE_B: usize = 1;
pub const MODE_C: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Bob,
    Charlie,
}

impl Receiver {
    pub fn other(self) -> Self {
        match self {
            Receiver::Bob => Receiver::Charlie,
            Receiver::Charlie => Receiver::Bob,
        }
    }

    pub fn channel_mode(self) -> usize {
        match self {
            Receiver::Bob => MODE_B,
            Receiver::Charlie => MODE_C,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !alpha.is_finite() || alpha < half() {
        return Err(Error::Domain(format!(
            "alpha must satisfy alpha >= 1/2, got {alpha}"
        )));
    }
    Ok(())
}

pub fn channel_params<T: Real>(alpha: T) -> Result<ChannelParams<T>> {
    check_alpha(alpha)?;
    let one = T::one();
    let two = T::lit(2.0);
    Ok(ChannelParams {
        alpha,
        beta: (alpha + one) / two,
        gamma: alpha / two,
        delta: ((two * alpha - one) * (alpha + one)).sqrt() / two,
    })
}

impl<T: Real> ChannelParams<T> {
    /// `1 + α + β - 2δ`.
    pub fn kappa(&self) -> T {
        T::one() + self.alpha + self.beta - T::lit(2.0) * self.delta
    }
}

/// Zero-mean three-mode channel state, modes ordered `(a, b, c)`.
pub fn build_cm<T: Real>(params: &ChannelParams<T>) -> Result<GaussianState<T>> {
    check_alpha(params.alpha)?;
    let ChannelParams {
        alpha,
        beta,
        gamma,
        delta,
    } = *params;
    let id = Matrix::<T>::identity(2);
    let z = Matrix::from_diagonal(&[T::one(), -T::one()]);
    let mut v = Matrix::zeros(6, 6);
    v.set_block(0, 0, &id.scale(alpha));
    v.set_block(2, 2, &id.scale(beta));
    v.set_block(4, 4, &id.scale(beta));
    for (r, c) in [(0, 2), (2, 0), (0, 4), (4, 0)] {
        v.set_block(r, c, &z.scale(delta));
    }
    v.set_block(2, 4, &id.scale(gamma));
    v.set_block(4, 2, &id.scale(gamma));
    Ok(GaussianState::from_parts(vec![T::zero(); 6], v))
}

/// `κ(α) = 1 + α + (α+1)/2 - √((2α-1)(α+1))`.
pub fn kappa<T: Real>(alpha: T) -> Result<T> {
    Ok(channel_params(alpha)?.kappa())
}

/// `true` iff swapping modes `b` and `c` leaves mean and covariance unchanged
/// within `1e-12`.
pub fn exchange_symmetry_check<T: Real>(state: &GaussianState<T>) -> Result<bool> {
    if state.modes() != 3 {
        return Err(invalid(format!(
            "exchange symmetry needs a 3-mode state, got {}",
            state.modes()
        )));
    }
    let swapped = state.partial_trace(&[MODE_A, MODE_C, MODE_B])?;
    let tol = T::lit(1e-12);
    let mean_ok = swapped
        .mean()
        .as_slice()
        .iter()
        .zip(state.mean().as_slice())
        .all(|(&x, &y)| (x - y).abs() <= tol);
    Ok(mean_ok && swapped.cov().matrix().max_abs_diff(state.cov().matrix()) <= tol)
}

/// Alice plus one receiver, modes ordered `(a, receiver)`.
pub fn reduced_channel<T: Real>(
    state: &GaussianState<T>,
    receiver: Receiver,
) -> Result<GaussianState<T>> {
    if state.modes() != 3 {
        return Err(invalid(format!(
            "reduced channel needs a 3-mode state, got {}",
            state.modes()
        )));
    }
    state.partial_trace(&[MODE_A, receiver.channel_mode()])
}
