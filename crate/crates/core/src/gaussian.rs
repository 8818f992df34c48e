//! Multimode Gaussian states in phase space.
//!
//! Quadratures are interleaved `(x1, p1, x2, p2, ...)` and the vacuum has
//! covariance `I/2`. A complex amplitude `φ` corresponds to the quadrature
//! mean `√2 (Re φ, Im φ)`, so displacing by `φ` and heterodyning return the
//! same number with unit gain.
//!
//! Every operation is a pure function returning a new state.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Result};
use crate::linalg::Matrix;
use crate::scalar::{half, Real};

/// A complex number `re + i im` used for coherent amplitudes and for the
/// Bell (`η`) and heterodyne (`μ`) measurement results.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexAmplitude<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> ComplexAmplitude<T> {
    pub fn new(re: T, im: T) -> Result<Self> {
        let amp = Self { re, im };
        amp.validate()?;
        Ok(amp)
    }

    pub fn zero() -> Self {
        Self {
            re: T::zero(),
            im: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.re.is_finite() && self.im.is_finite() {
            Ok(())
        } else {
            Err(invalid(format!(
                "complex amplitude must be finite, got ({}, {})",
                self.re, self.im
            )))
        }
    }

    /// Quadrature-space image `√2 (re, im)`.
    pub fn to_quadratures(self) -> [T; 2] {
        let s = T::SQRT_2();
        [s * self.re, s * self.im]
    }

    pub fn from_quadratures(q: [T; 2]) -> Self {
        let s = T::FRAC_1_SQRT_2();
        Self {
            re: q[0] * s,
            im: q[1] * s,
        }
    }

    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }
}

impl<T: Real> Add for ComplexAmplitude<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<T: Real> Sub for ComplexAmplitude<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<T: Real> Neg for ComplexAmplitude<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Real scaling.
impl<T: Real> Mul<T> for ComplexAmplitude<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self {
            re: self.re * k,
            im: self.im * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    #[inline]
    fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }
}

/// Quadrature means, length `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureVector<T>(Vec<T>);

impl<T: Real> QuadratureVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return Err(invalid(format!(
                "quadrature vector length must be even and positive, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(invalid("quadrature vector has non-finite entries"));
        }
        Ok(Self(entries))
    }

    pub fn zeros(modes: usize) -> Self {
        Self(vec![T::zero(); 2 * modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn norm(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }
}

/// Symmetric `2n x 2n` covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T>(Matrix<T>);

impl<T: Real> CovarianceMatrix<T> {
    /// Symmetrizes `m`; rejects odd or non-square shapes, non-finite entries and
    /// asymmetry above [`Real::symmetry_tol`].
    pub fn new(m: Matrix<T>) -> Result<Self> {
        check_shape(&m)?;
        if !m.is_finite() {
            return Err(invalid("covariance matrix has non-finite entries"));
        }
        let asym = m.max_asymmetry();
        if asym > T::symmetry_tol() {
            return Err(invalid(format!("covariance matrix asymmetric by {asym}")));
        }
        Ok(Self(m.symmetrized()))
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(Matrix::identity(2 * modes).scale(half()))
    }

    pub fn modes(&self) -> usize {
        self.0.rows() / 2
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    /// The 2x2 block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        self.0.select(&[2 * i, 2 * i + 1], &[2 * j, 2 * j + 1])
    }

    pub fn is_physical(&self) -> bool {
        min_uncertainty_eigenvalue(&self.0) >= -T::physicality_tol()
    }
}

fn check_shape<T: Real>(m: &Matrix<T>) -> Result<()> {
    if !m.is_square() || m.rows() == 0 || !m.rows().is_multiple_of(2) {
        return Err(invalid(format!(
            "covariance matrix must be square with positive even dimension, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// `Ω = ⊕ [[0, 1], [-1, 0]]` over `modes` modes.
pub fn symplectic_form<T: Real>(modes: usize) -> Matrix<T> {
    let mut om = Matrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        om[(2 * k, 2 * k + 1)] = T::one();
        om[(2 * k + 1, 2 * k)] = -T::one();
    }
    om
}

/// `‖S Ω Sᵀ - Ω‖_max ≤ tol`.
pub fn is_symplectic<T: Real>(s: &Matrix<T>, tol: T) -> bool {
    if !s.is_square() || !s.rows().is_multiple_of(2) {
        return false;
    }
    let om = symplectic_form(s.rows() / 2);
    let lhs = &(s * &om) * &s.transpose();
    lhs.max_abs_diff(&om) <= tol
}

/// Smallest eigenvalue of the Hermitian matrix `V - (i/2)Ω`.
///
/// Evaluated through the real symmetric embedding `[[V, Ω/2], [-Ω/2, V]]`,
/// whose spectrum is that of the Hermitian matrix with doubled multiplicity.
pub fn min_uncertainty_eigenvalue<T: Real>(v: &Matrix<T>) -> T {
    let n = v.rows();
    let half_omega = symplectic_form::<T>(n / 2).scale(half());
    let mut big = Matrix::zeros(2 * n, 2 * n);
    big.set_block(0, 0, v);
    big.set_block(n, n, v);
    big.set_block(0, n, &half_omega);
    big.set_block(n, 0, &half_omega.scale(-T::one()));
    big.symmetric_eigenvalues()[0]
}

/// Uncertainty-principle test `V - (i/2)Ω ≥ 0` with eigenvalue floor
/// `-Real::physicality_tol()`.
pub fn physicality<T: Real>(cov: &Matrix<T>) -> Result<bool> {
    check_shape(cov)?;
    let asym = cov.max_asymmetry();
    if asym > T::symmetry_tol() {
        return Err(invalid(format!("covariance matrix asymmetric by {asym}")));
    }
    Ok(min_uncertainty_eigenvalue(cov) >= -T::physicality_tol())
}

/// Gaussian law of a heterodyne result.
///
/// `mean` is in amplitude units; `cov_quadrature` is the covariance of
/// `√2 μ`, i.e. of the result expressed in quadrature units.
#[derive(Debug, Clone, PartialEq)]
pub struct HeterodyneDistribution<T> {
    pub mean: ComplexAmplitude<T>,
    pub cov_quadrature: Matrix<T>,
}

impl<T: Real> HeterodyneDistribution<T> {
    /// Covariance of `μ` itself, `cov_quadrature / 2`.
    pub fn cov_amplitude(&self) -> Matrix<T> {
        self.cov_quadrature.scale(half())
    }
}

/// Blocks of a state split into one measured mode and the rest.
struct Split<T> {
    kept: Matrix<T>,
    /// 2x2 block of the measured mode.
    measured: Matrix<T>,
    /// Kept-by-measured cross covariance.
    cross: Matrix<T>,
    mean_kept: Vec<T>,
    mean_measured: [T; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState<T> {
    mean: QuadratureVector<T>,
    cov: CovarianceMatrix<T>,
}

impl<T: Real> GaussianState<T> {
    /// Validated constructor: the covariance must satisfy the uncertainty
    /// principle.
    pub fn new(mean: QuadratureVector<T>, cov: CovarianceMatrix<T>) -> Result<Self> {
        if mean.modes() != cov.modes() {
            return Err(invalid(format!(
                "mean has {} modes but covariance has {}",
                mean.modes(),
                cov.modes()
            )));
        }
        if !cov.is_physical() {
            return Err(invalid(
                "covariance matrix violates the uncertainty principle",
            ));
        }
        Ok(Self { mean, cov })
    }

    /// Internal constructor for results of physicality-preserving maps.
    pub(crate) fn from_parts(mean: Vec<T>, cov: Matrix<T>) -> Self {
        debug_assert_eq!(mean.len(), cov.rows());
        Self {
            mean: QuadratureVector(mean),
            cov: CovarianceMatrix(cov.symmetrized()),
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: QuadratureVector::zeros(modes),
            cov: CovarianceMatrix::vacuum(modes),
        }
    }

    /// Coherent state `|amp⟩`: covariance `I/2`, mean `√2 (re, im)`.
    pub fn coherent(amp: ComplexAmplitude<T>) -> Result<Self> {
        amp.validate()?;
        let q = amp.to_quadratures();
        Ok(Self {
            mean: QuadratureVector(q.to_vec()),
            cov: CovarianceMatrix::vacuum(1),
        })
    }

    pub fn modes(&self) -> usize {
        self.cov.modes()
    }

    pub fn mean(&self) -> &QuadratureVector<T> {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix<T> {
        &self.cov
    }

    pub fn mode_mean(&self, mode: usize) -> [T; 2] {
        let m = self.mean.as_slice();
        [m[2 * mode], m[2 * mode + 1]]
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes() {
            return Err(invalid(format!(
                "mode index {mode} out of range for a {}-mode state",
                self.modes()
            )));
        }
        Ok(())
    }

    /// Joint state, modes of `self` first.
    pub fn tensor(&self, other: &Self) -> Self {
        let n1 = 2 * self.modes();
        let n2 = 2 * other.modes();
        let mut cov = Matrix::zeros(n1 + n2, n1 + n2);
        cov.set_block(0, 0, self.cov.matrix());
        cov.set_block(n1, n1, other.cov.matrix());
        let mut mean = self.mean.as_slice().to_vec();
        mean.extend_from_slice(other.mean.as_slice());
        Self::from_parts(mean, cov)
    }

    /// `V → S V Sᵀ`, `d → S d`. `s` must be symplectic for the result to stay
    /// physical; this is not checked.
    pub fn apply_symplectic(&self, s: &Matrix<T>) -> Result<Self> {
        let n = 2 * self.modes();
        if s.rows() != n || s.cols() != n {
            return Err(invalid(format!(
                "symplectic matrix is {}x{}, state needs {n}x{n}",
                s.rows(),
                s.cols()
            )));
        }
        let cov = &(s * self.cov.matrix()) * &s.transpose();
        let mean = s.mul_vec(self.mean.as_slice());
        Ok(Self::from_parts(mean, cov))
    }

    /// Balanced beam splitter: mode `i` leaves with `(q_i - q_j)/√2`, mode
    /// `j` with `(q_i + q_j)/√2`, for both quadratures.
    pub fn beam_splitter_50_50(&self, i: usize, j: usize) -> Result<Self> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(invalid("beam splitter needs two distinct modes"));
        }
        let s = beam_splitter_matrix::<T>(self.modes(), i, j);
        self.apply_symplectic(&s)
    }

    /// `D(amp)` on one mode: its mean moves by `√2 (re, im)`.
    pub fn displace(&self, mode: usize, amp: ComplexAmplitude<T>) -> Result<Self> {
        self.check_mode(mode)?;
        amp.validate()?;
        let q = amp.to_quadratures();
        let mut mean = self.mean.as_slice().to_vec();
        mean[2 * mode] += q[0];
        mean[2 * mode + 1] += q[1];
        Ok(Self {
            mean: QuadratureVector(mean),
            cov: self.cov.clone(),
        })
    }

    /// Reduced state on `keep`, in that order. A permutation of all modes
    /// reorders the state.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(invalid("partial trace must keep at least one mode"));
        }
        for (k, &m) in keep.iter().enumerate() {
            self.check_mode(m)?;
            if keep[..k].contains(&m) {
                return Err(invalid(format!("mode {m} listed twice in partial trace")));
            }
        }
        let idx = quadrature_indices(keep);
        let mean = idx.iter().map(|&i| self.mean.as_slice()[i]).collect();
        let cov = self.cov.matrix().select(&idx, &idx);
        Ok(Self::from_parts(mean, cov))
    }

    fn split(&self, mode: usize) -> Split<T> {
        let kept: Vec<usize> = (0..self.modes()).filter(|&m| m != mode).collect();
        let ki = quadrature_indices(&kept);
        let mi = [2 * mode, 2 * mode + 1];
        let v = self.cov.matrix();
        let a = v.select(&ki, &ki);
        let b = v.select(&mi, &mi);
        let c = v.select(&ki, &mi);
        let mean_kept = ki.iter().map(|&i| self.mean.as_slice()[i]).collect();
        Split {
            kept: a,
            measured: b,
            cross: c,
            mean_kept,
            mean_measured: self.mode_mean(mode),
        }
    }

    /// Gaussian conditioning of the remaining modes given `gain_block`
    /// (the weight applied to the measured-mode innovation).
    fn condition(&self, mode: usize, weight: &Matrix<T>, innovation: [T; 2]) -> Self {
        let Split {
            kept,
            cross,
            mean_kept,
            ..
        } = self.split(mode);
        let k = &cross * weight;
        let cov = &kept - &(&k * &cross.transpose());
        let shift = k.mul_vec(&innovation);
        let mean = mean_kept.iter().zip(&shift).map(|(&m, &s)| m + s).collect();
        Self::from_parts(mean, cov)
    }

    /// Conditional state of the other modes after an ideal homodyne
    /// measurement of `quadrature` on `mode` with result `outcome`
    /// (quadrature units). The measured mode is removed.
    pub fn homodyne_update(&self, mode: usize, quadrature: Quadrature, outcome: T) -> Result<Self> {
        self.check_mode(mode)?;
        if self.modes() < 2 {
            return Err(invalid("homodyne conditioning needs at least two modes"));
        }
        if !outcome.is_finite() {
            return Err(invalid("homodyne outcome must be finite"));
        }
        let q = quadrature.offset();
        let Split {
            measured: b,
            mean_measured: m,
            ..
        } = self.split(mode);
        // Moore-Penrose inverse of the rank-1 block Π B Π.
        let var = b[(q, q)];
        let mut pinv = Matrix::zeros(2, 2);
        if var > T::zero() {
            pinv[(q, q)] = var.recip();
        }
        let mut innovation = [T::zero(); 2];
        innovation[q] = outcome - m[q];
        Ok(self.condition(mode, &pinv, innovation))
    }

    /// `(mean, variance)` of a homodyne result on `quadrature` of `mode`.
    pub fn homodyne_outcome_distribution(
        &self,
        mode: usize,
        quadrature: Quadrature,
    ) -> Result<(T, T)> {
        self.check_mode(mode)?;
        let q = 2 * mode + quadrature.offset();
        Ok((self.mean.as_slice()[q], self.cov.matrix()[(q, q)]))
    }

    /// Conditional state of the other modes after heterodyning `mode` with
    /// result `outcome` (amplitude units). The measured mode is removed.
    pub fn heterodyne_update(&self, mode: usize, outcome: ComplexAmplitude<T>) -> Result<Self> {
        self.check_mode(mode)?;
        if self.modes() < 2 {
            return Err(invalid(
                "heterodyne conditioning needs at least two modes; use heterodyne_outcome_distribution for a single mode",
            ));
        }
        outcome.validate()?;
        let Split {
            measured: b,
            mean_measured: m,
            ..
        } = self.split(mode);
        let noisy = &b + &Matrix::identity(2).scale(half());
        let inv = noisy
            .inverse2()
            .ok_or_else(|| invalid("singular heterodyne block"))?;
        let r = outcome.to_quadratures();
        Ok(self.condition(mode, &inv, [r[0] - m[0], r[1] - m[1]]))
    }

    pub fn heterodyne_outcome_distribution(
        &self,
        mode: usize,
    ) -> Result<HeterodyneDistribution<T>> {
        self.check_mode(mode)?;
        let b = self.cov.block(mode, mode);
        Ok(HeterodyneDistribution {
            mean: ComplexAmplitude::from_quadratures(self.mode_mean(mode)),
            cov_quadrature: &b + &Matrix::identity(2).scale(half()),
        })
    }

    /// Overlap `⟨amp|ρ|amp⟩` of a single-mode state with a coherent state:
    /// `exp(-Δᵀ(σ + I/2)⁻¹Δ / 2) / √det(σ + I/2)`.
    pub fn fidelity_vs_coherent(&self, amp: ComplexAmplitude<T>) -> Result<T> {
        if self.modes() != 1 {
            return Err(invalid(format!(
                "fidelity against a coherent state needs a single-mode state, got {} modes",
                self.modes()
            )));
        }
        amp.validate()?;
        let target = amp.to_quadratures();
        let m = self.mode_mean(0);
        let d = [m[0] - target[0], m[1] - target[1]];
        let sum = self.cov.matrix() + &Matrix::identity(2).scale(half());
        let inv = sum
            .inverse2()
            .ok_or_else(|| invalid("singular covariance in fidelity"))?;
        let quad = d[0] * (inv[(0, 0)] * d[0] + inv[(0, 1)] * d[1])
            + d[1] * (inv[(1, 0)] * d[0] + inv[(1, 1)] * d[1]);
        Ok((-half::<T>() * quad).exp() / sum.det2().sqrt())
    }
}

/// Free-function spelling of [`GaussianState::coherent`].
pub fn make_coherent<T: Real>(amp: ComplexAmplitude<T>) -> Result<GaussianState<T>> {
    GaussianState::coherent(amp)
}

fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

/// Symplectic matrix of [`GaussianState::beam_splitter_50_50`] on `modes` modes.
pub fn beam_splitter_matrix<T: Real>(modes: usize, i: usize, j: usize) -> Matrix<T> {
    let r = T::FRAC_1_SQRT_2();
    let mut s = Matrix::identity(2 * modes);
    for q in 0..2 {
        let (a, b) = (2 * i + q, 2 * j + q);
        s[(a, a)] = r;
        s[(a, b)] = -r;
        s[(b, a)] = r;
        s[(b, b)] = r;
    }
    s
}
