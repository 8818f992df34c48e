//! Fidelity sweeps over the channel noise `α` and the crossing points of the
//! strategy curves.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::protocols::{f_ab_coop, f_ac_coop, f_coop_avg, f_noncoop};
use crate::scalar::{half, Real};

pub const MAX_BISECTION_ITERATIONS: usize = 200;
pub const THRESHOLD_SCAN_LO: f64 = 1.0;
pub const THRESHOLD_SCAN_HI: f64 = 50.0;
pub const SCAN_STEP: f64 = 0.01;
pub const CLASSICAL_SCAN_LO: f64 = 2.0;
pub const CLASSICAL_SCAN_HI: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub alpha: T,
    pub f_tr: T,
    pub f_ab: T,
    pub f_ac: T,
    pub f_coop: T,
}

impl<T: Real> SweepRow<T> {
    pub fn at(alpha: T) -> Result<Self> {
        let f_ab = f_ab_coop(alpha)?;
        let f_ac = f_ac_coop(alpha)?;
        Ok(Self {
            alpha,
            f_tr: f_noncoop(alpha)?,
            f_ab,
            f_ac,
            f_coop: (f_ab + f_ac) * half(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult<T> {
    pub alpha_th: T,
    pub f_at_threshold: T,
    pub iterations: usize,
    pub residual: T,
}

/// `steps` uniformly spaced values from `lo` to `hi`, both included.
pub fn grid<T: Real>(lo: T, hi: T, steps: usize) -> Vec<T> {
    let last = T::from_usize(steps - 1).expect("grid size");
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * T::from_usize(i).expect("grid index") / last
            }
        })
        .collect()
}

pub fn sweep<T: Real>(alpha_min: T, alpha_max: T, steps: usize) -> Result<Vec<SweepRow<T>>> {
    if !(alpha_min.is_finite() && alpha_max.is_finite())
        || alpha_min < half()
        || alpha_min >= alpha_max
    {
        return Err(invalid(format!(
            "sweep range must satisfy 1/2 <= alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]"
        )));
    }
    if steps < 2 {
        return Err(invalid(format!(
            "sweep needs at least 2 steps, got {steps}"
        )));
    }
    grid(alpha_min, alpha_max, steps)
        .into_iter()
        .map(SweepRow::at)
        .collect()
}

/// `f_coop(α) - f_tr(α)`: positive where cooperating pays off.
pub fn coop_advantage<T: Real>(alpha: T) -> Result<T> {
    Ok(f_coop_avg(alpha)? - f_noncoop(alpha)?)
}

/// Adjacent grid points `(a, b)` of `[lo, hi]` (spacing `step`) where `f`
/// changes sign, in increasing order. An exact zero at a grid point counts
/// as a change into the following interval.
pub fn sign_changes<T: Real>(
    f: impl Fn(T) -> Result<T>,
    lo: T,
    hi: T,
    step: T,
) -> Result<Vec<(T, T)>> {
    let n = ((hi - lo) / step).round().to_usize().unwrap_or(0).max(1);
    let xs = grid(lo, hi, n + 1);
    let mut out = Vec::new();
    let mut prev = (xs[0], f(xs[0])?);
    for &x in &xs[1..] {
        let fx = f(x)?;
        if (prev.1 < T::zero()) != (fx < T::zero()) {
            out.push((prev.0, x));
        }
        prev = (x, fx);
    }
    Ok(out)
}

/// Bisection on a sign-changing bracket until `|f(mid)| <= tol`.
/// Returns the root and the number of midpoint evaluations.
pub fn bisect<T: Real>(
    f: impl Fn(T) -> Result<T>,
    lo: T,
    hi: T,
    tol: T,
    max_iter: usize,
) -> Result<(T, usize)> {
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if (f_lo < T::zero()) == (f_hi < T::zero()) {
        return Err(Error::Bracket {
            what: "bisection target",
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lo_negative = f_lo < T::zero();
    for it in 1..=max_iter {
        let mid = (lo + hi) * half();
        let fm = f(mid)?;
        if fm.abs() <= tol {
            return Ok((mid, it));
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if (fm < T::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        tol: tol.to_f64().unwrap_or(f64::NAN),
        max_iter,
    })
}

/// Noise level above which the alternating cooperative strategy beats
/// standard telecloning.
pub fn find_threshold<T: Real>(tol: T) -> Result<ThresholdResult<T>> {
    if tol.is_nan() || tol <= T::zero() {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let (lo, hi) = (T::lit(THRESHOLD_SCAN_LO), T::lit(THRESHOLD_SCAN_HI));
    let bracket = sign_changes(coop_advantage, lo, hi, T::lit(SCAN_STEP))?
        .into_iter()
        .find(|&(a, _)| coop_advantage(a).map(|g| g < T::zero()).unwrap_or(false))
        .ok_or(Error::Bracket {
            what: "f_coop - f_tr",
            lo: THRESHOLD_SCAN_LO,
            hi: THRESHOLD_SCAN_HI,
        })?;
    let (alpha_th, iterations) = bisect(
        coop_advantage,
        bracket.0,
        bracket.1,
        tol,
        MAX_BISECTION_ITERATIONS,
    )?;
    Ok(ThresholdResult {
        alpha_th,
        f_at_threshold: f_noncoop(alpha_th)?,
        iterations,
        residual: coop_advantage(alpha_th)?.abs(),
    })
}

/// Where each strategy drops to the classical fidelity 1/2 on
/// `(2, 200]`: `(alpha_tr_half, alpha_coop_half)`.
pub fn find_classical_crossings<T: Real>() -> Result<(T, T)> {
    let (lo, hi) = (T::lit(CLASSICAL_SCAN_LO), T::lit(CLASSICAL_SCAN_HI));
    let tol = T::epsilon() * T::lit(1e3);
    let tr = bisect(
        |a| Ok(f_noncoop(a)? - half()),
        lo,
        hi,
        tol,
        MAX_BISECTION_ITERATIONS,
    )?
    .0;
    let coop = bisect(
        |a| Ok(f_coop_avg(a)? - half()),
        lo,
        hi,
        tol,
        MAX_BISECTION_ITERATIONS,
    )?
    .0;
    Ok((tr, coop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sweep_endpoints_and_errors() {
        let rows = sweep(0.5, 12.0, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].alpha, 0.5);
        assert_eq!(rows[1].alpha, 12.0);
        assert!(sweep(0.4, 12.0, 10).is_err());
        assert!(sweep(3.0, 3.0, 10).is_err());
        assert!(sweep(0.5, 12.0, 1).is_err());
    }

    #[test]
    fn sweep_row_at_two() {
        let rows = sweep(0.5, 2.0, 4).unwrap();
        assert_abs_diff_eq!(rows[3].f_tr, 2.0 / 3.0, epsilon = 1e-15);
        for r in &rows {
            assert_eq!(r.f_coop, (r.f_ab + r.f_ac) / 2.0);
        }
    }

    #[test]
    fn sweep_crossing_sides() {
        for r in sweep(0.5, 12.0, 1000).unwrap() {
            if r.alpha < 5.7 {
                assert!(r.f_tr > r.f_coop, "alpha={}", r.alpha);
            } else if r.alpha > 5.82 {
                assert!(r.f_tr < r.f_coop, "alpha={}", r.alpha);
            }
        }
    }

    #[test]
    fn threshold_values() {
        let t = find_threshold(1e-9).unwrap();
        assert!((5.70..=5.82).contains(&t.alpha_th), "{t:?}");
        assert!(t.residual <= 1e-9);
        assert_abs_diff_eq!(t.f_at_threshold, 0.5858, epsilon = 1e-4);
        let coarse = find_threshold(1e-3).unwrap();
        assert!(coarse.iterations < t.iterations);
        assert!(find_threshold(0.0).is_err());
    }

    #[test]
    fn single_sign_change_on_threshold_scan() {
        let changes = sign_changes(coop_advantage, 1.0, 50.0, 0.01).unwrap();
        assert_eq!(changes.len(), 1);
    }

    #[test]
    fn classical_crossings() {
        let (tr, coop) = find_classical_crossings::<f64>().unwrap();
        assert_abs_diff_eq!(tr, 5.0 + 2.0 * 5f64.sqrt(), epsilon = 1e-6);
        assert!(coop > tr);
        assert_abs_diff_eq!(f_coop_avg(coop).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn bisect_reports_missing_bracket() {
        let r = bisect(|x: f64| Ok(x * x + 1.0), -1.0, 1.0, 1e-9, 50);
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }

    #[test]
    fn threshold_in_single_precision() {
        let t = find_threshold(1e-5f32).unwrap();
        assert!((5.70..=5.82).contains(&t.alpha_th));
    }
}
