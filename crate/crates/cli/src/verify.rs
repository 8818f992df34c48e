//! Release gate run by `telegame verify`: closed forms against the Gaussian
//! pipelines, the Monte-Carlo sampler and the invariants over the `α` grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use telegame::analysis::{
    self, find_classical_crossings, find_threshold, grid, sign_changes, sweep,
};
use telegame::montecarlo::{estimate_fidelities, McConfig};
use telegame::protocols::{run_coop_pipeline_with_shift, ShiftRule};
use telegame::{
    build_cm, channel_params, exchange_symmetry_check, f_ab_coop, f_ac_coop, f_coop_avg, f_noncoop,
    modified_shift, physicality, run_noncoop_pipeline, Amplitude, Error, Receiver,
};

pub const GRID_POINTS: usize = 500;
pub const GRID_MAX: f64 = 50.0;
pub const PIPELINE_TOL: f64 = 1e-10;
pub const PIPELINE_TUPLES: usize = 100;
pub const MC_SHOTS: u64 = 100_000;
pub const MC_SEED: u64 = 42;
pub const MC_ALPHAS: [f64; 4] = [0.5, 2.0, 5.76, 10.0];

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Knobs for mutation testing the suite itself.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub shift: ShiftRule<f64>,
    pub mc_shots: u64,
}

impl Default for Hooks {
    fn default() -> Self {
        Self {
            shift: modified_shift,
            mc_shots: MC_SHOTS,
        }
    }
}

type Check = fn(&Hooks) -> Result<String, String>;

pub const F_AB_PIPELINE_CHECK: &str = "coop pipeline F_AB vs closed form";

const CHECKS: &[(&str, Check)] = &[
    ("no-cloning optimum at alpha=2", no_cloning_optimum),
    ("channel physical on grid", physical_on_grid),
    ("channel exchange-symmetric on grid", symmetric_on_grid),
    ("fidelity ordering on grid", ordering_on_grid),
    ("noncoop pipeline vs 1/kappa", noncoop_pipeline),
    (F_AB_PIPELINE_CHECK, coop_pipeline_bob),
    ("coop pipeline F_AC vs 1/(kappa+1)", coop_pipeline_charlie),
    (
        "conditional covariance outcome-independent",
        conditional_cov_independence,
    ),
    ("role swap inverts fidelities", role_swap),
    ("threshold in [5.70, 5.82]", threshold),
    ("classical crossings", classical_crossings),
    ("sweep crosses once at threshold", sweep_single_crossing),
    ("monte-carlo within 3 sigma", monte_carlo),
];

pub fn run_all(hooks: &Hooks) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| CheckResult {
            name,
            outcome: check(hooks),
        })
        .collect()
}

fn e(err: Error) -> String {
    err.to_string()
}

fn alpha_grid() -> Vec<f64> {
    grid(0.5, GRID_MAX, GRID_POINTS)
}

fn no_cloning_optimum(_: &Hooks) -> Result<String, String> {
    let f2: f64 = f_noncoop(2.0).map_err(e)?;
    if (f2 - 2.0 / 3.0).abs() > 1e-14 {
        return Err(format!("f_tr(2) = {f2}"));
    }
    let g = alpha_grid();
    let step = g[1] - g[0];
    let mut best = (g[0], f64::MIN);
    for &a in &g {
        let f = f_noncoop(a).map_err(e)?;
        if f > best.1 {
            best = (a, f);
        }
    }
    if (best.0 - 2.0).abs() > step {
        return Err(format!("argmax at alpha={}", best.0));
    }
    Ok(format!("f_tr(2)={f2:.15}, grid argmax {:.4}", best.0))
}

fn physical_on_grid(_: &Hooks) -> Result<String, String> {
    for a in alpha_grid() {
        let s = build_cm(&channel_params(a).map_err(e)?).map_err(e)?;
        if !physicality(s.cov().matrix()).map_err(e)? {
            return Err(format!("unphysical at alpha={a}"));
        }
    }
    match channel_params(0.4) {
        Err(Error::Domain(_)) => Ok(format!("{GRID_POINTS} points; alpha=0.4 rejected")),
        other => Err(format!("alpha=0.4 gave {other:?}")),
    }
}

fn symmetric_on_grid(_: &Hooks) -> Result<String, String> {
    for a in alpha_grid() {
        let s = build_cm(&channel_params(a).map_err(e)?).map_err(e)?;
        if !exchange_symmetry_check(&s).map_err(e)? {
            return Err(format!("asymmetric at alpha={a}"));
        }
    }
    Ok(format!("{GRID_POINTS} points"))
}

fn ordering_on_grid(_: &Hooks) -> Result<String, String> {
    for r in sweep(0.5, GRID_MAX, GRID_POINTS).map_err(e)? {
        if !(r.f_ab >= r.f_tr && r.f_ac < r.f_tr && r.f_ac <= 0.5) {
            return Err(format!("ordering broken at alpha={}: {r:?}", r.alpha));
        }
    }
    Ok("f_ab >= f_tr > f_ac, f_ac <= 1/2".into())
}

fn random_tuple(rng: &mut ChaCha8Rng) -> (f64, Amplitude, Amplitude, Amplitude) {
    let amp = |rng: &mut ChaCha8Rng| Amplitude {
        re: rng.random_range(-3.0..3.0),
        im: rng.random_range(-3.0..3.0),
    };
    let alpha = rng.random_range(0.5..GRID_MAX);
    (alpha, amp(rng), amp(rng), amp(rng))
}

fn tuples() -> Vec<(f64, Amplitude, Amplitude, Amplitude)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..PIPELINE_TUPLES)
        .map(|_| random_tuple(&mut rng))
        .collect()
}

fn noncoop_pipeline(_: &Hooks) -> Result<String, String> {
    let mut worst = 0.0f64;
    for (alpha, phi, eta, _) in tuples() {
        let o = run_noncoop_pipeline(alpha, phi, eta).map_err(e)?;
        let expect = f_noncoop(alpha).map_err(e)?;
        worst = worst
            .max((o.fidelity_bob - expect).abs())
            .max((o.fidelity_charlie - expect).abs());
        if o.mean_residual_bob.norm() >= 1e-9 {
            return Err(format!(
                "mean residual {} at alpha={alpha}",
                o.mean_residual_bob.norm()
            ));
        }
    }
    if worst >= PIPELINE_TOL {
        return Err(format!("max deviation {worst:.3e}"));
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn coop_pipeline_bob(h: &Hooks) -> Result<String, String> {
    let mut worst = 0.0f64;
    for (alpha, phi, eta, mu) in tuples() {
        let o = run_coop_pipeline_with_shift(alpha, phi, eta, mu, Receiver::Charlie, h.shift)
            .map_err(e)?;
        worst = worst.max((o.fidelity_bob - f_ab_coop(alpha).map_err(e)?).abs());
    }
    if worst >= PIPELINE_TOL {
        return Err(format!("max deviation {worst:.3e}"));
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn coop_pipeline_charlie(h: &Hooks) -> Result<String, String> {
    let mut worst = 0.0f64;
    for (alpha, phi, eta, mu) in tuples() {
        let o = run_coop_pipeline_with_shift(alpha, phi, eta, mu, Receiver::Charlie, h.shift)
            .map_err(e)?;
        worst = worst.max((o.fidelity_charlie - f_ac_coop(alpha).map_err(e)?).abs());
    }
    if worst >= PIPELINE_TOL {
        return Err(format!("max deviation {worst:.3e}"));
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn conditional_cov_independence(h: &Hooks) -> Result<String, String> {
    let ts = tuples();
    for pair in ts.chunks(2) {
        let (alpha, phi, eta1, mu1) = pair[0];
        let (_, _, eta2, mu2) = pair[1];
        let a = run_noncoop_pipeline(alpha, phi, eta1).map_err(e)?;
        let b = run_noncoop_pipeline(alpha, phi, eta2).map_err(e)?;
        let c = run_coop_pipeline_with_shift(alpha, phi, eta1, mu1, Receiver::Charlie, h.shift)
            .map_err(e)?;
        let d = run_coop_pipeline_with_shift(alpha, phi, eta2, mu2, Receiver::Charlie, h.shift)
            .map_err(e)?;
        let dn = a.conditional_cov_bob.max_abs_diff(&b.conditional_cov_bob);
        let dc = c.conditional_cov_bob.max_abs_diff(&d.conditional_cov_bob);
        if dn > 1e-12 || dc > 1e-12 {
            return Err(format!(
                "covariance moved by {:.3e} at alpha={alpha}",
                dn.max(dc)
            ));
        }
    }
    Ok(format!("{} outcome pairs", ts.len() / 2))
}

fn role_swap(h: &Hooks) -> Result<String, String> {
    let phi = Amplitude { re: 0.3, im: -0.7 };
    let z = Amplitude::default();
    let c = run_coop_pipeline_with_shift(2.0, phi, z, z, Receiver::Charlie, h.shift).map_err(e)?;
    let b = run_coop_pipeline_with_shift(2.0, phi, z, z, Receiver::Bob, h.shift).map_err(e)?;
    let d = (c.fidelity_bob - b.fidelity_charlie)
        .abs()
        .max((c.fidelity_charlie - b.fidelity_bob).abs());
    if d > 1e-12 {
        return Err(format!("asymmetry {d:.3e}"));
    }
    let alt = (c.fidelity_bob + c.fidelity_charlie) / 2.0;
    let expect = f_coop_avg(2.0).map_err(e)?;
    if (alt - expect).abs() > PIPELINE_TOL {
        return Err(format!("alternation fidelity {alt} vs {expect}"));
    }
    Ok(format!("alternating fidelity {alt:.6}"))
}

fn threshold(_: &Hooks) -> Result<String, String> {
    let changes = sign_changes(analysis::coop_advantage, 1.0, 50.0, 0.01).map_err(e)?;
    if changes.len() != 1 {
        return Err(format!(
            "f_coop - f_tr changes sign {} times on [1, 50]",
            changes.len()
        ));
    }
    let t = find_threshold(1e-9).map_err(e)?;
    if !(5.70..=5.82).contains(&t.alpha_th) || t.residual > 1e-9 {
        return Err(format!("{t:?}"));
    }
    Ok(format!("alpha_th={:.6}", t.alpha_th))
}

fn classical_crossings(_: &Hooks) -> Result<String, String> {
    let (tr, coop) = find_classical_crossings::<f64>().map_err(e)?;
    let exact = 5.0 + 2.0 * 5f64.sqrt();
    if (tr - exact).abs() > 1e-6 || coop <= tr {
        return Err(format!("tr={tr}, coop={coop}"));
    }
    Ok(format!("f_tr=1/2 at {tr:.6}, f_coop=1/2 at {coop:.4}"))
}

fn sweep_single_crossing(_: &Hooks) -> Result<String, String> {
    let rows = sweep(0.5, 12.0, 200).map_err(e)?;
    let crossings: Vec<_> = rows
        .windows(2)
        .filter(|w| (w[0].f_coop > w[0].f_tr) != (w[1].f_coop > w[1].f_tr))
        .map(|w| (w[0].alpha, w[1].alpha))
        .collect();
    let t = find_threshold(1e-9).map_err(e)?;
    match crossings.as_slice() {
        [(lo, hi)] if *lo <= t.alpha_th && t.alpha_th <= *hi => {
            Ok(format!("between {lo:.4} and {hi:.4}"))
        }
        _ => Err(format!("crossings {crossings:?}, alpha_th {}", t.alpha_th)),
    }
}

fn monte_carlo(h: &Hooks) -> Result<String, String> {
    let mut worst = 0.0f64;
    for alpha in MC_ALPHAS {
        let est = estimate_fidelities(&McConfig::new(alpha, h.mc_shots, MC_SEED)).map_err(e)?;
        for (hat, se, exact) in [
            (est.f_tr_hat, est.stderr_tr, f_noncoop(alpha).map_err(e)?),
            (est.f_ab_hat, est.stderr_ab, f_ab_coop(alpha).map_err(e)?),
            (est.f_ac_hat, est.stderr_ac, f_ac_coop(alpha).map_err(e)?),
        ] {
            let z = (hat - exact).abs() / se;
            worst = worst.max(z);
            if z > 3.0 {
                return Err(format!(
                    "alpha={alpha}: estimate {hat} vs {exact} ({z:.2} sigma)"
                ));
            }
        }
    }
    Ok(format!("worst {worst:.2} sigma"))
}
