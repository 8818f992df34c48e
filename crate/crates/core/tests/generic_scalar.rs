//! The whole pipeline instantiated at `f32` tracks the `f64` results to
//! single precision.

use telegame::analysis::{find_threshold, sweep};
use telegame::{
    build_cm, channel_params, f_ab_coop, run_coop_pipeline, run_noncoop_pipeline, Amplitude,
    Amplitude32, State32,
};

#[test]
fn f32_pipelines_track_f64() {
    for alpha in [0.5f32, 2.0, 5.76, 20.0] {
        let phi = Amplitude32 { re: 0.7, im: -0.3 };
        let eta = Amplitude32 { re: 0.1, im: 1.2 };
        let mu = Amplitude32 { re: -0.4, im: 0.5 };
        let n32 = run_noncoop_pipeline(alpha, phi, eta).unwrap();
        let c32 = run_coop_pipeline(alpha, phi, eta, mu).unwrap();

        let a = f64::from(alpha);
        let up = |z: Amplitude32| Amplitude {
            re: f64::from(z.re),
            im: f64::from(z.im),
        };
        let n64 = run_noncoop_pipeline(a, up(phi), up(eta)).unwrap();
        let c64 = run_coop_pipeline(a, up(phi), up(eta), up(mu)).unwrap();

        assert!((f64::from(n32.fidelity_bob) - n64.fidelity_bob).abs() < 1e-5);
        assert!((f64::from(c32.fidelity_bob) - c64.fidelity_bob).abs() < 1e-5);
        assert!((f64::from(c32.fidelity_charlie) - c64.fidelity_charlie).abs() < 1e-5);
        assert!((f64::from(f_ab_coop(alpha).unwrap()) - f_ab_coop(a).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn f32_channel_is_physical_with_looser_tolerance() {
    for alpha in [0.5f32, 1.0, 5.76, 50.0] {
        let s: State32 = build_cm(&channel_params(alpha).unwrap()).unwrap();
        assert!(s.cov().is_physical(), "alpha {alpha}");
    }
}

#[test]
fn f32_analysis() {
    let rows = sweep(0.5f32, 12.0, 50).unwrap();
    assert_eq!(rows.len(), 50);
    let t = find_threshold(1e-5f32).unwrap();
    assert!((f64::from(t.alpha_th) - 5.761565).abs() < 1e-3);
}
