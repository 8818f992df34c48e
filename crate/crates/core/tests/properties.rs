use proptest::prelude::*;

use telegame::gaussian::{beam_splitter_matrix, is_symplectic};
use telegame::{
    build_cm, channel_params, f_ab_coop, f_ac_coop, f_noncoop, run_coop_pipeline,
    run_noncoop_pipeline, Amplitude, Covariance, Matrix, Quadrature, QuadratureVector, State,
};

fn squeezer(modes: usize, k: usize, r: f64) -> Matrix<f64> {
    let mut s = Matrix::identity(2 * modes);
    s[(2 * k, 2 * k)] = r.exp();
    s[(2 * k + 1, 2 * k + 1)] = (-r).exp();
    s
}

fn rotation(modes: usize, k: usize, th: f64) -> Matrix<f64> {
    let mut s = Matrix::identity(2 * modes);
    let (c, si) = (th.cos(), th.sin());
    s[(2 * k, 2 * k)] = c;
    s[(2 * k, 2 * k + 1)] = si;
    s[(2 * k + 1, 2 * k)] = -si;
    s[(2 * k + 1, 2 * k + 1)] = c;
    s
}

/// Thermal modes scrambled by squeezers, rotations and beam splitters.
fn physical_state(modes: usize) -> impl Strategy<Value = State> {
    (
        prop::collection::vec(0.5f64..3.0, modes),
        prop::collection::vec((-0.8f64..0.8, -3.2f64..3.2), modes),
        prop::collection::vec(-2.0f64..2.0, 2 * modes),
    )
        .prop_map(move |(nu, ops, mean)| {
            let diag: Vec<f64> = nu.iter().flat_map(|&v| [v, v]).collect();
            let mut st = State::new(
                QuadratureVector::new(mean).unwrap(),
                Covariance::new(Matrix::from_diagonal(&diag)).unwrap(),
            )
            .unwrap();
            for (k, &(r, th)) in ops.iter().enumerate() {
                st = st.apply_symplectic(&squeezer(modes, k, r)).unwrap();
                st = st.apply_symplectic(&rotation(modes, k, th)).unwrap();
                if modes > 1 {
                    st = st.beam_splitter_50_50(k, (k + 1) % modes).unwrap();
                }
            }
            st
        })
}

fn amplitude() -> impl Strategy<Value = Amplitude> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Amplitude { re, im })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symplectic_generators(modes in 2usize..5, r in -1.0f64..1.0, th in -3.0f64..3.0, seed in 0usize..100) {
        let i = seed % modes;
        let j = (i + 1 + seed / modes % (modes - 1)) % modes;
        prop_assert!(is_symplectic(&beam_splitter_matrix::<f64>(modes, i, j), 1e-12));
        prop_assert!(is_symplectic(&squeezer(modes, i, r), 1e-12));
        prop_assert!(is_symplectic(&rotation(modes, j, th), 1e-12));
    }

    #[test]
    fn operations_preserve_physicality(s in physical_state(3), d in amplitude(), x in -3.0f64..3.0) {
        prop_assert!(s.cov().is_physical());
        prop_assert!(s.beam_splitter_50_50(0, 2).unwrap().cov().is_physical());
        prop_assert!(s.displace(1, d).unwrap().cov().is_physical());
        prop_assert!(s.partial_trace(&[2, 0]).unwrap().cov().is_physical());
        prop_assert!(s.homodyne_update(1, Quadrature::X, x).unwrap().cov().is_physical());
        prop_assert!(s.homodyne_update(0, Quadrature::P, x).unwrap().cov().is_physical());
        prop_assert!(s.heterodyne_update(2, d).unwrap().cov().is_physical());
        prop_assert!(s.tensor(&State::vacuum(1)).cov().is_physical());
    }

    #[test]
    fn conditional_covariance_ignores_outcome(s in physical_state(3), a in amplitude(), b in amplitude()) {
        let h1 = s.homodyne_update(1, Quadrature::X, a.re).unwrap();
        let h2 = s.homodyne_update(1, Quadrature::X, b.re).unwrap();
        prop_assert_eq!(h1.cov(), h2.cov());
        let e1 = s.heterodyne_update(0, a).unwrap();
        let e2 = s.heterodyne_update(0, b).unwrap();
        prop_assert_eq!(e1.cov(), e2.cov());
    }

    #[test]
    fn displacement_covariance_of_fidelity(s in physical_state(1), target in amplitude(), d in amplitude()) {
        let f0 = s.fidelity_vs_coherent(target).unwrap();
        let f1 = s.displace(0, d).unwrap().fidelity_vs_coherent(target + d).unwrap();
        prop_assert!((f0 - f1).abs() < 1e-12);
        prop_assert!(f0 > 0.0 && f0 <= 1.0 + 1e-15);
    }

    #[test]
    fn fidelity_is_one_only_for_the_target(target in amplitude(), nudge in 1e-3f64..1.0) {
        let c = State::coherent(target).unwrap();
        prop_assert!((c.fidelity_vs_coherent(target).unwrap() - 1.0).abs() < 1e-15);
        let off = c.displace(0, Amplitude { re: nudge, im: 0.0 }).unwrap();
        prop_assert!(off.fidelity_vs_coherent(target).unwrap() < 1.0);
    }

    #[test]
    fn tensor_then_trace_is_projection(s1 in physical_state(2), s2 in physical_state(1)) {
        let joint = s1.tensor(&s2);
        prop_assert_eq!(joint.partial_trace(&[0, 1]).unwrap(), s1);
        prop_assert_eq!(joint.partial_trace(&[2]).unwrap(), s2);
    }

    #[test]
    fn strategy_ordering(alpha in 0.5f64..50.0) {
        let tr = f_noncoop(alpha).unwrap();
        prop_assert!(f_ab_coop(alpha).unwrap() >= tr);
        prop_assert!(f_ac_coop(alpha).unwrap() < tr);
        prop_assert!(f_ac_coop(alpha).unwrap() <= 0.5);
        prop_assert!(build_cm(&channel_params(alpha).unwrap()).unwrap().cov().is_physical());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipelines_match_closed_forms(alpha in 0.5f64..50.0, phi in amplitude(), eta in amplitude(), mu in amplitude()) {
        let n = run_noncoop_pipeline(alpha, phi, eta).unwrap();
        prop_assert!((n.fidelity_bob - f_noncoop(alpha).unwrap()).abs() < 1e-10);
        prop_assert!(n.mean_residual_bob.norm() < 1e-9);
        let c = run_coop_pipeline(alpha, phi, eta, mu).unwrap();
        prop_assert!((c.fidelity_bob - f_ab_coop(alpha).unwrap()).abs() < 1e-10);
        prop_assert!((c.fidelity_charlie - f_ac_coop(alpha).unwrap()).abs() < 1e-10);
        prop_assert!(c.mean_residual_bob.norm() < 1e-9);
        prop_assert!(c.trajectory_fidelity_bob > 0.0 && c.trajectory_fidelity_bob <= 1.0);
    }
}
