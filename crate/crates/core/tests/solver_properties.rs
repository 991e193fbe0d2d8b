use chiral_cqed::model::{build_full_model, build_model, Direction, ModelKind, SystemParams};
use chiral_cqed::steadystate::{
    build_liouvillian, evolve, solve_params, solve_steady_state, suggested_dt, DensityMatrix,
};
use chiral_cqed::Mode;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = SystemParams> {
    (
        (0.5..5.0f64, 5.0..60.0f64, 0.2..1.0f64, 1.0..4.0f64),
        (0.0..4.0f64, -3.0..3.0f64, 0.01..0.3f64),
        any::<bool>(),
        prop_oneof![Just(Mode::Ccw), Just(Mode::Cw)],
    )
        .prop_map(|((gcw, gccw, kin, kex), (g, dp, eps), fwd, mode)| SystemParams {
            gamma_cw: gcw,
            gamma_ccw: gccw,
            kappa_in: kin,
            kappa_ex: kex,
            delta_p: dp,
            drive_amplitude: eps,
            direction: if fwd { Direction::Forward } else { Direction::Backward },
            forward_mode: mode,
            fock_cutoff: 2,
            ..SystemParams::default().with_g_cw(g)
        })
}

/// Integrates from the vacuum until successive snapshots agree to 1e-10.
fn relax(p: &SystemParams) -> DensityMatrix {
    let model = build_full_model(p).unwrap();
    let dt = suggested_dt(&model).unwrap();
    let mut rho = DensityMatrix::vacuum(model.layout);
    for _ in 0..400 {
        let next = evolve(&model, &rho, 2.0, dt).unwrap();
        let change = next.trace_distance(&rho);
        rho = next;
        if change < 1e-10 {
            break;
        }
    }
    rho
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn steady_state_is_a_physical_fixed_point(p in params()) {
        let model = build_model(&p).unwrap();
        let liou = build_liouvillian(&model).unwrap();
        let rho = solve_steady_state(&liou).unwrap();
        prop_assert!(liou.residual(&rho) < 1e-9);
        prop_assert!(rho.hermiticity_error() < 1e-10);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(rho.min_eigenvalue() > -1e-8);
    }

    #[test]
    fn long_time_dynamics_reach_the_steady_state(p in params()) {
        let ss = solve_params(&p).unwrap();
        let late = relax(&p);
        prop_assert!(ss.rho.trace_distance(&late) < 1e-6);
    }

    #[test]
    fn reduced_model_reproduces_driven_observables(p in params()) {
        let full = solve_params(&p).unwrap().observables().unwrap();
        let red = solve_params(&SystemParams { model: ModelKind::Reduced, ..p }).unwrap().observables().unwrap();
        prop_assert!((full.transmission - red.transmission).abs() < 1e-6);
        match (full.g2_output, red.g2_output) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-6 * a.max(1.0)),
            (a, b) => prop_assert_eq!(a.is_some(), b.is_some()),
        }
    }
}
