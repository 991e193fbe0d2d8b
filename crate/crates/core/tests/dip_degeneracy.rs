use chiral_cqed::effective::{tdd_coupling, EffectiveParams};
use chiral_cqed::model::{Direction, ModelKind, SystemParams};
use chiral_cqed::steadystate::doublet_onset;

fn weak() -> SystemParams {
    SystemParams {
        model: ModelKind::Reduced,
        drive_amplitude: 1e-3,
        ..SystemParams::default()
    }
}

#[test]
fn simulated_doublet_onset_matches_closed_form() {
    let p = weak();
    for (dir, bracket) in [(Direction::Backward, (1.0, 2.5)), (Direction::Forward, (20.0, 45.0))] {
        let mode = p.clone().with_direction(dir).driven_mode();
        let closed = tdd_coupling(&EffectiveParams::from_system(&p, mode), p.kappa_in, p.kappa_ex).unwrap();
        let onset = doublet_onset(&p, dir, bracket, 1e-5).unwrap();
        assert!((onset / closed - 1.0).abs() < 1e-2, "{dir:?}: {onset} vs {closed}");
    }
}
