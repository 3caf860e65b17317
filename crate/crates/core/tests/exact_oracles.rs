//! Exact-pipeline results against hand-derived second-order expansions.
//!
//! With `c` the auxiliary-vacuum factor of one emission event (1 for FWM
//! and SHG, 3! for SWM) and `y = g²t²|α|²`, perturbation theory on the
//! coherent⊗vacuum input gives
//! `N̄ = m - 2c g²t² m²`, `d = -2c g²t² m²`, and for the BP quadratures
//! `U = ½(1 - 4cy)/(1 - 2cy)`, all up to fourth-order corrections.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use phasefluct_core::{
    closed_form, convergence_slope, evaluate_state, evolved_state, exact_evaluation, expectation, heisenberg_taylor,
    interaction_hamiltonian, ladder, EvolutionSettings, FormalismChoice, Ladder, ProcessKind, ProcessSpec,
};

fn aux_factor(kind: ProcessKind) -> f64 {
    match kind {
        ProcessKind::Swm => 6.0,
        _ => 1.0,
    }
}

fn run(kind: ProcessKind, m: f64, theta: f64, gt: f64, f: FormalismChoice) -> phasefluct_core::ExactEvaluation {
    let spec = ProcessSpec::from_mean_photons(kind, 1.0, m, theta, gt).unwrap();
    exact_evaluation(&spec, f, &kind.default_cutoffs(m), &EvolutionSettings::default()).unwrap().0
}

#[test]
fn second_order_moments() {
    let gt: f64 = 5e-3;
    for kind in ProcessKind::ALL {
        let c = aux_factor(kind);
        for m in [1.0, 2.0] {
            let ex = run(kind, m, 0.3, gt, FormalismChoice::Bp);
            let y = gt * gt * m;
            let d = -2.0 * c * y * m;
            // SWM carries large fourth-order terms (up to 36 auxiliary quanta factors)
            assert!((ex.cn.d / d - 1.0).abs() < 1e-2, "{kind} m={m}: d={} vs {d}", ex.cn.d);
            assert!((ex.moments.mean_n - (m + d)).abs() < 1e-2 * d.abs(), "{kind} m={m}");
            let u = 0.5 * (1.0 - 4.0 * c * y) / (1.0 - 2.0 * c * y);
            assert!((ex.cn.u.value().unwrap() - u).abs() < 1e-2 * (0.5 - u), "{kind} m={m}");
        }
    }
}

#[test]
fn witness_against_formula() {
    // SHG and SWM printed witnesses agree with the exact dynamics; the FWM
    // one is three times the exact second-order coefficient.
    let gt: f64 = 1e-2;
    for (kind, expected_ratio) in [(ProcessKind::Fwm, 1.0 / 3.0), (ProcessKind::Swm, 1.0), (ProcessKind::Shg, 1.0)] {
        let ex = run(kind, 1.0, 0.0, gt, FormalismChoice::Bp);
        let f = closed_form(&ex.spec);
        assert!(ex.cn.d < 0.0);
        let ratio = ex.cn.d / f.d;
        assert!((ratio / expected_ratio - 1.0).abs() < 0.05, "{kind}: ratio {ratio}");
    }
}

#[test]
fn fwm_formula_u_within_tolerance() {
    let ex = run(ProcessKind::Fwm, 1.0, 0.0, 1e-2, FormalismChoice::Bp);
    let f = closed_form(&ex.spec);
    let u = ex.cn.u.value().unwrap();
    assert!((u - f.u).abs() / f.u <= 1e-3);
}

#[test]
fn shg_converges_at_fourth_order() {
    let mut pts = Vec::new();
    for gt in [0.01, 0.02, 0.03, 0.05] {
        let ex = run(ProcessKind::Shg, 1.0, 0.0, gt, FormalismChoice::Bp);
        pts.push((gt, ex.cn.u.value().unwrap() - closed_form(&ex.spec).u));
    }
    let s = convergence_slope(&pts).unwrap();
    assert!((s.slope - 4.0).abs() < 0.1, "slope {}", s.slope);
}

#[test]
fn u_is_phase_independent() {
    for kind in [ProcessKind::Fwm, ProcessKind::Shg] {
        let us: Vec<f64> = [0.0, 0.4, FRAC_PI_4, 1.3, 2.5]
            .iter()
            .map(|&th| run(kind, 1.0, th, 0.02, FormalismChoice::Bp).cn.u.value().unwrap())
            .collect();
        let spread = us.iter().cloned().fold(f64::MIN, f64::max) - us.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-12, "{kind}: spread {spread}");
    }
}

#[test]
fn sg_bounds_on_evolved_states() {
    let settings = EvolutionSettings::default();
    for kind in [ProcessKind::Fwm, ProcessKind::Shg] {
        for m in [0.5, 2.0] {
            for gt in [0.0, 0.02, 0.05] {
                let spec = ProcessSpec::from_mean_photons(kind, 1.0, m, 0.9, gt).unwrap();
                let psi = evolved_state(&spec, &kind.default_cutoffs(m), &settings).unwrap();
                let sg = evaluate_state(&spec, &psi, FormalismChoice::Sg).unwrap();
                let bp = evaluate_state(&spec, &psi, FormalismChoice::Bp).unwrap();
                let mo = sg.moments;
                assert!(sg.cn.u.value().unwrap() >= 0.25 - 1e-10);
                assert_eq!(sg.cn.bound_ok, Some(true));
                assert!(sg.cn.t >= mo.vacuum_prob / 2.0 - 1e-10);
                assert!((mo.mean_c2 + mo.mean_s2 + mo.vacuum_prob / 2.0 - 1.0).abs() <= 1e-8);
                assert!((bp.moments.mean_c2 + bp.moments.mean_s2 - 1.0).abs() <= 1e-8);
                assert!(mo.var_n.sqrt() * mo.var_s.sqrt() >= 0.5 * mo.mean_c.abs() - 1e-10);
                assert!(mo.var_n.sqrt() * mo.var_c.sqrt() >= 0.5 * mo.mean_s.abs() - 1e-10);
            }
        }
    }
}

#[test]
fn heisenberg_and_schrodinger_pictures_agree() {
    let settings = EvolutionSettings::default();
    let kind = ProcessKind::Fwm;
    let spec0 = ProcessSpec::from_mean_photons(kind, 1.0, 1.0, 0.2, 0.0).unwrap();
    let psi0 = evolved_state(&spec0, &kind.default_cutoffs(1.0), &settings).unwrap();
    let space: Arc<_> = psi0.space().clone();
    let a = ladder(&space, 0, Ladder::Lower).unwrap();
    let h = interaction_hamiltonian(&spec0, &space).unwrap();
    let taylor = heisenberg_taylor(&h, &a, 2).unwrap();

    let mut pts = Vec::new();
    for gt in [0.01, 0.02, 0.03, 0.05] {
        let spec = spec0.with_time(gt).unwrap();
        let psi_t = evolved_state(&spec, &kind.default_cutoffs(1.0), &settings).unwrap();
        let heis = expectation(&psi0, &taylor.evaluate(gt).unwrap()).unwrap();
        let schr = expectation(&psi_t, &a).unwrap();
        pts.push((gt, (heis - schr).norm() / (gt * gt)));
    }
    let s = convergence_slope(&pts).unwrap();
    assert!(s.slope >= 1.0, "slope {}", s.slope);
    assert!(pts[0].1 < 1e-3);
}
