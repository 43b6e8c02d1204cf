use std::f64::consts::FRAC_PI_2;

use entropy_picture::cli::record::{emit_report, CheckResult, RunRecord};
use entropy_picture::cli::{RunConfig, Subcommand};
use entropy_picture::fluctuations::{
    boundary_action, gaussian_sample, random_smooth_patch, symplectic_area, Plane, RectanglePatch,
    ThermoReference,
};
use entropy_picture::gravity::{trace_potential, SourceDistribution};
use entropy_picture::onsager::{entropy_rate, relax, wick_map, OnsagerSystem};
use entropy_picture::opcore::{expectation, HermitianOperator, StateVector};
use entropy_picture::spicture::{
    entropy_operator, evolve_s, evolve_s_with, uncertainty_product, wick_factor, EvolveOptions,
    GeneratorSchedule, Propagation,
};
use entropy_picture::{Constants, Unit};
use proptest::prelude::*;

fn k() -> Constants {
    Constants::natural()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wick_factor_is_a_rotation(x in 0.0f64..50.0) {
        let w = wick_factor(x).unwrap();
        prop_assert!((w.c.norm() - 1.0).abs() < 1e-15);
        prop_assert!(w.phi <= 0.0 && w.phi > -FRAC_PI_2 - 1e-15);
        prop_assert!(w.epsilon <= 0.0);
    }

    #[test]
    fn unitary_limit_preserves_norm(seed in any::<u64>(), dim in 1usize..12, tau in 0.0f64..40.0) {
        let h = HermitianOperator::random(dim, seed, Unit::Energy).unwrap();
        let s = entropy_operator(&h, 1.0).unwrap();
        let psi = StateVector::random(dim, seed ^ 1).unwrap();
        let tr = evolve_s(&psi, &GeneratorSchedule::constant(s.operator().clone()), &[0.0, tau], 0.0, &k()).unwrap();
        prop_assert!((tr.norms[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_follows_sign_of_epsilon(seed in any::<u64>(), dim in 1usize..10, eps in -0.5f64..0.5) {
        let h = HermitianOperator::random(dim, seed, Unit::Entropy).unwrap();
        let s = h.shifted(-h.decompose().min_eigenvalue());
        let psi = StateVector::random(dim, seed ^ 2).unwrap();
        let opts = EvolveOptions { allow_antidissipative: true, ..Default::default() };
        let grid: Vec<f64> = (0..11).map(|i| 0.2 * i as f64).collect();
        let tr = evolve_s_with(&psi, &GeneratorSchedule::constant(s), &grid, Propagation::weak_field(eps), &opts, &k()).unwrap();
        for w in tr.norms.windows(2) {
            if eps < 0.0 {
                prop_assert!(w[1] >= w[0] * (1.0 - 1e-12));
            } else {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn antidissipative_needs_opt_in(eps in 1e-6f64..1.0) {
        let s = HermitianOperator::identity(2, Unit::Entropy).unwrap();
        let psi = StateVector::basis(2, 0).unwrap();
        prop_assert!(evolve_s(&psi, &GeneratorSchedule::constant(s), &[0.0, 1.0], eps, &k()).is_err());
    }

    #[test]
    fn uncertainty_bound(seed in any::<u64>(), dim in 2usize..8, temp in 0.1f64..10.0, probe in 0.0f64..5.0) {
        let h = HermitianOperator::random(dim, seed, Unit::Energy).unwrap();
        let s = entropy_operator(&h, temp).unwrap();
        let a = HermitianOperator::random(dim, seed ^ 3, Unit::Dimensionless).unwrap();
        let psi = StateVector::random(dim, seed ^ 4).unwrap();
        let r = uncertainty_product(&psi, &s, &a, probe, &k()).unwrap();
        if let Some(p) = r.product {
            prop_assert!(p >= 0.5 - 1e-12);
        }
    }

    #[test]
    fn onsager_forms_agree_and_dissipate(seed in any::<u64>(), n in 1usize..7, t in 0.0f64..10.0) {
        let sys = OnsagerSystem::random(n, seed).unwrap();
        let y = sys.y0().clone();
        let r = entropy_rate(&sys, &y).unwrap();
        let scale = r.via_forces.abs().max(1e-300);
        prop_assert!((r.via_forces - r.via_velocities).abs() / scale < 1e-12);
        prop_assert!(r.via_forces >= 0.0);
        let tr = relax(&sys, &[0.0, t]).unwrap();
        prop_assert!(tr.entropy_rates.iter().all(|&s| s >= 0.0));
        // the entropy deficit only shrinks
        prop_assert!(tr.entropies[1] >= tr.entropies[0] - 1e-12 * tr.entropies[0].abs());
    }

    #[test]
    fn wick_map_is_pure_imaginary(t in -100.0f64..100.0) {
        let z = wick_map(t);
        prop_assert_eq!(z.re, 0.0);
        prop_assert_eq!(z.im.abs(), t.abs());
    }

    #[test]
    fn potential_is_nonnegative_and_decays(
        cx in -0.2f64..0.2, r in 0.05f64..0.3, rho in 0.0f64..5.0, d in 1.0f64..20.0,
    ) {
        let src = SourceDistribution::uniform_ball([cx, 0.0, 0.0], r, rho, 10).unwrap();
        let near = trace_potential(&src, [d, 1.0, 0.0]).unwrap();
        let far = trace_potential(&src, [2.0 * d, 2.0, 0.0]).unwrap();
        prop_assert!(near >= 0.0 && far >= 0.0);
        prop_assert!(far <= near);
    }

    #[test]
    fn rectangle_area_is_exact(
        q0 in -2.0f64..2.0, dq in 0.1f64..3.0, p0 in -2.0f64..2.0, dp in 0.1f64..3.0, n in 1usize..40,
    ) {
        let patch = RectanglePatch { plane: Plane::Second, q: (q0, q0 + dq), p: (p0, p0 + dp), rest: (0.3, -0.7) };
        let exact = dq * dp;
        prop_assert!((symplectic_area(&patch, n).unwrap() - exact).abs() < 1e-12 * exact.max(1.0));
        prop_assert!((boundary_action(&patch, n).unwrap() - exact).abs() < 1e-12 * exact.max(1.0));
    }

    #[test]
    fn stokes_gap_shrinks_under_refinement(seed in any::<u64>()) {
        let patch = random_smooth_patch(seed);
        let gap = |n| (symplectic_area(&patch, n).unwrap() - boundary_action(&patch, n).unwrap()).abs();
        let (a, b) = (gap(32), gap(64));
        prop_assert!(b < 0.3 * a, "gap {a} -> {b}");
    }

    #[test]
    fn samples_depend_only_on_seed_and_index(seed in any::<u64>(), n in 1usize..64) {
        let r = ThermoReference::ideal_gas(1.0, 2.0, 0.5).unwrap();
        let long = gaussian_sample(&r, 64, seed, &k()).unwrap();
        let short = gaussian_sample(&r, n, seed, &k()).unwrap();
        prop_assert_eq!(&long[..n], &short[..]);
    }

    #[test]
    fn config_echo_round_trips(seed in any::<u64>(), trials in 1usize..100, dim in 2usize..128, n in 1000usize..1_000_000) {
        let mut c = RunConfig { seed, scenario: Some(Subcommand::Fluct), ..Default::default() };
        c.check_all.trials = trials;
        c.check_all.dim = dim;
        c.fluct.n = n;
        let echo = serde_json::to_value(&c).unwrap();
        prop_assert_eq!(RunConfig::from_value(echo).unwrap(), c);
    }

    #[test]
    fn report_counts_match(verdicts in proptest::collection::vec((any::<bool>(), 0.0f64..2.0), 1..30)) {
        let mut rec = RunRecord::new(Subcommand::CheckAll, RunConfig::default());
        rec.checks = verdicts
            .iter()
            .enumerate()
            .map(|(i, &(up, m))| if up {
                CheckResult::at_least(format!("c{i}"), m, 1.0)
            } else {
                CheckResult::at_most(format!("c{i}"), m, 1.0)
            })
            .collect();
        let rep = emit_report(std::slice::from_ref(&rec)).unwrap();
        let oracle = verdicts.iter().filter(|&&(up, m)| if up { m >= 1.0 } else { m <= 1.0 }).count();
        prop_assert_eq!(rep.passed, oracle);
        prop_assert_eq!(rep.passed + rep.failed, verdicts.len());
    }
}

#[test]
fn energy_expectation_is_conserved_in_unitary_s_evolution() {
    let h = HermitianOperator::random(6, 9, Unit::Energy).unwrap();
    let s = entropy_operator(&h, 2.0).unwrap();
    let psi = StateVector::random(6, 10).unwrap();
    let grid: Vec<f64> = (0..21).map(|i| 0.5 * i as f64).collect();
    let tr = evolve_s(
        &psi,
        &GeneratorSchedule::constant(s.operator().clone()),
        &grid,
        0.0,
        &k(),
    )
    .unwrap();
    let e0 = expectation(&h, &psi).unwrap();
    for st in &tr.states {
        assert!((expectation(&h, st).unwrap() - e0).abs() < 1e-12);
    }
}
