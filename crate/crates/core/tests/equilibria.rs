//! Triangular equilibria: classical reduction, residuals and series order.

use proptest::prelude::*;
use prtbp_core::convergence::{halving, OrderClass, Perturbation};
use prtbp_core::equilibria::{epsilon_form, force_at_rest, solve_triangular_numeric, triangular_series, Branch};
use prtbp_core::model::{effective_potential, State};
use prtbp_core::ModelParams;

const SQ3_2: f64 = 0.866_025_403_784_438_6;

#[test]
fn classical_points_are_equilateral() {
    for mu in [0.001, 0.01, 0.0385, 0.2, 0.4] {
        let p = ModelParams::classical(mu).unwrap();
        for (branch, s) in [(Branch::L4, 1.0), (Branch::L5, -1.0)] {
            let q = solve_triangular_numeric(&p, branch).unwrap();
            assert!((q.x - (0.5 - mu)).abs() < 1e-12, "mu = {mu}");
            assert!((q.y - s * SQ3_2).abs() < 1e-12, "mu = {mu}");
        }
    }
}

#[test]
fn potential_examples() {
    let p = ModelParams::classical(0.5).unwrap();
    let u = effective_potential(&State::at_rest(0.0, SQ3_2), &p).unwrap();
    assert!((u - 1.375).abs() < 1e-15);
    let p0 = ModelParams::classical(0.2).unwrap();
    let p1 = ModelParams::with_drag_strength(0.2, 1.0, 0.01, 0.0).unwrap();
    let s = State::at_rest(0.3, SQ3_2);
    let r2 = (0.3f64 + 0.2 - 1.0).hypot(SQ3_2);
    let d = effective_potential(&s, &p1).unwrap() - effective_potential(&s, &p0).unwrap();
    let expect = 0.2 * 0.01 / (2.0 * r2.powi(3)) + 0.015 * (0.09 + 0.75) / 2.0;
    assert!((d - expect).abs() < 1e-15);
}

#[test]
fn series_remainders_are_second_order() {
    for mu in [0.01, 0.1, 0.3] {
        for pert in [Perturbation::A2, Perturbation::W1] {
            let row = halving(mu, pert, 1e-3, |p| {
                let n = solve_triangular_numeric(p, Branch::L4)?;
                let s = triangular_series(p, Branch::L4)?;
                Ok(n.distance(&s))
            })
            .unwrap();
            assert_eq!(row.class, OrderClass::SecondOrder, "mu = {mu}, {row:?}");
        }
    }
}

#[test]
fn epsilon_form_agrees_without_drag() {
    for pert in [Perturbation::Epsilon, Perturbation::A2] {
        let row = halving(0.01, pert, 1e-3, |p| {
            let n = solve_triangular_numeric(p, Branch::L4)?;
            Ok(n.distance(&epsilon_form(p, Branch::L4)?))
        })
        .unwrap();
        assert_eq!(row.class, OrderClass::SecondOrder, "{row:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newton_residual_is_tiny(
        mu in 0.001f64..0.45,
        eps in 0.0f64..1e-3,
        a2 in 0.0f64..1e-3,
        w1 in 0.0f64..1e-3,
    ) {
        let p = ModelParams::from_epsilon(mu, eps, a2, w1).unwrap();
        for branch in [Branch::L4, Branch::L5] {
            let q = solve_triangular_numeric(&p, branch).unwrap();
            prop_assert!(q.residual < 1e-12);
            let (fx, fy) = force_at_rest(q.x, q.y, &p).unwrap();
            prop_assert!(fx.abs().max(fy.abs()) < 1e-12);
        }
    }

    #[test]
    fn branches_mirror_without_drag(mu in 0.001f64..0.45, a2 in 0.0f64..1e-3) {
        let p = ModelParams::from_epsilon(mu, 1e-4, a2, 0.0).unwrap();
        let l4 = solve_triangular_numeric(&p, Branch::L4).unwrap();
        let l5 = solve_triangular_numeric(&p, Branch::L5).unwrap();
        prop_assert!((l4.x - l5.x).abs() < 1e-13 && (l4.y + l5.y).abs() < 1e-13);
    }
}
