//! Trajectories of the full equations of motion near L4.

use prtbp_core::equilibria::{solve_triangular_numeric, Branch};
use prtbp_core::model::{eom_rhs, effective_potential, State};
use prtbp_core::ModelParams;

fn deriv(s: &State, p: &ModelParams) -> [f64; 4] {
    let (ax, ay) = eom_rhs(s, p).unwrap();
    [s.xdot, s.ydot, ax, ay]
}

fn shifted(s: &State, k: &[f64; 4], h: f64) -> State {
    State::new(s.x + h * k[0], s.y + h * k[1], s.xdot + h * k[2], s.ydot + h * k[3])
}

/// Classical fourth-order Runge-Kutta with a fixed step.
fn integrate(mut s: State, p: &ModelParams, h: f64, t_end: f64) -> State {
    let steps = (t_end / h).round() as usize;
    for _ in 0..steps {
        let k1 = deriv(&s, p);
        let k2 = deriv(&shifted(&s, &k1, h / 2.0), p);
        let k3 = deriv(&shifted(&s, &k2, h / 2.0), p);
        let k4 = deriv(&shifted(&s, &k3, h), p);
        let mut y = [s.x, s.y, s.xdot, s.ydot];
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        s = State::new(y[0], y[1], y[2], y[3]);
    }
    s
}

fn jacobi(s: &State, p: &ModelParams) -> f64 {
    0.5 * (s.xdot * s.xdot + s.ydot * s.ydot) - effective_potential(s, p).unwrap()
}

fn start(p: &ModelParams) -> State {
    let pt = solve_triangular_numeric(p, Branch::L4).unwrap();
    State::new(pt.x + 0.01, pt.y - 0.005, 0.002, 0.0)
}

fn jacobi_drift(p: &ModelParams, t_end: f64) -> f64 {
    let s0 = start(p);
    let s1 = integrate(s0, p, 2e-3, t_end);
    jacobi(&s1, p) - jacobi(&s0, p)
}

#[test]
fn jacobi_integral_is_conserved_without_drag() {
    for p in [
        ModelParams::classical(0.01).unwrap(),
        ModelParams::from_epsilon(0.01, 0.02, 0.003, 0.0).unwrap(),
    ] {
        let d = jacobi_drift(&p, 100.0);
        assert!(d.abs() < 1e-10, "drift {d:e}");
    }
}

#[test]
fn equilibrium_stays_put_with_drag() {
    let p = ModelParams::from_epsilon(0.01, 0.01, 0.0, 1e-3).unwrap();
    let pt = solve_triangular_numeric(&p, Branch::L4).unwrap();
    let s = integrate(State::at_rest(pt.x, pt.y), &p, 1e-2, 10.0);
    assert!((s.x - pt.x).abs() < 1e-10 && (s.y - pt.y).abs() < 1e-10);
}

#[test]
fn drag_drift_is_linear_in_strength() {
    let drift = |w1: f64| jacobi_drift(&ModelParams::from_epsilon(0.01, 0.0, 0.0, w1).unwrap(), 100.0);
    // over short spans the oscillating part of the work done by drag dominates
    let (a, b) = (drift(2e-5), drift(1e-5));
    assert!(a.abs() > 1e-7, "drift {a:e}");
    let ratio = a / b;
    assert!((1.9..2.1).contains(&ratio), "ratio {ratio}");
}
