//! Triangular equilibrium points: Newton solution of the force balance and
//! the printed perturbation series.

use crate::error::{Error, Result};
use crate::model::{self, State};
use crate::params::ModelParams;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const MAX_NEWTON_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    L4,
    L5,
}

impl Branch {
    /// +1 for L4, −1 for L5.
    pub fn sign(self) -> f64 {
        match self {
            Branch::L4 => 1.0,
            Branch::L5 => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "L4" => Ok(Branch::L4),
            "L5" => Ok(Branch::L5),
            other => Err(format!("unknown branch {other:?} (expected L4 or L5)")),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::L4 => "L4",
            Branch::L5 => "L5",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Numeric,
    Series,
    EpsilonForm,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::Series => "series",
            Method::EpsilonForm => "epsilon-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub x: f64,
    pub y: f64,
    pub branch: Branch,
    pub method: Method,
    /// `max(|Ux|, |Uy|)` at the point, velocities zero.
    pub residual: f64,
}

impl EquilibriumPoint {
    /// Euclidean distance to another point.
    pub fn distance(&self, other: &EquilibriumPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Origin shift to the equilibrium: `a = x* + μ`, `b = y*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginShift {
    pub a: f64,
    pub b: f64,
}

impl OriginShift {
    pub fn from_point(point: &EquilibriumPoint, p: &ModelParams) -> Self {
        Self {
            a: point.x + p.mu(),
            b: point.y,
        }
    }

    /// Equilibrium position `(x*, y*)` this shift corresponds to.
    pub fn position(&self, p: &ModelParams) -> (f64, f64) {
        (self.a - p.mu(), self.b)
    }
}

/// Force balance at rest: `∇U1 + W1 n (y, −(x+μ))/r1²`.
pub fn force_at_rest(x: f64, y: f64, p: &ModelParams) -> Result<(f64, f64)> {
    model::generalized_force(&State::at_rest(x, y), p)
}

fn force_jacobian(x: f64, y: f64, p: &ModelParams) -> Result<[[f64; 2]; 2]> {
    let h = model::potential_hessian(x, y, p)?;
    let rx = x + p.mu();
    let r2 = rx * rx + y * y;
    let k = p.w1() * p.n();
    // d/dx and d/dy of k*(y, -rx)/r1^2
    let dgx_dx = -2.0 * k * rx * y / (r2 * r2);
    let dgx_dy = k / r2 - 2.0 * k * y * y / (r2 * r2);
    let dgy_dx = -k / r2 + 2.0 * k * rx * rx / (r2 * r2);
    let dgy_dy = 2.0 * k * y * rx / (r2 * r2);
    Ok([
        [h[0][0] + dgx_dx, h[0][1] + dgx_dy],
        [h[1][0] + dgy_dx, h[1][1] + dgy_dy],
    ])
}

fn residual_at(x: f64, y: f64, p: &ModelParams) -> Result<f64> {
    let (fx, fy) = force_at_rest(x, y, p)?;
    Ok(fx.abs().max(fy.abs()))
}

/// Newton solve of the force balance at rest, seeded at the classical
/// triangular point of the requested branch.
pub fn solve_triangular_numeric(p: &ModelParams, branch: Branch) -> Result<EquilibriumPoint> {
    let mut x = 0.5 - p.mu();
    let mut y = branch.sign() * SQRT3 / 2.0;
    let mut best = f64::INFINITY;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let (fx, fy) = force_at_rest(x, y, p)?;
        let res = fx.abs().max(fy.abs());
        let j = force_jacobian(x, y, p)?;
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return Err(Error::SingularJacobian { determinant: det });
        }
        let dx = (j[1][1] * fx - j[0][1] * fy) / det;
        let dy = (j[0][0] * fy - j[1][0] * fx) / det;
        x -= dx;
        y -= dy;
        let step = dx.abs().max(dy.abs());
        if step < 1e-15 || (res < 1e-14 && res >= best) {
            break;
        }
        best = best.min(res);
    }
    let residual = residual_at(x, y, p)?;
    if residual >= 1e-12 || y == 0.0 || y.signum() != branch.sign() {
        return Err(Error::NonConvergence {
            iterations: MAX_NEWTON_ITERATIONS,
            x,
            y,
            residual,
        });
    }
    Ok(EquilibriumPoint {
        x,
        y,
        branch,
        method: Method::Numeric,
        residual,
    })
}

/// The `δ`-series for `x*`, `y*` with drag and oblateness corrections,
/// evaluated as printed.
pub fn triangular_series(p: &ModelParams, branch: Branch) -> Result<EquilibriumPoint> {
    let mu = p.mu();
    let mm = mu * (1.0 - mu);
    if mm == 0.0 {
        return Err(Error::DivisionByZero("mu(1 - mu)"));
    }
    let (d, a2, nw1) = (p.delta(), p.a2(), p.n_w1());
    let d2h = d * d / 2.0;
    let x0 = d2h - mu;
    let y0 = branch.sign() * d * (1.0 - d * d / 4.0).sqrt();
    if x0 == 0.0 {
        return Err(Error::DivisionByZero("x0"));
    }
    if y0 == 0.0 {
        return Err(Error::DivisionByZero("y0"));
    }
    let x = x0
        * (1.0
            - nw1 * ((1.0 - mu) * (1.0 + 2.5 * a2) + mu * (1.0 - a2 / 2.0) * d2h)
                / (3.0 * mm * y0 * x0)
            - d2h * a2 / x0);
    let inner = 1.0
        - nw1 * d * d * (2.0 * mu - 1.0 - mu * (1.0 - 1.5 * a2) * d2h + 7.0 * (1.0 - mu) * a2 / 2.0)
            / (3.0 * mm * y0.powi(3))
        - d * d * (1.0 - d2h) * a2 / (y0 * y0);
    if inner < 0.0 {
        return Err(Error::Contract(format!(
            "negative radicand {inner} in the y* series"
        )));
    }
    let y = y0 * inner.sqrt();
    Ok(EquilibriumPoint {
        x,
        y,
        branch,
        method: Method::Series,
        residual: residual_at(x, y, p)?,
    })
}

/// L4 coordinates in ε-form (`q1 = 1 − ε`, `γ = 1 − 2μ`) with drag strength
/// `nw1`. L5 follows from the mirror `y → −y`, `W1 → −W1`.
fn epsilon_form_l4(p: &ModelParams, nw1: f64) -> (f64, f64) {
    let (g, e, a2) = (p.gamma(), p.epsilon(), p.a2());
    let x = g / 2.0 - e / 3.0 - a2 / 2.0 + a2 * e / 3.0
        - (9.0 + g) / (6.0 * SQRT3) * nw1
        - 4.0 * g * e / (27.0 * SQRT3) * nw1;
    (x, epsilon_form_b(p, nw1))
}

fn epsilon_form_b(p: &ModelParams, nw1: f64) -> f64 {
    let (g, e, a2) = (p.gamma(), p.epsilon(), p.a2());
    SQRT3 / 2.0
        * (1.0 - 2.0 * e / 9.0 - a2 / 3.0 - 2.0 * a2 * e / 9.0 + (1.0 + g) / (9.0 * SQRT3) * nw1
            - 4.0 * g * e / (27.0 * SQRT3) * nw1)
}

fn mirrored(branch: Branch, p: &ModelParams) -> f64 {
    branch.sign() * p.n_w1()
}

/// Equilibrium in ε-form.
pub fn epsilon_form(p: &ModelParams, branch: Branch) -> Result<EquilibriumPoint> {
    let (x, y) = epsilon_form_l4(p, mirrored(branch, p));
    let y = branch.sign() * y;
    Ok(EquilibriumPoint {
        x,
        y,
        branch,
        method: Method::EpsilonForm,
        residual: residual_at(x, y, p)?,
    })
}

/// Series for the origin shift `(a, b)`, with the leading unit term in `a`
/// restored so that `a = x + μ` holds for the ε-form.
pub fn offset_ab(p: &ModelParams, branch: Branch) -> OriginShift {
    let printed = offset_ab_printed(p, branch);
    OriginShift {
        a: 0.5 + printed.a,
        b: printed.b,
    }
}

/// Origin shift `(a, b)` exactly as typeset, whose `a` lacks the leading
/// `1/2`.
pub fn offset_ab_printed(p: &ModelParams, branch: Branch) -> OriginShift {
    let (g, e, a2) = (p.gamma(), p.epsilon(), p.a2());
    let nw1 = mirrored(branch, p);
    let a = 0.5
        * (-2.0 * e / 3.0 - a2 + 2.0 * a2 * e / 3.0
            - (9.0 + g) / (3.0 * SQRT3) * nw1
            - 8.0 * g * e / (27.0 * SQRT3) * nw1);
    OriginShift {
        a,
        b: branch.sign() * epsilon_form_b(p, nw1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_reduction_all_methods() {
        for mu in [0.01, 0.25, 0.4] {
            let p = ModelParams::classical(mu).unwrap();
            for m in [
                solve_triangular_numeric(&p, Branch::L4).unwrap(),
                triangular_series(&p, Branch::L4).unwrap(),
                epsilon_form(&p, Branch::L4).unwrap(),
            ] {
                assert!((m.x - (0.5 - mu)).abs() < 1e-12, "{m:?}");
                assert!((m.y - SQRT3 / 2.0).abs() < 1e-12, "{m:?}");
            }
            let s = offset_ab(&p, Branch::L4);
            assert!((s.a - 0.5).abs() < 1e-15 && (s.b - SQRT3 / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn numeric_solution_has_tiny_residual() {
        let p = ModelParams::new(0.01, 0.9995, 0.0, 100.0).unwrap();
        let q = solve_triangular_numeric(&p, Branch::L4).unwrap();
        assert!(q.residual < 1e-12);
        assert!((q.x - 0.49).abs() < 1e-3 && (q.y - SQRT3 / 2.0).abs() < 1e-3);
    }

    #[test]
    fn drag_breaks_mirror_symmetry() {
        let p = ModelParams::new(0.01, 0.9995, 0.0, 100.0).unwrap();
        let l4 = solve_triangular_numeric(&p, Branch::L4).unwrap();
        let l5 = solve_triangular_numeric(&p, Branch::L5).unwrap();
        assert!(l5.y < 0.0);
        assert!((l5.y.abs() - l4.y).abs() > 1e-9 || (l5.x - l4.x).abs() > 1e-9);

        let p = ModelParams::with_drag_strength(0.01, 0.9995, 0.001, 0.0).unwrap();
        let l4 = solve_triangular_numeric(&p, Branch::L4).unwrap();
        let l5 = solve_triangular_numeric(&p, Branch::L5).unwrap();
        assert!((l5.y + l4.y).abs() < 1e-12 && (l5.x - l4.x).abs() < 1e-12);
    }

    #[test]
    fn epsilon_only_values() {
        let (mu, e) = (0.1, 1e-3);
        let p = ModelParams::from_epsilon(mu, e, 0.0, 0.0).unwrap();
        let q = epsilon_form(&p, Branch::L4).unwrap();
        assert!((q.x - (0.5 - mu - e / 3.0)).abs() < 1e-15);
        assert!((q.y - SQRT3 / 2.0 * (1.0 - 2.0 * e / 9.0)).abs() < 1e-15);
        let s = offset_ab(&p, Branch::L4);
        assert!((s.a - 0.5 + e / 3.0).abs() < 1e-15);
        assert!((offset_ab_printed(&p, Branch::L4).a + e / 3.0).abs() < 1e-15);
        assert!((s.a - (q.x + mu)).abs() < 1e-15 && (s.b - q.y).abs() < 1e-15);
    }

    #[test]
    fn oblateness_only_values() {
        let (mu, a2) = (0.1, 1e-3);
        let p = ModelParams::with_drag_strength(mu, 1.0, a2, 0.0).unwrap();
        let q = epsilon_form(&p, Branch::L4).unwrap();
        assert!((q.x - (0.5 - mu - a2 / 2.0)).abs() < 1e-15);
        assert!((q.y - SQRT3 / 2.0 * (1.0 - a2 / 3.0)).abs() < 1e-15);
        let s = offset_ab(&p, Branch::L4);
        assert!((s.a - 0.5 + a2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn series_needs_nonzero_mu() {
        let p = ModelParams::unvalidated(0.0, 1.0, 0.0, 0.0);
        assert_eq!(
            triangular_series(&p, Branch::L4),
            Err(Error::DivisionByZero("mu(1 - mu)"))
        );
    }

    #[test]
    fn l5_series_mirror() {
        let p = ModelParams::with_drag_strength(0.05, 0.999, 2e-4, 0.0).unwrap();
        let a = triangular_series(&p, Branch::L4).unwrap();
        let b = triangular_series(&p, Branch::L5).unwrap();
        assert!((a.x - b.x).abs() < 1e-15 && (a.y + b.y).abs() < 1e-15);
    }

    #[test]
    fn shift_round_trip() {
        let p = ModelParams::from_epsilon(0.2, 1e-3, 1e-3, 1e-4).unwrap();
        let q = solve_triangular_numeric(&p, Branch::L4).unwrap();
        let s = OriginShift::from_point(&q, &p);
        assert_eq!(s.a - (q.x + p.mu()), 0.0);
        assert_eq!(s.b - q.y, 0.0);
    }
}
