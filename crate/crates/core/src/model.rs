//! Rotating-frame dynamics: potential, equations of motion with drag,
//! Lagrangian and canonical momenta.

use crate::error::{Error, Primary, Result};
use crate::params::ModelParams;

/// Distances below this are treated as a collision with a primary.
pub const COLLISION_RADIUS: f64 = 1e-9;

/// Position and velocity in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x: f64,
    pub y: f64,
    pub xdot: f64,
    pub ydot: f64,
}

impl State {
    pub fn new(x: f64, y: f64, xdot: f64, ydot: f64) -> Self {
        Self { x, y, xdot, ydot }
    }

    pub fn at_rest(x: f64, y: f64) -> Self {
        Self::new(x, y, 0.0, 0.0)
    }
}

/// Position and canonical momenta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalState {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

/// Distances to both primaries, collision-checked.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Distances {
    pub r1: f64,
    pub r2: f64,
}

pub(crate) fn distances(x: f64, y: f64, p: &ModelParams) -> Result<Distances> {
    let mu = p.mu();
    let r1 = (x + mu).hypot(y);
    let r2 = (x + mu - 1.0).hypot(y);
    if r1 < COLLISION_RADIUS {
        return Err(Error::Collision {
            primary: Primary::Larger,
            distance: r1,
        });
    }
    if r2 < COLLISION_RADIUS {
        return Err(Error::Collision {
            primary: Primary::Smaller,
            distance: r2,
        });
    }
    Ok(Distances { r1, r2 })
}

/// `U1 = n²(x²+y²)/2 + (1−μ)q1/r1 + μ/r2 + μA2/(2r2³)`.
pub fn effective_potential(s: &State, p: &ModelParams) -> Result<f64> {
    let Distances { r1, r2 } = distances(s.x, s.y, p)?;
    let mu = p.mu();
    let n2 = p.n() * p.n();
    Ok(0.5 * n2 * (s.x * s.x + s.y * s.y)
        + (1.0 - mu) * p.q1() / r1
        + mu / r2
        + mu * p.a2() / (2.0 * r2.powi(3)))
}

/// Gradient `(∂U1/∂x, ∂U1/∂y)` of the effective potential.
pub fn potential_gradient(x: f64, y: f64, p: &ModelParams) -> Result<(f64, f64)> {
    let Distances { r1, r2 } = distances(x, y, p)?;
    let mu = p.mu();
    let n2 = p.n() * p.n();
    let (dx1, dx2) = (x + mu, x + mu - 1.0);
    // d/dr of each radial term, divided by r
    let k1 = -(1.0 - mu) * p.q1() / r1.powi(3);
    let k2 = -mu / r2.powi(3) - 1.5 * mu * p.a2() / r2.powi(5);
    Ok((n2 * x + k1 * dx1 + k2 * dx2, n2 * y + k1 * y + k2 * y))
}

/// Hessian `[[Uxx, Uxy], [Uxy, Uyy]]` of the effective potential.
pub fn potential_hessian(x: f64, y: f64, p: &ModelParams) -> Result<[[f64; 2]; 2]> {
    let Distances { r1, r2 } = distances(x, y, p)?;
    let mu = p.mu();
    let n2 = p.n() * p.n();
    let (dx1, dx2) = (x + mu, x + mu - 1.0);
    // term c/r^k has Hessian c*(-k)[I/r^{k+2} - (k+2) d d^T / r^{k+4}]
    let radial = |c: f64, k: f64, r: f64, dx: f64| -> [f64; 3] {
        let a = -k * c / r.powf(k + 2.0);
        let b = k * (k + 2.0) * c / r.powf(k + 4.0);
        [a + b * dx * dx, b * dx * y, a + b * y * y]
    };
    let t1 = radial((1.0 - mu) * p.q1(), 1.0, r1, dx1);
    let t2 = radial(mu, 1.0, r2, dx2);
    let t3 = radial(0.5 * mu * p.a2(), 3.0, r2, dx2);
    let xx = n2 + t1[0] + t2[0] + t3[0];
    let xy = t1[1] + t2[1] + t3[1];
    let yy = n2 + t1[2] + t2[2] + t3[2];
    Ok([[xx, xy], [xy, yy]])
}

/// Drag factors `(N1, N2)`.
pub fn drag_factors(s: &State, p: &ModelParams) -> Result<(f64, f64)> {
    let Distances { r1, .. } = distances(s.x, s.y, p)?;
    let n = p.n();
    let rx = s.x + p.mu();
    let radial = (rx * s.xdot + s.y * s.ydot) / (r1 * r1);
    Ok((rx * radial + s.xdot - n * s.y, s.y * radial + s.ydot + n * rx))
}

/// Generalized forces `(Ux, Uy)` including the drag terms `−W1 N/r1²`.
pub fn generalized_force(s: &State, p: &ModelParams) -> Result<(f64, f64)> {
    let (gx, gy) = potential_gradient(s.x, s.y, p)?;
    let (n1, n2) = drag_factors(s, p)?;
    let r1sq = (s.x + p.mu()).powi(2) + s.y * s.y;
    let w = p.w1() / r1sq;
    Ok((gx - w * n1, gy - w * n2))
}

/// Accelerations `(ẍ, ÿ) = (2nẏ + Ux, −2nẋ + Uy)`.
pub fn eom_rhs(s: &State, p: &ModelParams) -> Result<(f64, f64)> {
    let (ux, uy) = generalized_force(s, p)?;
    let n = p.n();
    Ok((2.0 * n * s.ydot + ux, -2.0 * n * s.xdot + uy))
}

/// Angle of the particle seen from the larger primary, `atan2(y, x + μ)`.
pub fn drag_angle(x: f64, y: f64, p: &ModelParams) -> Result<f64> {
    let rx = x + p.mu();
    if y == 0.0 && rx < 0.0 {
        return Err(Error::ArctanBranch);
    }
    Ok(y.atan2(rx))
}

/// Lagrangian including the drag terms.
pub fn lagrangian(s: &State, p: &ModelParams) -> Result<f64> {
    let u1 = effective_potential(s, p)?;
    let theta = drag_angle(s.x, s.y, p)?;
    let n = p.n();
    let rx = s.x + p.mu();
    let r1sq = rx * rx + s.y * s.y;
    let kinetic = 0.5 * (s.xdot * s.xdot + s.ydot * s.ydot);
    let coriolis = n * (s.x * s.ydot - s.xdot * s.y);
    let drag = p.w1() * ((rx * s.xdot + s.y * s.ydot) / (2.0 * r1sq) - n * theta);
    Ok(kinetic + coriolis + u1 + drag)
}

/// Canonical momenta `P = ∂L/∂(ẋ, ẏ)`.
pub fn momenta(s: &State, p: &ModelParams) -> Result<CanonicalState> {
    distances(s.x, s.y, p)?;
    let n = p.n();
    let rx = s.x + p.mu();
    let half = p.w1() / (2.0 * (rx * rx + s.y * s.y));
    Ok(CanonicalState {
        x: s.x,
        y: s.y,
        px: s.xdot - n * s.y + half * rx,
        py: s.ydot + n * s.x + half * s.y,
    })
}

/// Inverse of [`momenta`].
pub fn velocities(c: &CanonicalState, p: &ModelParams) -> Result<State> {
    distances(c.x, c.y, p)?;
    let n = p.n();
    let rx = c.x + p.mu();
    let half = p.w1() / (2.0 * (rx * rx + c.y * c.y));
    Ok(State {
        x: c.x,
        y: c.y,
        xdot: c.px + n * c.y - half * rx,
        ydot: c.py - n * c.x - half * c.y,
    })
}

/// `H = −L + Px ẋ + Py ẏ` evaluated at a rotating-frame state.
pub fn hamiltonian(s: &State, p: &ModelParams) -> Result<f64> {
    let c = momenta(s, p)?;
    Ok(-lagrangian(s, p)? + c.px * s.xdot + c.py * s.ydot)
}
