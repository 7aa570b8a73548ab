//! Exact truncated Taylor expansions of the Lagrangian and Hamiltonian about
//! a triangular point, built by series composition.

use crate::equilibria::OriginShift;
use crate::error::{Error, Primary, Result};
use crate::model::COLLISION_RADIUS;
use crate::params::ModelParams;
use crate::poly::{atan_series, binomial_series, Monomial, TruncatedPoly, Var, MAX_DEGREE};

/// Coefficients `E, F, G` of the linearized Euler–Lagrange operator
/// `ξ̈ − 2nη̇ + (2E − n²)ξ + Gη`, `η̈ + 2nξ̇ + (2F − n²)η + Gξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoefficients {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// `M q̈ + C q̇ + K q = 0` read off a quadratic Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedEl {
    pub mass: [[f64; 2]; 2],
    pub gyro: [[f64; 2]; 2],
    pub stiffness: [[f64; 2]; 2],
}

/// Building blocks shared by the Lagrangian and Hamiltonian expansions.
struct Pieces {
    /// Vector potential `A(q)` multiplying the velocities.
    ax: TruncatedPoly,
    ay: TruncatedPoly,
    /// Velocity-free part of the Lagrangian.
    potential: TruncatedPoly,
}

fn check_radius(r: f64, primary: Primary) -> Result<()> {
    if r < COLLISION_RADIUS {
        return Err(Error::Collision {
            primary,
            distance: r,
        });
    }
    Ok(())
}

/// `(dx² + dy²)^(alpha/2)` about `(dx, dy) = (cx, cy)` as a series in `(ξ, η)`.
fn radial_power(cx: f64, cy: f64, alpha: f64, cap: u32) -> Result<TruncatedPoly> {
    let r2 = cx * cx + cy * cy;
    let xi = TruncatedPoly::var(Var::Xi, cap);
    let eta = TruncatedPoly::var(Var::Eta, cap);
    // u = (2(cx ξ + cy η) + ξ² + η²) / r²
    let lin = TruncatedPoly::linear(0.0, [2.0 * cx, 2.0 * cy, 0.0, 0.0], cap);
    let u = (&(&lin + &(&xi * &xi)) + &(&eta * &eta)).scale(1.0 / r2);
    Ok(u.compose_series(&binomial_series(alpha / 2.0, cap))?.scale(r2.powf(alpha / 2.0)))
}

fn pieces(p: &ModelParams, shift: &OriginShift, cap: u32) -> Result<Pieces> {
    if cap > MAX_DEGREE {
        return Err(Error::Contract(format!("degree cap {cap} exceeds {MAX_DEGREE}")));
    }
    let (a, b) = (shift.a, shift.b);
    let mu = p.mu();
    let n = p.n();
    let xs = a - mu;
    let r1 = a.hypot(b);
    let r2 = (a - 1.0).hypot(b);
    check_radius(r1, Primary::Larger)?;
    check_radius(r2, Primary::Smaller)?;
    if b == 0.0 && a < 0.0 {
        return Err(Error::ArctanBranch);
    }

    let xi = TruncatedPoly::var(Var::Xi, cap);
    let eta = TruncatedPoly::var(Var::Eta, cap);
    let x = TruncatedPoly::linear(xs, [1.0, 0.0, 0.0, 0.0], cap);
    let y = TruncatedPoly::linear(b, [0.0, 1.0, 0.0, 0.0], cap);

    let inv_r1 = radial_power(a, b, -1.0, cap)?;
    let inv_r1sq = radial_power(a, b, -2.0, cap)?;
    let inv_r2 = radial_power(a - 1.0, b, -1.0, cap)?;
    let inv_r2cube = radial_power(a - 1.0, b, -3.0, cap)?;

    // drag angle: θ0 + atan(w), w = (aη − bξ)/(r1² + aξ + bη)
    let num = TruncatedPoly::linear(0.0, [-b, a, 0.0, 0.0], cap);
    let v = TruncatedPoly::linear(0.0, [a / (r1 * r1), b / (r1 * r1), 0.0, 0.0], cap);
    let inv_den = v.compose_series(&binomial_series(-1.0, cap))?.scale(1.0 / (r1 * r1));
    let w = &num * &inv_den;
    let mut theta = w.compose_series(&atan_series(cap))?;
    theta.add_term(Monomial::ONE, b.atan2(a));

    let half_w1 = 0.5 * p.w1();
    let ax = &y.scale(-n) + &(&(&xi + &TruncatedPoly::constant(a, cap)) * &inv_r1sq).scale(half_w1);
    let ay = &x.scale(n) + &(&(&eta + &TruncatedPoly::constant(b, cap)) * &inv_r1sq).scale(half_w1);

    let rho2 = &(&x * &x) + &(&y * &y);
    let potential = [
        rho2.scale(0.5 * n * n),
        inv_r1.scale((1.0 - mu) * p.q1()),
        inv_r2.scale(mu),
        inv_r2cube.scale(0.5 * mu * p.a2()),
        theta.scale(-p.w1() * n),
    ]
    .iter()
    .fold(TruncatedPoly::zero(cap), |acc, t| &acc + t);

    Ok(Pieces { ax, ay, potential })
}

/// Taylor expansion of the Lagrangian about `(x*, y*, 0, 0)` in the
/// variables `(ξ, η, ξ̇, η̇)`, exact through total degree `degree`.
pub fn taylor_lagrangian(p: &ModelParams, shift: &OriginShift, degree: u32) -> Result<TruncatedPoly> {
    let Pieces { ax, ay, potential } = pieces(p, shift, degree)?;
    let xd = TruncatedPoly::var(Var::XiDot, degree);
    let yd = TruncatedPoly::var(Var::EtaDot, degree);
    let kinetic = (&(&xd * &xd) + &(&yd * &yd)).scale(0.5);
    let gauge = &(&ax * &xd) + &(&ay * &yd);
    Ok(&(&kinetic + &gauge) + &potential)
}

/// Taylor expansion of `H = ½|P − A(q)|² − V(q)` in `(ξ, η, Pξ, Pη)`, with
/// momenta measured from their equilibrium values.
pub fn taylor_hamiltonian(p: &ModelParams, shift: &OriginShift, degree: u32) -> Result<TruncatedPoly> {
    let Pieces { ax, ay, potential } = pieces(p, shift, degree)?;
    let px0 = ax.coeff(Monomial::ONE);
    let py0 = ay.coeff(Monomial::ONE);
    let pxm = TruncatedPoly::linear(px0, [0.0, 0.0, 1.0, 0.0], degree);
    let pym = TruncatedPoly::linear(py0, [0.0, 0.0, 0.0, 1.0], degree);
    let vx = &pxm - &ax;
    let vy = &pym - &ay;
    Ok(&(&(&vx * &vx) + &(&vy * &vy)).scale(0.5) - &potential)
}

/// Linear part of the velocity in canonical variables, `v = P − A₁q`, as
/// the two polynomials `(vx, vy)`.
pub fn linear_velocity(p: &ModelParams, shift: &OriginShift) -> Result<(TruncatedPoly, TruncatedPoly)> {
    let Pieces { ax, ay, .. } = pieces(p, shift, 1)?;
    let vx = &TruncatedPoly::var(Var::XiDot, 3) - &ax.slice(1).truncate(3);
    let vy = &TruncatedPoly::var(Var::EtaDot, 3) - &ay.slice(1).truncate(3);
    Ok((vx, vy))
}

/// Energy function `Σ v ∂L/∂v − L`.
pub fn energy_function(l: &TruncatedPoly) -> TruncatedPoly {
    let mut e = -l;
    for v in Var::VELOCITIES {
        e = &e + &(&TruncatedPoly::var(v, l.cap()) * &l.derivative(v));
    }
    e
}

/// Reads `E, F, G` from the position part of a degree-2 slice.
pub fn extract_efg(l2: &TruncatedPoly, p: &ModelParams) -> Result<QuadraticCoefficients> {
    if let Some((m, _)) = l2.terms().find(|(m, _)| m.degree() != 2) {
        return Err(Error::Contract(format!(
            "expected a homogeneous quadratic, found monomial {:?}",
            m.0
        )));
    }
    let n2 = p.n() * p.n();
    Ok(QuadraticCoefficients {
        e: (n2 - 2.0 * l2.coeff([2, 0, 0, 0])) / 2.0,
        f: (n2 - 2.0 * l2.coeff([0, 2, 0, 0])) / 2.0,
        g: -l2.coeff([1, 1, 0, 0]),
    })
}

/// Euler–Lagrange operator of a quadratic Lagrangian
/// `½vᵀMv + vᵀBq + ½qᵀSq`: `M q̈ + (B − Bᵀ) q̇ − S q`.
pub fn linearized_el(l2: &TruncatedPoly) -> LinearizedEl {
    let c = |e: [u8; 4]| l2.coeff(e);
    let mass = [
        [2.0 * c([0, 0, 2, 0]), c([0, 0, 1, 1])],
        [c([0, 0, 1, 1]), 2.0 * c([0, 0, 0, 2])],
    ];
    // B[i][j] multiplies v_i q_j
    let bm = [
        [c([1, 0, 1, 0]), c([0, 1, 1, 0])],
        [c([1, 0, 0, 1]), c([0, 1, 0, 1])],
    ];
    let s = [
        [2.0 * c([2, 0, 0, 0]), c([1, 1, 0, 0])],
        [c([1, 1, 0, 0]), 2.0 * c([0, 2, 0, 0])],
    ];
    let mut gyro = [[0.0; 2]; 2];
    let mut stiffness = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            gyro[i][j] = bm[i][j] - bm[j][i];
            stiffness[i][j] = -s[i][j];
        }
    }
    LinearizedEl {
        mass,
        gyro,
        stiffness,
    }
}

impl QuadraticCoefficients {
    /// The operator `E, F, G` and `n` stand for.
    pub fn operator(&self, n: f64) -> LinearizedEl {
        LinearizedEl {
            mass: [[1.0, 0.0], [0.0, 1.0]],
            gyro: [[0.0, -2.0 * n], [2.0 * n, 0.0]],
            stiffness: [[2.0 * self.e - n * n, self.g], [self.g, 2.0 * self.f - n * n]],
        }
    }
}

impl LinearizedEl {
    pub fn max_abs_diff(&self, other: &LinearizedEl) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in [
            (&self.mass, &other.mass),
            (&self.gyro, &other.gyro),
            (&self.stiffness, &other.stiffness),
        ] {
            for i in 0..2 {
                for j in 0..2 {
                    d = d.max((a[i][j] - b[i][j]).abs());
                }
            }
        }
        d
    }
}
