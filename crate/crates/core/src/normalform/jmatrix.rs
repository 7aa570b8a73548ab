//! The linear normalizing transformation `X = J T`, both as the printed
//! six-entry series and by symplectic normalization of the quadratic part.

use crate::dalembert::{FrequencyPair, DIVISOR_FLOOR};
use crate::equilibria::OriginShift;
use crate::error::{Error, Result};
use crate::model::{eom_rhs, State};
use crate::params::ModelParams;
use crate::poly::TruncatedPoly;
use crate::taylor::{linearized_el, QuadraticCoefficients};
use nalgebra::{Matrix2, Matrix4, Vector4};

const SQ3: f64 = 1.732_050_807_568_877_2;

/// Linearization used to build `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinearModel {
    /// Euler–Lagrange equations of the expanded Lagrangian (Hamiltonian).
    #[default]
    Conservative,
    /// The equations of motion including the dissipative drag terms.
    FullDrag,
}

/// The six entries of `J` that enter the first-order components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JEntries {
    pub j13: f64,
    pub j14: f64,
    pub j21: f64,
    pub j22: f64,
    pub j23: f64,
    pub j24: f64,
}

impl JEntries {
    pub fn as_array(&self) -> [f64; 6] {
        [self.j13, self.j14, self.j21, self.j22, self.j23, self.j24]
    }

    pub const NAMES: [&'static str; 6] = ["J13", "J14", "J21", "J22", "J23", "J24"];
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalModeData {
    pub freq: FrequencyPair,
    /// Columns `(Q1, Q2, P1, P2)`, rows `(x, y, px, py)`.
    pub j: Matrix4<f64>,
    pub efg: QuadraticCoefficients,
    pub l1: f64,
    pub l2: f64,
    pub k1: f64,
    pub k2: f64,
    /// `max |JᵀΣJ − Σ|`.
    pub symplectic_defect: f64,
    /// `max |JᵀSJ − diag(ω1², −ω2², 1, −1)|`.
    pub h2_residual: f64,
    pub model: LinearModel,
}

impl NormalModeData {
    pub fn entries(&self) -> JEntries {
        JEntries {
            j13: self.j[(0, 2)],
            j14: self.j[(0, 3)],
            j21: self.j[(1, 0)],
            j22: self.j[(1, 1)],
            j23: self.j[(1, 2)],
            j24: self.j[(1, 3)],
        }
    }
}

/// `(l1, l2, k1, k2)` with `l² = 4ω² + 9`, `k1² = 2ω1² − 1`, `k2² = 1 − 2ω2²`.
pub fn auxiliary(w: &FrequencyPair) -> Result<(f64, f64, f64, f64)> {
    let k1sq = 2.0 * w.omega1 * w.omega1 - 1.0;
    let k2sq = 1.0 - 2.0 * w.omega2 * w.omega2;
    for (name, v) in [("k1^2", k1sq), ("k2^2", k2sq)] {
        if v < DIVISOR_FLOOR {
            return Err(Error::SmallDivisor {
                name: name.into(),
                value: v,
            });
        }
    }
    Ok((
        (4.0 * w.omega1 * w.omega1 + 9.0).sqrt(),
        (4.0 * w.omega2 * w.omega2 + 9.0).sqrt(),
        k1sq.sqrt(),
        k2sq.sqrt(),
    ))
}

/// The printed series for `J13, J14, J21, J22, J23, J24` at L4.
pub fn j_closed_form(p: &ModelParams, w: &FrequencyPair) -> Result<JEntries> {
    let (l1, l2, k1, k2) = auxiliary(w)?;
    let (g, e, a, nw) = (p.gamma(), p.epsilon(), p.a2(), p.n_w1());
    let n = p.n();
    let (o1, o2) = (w.omega1, w.omega2);
    let (l1s, l2s, k1s, k2s) = (l1 * l1, l2 * l2, k1 * k1, k2 * k2);

    let j13 = l1 / (2.0 * o1 * k1)
        * (1.0
            - 1.0 / (2.0 * l1s)
                * (e + 45.0 * a / 2.0 - 717.0 * a * e / 36.0 + (67.0 + 19.0 * g) / (12.0 * SQ3) * nw
                    - (431.0 - 3.0 * g) / (27.0 * SQ3) * nw * e)
            + g / (2.0 * l1s)
                * (3.0 * e - 29.0 * a / 36.0 - (187.0 + 27.0 * g) / (12.0 * SQ3) * nw
                    - 2.0 * (247.0 + 3.0 * g) / (27.0 * SQ3) * nw * e)
            - 1.0 / (2.0 * k1s)
                * (e / 2.0 - 3.0 * a - 73.0 * a * e / 24.0 + (1.0 - 9.0 * g) / (24.0 * SQ3) * nw
                    + (53.0 - 39.0 * g) / (54.0 * SQ3) * nw * e)
            - g / (4.0 * k1s)
                * (e - 3.0 * a - 299.0 * a * e / 72.0 - (6.0 - 5.0 * g) / (12.0 * SQ3) * nw
                    - (266.0 - 93.0 * g) / (54.0 * SQ3) * nw * e)
            + e / (4.0 * l1s * k1s) * (3.0 * a / 4.0 + (33.0 + 14.0 * g) / (12.0 * SQ3) * nw)
            + g * e / (8.0 * l1s * k1s) * (347.0 * a / 36.0 - (43.0 - 8.0 * g) / (4.0 * SQ3) * nw));

    let j14 = l2 / (2.0 * o2 * k2)
        * (1.0
            - 1.0 / (2.0 * l2s)
                * (e + 45.0 * a / 2.0 - 717.0 * a * e / 36.0 + (67.0 + 19.0 * g) / (12.0 * SQ3) * nw
                    - (431.0 - 3.0 * g) / (27.0 * SQ3) * nw * e)
            - g / (2.0 * l2s)
                * (3.0 * e - 293.0 * a / 36.0 + (187.0 + 27.0 * g) / (12.0 * SQ3) * nw
                    - 2.0 * (247.0 + 3.0 * g) / (27.0 * SQ3) * nw * e)
            - 1.0 / (2.0 * k2s)
                * (e / 2.0 - 3.0 * a - 73.0 * a * e / 24.0 + (1.0 - 9.0 * g) / (24.0 * SQ3) * nw
                    + (53.0 - 39.0 * g) / (54.0 * SQ3) * nw * e)
            + g / (2.0 * k2s)
                * (e - 3.0 * a - 299.0 * a * e / 72.0 - (6.0 - 5.0 * g) / (12.0 * SQ3) * nw
                    - (268.0 - 9.0 * g) / (54.0 * SQ3) * nw * e)
            - e / (4.0 * l2s * k2s) * (33.0 * a / 4.0 + (1643.0 - 93.0 * g) / (216.0 * SQ3) * nw)
            + g * e / (4.0 * l2s * k2s) * (737.0 * a / 72.0 - (13.0 + 2.0 * g) / SQ3 * nw));

    let j21 = -4.0 * n * o1 / (l1 * k1)
        * (1.0
            + 1.0 / (2.0 * l1s)
                * (e + 45.0 * a / 2.0 - 717.0 * a * e / 36.0 + (67.0 + 19.0 * g) / (12.0 * SQ3) * nw
                    - (413.0 - 3.0 * g) / (27.0 * SQ3) * nw * e)
            - g / (2.0 * l1s)
                * (3.0 * e - 293.0 * a / 36.0 + (187.0 + 27.0 * g) / (12.0 * SQ3) * nw
                    - 2.0 * (247.0 + 3.0 * g) / (27.0 * SQ3) * nw * e)
            - 1.0 / (2.0 * k1s)
                * (e / 2.0 - 3.0 * a - 73.0 * a * e / 24.0 + (1.0 - 9.0 * g) / (24.0 * SQ3) * nw
                    + (53.0 - 39.0 * g) / (54.0 * SQ3) * nw * e)
            - g / (4.0 * k1s)
                * (e - 3.0 * a - 299.0 * a * e / 72.0 - (6.0 - 5.0 * g) / (12.0 * SQ3) * nw
                    - (268.0 - 93.0 * g) / (54.0 * SQ3) * nw * e)
            + e / (8.0 * l1s * k1s) * (33.0 * a / 4.0 + (68.0 - 10.0 * g) / (24.0 * SQ3) * nw)
            + g * e / (8.0 * l1s * k1s) * (242.0 * a / 9.0 + (43.0 - 8.0 * g) / (4.0 * SQ3) * nw));

    let j22 = 4.0 * n * o2 / (l2 * k2)
        * (1.0
            + 1.0 / (2.0 * l2s)
                * (e + 45.0 * a / 2.0 - 717.0 * a * e / 36.0 + (67.0 + 19.0 * g) / (12.0 * SQ3) * nw
                    - (413.0 - 3.0 * g) / (27.0 * SQ3) * nw * e)
            - g / (2.0 * l2s)
                * (3.0 * e - 293.0 * a / 36.0 + (187.0 + 27.0 * g) / (12.0 * SQ3) * nw
                    - 2.0 * (247.0 + 3.0 * g) / (27.0 * SQ3) * nw * e)
            + 1.0 / (2.0 * k2s)
                * (e / 2.0 - 3.0 * a - 73.0 * a * e / 24.0 + (1.0 - 9.0 * g) / (24.0 * SQ3) * nw
                    + (53.0 - 39.0 * g) / (54.0 * SQ3) * nw * e)
            - g / (4.0 * k2s)
                * (e - 3.0 * a - 299.0 * a * e / 72.0 - (6.0 - 5.0 * g) / (12.0 * SQ3) * nw
                    - (268.0 - 93.0 * g) / (54.0 * SQ3) * nw * e)
            + e / (4.0 * l2s * k2s) * (33.0 * a / 4.0 + (34.0 + 5.0 * g) / (12.0 * SQ3) * nw)
            + g * e / (8.0 * l2s * k2s) * (75.0 * a / 2.0 + (43.0 - 8.0 * g) / (4.0 * SQ3) * nw));

    let j23 = SQ3 / (4.0 * o1 * l1 * k1)
        * (2.0 * e + 6.0 * a + 37.0 * a * e / 2.0 - (13.0 + g) / (2.0 * SQ3) * nw
            + 2.0 * (79.0 - 7.0 * g) / (9.0 * SQ3) * nw * e
            - g * (6.0 + 2.0 * e / 3.0 + 13.0 * a - 33.0 * a * e / 2.0 + (11.0 - g) / (2.0 * SQ3) * nw
                - (186.0 - g) / (9.0 * SQ3) * nw * e)
            + 1.0 / (2.0 * l1s) * (51.0 * a + (14.0 + 8.0 * g) / (3.0 * SQ3) * nw)
            - e / k1s * (3.0 * a + (19.0 + 6.0 * g) / (6.0 * SQ3) * nw)
            - g / (2.0 * l1s)
                * (6.0 * e + 135.0 * a - 808.0 * a * e / 9.0 - (67.0 + 19.0 * g) / (2.0 * SQ3) * nw
                    - (755.0 + 19.0 * g) / (9.0 * SQ3) * nw * e)
            - g / (2.0 * k1s)
                * (3.0 * e - 18.0 * a - 55.0 * a * e / 4.0 - (1.0 - 9.0 * g) / (4.0 * SQ3) * nw
                    + (923.0 - 60.0 * g) / (12.0 * SQ3) * nw * e)
            + g * e / (8.0 * l1s * k1s) * (9.0 * a / 2.0 + (34.0 - 5.0 * g) / (2.0 * SQ3) * nw));

    // the last two brackets reference l1, k1 as typeset
    let j24 = SQ3 / (4.0 * o2 * l2 * k2)
        * (2.0 * e + 6.0 * a + 37.0 * a * e / 2.0 - (13.0 + g) / (2.0 * SQ3) * nw
            + 2.0 * (79.0 - 7.0 * g) / (9.0 * SQ3) * nw * e
            - g * (6.0 + 2.0 * e / 3.0 + 13.0 * a - 33.0 * a * e / 2.0 + (11.0 - g) / (2.0 * SQ3) * nw
                - (186.0 - g) / (9.0 * SQ3) * nw * e)
            - 1.0 / (2.0 * l2s) * (51.0 * a + (14.0 + 8.0 * g) / (3.0 * SQ3) * nw)
            - e / k2s * (3.0 * a + (19.0 + 6.0 * g) / (6.0 * SQ3) * nw)
            - g / (2.0 * l2s)
                * (6.0 * e + 135.0 * a - 808.0 * a * e / 9.0 - (67.0 + 19.0 * g) / (2.0 * SQ3) * nw
                    - (755.0 + 19.0 * g) / (9.0 * SQ3) * nw * e)
            - g / (2.0 * k1s)
                * (3.0 * e - 18.0 * a - 55.0 * a * e / 4.0 - (1.0 - 9.0 * g) / (4.0 * SQ3) * nw
                    + (923.0 - 60.0 * g) / (12.0 * SQ3) * nw * e)
            - g * e / (4.0 * l1s * k1s) * (99.0 * a / 2.0 + (34.0 - 5.0 * g) / (2.0 * SQ3) * nw));

    Ok(JEntries {
        j13,
        j14,
        j21,
        j22,
        j23,
        j24,
    })
}

fn sigma() -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s[(0, 2)] = 1.0;
    s[(1, 3)] = 1.0;
    s[(2, 0)] = -1.0;
    s[(3, 1)] = -1.0;
    s
}

/// Hessian of the quadratic Hamiltonian in `(ξ, η, Pξ, Pη)` built from a
/// degree-2 Lagrangian `½|v|² + vᵀCq + ½qᵀKq`.
pub fn canonical_h2(l2: &TruncatedPoly) -> Matrix4<f64> {
    let el = linearized_el(l2);
    let c = gauge_matrix(l2);
    let k = Matrix2::new(
        -el.stiffness[0][0],
        -el.stiffness[0][1],
        -el.stiffness[1][0],
        -el.stiffness[1][1],
    );
    let qq = c.transpose() * c - k;
    let qp = -c.transpose();
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(&qq);
    s.fixed_view_mut::<2, 2>(0, 2).copy_from(&qp);
    s.fixed_view_mut::<2, 2>(2, 0).copy_from(&qp.transpose());
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&Matrix2::identity());
    s
}

/// `C[i][j]` multiplies `v_i q_j` in the degree-2 Lagrangian.
fn gauge_matrix(l2: &TruncatedPoly) -> Matrix2<f64> {
    Matrix2::new(
        l2.coeff([1, 0, 1, 0]),
        l2.coeff([0, 1, 1, 0]),
        l2.coeff([1, 0, 0, 1]),
        l2.coeff([0, 1, 0, 1]),
    )
}

/// First-order system of the dissipative equations of motion at the
/// equilibrium, in `(ξ, η, ξ̇, η̇)`, by fourth-order central differences.
fn full_drag_velocity_matrix(p: &ModelParams, shift: &OriginShift) -> Result<Matrix4<f64>> {
    let (x0, y0) = shift.position(p);
    let base = [x0, y0, 0.0, 0.0];
    let h = 1e-4;
    let acc = |z: [f64; 4]| eom_rhs(&State::new(z[0], z[1], z[2], z[3]), p);
    let mut m = Matrix4::zeros();
    m[(0, 2)] = 1.0;
    m[(1, 3)] = 1.0;
    for k in 0..4 {
        let mut pts = [[0.0; 2]; 4];
        for (i, s) in [2.0, 1.0, -1.0, -2.0].iter().enumerate() {
            let mut z = base;
            z[k] += s * h;
            let (ax, ay) = acc(z)?;
            pts[i] = [ax, ay];
        }
        for r in 0..2 {
            let d = (-pts[0][r] + 8.0 * pts[1][r] - 8.0 * pts[2][r] + pts[3][r]) / (12.0 * h);
            m[(2 + r, k)] = d;
        }
    }
    Ok(m)
}

fn to_canonical(m: &Matrix4<f64>, c: &Matrix2<f64>) -> Matrix4<f64> {
    let mut t = Matrix4::identity();
    t.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    let mut tinv = Matrix4::identity();
    tinv.fixed_view_mut::<2, 2>(2, 0).copy_from(&(-c));
    t * m * tinv
}

/// Eigenvalues with positive imaginary part, `(σ, ω)`, ordered `ω1 > ω2`.
fn oscillatory_pair(a: &Matrix4<f64>) -> Result<[(f64, f64); 2]> {
    let ev = a.complex_eigenvalues();
    let mut up: Vec<(f64, f64)> = ev.iter().filter(|z| z.im > 0.0).map(|z| (z.re, z.im)).collect();
    if up.len() != 2 {
        return Err(Error::StabilityDomain {
            layout: format!("eigenvalues {:?}", ev.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>()),
        });
    }
    up.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok([up[0], up[1]])
}

/// Follows the two oscillatory eigenvalues from `a0` to `a1` in four steps.
fn homotopy_labels(a0: &Matrix4<f64>, a1: &Matrix4<f64>) -> Result<[(f64, f64); 2]> {
    let mut cur = oscillatory_pair(a0)?;
    for step in 1..=4 {
        let t = step as f64 / 4.0;
        let a = a0 + (a1 - a0) * t;
        let next = oscillatory_pair(&a)?;
        let dist = |x: (f64, f64), y: (f64, f64)| (x.0 - y.0).hypot(x.1 - y.1);
        let keep = dist(cur[0], next[0]) + dist(cur[1], next[1]);
        let swap = dist(cur[0], next[1]) + dist(cur[1], next[0]);
        cur = if keep <= swap { next } else { [next[1], next[0]] };
    }
    Ok(cur)
}

/// Real invariant plane of the eigenvalue pair `σ ± iω`.
fn invariant_plane(a: &Matrix4<f64>, sigma_re: f64, omega: f64) -> Result<[Vector4<f64>; 2]> {
    let shifted = a - Matrix4::identity() * sigma_re;
    let m = shifted * shifted + Matrix4::identity() * (omega * omega);
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::SymplecticFailure("SVD failed".into()))?;
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let scale = svd.singular_values.max().max(1.0);
    if svd.singular_values[idx[1]] > 1e-6 * scale {
        return Err(Error::SymplecticFailure(format!(
            "no two-dimensional invariant plane for omega = {omega}"
        )));
    }
    Ok([
        vt.row(idx[0]).transpose().into_owned(),
        vt.row(idx[1]).transpose().into_owned(),
    ])
}

/// Symplectic basis `(e_Q, e_P)` of one mode with `(e_Q)_x = 0`.
fn mode_basis(a: &Matrix4<f64>, sig: f64, omega: f64, orientation: f64) -> Result<(Vector4<f64>, Vector4<f64>)> {
    let [u1, u2] = invariant_plane(a, sig, omega)?;
    let shifted = a - Matrix4::identity() * sig;
    let (a1, a2) = ((shifted * u1)[0], (shifted * u2)[0]);
    let mut ep = u1 * a2 - u2 * a1;
    let mut eq = shifted * ep * orientation;
    let pairing = eq.dot(&(sigma() * ep));
    if pairing.is_nan() || pairing <= 0.0 {
        return Err(Error::SymplecticFailure(format!(
            "mode omega = {omega} has non-positive symplectic pairing {pairing:e}"
        )));
    }
    let k = pairing.sqrt();
    ep /= k;
    eq /= k;
    if ep[0] < 0.0 {
        ep = -ep;
        eq = -eq;
    }
    Ok((eq, ep))
}

/// Full `J` by symplectic normalization, with diagnostics.
pub fn j_numeric(
    p: &ModelParams,
    shift: &OriginShift,
    l2: &TruncatedPoly,
    efg: &QuadraticCoefficients,
    w: &FrequencyPair,
    model: LinearModel,
) -> Result<NormalModeData> {
    let s = canonical_h2(l2);
    let a0 = sigma() * s;
    let (a, modes) = match model {
        LinearModel::Conservative => (a0, [(0.0, w.omega1), (0.0, w.omega2)]),
        LinearModel::FullDrag => {
            let m = full_drag_velocity_matrix(p, shift)?;
            let a = to_canonical(&m, &gauge_matrix(l2));
            let drag_free = p.with_w1(0.0)?;
            let m0 = full_drag_velocity_matrix(&drag_free, shift)?;
            let start = to_canonical(&m0, &gauge_matrix(l2));
            (a, homotopy_labels(&start, &a)?)
        }
    };
    let (eq1, ep1) = mode_basis(&a, modes[0].0, modes[0].1, 1.0)?;
    let (eq2, ep2) = mode_basis(&a, modes[1].0, modes[1].1, -1.0)?;
    let j = Matrix4::from_columns(&[eq1, eq2, ep1, ep2]);

    let sg = sigma();
    let symplectic_defect = (j.transpose() * sg * j - sg).amax();
    let target = Matrix4::from_diagonal(&Vector4::new(w.omega1.powi(2), -w.omega2.powi(2), 1.0, -1.0));
    let h2_residual = (j.transpose() * s * j - target).amax();
    let (l1, l2v, k1, k2) = auxiliary(w)?;
    Ok(NormalModeData {
        freq: *w,
        j,
        efg: *efg,
        l1,
        l2: l2v,
        k1,
        k2,
        symplectic_defect,
        h2_residual,
        model,
    })
}
