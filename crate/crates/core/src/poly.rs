//! Truncated polynomials in the four shifted phase variables
//! `(ξ, η, ξ̇, η̇)` (or `(ξ, η, Pξ, Pη)` for canonical expansions).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numfmt::{fmt17, hexfloat};

pub const NVARS: usize = 4;

/// Largest supported degree cap.
pub const MAX_DEGREE: u32 = 8;

/// Variable slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Xi = 0,
    Eta = 1,
    XiDot = 2,
    EtaDot = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Xi, Var::Eta, Var::XiDot, Var::EtaDot];
    pub const POSITIONS: [Var; 2] = [Var::Xi, Var::Eta];
    pub const VELOCITIES: [Var; 2] = [Var::XiDot, Var::EtaDot];
}

/// Exponent tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn velocity_degree(&self) -> u32 {
        self.0[2] as u32 + self.0[3] as u32
    }

    pub fn unit(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v as usize] = 1;
        Monomial(e)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }
}

impl From<[u8; NVARS]> for Monomial {
    fn from(e: [u8; NVARS]) -> Self {
        Monomial(e)
    }
}

/// Polynomial with total degree capped at `cap`; every product truncates
/// back to the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPoly {
    cap: u32,
    terms: BTreeMap<Monomial, f64>,
}

impl TruncatedPoly {
    pub fn zero(cap: u32) -> Self {
        Self {
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: f64, cap: u32) -> Self {
        let mut p = Self::zero(cap);
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn var(v: Var, cap: u32) -> Self {
        let mut p = Self::zero(cap);
        p.add_term(Monomial::unit(v), 1.0);
        p
    }

    /// `c0 + Σ c_i·var_i`.
    pub fn linear(c0: f64, coeffs: [f64; NVARS], cap: u32) -> Self {
        let mut p = Self::constant(c0, cap);
        for (v, c) in Var::ALL.iter().zip(coeffs) {
            p.add_term(Monomial::unit(*v), c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, f64)>>(terms: I, cap: u32) -> Self {
        let mut p = Self::zero(cap);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: impl Into<Monomial>) -> f64 {
        self.terms.get(&m.into()).copied().unwrap_or(0.0)
    }

    /// Adds `c·m`; terms above the cap are discarded, exact zeros removed.
    pub fn add_term(&mut self, m: Monomial, c: f64) {
        if m.degree() > self.cap || c == 0.0 {
            return;
        }
        let slot = self.terms.entry(m).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&m);
        }
    }

    /// Highest degree actually present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, c * s)), self.cap)
    }

    /// Same polynomial with a new cap (dropping terms above it).
    pub fn truncate(&self, cap: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, *c)), cap)
    }

    /// Homogeneous part of degree `d`.
    pub fn slice(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, *c)),
            self.cap,
        )
    }

    /// Terms without velocity (or momentum) factors.
    pub fn position_part(&self) -> Self {
        self.filter(|m| m.velocity_degree() == 0)
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v as usize;
        let mut out = Self::zero(self.cap);
        for (m, c) in &self.terms {
            if m.0[i] > 0 {
                let mut e = m.0;
                e[i] -= 1;
                out.add_term(Monomial(e), c * m.0[i] as f64);
            }
        }
        out
    }

    pub fn eval(&self, x: [f64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c * m
                    .0
                    .iter()
                    .zip(x)
                    .map(|(&e, xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    pub fn mul_truncated(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(cap);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > cap {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() <= cap {
                    out.add_term(ma.times(mb), ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1.0, self.cap), |acc, _| acc.mul_truncated(self))
    }

    /// `Σ_k coeffs[k]·self^k` for a polynomial without constant term; the
    /// sum is exact to the cap as soon as `coeffs.len() > cap`.
    pub fn compose_series(&self, coeffs: &[f64]) -> Result<Self> {
        if self.coeff(Monomial::ONE) != 0.0 {
            return Err(Error::Contract(
                "series composition requires a vanishing constant term".into(),
            ));
        }
        let mut acc = Self::zero(self.cap);
        for &c in coeffs.iter().rev() {
            acc = acc.mul_truncated(self);
            acc.add_term(Monomial::ONE, c);
        }
        Ok(acc)
    }

    /// Replaces each variable by a polynomial.
    pub fn substitute(&self, with: &[TruncatedPoly; NVARS]) -> Self {
        let cap = with.iter().map(|p| p.cap).min().unwrap_or(self.cap);
        let mut powers: Vec<Vec<TruncatedPoly>> = with
            .iter()
            .map(|p| vec![Self::constant(1.0, cap), p.truncate(cap)])
            .collect();
        let mut out = Self::zero(cap);
        for (m, c) in &self.terms {
            let mut term = Self::constant(*c, cap);
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_truncated(&powers[i][1]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul_truncated(&powers[i][e]);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Text table: exponent tuple, 17-digit decimal, hexadecimal float.
    pub fn to_table(&self) -> String {
        let mut s = String::from("e_xi,e_eta,e_xidot,e_etadot,coefficient,hex\n");
        for (m, c) in &self.terms {
            let e = m.0;
            let _ = writeln!(s, "{},{},{},{},{},{}", e[0], e[1], e[2], e[3], fmt17(*c), hexfloat(*c));
        }
        s
    }
}

impl Add for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn add(self, rhs: &TruncatedPoly) -> TruncatedPoly {
        let mut out = self.truncate(self.cap.min(rhs.cap));
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Sub for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn sub(self, rhs: &TruncatedPoly) -> TruncatedPoly {
        let mut out = self.truncate(self.cap.min(rhs.cap));
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn mul(self, rhs: &TruncatedPoly) -> TruncatedPoly {
        self.mul_truncated(rhs)
    }
}

impl Neg for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn neg(self) -> TruncatedPoly {
        self.scale(-1.0)
    }
}

/// Binomial series coefficients of `(1 + u)^alpha` up to `u^order`.
pub fn binomial_series(alpha: f64, order: u32) -> Vec<f64> {
    let mut c = Vec::with_capacity(order as usize + 1);
    let mut term = 1.0;
    for k in 0..=order {
        c.push(term);
        term *= (alpha - k as f64) / (k as f64 + 1.0);
    }
    c
}

/// Series coefficients of `atan(w)` up to `w^order`.
pub fn atan_series(order: u32) -> Vec<f64> {
    (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                0.0
            } else if (k / 2) % 2 == 0 {
                1.0 / k as f64
            } else {
                -1.0 / k as f64
            }
        })
        .collect()
}
