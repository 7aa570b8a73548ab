//! Double d'Alembert series in two angles with half-integer action powers.
//!
//! A key `(j, m, p, q)` stands for `I1^(j/2) I2^(m/2)` times
//! `C cos(pφ1 + qφ2) + S sin(pφ1 + qφ2)`. Harmonics are stored with `p ≥ 0`,
//! and `q ≥ 0` when `p = 0`.

use crate::error::{Error, Result};
use crate::numfmt::fmt17;
use crate::poly::{TruncatedPoly, NVARS};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Divisors below this magnitude are treated as resonant.
pub const DIVISOR_FLOOR: f64 = 1e-8;

pub type Key = (u32, u32, i32, i32);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DAlembertSeries {
    terms: BTreeMap<Key, (f64, f64)>,
}

fn canonical(p: i32, q: i32, s: f64) -> (i32, i32, f64) {
    if p < 0 || (p == 0 && q < 0) {
        (-p, -q, -s)
    } else {
        (p, q, s)
    }
}

impl DAlembertSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Single term `c cos + s sin` of the given key.
    pub fn term(j: u32, m: u32, p: i32, q: i32, c: f64, s: f64) -> Self {
        let mut out = Self::zero();
        out.add_term(j, m, p, q, c, s);
        out
    }

    pub fn add_term(&mut self, j: u32, m: u32, p: i32, q: i32, c: f64, s: f64) {
        let (p, q, s) = canonical(p, q, s);
        let s = if p == 0 && q == 0 { 0.0 } else { s };
        let e = self.terms.entry((j, m, p, q)).or_insert((0.0, 0.0));
        e.0 += c;
        e.1 += s;
        if e.0 == 0.0 && e.1 == 0.0 {
            self.terms.remove(&(j, m, p, q));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &(f64, f64))> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(C, S)` of a harmonic, given in any sign convention.
    pub fn coeff(&self, j: u32, m: u32, p: i32, q: i32) -> (f64, f64) {
        let (pc, qc, sign) = canonical(p, q, 1.0);
        self.terms
            .get(&(j, m, pc, qc))
            .map(|&(c, s)| (c, sign * s))
            .unwrap_or((0.0, 0.0))
    }

    /// Re-inserts every term through the canonical constructor.
    pub fn normalize(&self) -> Self {
        let mut out = Self::zero();
        for (&(j, m, p, q), &(c, s)) in &self.terms {
            out.add_term(j, m, p, q, c, s);
        }
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = Self::zero();
        for (&(j, m, p, q), &(c, s)) in &self.terms {
            out.add_term(j, m, p, q, k * c, k * s);
        }
        out
    }

    pub fn degree_slice(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.0 + k.1 == d)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).max()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .fold(0.0, |a: f64, &(c, s)| a.max(c.abs()).max(s.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    /// Largest `|C|, |S|` among terms with action powers `(j, m)`.
    pub fn amplitude(&self, j: u32, m: u32) -> f64 {
        self.terms
            .iter()
            .filter(|(k, _)| k.0 == j && k.1 == m)
            .fold(0.0, |a: f64, (_, &(c, s))| a.max(c.abs()).max(s.abs()))
    }

    /// Product with terms above total degree `cap` dropped.
    pub fn mul_truncated(&self, other: &Self, cap: u32) -> Self {
        let mut out = Self::zero();
        for (&(j1, m1, p1, q1), &(c1, s1)) in &self.terms {
            for (&(j2, m2, p2, q2), &(c2, s2)) in &other.terms {
                let (j, m) = (j1 + j2, m1 + m2);
                if j + m > cap {
                    continue;
                }
                let (ps, qs) = (p1 + p2, q1 + q2);
                let (pd, qd) = (p1 - p2, q1 - q2);
                // cos a cos b, sin a sin b, sin a cos b, cos a sin b
                out.add_term(j, m, ps, qs, 0.5 * (c1 * c2 - s1 * s2), 0.5 * (s1 * c2 + c1 * s2));
                out.add_term(j, m, pd, qd, 0.5 * (c1 * c2 + s1 * s2), 0.5 * (s1 * c2 - c1 * s2));
            }
        }
        out
    }

    /// `D = ω1 ∂/∂φ1 − ω2 ∂/∂φ2`.
    pub fn apply_d(&self, w: &FrequencyPair) -> Self {
        let mut out = Self::zero();
        for (&(j, m, p, q), &(c, s)) in &self.terms {
            let nu = w.combination(p, q);
            out.add_term(j, m, p, q, s * nu, -c * nu);
        }
        out
    }

    /// Applies `(D² + ω1²)(D² + ω2²)`, i.e. multiplies each harmonic by its
    /// small divisor.
    pub fn apply_delta(&self, w: &FrequencyPair) -> Self {
        self.map_harmonics(|p, q| small_divisor(p, q, w))
    }

    fn map_harmonics(&self, f: impl Fn(i32, i32) -> f64) -> Self {
        let mut out = Self::zero();
        for (&(j, m, p, q), &(c, s)) in &self.terms {
            let k = f(p, q);
            out.add_term(j, m, p, q, k * c, k * s);
        }
        out
    }

    /// Checks `0 ≤ p ≤ j`, `p ≡ j`, `|q| ≤ m`, `q ≡ m` (mod 2) on every term.
    pub fn validate_parity(&self) -> Result<()> {
        for &(j, m, p, q) in self.terms.keys() {
            let (j, m) = (j as i32, m as i32);
            let ok = (0..=j).contains(&p)
                && (p - j) % 2 == 0
                && q.abs() <= m
                && (q - m) % 2 == 0;
            if !ok {
                return Err(Error::Contract(format!(
                    "term ({j}, {m}, {p}, {q}) violates the harmonic parity rules"
                )));
            }
        }
        Ok(())
    }

    /// Substitutes series for the four polynomial variables, keeping total
    /// degree at most `cap`.
    pub fn from_poly(poly: &TruncatedPoly, with: [&DAlembertSeries; NVARS], cap: u32) -> Self {
        let mut powers: Vec<Vec<DAlembertSeries>> = with
            .iter()
            .map(|s| vec![DAlembertSeries::term(0, 0, 0, 0, 1.0, 0.0), (*s).clone()])
            .collect();
        let mut out = Self::zero();
        for (mono, &c) in poly.terms() {
            let mut prod = DAlembertSeries::term(0, 0, 0, 0, c, 0.0);
            for (v, &e) in mono.0.iter().enumerate() {
                let e = e as usize;
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap().mul_truncated(&powers[v][1], cap);
                    powers[v].push(next);
                }
                if e > 0 {
                    prod = prod.mul_truncated(&powers[v][e], cap);
                }
            }
            out = &out + &prod;
        }
        out
    }

    /// One line per term, ordered by (degree, p, q), 17 significant digits.
    pub fn pretty(&self) -> String {
        let mut keys: Vec<&Key> = self.terms.keys().collect();
        keys.sort_by_key(|k| (k.0 + k.1, k.2, k.3, k.0));
        let mut s = String::new();
        for k in keys {
            let (c, sn) = self.terms[k];
            let _ = writeln!(
                s,
                "I1^({}/2) I2^({}/2) [{},{}]  cos {}  sin {}",
                k.0,
                k.1,
                k.2,
                k.3,
                fmt17(c),
                fmt17(sn)
            );
        }
        s
    }
}

impl std::ops::Add for &DAlembertSeries {
    type Output = DAlembertSeries;
    fn add(self, rhs: &DAlembertSeries) -> DAlembertSeries {
        let mut out = self.clone();
        for (&(j, m, p, q), &(c, s)) in &rhs.terms {
            out.add_term(j, m, p, q, c, s);
        }
        out
    }
}

impl std::ops::Sub for &DAlembertSeries {
    type Output = DAlembertSeries;
    fn sub(self, rhs: &DAlembertSeries) -> DAlembertSeries {
        self + &rhs.scale(-1.0)
    }
}

/// Basic frequencies, `ω1 > ω2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPair {
    pub omega1: f64,
    pub omega2: f64,
}

impl FrequencyPair {
    pub fn new(omega1: f64, omega2: f64) -> Result<Self> {
        if !(omega1.is_finite() && omega2.is_finite() && 0.0 < omega2 && omega2 < omega1) {
            return Err(Error::Contract(format!(
                "frequencies must satisfy 0 < w2 < w1, got ({omega1}, {omega2})"
            )));
        }
        Ok(Self { omega1, omega2 })
    }

    /// Unchecked pair for constructed test cases.
    pub fn synthetic(omega1: f64, omega2: f64) -> Self {
        Self { omega1, omega2 }
    }

    /// `pω1 − qω2`, the rate `D` assigns to harmonic `(p, q)`.
    pub fn combination(&self, p: i32, q: i32) -> f64 {
        p as f64 * self.omega1 - q as f64 * self.omega2
    }
}

/// Structural container for the frequency corrections `f2n`, `g2n`,
/// indexed by the action exponents `(n − m, m)`. Never populated here.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyCorrection {
    pub f: BTreeMap<(u32, u32), f64>,
    pub g: BTreeMap<(u32, u32), f64>,
}

/// `[ω1² − ν²][ω2² − ν²]` with `ν = pω1 − qω2`.
pub fn small_divisor(p: i32, q: i32, w: &FrequencyPair) -> f64 {
    let nu2 = w.combination(p, q).powi(2);
    (w.omega1 * w.omega1 - nu2) * (w.omega2 * w.omega2 - nu2)
}

fn is_critical(p: i32, q: i32) -> bool {
    matches!((p, q), (1, 0) | (0, 1) | (0, -1))
}

/// Solves `(D² + ω1²)(D² + ω2²) X = s` harmonic by harmonic.
pub fn invert_delta(s: &DAlembertSeries, w: &FrequencyPair) -> Result<DAlembertSeries> {
    let mut out = DAlembertSeries::zero();
    for (&(j, m, p, q), &(c, sn)) in s.terms() {
        if is_critical(p, q) {
            return Err(Error::CriticalTerm {
                p,
                q,
                amplitude: c.abs().max(sn.abs()),
            });
        }
        let d = small_divisor(p, q, w);
        if d.abs() < DIVISOR_FLOOR {
            return Err(Error::SmallDivisor {
                name: format!("Delta({p},{q})"),
                value: d,
            });
        }
        out.add_term(j, m, p, q, c / d, sn / d);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoserReport {
    pub min_value: f64,
    pub witness: (i32, i32),
    pub pass: bool,
    pub tolerance: f64,
}

/// Pairs `(k1, k2)` with `|k1| + |k2| ≤ 4`, one of each `±` pair, by order.
pub fn moser_pairs() -> Vec<(i32, i32)> {
    let mut v = Vec::new();
    for order in 1..=4 {
        for k1 in 0..=order {
            let k2 = order - k1;
            if k1 == 0 {
                v.push((0, k2));
            } else if k2 == 0 {
                v.push((k1, 0));
            } else {
                v.push((k1, -k2));
                v.push((k1, k2));
            }
        }
    }
    v
}

/// Minimum of `|k1ω1 + k2ω2|` over the low-order pairs; passes iff above `tol`.
pub fn moser_check(w: &FrequencyPair, tol: f64) -> MoserReport {
    let mut best = (f64::INFINITY, (0, 0));
    for (k1, k2) in moser_pairs() {
        let v = (k1 as f64 * w.omega1 + k2 as f64 * w.omega2).abs();
        if v < best.0 {
            best = (v, (k1, k2));
        }
    }
    MoserReport {
        min_value: best.0,
        witness: best.1,
        pass: best.0 > tol,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Monomial, Var};

    fn w01() -> FrequencyPair {
        FrequencyPair::new(0.963327, 0.268353).unwrap()
    }

    #[test]
    fn d_on_single_harmonics() {
        let w = w01();
        let s = DAlembertSeries::term(1, 0, 1, 0, 1.0, 0.0);
        assert_eq!(s.apply_d(&w).coeff(1, 0, 1, 0), (0.0, -0.963327));
        let s = DAlembertSeries::term(1, 1, 1, 1, 1.0, 0.0);
        let (c, sn) = s.apply_d(&w).coeff(1, 1, 1, 1);
        assert_eq!(c, 0.0);
        assert!((sn + 0.694974).abs() < 1e-12);
    }

    #[test]
    fn divisor_values() {
        let w = w01();
        assert_eq!(small_divisor(1, 0, &w), 0.0);
        assert!(small_divisor(0, 1, &w).abs() < 1e-15);
        let d00 = small_divisor(0, 0, &w);
        assert!((d00 - (0.963327f64 * 0.268353).powi(2)).abs() < 1e-15);
        assert!((small_divisor(1, 1, &w) + 0.1829).abs() < 5e-4);
    }

    #[test]
    fn critical_and_small_divisors_are_typed() {
        let w = w01();
        let s = DAlembertSeries::term(1, 0, 1, 0, 2.0, 0.0);
        assert!(matches!(invert_delta(&s, &w), Err(Error::CriticalTerm { p: 1, q: 0, .. })));
        let s = DAlembertSeries::term(0, 1, 0, -1, 0.0, 1.0);
        assert!(matches!(invert_delta(&s, &w), Err(Error::CriticalTerm { p: 0, q: 1, .. })));
        let res = FrequencyPair::synthetic(0.8, 0.4);
        let s = DAlembertSeries::term(1, 1, 1, 1, 1.0, 0.0);
        assert!(matches!(invert_delta(&s, &res), Err(Error::SmallDivisor { .. })));
    }

    #[test]
    fn single_harmonic_inverse() {
        let w = w01();
        let s = DAlembertSeries::term(2, 0, 2, 0, 3.0, 0.0);
        let x = invert_delta(&s, &w).unwrap();
        assert_eq!(x.coeff(2, 0, 2, 0).0, 3.0 / small_divisor(2, 0, &w));
    }

    #[test]
    fn canonical_keys() {
        let mut s = DAlembertSeries::zero();
        s.add_term(1, 1, -1, 1, 1.0, 2.0);
        assert_eq!(s.coeff(1, 1, 1, -1), (1.0, -2.0));
        assert_eq!(s.coeff(1, 1, -1, 1), (1.0, 2.0));
        s.add_term(0, 2, 0, 0, 1.0, 5.0);
        assert_eq!(s.coeff(0, 2, 0, 0), (1.0, 0.0));
        assert_eq!(s.normalize(), s);
    }

    #[test]
    fn product_to_sum() {
        let c1 = DAlembertSeries::term(1, 0, 1, 0, 1.0, 0.0);
        let sq = c1.mul_truncated(&c1, 4);
        assert_eq!(sq.coeff(2, 0, 0, 0), (0.5, 0.0));
        assert_eq!(sq.coeff(2, 0, 2, 0), (0.5, 0.0));
        let s2 = DAlembertSeries::term(0, 1, 0, 1, 0.0, 1.0);
        let prod = c1.mul_truncated(&s2, 4);
        // cos φ1 sin φ2 = ½[sin(φ1+φ2) − sin(φ1−φ2)]
        assert_eq!(prod.coeff(1, 1, 1, 1), (0.0, 0.5));
        assert_eq!(prod.coeff(1, 1, 1, -1), (0.0, -0.5));
        assert!(prod.validate_parity().is_ok());
        assert!(c1.mul_truncated(&s2, 1).is_empty());
    }

    #[test]
    fn polynomial_substitution() {
        let b = DAlembertSeries::term(1, 0, 1, 0, 2.0, 0.0);
        let z = DAlembertSeries::zero();
        let p = TruncatedPoly::from_terms([(Monomial([3, 0, 0, 0]), 1.5)], 3);
        let got = DAlembertSeries::from_poly(&p, [&b, &z, &z, &z], 3);
        // 1.5·8cos³ = 12(3cos + cos3)/4
        assert_eq!(got.coeff(3, 0, 1, 0), (9.0, 0.0));
        assert_eq!(got.coeff(3, 0, 3, 0), (3.0, 0.0));
        let lin = TruncatedPoly::var(Var::Eta, 2);
        assert!(DAlembertSeries::from_poly(&lin, [&b, &z, &z, &z], 3).is_empty());
    }

    #[test]
    fn parity_violation_detected() {
        let s = DAlembertSeries::term(2, 0, 1, 0, 1.0, 0.0);
        assert!(s.validate_parity().is_err());
    }

    #[test]
    fn moser_examples() {
        let r = moser_check(&w01(), 1e-6);
        assert!(r.pass);
        assert_eq!(r.witness, (1, -3));
        assert!((r.min_value - 0.158268).abs() < 1e-6);
        let r = moser_check(&FrequencyPair::synthetic(0.8, 0.4), 1e-6);
        assert_eq!((r.pass, r.witness), (false, (1, -2)));
        let r = moser_check(&FrequencyPair::synthetic(0.9, 0.3), 1e-6);
        assert_eq!((r.pass, r.witness), (false, (1, -3)));
        assert_eq!(moser_pairs().len(), 20);
    }

    #[test]
    fn frequency_pair_ordering() {
        assert!(FrequencyPair::new(0.3, 0.9).is_err());
        assert!(FrequencyPair::new(0.5, 0.5).is_err());
        assert!(FrequencyPair::new(1.0, 0.0).is_err());
    }

    #[test]
    fn pretty_orders_by_degree() {
        let mut s = DAlembertSeries::term(2, 0, 2, 0, 1.0, 0.0);
        s.add_term(1, 0, 1, 0, 0.25, 0.0);
        let text = s.pretty();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("I1^(1/2)") && first.contains("cos 0.25"));
    }
}
