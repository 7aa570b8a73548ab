//! Closed-form coefficients `r1`–`r10`, `s1`–`s10` of the second-order
//! components.

use super::jmatrix::JEntries;
use super::tables::FGTable;
use crate::dalembert::{DAlembertSeries, FrequencyPair, DIVISOR_FLOOR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RSTable {
    pub r: [f64; 10],
    pub s: [f64; 10],
}

/// Harmonic key `(j, m, p, q)` and cosine/sine slot of each coefficient.
pub const RS_KEYS: [((u32, u32, i32, i32), bool); 10] = [
    ((2, 0, 0, 0), true),
    ((0, 2, 0, 0), true),
    ((2, 0, 2, 0), true),
    ((0, 2, 0, 2), true),
    ((1, 1, 1, -1), true),
    ((1, 1, 1, 1), true),
    ((2, 0, 2, 0), false),
    ((0, 2, 0, 2), false),
    ((1, 1, 1, -1), false),
    ((1, 1, 1, 1), false),
];

fn divisor(name: &str, v: f64) -> Result<f64> {
    if v.abs() < DIVISOR_FLOOR {
        return Err(Error::SmallDivisor {
            name: name.into(),
            value: v,
        });
    }
    Ok(v)
}

/// `r1`–`r10` for one table family (`F` for `r`, `G` for `s`).
pub fn r_coefficients(j: &JEntries, w: &FrequencyPair, t: &FGTable) -> Result<[f64; 10]> {
    let (o1, o2) = (w.omega1, w.omega2);
    divisor("w1", o1)?;
    divisor("w2", o2)?;
    let d12 = divisor("w1^2 w2^2", o1 * o1 * o2 * o2)?;
    let d3 = divisor("4w1^2-w2^2", 4.0 * o1 * o1 - o2 * o2)?;
    let d4 = divisor("4w2^2-w1^2", 4.0 * o2 * o2 - o1 * o1)?;
    let p5a = divisor("2w1+w2", 2.0 * o1 + o2)?;
    let p5b = divisor("4w1+2w2", 4.0 * o1 + 2.0 * o2)?;
    let p6a = divisor("2w1-w2", 2.0 * o1 - o2)?;
    let p6b = divisor("4w1-2w2", 4.0 * o1 - 2.0 * o2)?;
    let p9b = divisor("w1+2w2", o1 + 2.0 * o2)?;
    let p10b = divisor("2w2-w1", 2.0 * o2 - o1)?;

    let JEntries {
        j13,
        j14,
        j21,
        j22,
        j23,
        j24,
    } = *j;
    let [f1, f2, f3, f4] = t.f;
    let [f1p, f2p, f3p, f4p] = t.fp;
    let [f1pp, f2pp, f3pp, f4pp] = t.fpp;
    let ra = (o1 / o2).sqrt();
    let rb = (o2 / o1).sqrt();
    let sp = (o1 * o2).sqrt();
    let sum = o1 + o2;
    let dif = o1 - o2;

    // recurring combinations
    let cross = j13 * j22 * ra - j14 * j21 * rb;
    let mixed = j13 * j24 + j14 * j23;
    let q1 = j21 * j21 / o1 - j23 * j23 * o1;
    let q2 = j22 * j22 / o2 - j24 * j24 * o2;

    let r1 = (j13 * j13 * o1 * f4 + j13 * j23 * o1 * f4p + (j21 * j21 / o1 + j23 * j23 * o1) * f4pp) / d12;
    let r2 = (j14 * j14 * o2 * f4 + j14 * j24 * o2 * f4p + (j22 * j22 / o2 + j24 * j24 * o2) * f4pp) / d12;

    let r3 = -1.0 / (3.0 * o1 * o1 * d3)
        * (8.0 * o1.powi(3) * j21 * (j13 * f1p + 2.0 * j23 * f1pp)
            + 4.0 * o1 * o1 * ((j13 * f2 + j23 * f2pp) * j13 * o1 - q1 * f1pp)
            - 2.0 * o1 * j21 * (j13 * f3p + 2.0 * j23 * f3pp)
            - o1 * j13 * (j13 * f4 + j23 * f4pp) * o1
            + q1 * f1pp);

    let r4 = 1.0 / (3.0 * o2 * o2 * d4)
        * (8.0 * o2.powi(3) * j22 * (j14 * f1p + 2.0 * j24 * f1pp)
            - 4.0 * o2 * o2 * ((j14 * f2 + j24 * f2pp) * j14 * o2 - q2 * f2pp)
            - 2.0 * o2 * j22 * (j14 * f3p + 2.0 * j24 * f3pp)
            - o2 * j14 * (j14 * f4 + j24 * f4pp) * o2
            - q2 * f4pp);

    let r5 = 1.0 / (o1 * o2 * p5a * p5b)
        * (sum.powi(3) * (cross * f1p - 2.0 * (j21 * j24 * rb - j22 * j23 * ra) * f1pp)
            - sum.powi(2)
                * (2.0 * (j13 * j14 * f2 + mixed * f2p) * sp + (j21 * j22 / sp + j23 * j24 * sp) * f2pp)
            - sum * (cross * f3p - 2.0 * (j21 * j24 * rb - j22 * j23 * ra) * f3pp)
            + (2.0 * (j13 * j14 * f4 + mixed * f4p) * sp
                + 2.0 * (j21 * j22 / sp + j23 * j24 * sp) * f4pp));

    let r6 = -1.0 / (o1 * o2 * p6a * p6b)
        * (dif.powi(3) * (cross * f1p + 2.0 * (j21 * j24 * rb + j22 * j23 * ra) * f1pp)
            + dif.powi(2)
                * (2.0 * (j13 * j14 * f2 + mixed * f2p) * sp
                    - 2.0 * (j21 * j22 / sp - j23 * j24 * sp) * f2pp)
            - dif * (cross * f3p + 2.0 * (j21 * j22 * rb + j22 * j23 * ra) * f3pp)
            - (2.0 * (j13 * j14 * f4 + mixed * f4p) * sp
                - 2.0 * (j21 * j22 / sp - j23 * j24 * sp) * f4pp));

    let r7 = 1.0 / (3.0 * o1 * o1 * d3)
        * (8.0 * o1.powi(3) * (j13 * (j13 * f1 + j23 * f1p) * o1 - q1 * f1pp)
            - 2.0 * o1 * (o1 * j13 * (j13 * f3 + j23 * f3p) - q1 * f3pp)
            - 4.0 * o1 * o1 * j21 * (j13 * f2 + j23 * f2pp) * o1
            + j21 * (j13 * f4p + 2.0 * j23 * f4pp));

    let r8 = -1.0 / (3.0 * o2 * o2 * d4)
        * (8.0 * o2.powi(3) * (j14 * (j14 * f1 + j24 * f1p) * o2 - q2 * f1pp)
            + 4.0 * o2 * o2 * j22 * (j14 * f2 + 2.0 * j24 * f2pp) * o2
            - 2.0 * o2 * (o2 * j14 * (j14 * f3 + j24 * f3p) - q2 * f3pp)
            - j22 * (j14 * f4p + 2.0 * j24 * f4pp));

    let r9 = 1.0 / (o1 * o2 * p5a * p9b)
        * (sum.powi(3)
            * ((2.0 * j13 * j14 * f1 + mixed * f1p) * sp + 2.0 * (j21 * j22 / sp + j23 * j24 * sp) * f1pp)
            - sum.powi(2) * (cross * f2p - 2.0 * (j21 * j24 * rb - j22 * j23 * ra) * f2pp)
            - sum
                * (2.0 * (j13 * j14 * f3 + mixed * f3p) * sp
                    + 2.0 * (j21 * j22 / sp + j23 * j24 * sp) * f3pp)
            - (cross * f4p - 2.0 * (j21 * j24 * rb - j22 * j23 * ra) * f4pp));

    let r10 = 1.0 / (o1 * o2 * p6a * p10b)
        * (dif.powi(3)
            * ((2.0 * j13 * j14 * f1 + mixed * f1p) * sp - 2.0 * (j21 * j22 / sp - j23 * j24 * sp) * f1pp)
            - dif.powi(2) * (cross * f2p + 2.0 * (j21 * j24 * rb + j22 * j23 * ra) * f2pp)
            - dif
                * (2.0 * (j13 * j14 * f3 + mixed * f3p) * sp
                    - 2.0 * (j21 * j22 / sp - j23 * j24 * sp) * f3pp)
            + (cross * f4p + 2.0 * (j21 * j24 * rb - j22 * j23 * ra) * f4pp));

    Ok([r1, r2, r3, r4, r5, r6, r7, r8, r9, r10])
}

/// `r` from the `F` families and `s` from the `G` families.
pub fn rs_tables(j: &JEntries, w: &FrequencyPair, t: &FGTable) -> Result<RSTable> {
    Ok(RSTable {
        r: r_coefficients(j, w, t)?,
        s: r_coefficients(j, w, &t.g_as_f())?,
    })
}

fn assemble(c: &[f64; 10]) -> DAlembertSeries {
    let mut out = DAlembertSeries::zero();
    for (v, &((j, m, p, q), is_cos)) in c.iter().zip(RS_KEYS.iter()) {
        if is_cos {
            out.add_term(j, m, p, q, *v, 0.0);
        } else {
            out.add_term(j, m, p, q, 0.0, *v);
        }
    }
    out
}

/// `B2^{1,0} = Σ r_i (harmonic)_i` and `B2^{0,1} = −Σ s_i (harmonic)_i`.
pub fn second_order_closed_form(rs: &RSTable) -> (DAlembertSeries, DAlembertSeries) {
    (assemble(&rs.r), assemble(&rs.s).scale(-1.0))
}

/// Coefficients a series assigns to the ten printed harmonics.
pub fn coefficients_of(series: &DAlembertSeries) -> [f64; 10] {
    let mut out = [0.0; 10];
    for (o, &((j, m, p, q), is_cos)) in out.iter_mut().zip(RS_KEYS.iter()) {
        let (c, s) = series.coeff(j, m, p, q);
        *o = if is_cos { c } else { s };
    }
    out
}
