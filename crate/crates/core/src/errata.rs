//! Audit of the printed closed forms against their oracles.
//!
//! Every closed-form quantity is compared with its oracle at zero
//! perturbation and with each perturbation alone at `h` and `h/2`. A
//! discrepancy present at zero perturbation, or one that halves with `h`,
//! marks the formula as wrong at first order.

use crate::convergence::{classify, OrderClass, Perturbation, DEFAULT_STEP};
use crate::equilibria::{epsilon_form, offset_ab_printed, triangular_series, Branch};
use crate::error::Result;
use crate::normalform::first_order::{first_order_components, B1Reading};
use crate::normalform::jmatrix::{j_closed_form, JEntries};
use crate::normalform::pipeline::{closed_b2, run_pipeline, PipelineOptions, Stage};
use crate::normalform::rs::coefficients_of;
use crate::params::ModelParams;
use crate::report::CsvBlock;
use crate::tcoeffs::{t_coefficients_closed_form, t_from_oracle, T5Reading};
use std::collections::BTreeMap;

/// Locations whose printed form is wrong at first order or below.
pub const KNOWN_ERRATA: &[&str] = &[
    "B1.J23", "B1.J24", "J13", "J14", "J21", "J22", "J23", "J24", "T1", "T2", "T3", "T4", "T5",
    "epsilon_form.x", "epsilon_form.y", "offset.a", "offset.b", "r1", "r10", "r2", "r3", "r4", "r5",
    "r6", "r7", "r8", "r9", "s1", "s10", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9",
];

/// Discrepancy of every audited location at one parameter point.
pub fn snapshot(p: &ModelParams) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    let opts = PipelineOptions {
        through: Stage::B2,
        ..Default::default()
    };
    let run = run_pipeline(p, &opts)?;
    let num = run.point;
    let mut put = |k: &str, v: f64| {
        out.insert(k.to_string(), v);
    };

    let series = triangular_series(p, Branch::L4)?;
    put("series.x", (series.x - num.x).abs());
    put("series.y", (series.y - num.y).abs());
    let eps = epsilon_form(p, Branch::L4)?;
    put("epsilon_form.x", (eps.x - num.x).abs());
    put("epsilon_form.y", (eps.y - num.y).abs());
    let off = offset_ab_printed(p, Branch::L4);
    put("offset.a", (off.a - run.shift.a).abs());
    put("offset.b", (off.b - run.shift.b).abs());

    let l3 = run.l3.as_ref().expect("taylor stage ran");
    let oracle_t = t_from_oracle(l3);
    let closed = t_coefficients_closed_form(p, &run.shift, T5Reading::AsPrinted);
    for (i, (o, c)) in oracle_t.iter().zip([closed.t1, closed.t2, closed.t3, closed.t4]).enumerate() {
        put(&format!("T{}", i + 1), (c - o).abs());
    }
    let vel = l3.filter(|m| m.velocity_degree() > 0);
    put("T5", vel.max_abs_diff(&closed.t5));

    let nm = run.modes.as_ref().expect("b1 stage ran");
    let w = nm.freq;
    let numeric = nm.entries();
    let printed = j_closed_form(p, &w)?;
    for ((name, a), b) in JEntries::NAMES.iter().zip(numeric.as_array()).zip(printed.as_array()) {
        put(name, (a - b).abs());
    }
    let (_, by_p) = first_order_components(&numeric, &w, B1Reading::Printed);
    let (_, by_c) = first_order_components(&numeric, &w, B1Reading::Corrected);
    for (name, j, m, pp, q) in [("B1.J23", 1, 0, 1, 0), ("B1.J24", 0, 1, 0, 1)] {
        let (a, b) = (by_p.coeff(j, m, pp, q), by_c.coeff(j, m, pp, q));
        put(name, (a.0 - b.0).abs().max((a.1 - b.1).abs()));
    }
    put("gyro", (2.0 * (1.0 + 0.75 * p.a2()) - 2.0 * p.n()).abs());

    let sol = run.b2.as_ref().expect("b2 stage ran");
    let (cx, cy) = closed_b2(p, nm, &w)?;
    let rc = coefficients_of(&cx);
    let ro = coefficients_of(&sol.b2x);
    let sc = coefficients_of(&cy);
    let so = coefficients_of(&sol.b2y);
    for i in 0..10 {
        put(&format!("r{}", i + 1), (rc[i] - ro[i]).abs());
        put(&format!("s{}", i + 1), (sc[i] - so[i]).abs());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub location: String,
    pub d_zero: f64,
    /// `(d_h, d_half, class)` per perturbation, in [`Perturbation::ALL`] order.
    pub rows: Vec<(Perturbation, f64, f64, OrderClass)>,
    pub class: OrderClass,
}

impl AuditEntry {
    pub fn is_erratum(&self) -> bool {
        self.class.is_erratum()
    }
}

fn combine(classes: &[OrderClass]) -> OrderClass {
    let rank = |c: OrderClass| match c {
        OrderClass::ZerothOrder => 0,
        OrderClass::FirstOrder => 1,
        OrderClass::Inconclusive => 2,
        OrderClass::SecondOrder => 3,
        OrderClass::HigherOrder => 4,
        OrderClass::Exact => 5,
    };
    classes
        .iter()
        .copied()
        .min_by_key(|c| rank(*c))
        .unwrap_or(OrderClass::Exact)
}

/// Full audit at mass ratio `mu` with step `h`.
pub fn audit(mu: f64, h: f64) -> Result<Vec<AuditEntry>> {
    let zero = snapshot(&ModelParams::classical(mu)?)?;
    let mut runs = Vec::new();
    for pert in Perturbation::ALL {
        let a = snapshot(&pert.params(mu, h)?)?;
        let b = snapshot(&pert.params(mu, h / 2.0)?)?;
        runs.push((pert, a, b));
    }
    let mut out = Vec::new();
    for (loc, &d0) in &zero {
        let rows: Vec<_> = runs
            .iter()
            .map(|(pert, a, b)| {
                let (dh, dh2) = (a[loc], b[loc]);
                (*pert, dh, dh2, classify(d0, dh, dh2))
            })
            .collect();
        let class = combine(&rows.iter().map(|r| r.3).collect::<Vec<_>>());
        out.push(AuditEntry {
            location: loc.clone(),
            d_zero: d0,
            rows,
            class,
        });
    }
    Ok(out)
}

/// Audit at the default point `μ = 0.01`, `h = 1e−3`.
pub fn default_audit() -> Result<Vec<AuditEntry>> {
    audit(0.01, DEFAULT_STEP)
}

/// Locations found wrong at first order or below.
pub fn errata(entries: &[AuditEntry]) -> Vec<String> {
    entries
        .iter()
        .filter(|e| e.is_erratum())
        .map(|e| e.location.clone())
        .collect()
}

/// Audit as a CSV block, one row per location and perturbation.
pub fn audit_table(entries: &[AuditEntry]) -> CsvBlock {
    let mut t = CsvBlock::new(
        "erratum audit",
        &["location", "perturbation", "d_zero", "d_h", "d_half", "ratio", "class", "overall"],
    );
    for e in entries {
        for &(pert, dh, dh2, class) in &e.rows {
            t.push(vec![
                e.location.clone(),
                pert.name().into(),
                crate::numfmt::fmt17(e.d_zero),
                crate::numfmt::fmt17(dh),
                crate::numfmt::fmt17(dh2),
                crate::numfmt::fmt17(dh / dh2),
                class.label().into(),
                e.class.label().into(),
            ]);
        }
    }
    t
}
