//! The staged normalization run: equilibrium, expansion, first and second
//! order components, and the cubic energy check.

use super::first_order::{first_order_components, linear_residual, B1Reading};
use super::freq::frequencies;
use super::h3::{h3_normal_coefficients, H3NormalCoefficients};
use super::jmatrix::{j_closed_form, j_numeric, JEntries, LinearModel, NormalModeData};
use super::rs::{coefficients_of, rs_tables, second_order_closed_form};
use super::second_order::{forcing_x2y2, residual_with_gyro, solve_second_order_oracle, SecondOrderSolution};
use super::tables::fg_tables;
use crate::convergence::{halving, Perturbation, DEFAULT_STEP};
use crate::dalembert::{moser_check, DAlembertSeries, FrequencyPair};
use crate::equilibria::{solve_triangular_numeric, triangular_series, Branch, EquilibriumPoint, OriginShift};
use crate::error::{Error, Result};
use crate::numfmt::fmt17;
use crate::params::ModelParams;
use crate::poly::TruncatedPoly;
use crate::report::{Check, CsvBlock, StageReport, VerificationReport};
use crate::taylor::{energy_function, extract_efg, linearized_el, taylor_lagrangian, QuadraticCoefficients};
use crate::tcoeffs::{closed_form_l3, compare_h3, t_coefficients_closed_form, L3Source, T5Reading};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Equilibria,
    Taylor,
    B1,
    B2,
    H3,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Equilibria, Stage::Taylor, Stage::B1, Stage::B2, Stage::H3];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Equilibria => "equilibria",
            Stage::Taylor => "taylor",
            Stage::B1 => "b1",
            Stage::B2 => "b2",
            Stage::H3 => "h3",
        }
    }
}

impl std::str::FromStr for Stage {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown stage {s:?}"))
    }
}

/// Where `E, F, G` of the second-order operator come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EfgReading {
    /// From the full quadratic Lagrangian, drag terms included.
    #[default]
    Full,
    /// From the quadratic Lagrangian with `W1 = 0`.
    DragFree,
}

/// Gate tolerances per stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub equilibria: f64,
    pub taylor: f64,
    pub b1: f64,
    /// Relative to the largest forcing coefficient.
    pub b2: f64,
    /// Relative to the largest intermediate coefficient.
    pub h3: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equilibria: 1e-12,
            taylor: 1e-10,
            b1: 1e-10,
            b2: 1e-9,
            h3: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn get(&self, s: Stage) -> f64 {
        match s {
            Stage::Equilibria => self.equilibria,
            Stage::Taylor => self.taylor,
            Stage::B1 => self.b1,
            Stage::B2 => self.b2,
            Stage::H3 => self.h3,
        }
    }

    pub fn set(&mut self, s: Stage, v: f64) {
        match s {
            Stage::Equilibria => self.equilibria = v,
            Stage::Taylor => self.taylor = v,
            Stage::B1 => self.b1 = v,
            Stage::B2 => self.b2 = v,
            Stage::H3 => self.h3 = v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub branch: Branch,
    /// Last stage to run; earlier stages always run.
    pub through: Stage,
    pub l3_source: L3Source,
    pub efg_reading: EfgReading,
    pub b1_reading: B1Reading,
    pub t5_reading: T5Reading,
    pub linear_model: LinearModel,
    pub moser_tol: f64,
    pub tol: Tolerances,
    /// Attach the perturbation-halving table to the `b2` stage.
    pub halving_table: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            branch: Branch::L4,
            through: Stage::H3,
            l3_source: L3Source::Oracle,
            efg_reading: EfgReading::Full,
            b1_reading: B1Reading::Corrected,
            t5_reading: T5Reading::Squared,
            linear_model: LinearModel::Conservative,
            moser_tol: 1e-6,
            tol: Tolerances::default(),
            halving_table: false,
        }
    }
}

/// Everything a run produced; later fields are `None` past `through`.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub params: ModelParams,
    pub point: EquilibriumPoint,
    pub shift: OriginShift,
    pub lagrangian: Option<TruncatedPoly>,
    pub l3: Option<TruncatedPoly>,
    pub efg: Option<QuadraticCoefficients>,
    pub modes: Option<NormalModeData>,
    pub b1: Option<(DAlembertSeries, DAlembertSeries)>,
    pub forcing: Option<(DAlembertSeries, DAlembertSeries)>,
    pub b2: Option<SecondOrderSolution>,
    pub b2_closed: Option<(DAlembertSeries, DAlembertSeries)>,
    pub h3: Option<H3NormalCoefficients>,
    pub h3_ablation: Option<H3NormalCoefficients>,
    pub report: VerificationReport,
}

fn header(p: &ModelParams, o: &PipelineOptions) -> Vec<(String, String)> {
    let mut h = vec![
        ("mu".to_string(), fmt17(p.mu())),
        ("q1".to_string(), fmt17(p.q1())),
        ("A2".to_string(), fmt17(p.a2())),
        ("W1".to_string(), fmt17(p.w1())),
        ("branch".to_string(), o.branch.to_string()),
        ("through".to_string(), o.through.name().to_string()),
    ];
    if let Some(cd) = p.cd() {
        h.push(("cd".to_string(), fmt17(cd)));
    }
    h
}

/// Runs the stages up to `opts.through`. Typed errors abort the run;
/// failed gates are recorded in the report.
pub fn run_pipeline(p: &ModelParams, opts: &PipelineOptions) -> Result<PipelineRun> {
    let tol = opts.tol;
    let mut report = VerificationReport {
        header: header(p, opts),
        stages: Vec::new(),
    };
    for w in p.warnings() {
        log::warn!("{w}");
    }

    // equilibria
    let point = solve_triangular_numeric(p, opts.branch)?;
    let shift = OriginShift::from_point(&point, p);
    let mut st = StageReport::new("equilibria");
    st.push(Check::gate("residual", point.residual, tol.equilibria));
    if let Ok(series) = triangular_series(p, opts.branch) {
        st.push(Check::info(
            "series_distance",
            series.distance(&point),
            10.0 * p.perturbation_size().powi(2) + tol.equilibria,
        ));
    }
    st.notes.push(format!("x = {}, y = {}", fmt17(point.x), fmt17(point.y)));
    report.stages.push(st);

    let mut run = PipelineRun {
        params: *p,
        point,
        shift,
        lagrangian: None,
        l3: None,
        efg: None,
        modes: None,
        b1: None,
        forcing: None,
        b2: None,
        b2_closed: None,
        h3: None,
        h3_ablation: None,
        report: VerificationReport::default(),
    };
    if opts.through == Stage::Equilibria {
        run.report = report;
        return Ok(run);
    }

    // taylor
    let lag = taylor_lagrangian(p, &shift, 3)?;
    let l2 = lag.slice(2);
    let efg = extract_efg(&l2, p)?;
    let closed_t = t_coefficients_closed_form(p, &shift, opts.t5_reading);
    let l3 = match opts.l3_source {
        L3Source::Oracle => lag.slice(3),
        L3Source::ClosedForm => closed_form_l3(&closed_t),
    };
    let mut st = compare_h3(&lag, &closed_t, p);
    st.checks.insert(0, Check::gate("gradient", lag.slice(1).position_part().max_abs(), tol.taylor));
    st.checks.insert(
        1,
        Check::gate("efg_identity", linearized_el(&l2).max_abs_diff(&efg.operator(p.n())), tol.taylor),
    );
    st.notes.push(format!(
        "E = {}, F = {}, G = {}",
        fmt17(efg.e),
        fmt17(efg.f),
        fmt17(efg.g)
    ));
    report.stages.push(st);
    run.lagrangian = Some(&l2 + &l3);
    run.l3 = Some(l3.clone());
    run.efg = Some(efg);
    if opts.through == Stage::Taylor {
        run.report = report;
        return Ok(run);
    }

    // b1
    let w = frequencies(p, &efg)?;
    let moser = moser_check(&w, opts.moser_tol);
    if !moser.pass {
        return Err(Error::Resonance {
            k1: moser.witness.0,
            k2: moser.witness.1,
            value: moser.min_value,
        });
    }
    let nm = j_numeric(p, &shift, &l2, &efg, &w, opts.linear_model)?;
    let (b1x, b1y) = first_order_components(&nm.entries(), &w, opts.b1_reading);
    let n = p.n();
    let mut st = StageReport::new("b1");
    st.notes.push(format!("omega1 = {}, omega2 = {}", fmt17(w.omega1), fmt17(w.omega2)));
    st.push(Check::info("moser_min", moser.min_value, opts.moser_tol));
    let drag_free = p.w1() == 0.0 || opts.linear_model == LinearModel::Conservative;
    let defect = if drag_free {
        Check::gate("symplectic_defect", nm.symplectic_defect, tol.b1)
    } else {
        Check::info("symplectic_defect", nm.symplectic_defect, tol.b1)
    };
    st.push(defect);
    st.push(Check::gate("h2_residual", nm.h2_residual, tol.b1.max(1e-10)));
    st.push(Check::gate("linear_residual", linear_residual(&b1x, &b1y, &efg, n, &w), tol.b1));
    let other = match opts.b1_reading {
        B1Reading::Corrected => B1Reading::Printed,
        B1Reading::Printed => B1Reading::Corrected,
    };
    let (ox, oy) = first_order_components(&nm.entries(), &w, other);
    st.push(Check::info(
        format!("linear_residual_{}", if other == B1Reading::Printed { "printed" } else { "corrected" }),
        linear_residual(&ox, &oy, &efg, n, &w),
        tol.b1,
    ));
    if let Ok(closed) = j_closed_form(p, &w) {
        let mut t = CsvBlock::new("J entries", &["entry", "numeric", "closed_form", "difference"]);
        let num = nm.entries().as_array();
        for ((name, a), b) in JEntries::NAMES.iter().zip(num).zip(closed.as_array()) {
            t.push(vec![name.to_string(), fmt17(a), fmt17(b), fmt17(b - a)]);
        }
        let d = num
            .iter()
            .zip(closed.as_array())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        st.push(Check::info("j_closed_vs_numeric", d, 10.0 * p.perturbation_size().powi(2) + 1e-12));
        st.tables.push(t);
    }
    report.stages.push(st);
    run.modes = Some(nm.clone());
    run.b1 = Some((b1x.clone(), b1y.clone()));
    if opts.through == Stage::B1 {
        run.report = report;
        return Ok(run);
    }

    // b2
    let (x2, y2) = forcing_x2y2(&l3, &b1x, &b1y, &w);
    let op_efg = match opts.efg_reading {
        EfgReading::Full => efg,
        EfgReading::DragFree => drag_free_efg(p, &shift)?,
    };
    let sol = solve_second_order_oracle(&op_efg, n, &w, &x2, &y2)?;
    let mut st = StageReport::new("b2");
    st.push(Check::gate(
        "residual",
        sol.residual / sol.scale.max(1.0),
        tol.b2,
    ));
    st.push(Check::info(
        "parity_violations",
        [&x2, &y2, &sol.b2x, &sol.b2y]
            .iter()
            .filter(|s| s.validate_parity().is_err())
            .count() as f64,
        0.5,
    ));
    if opts.efg_reading == EfgReading::DragFree {
        let full = residual_with_gyro(&sol.b2x, &sol.b2y, &x2, &y2, &efg, n, 2.0 * n, &w);
        st.push(Check::info("residual_full_efg", full, tol.b2));
    }
    let printed_gyro = 2.0 * (1.0 + 0.75 * p.a2());
    st.push(Check::info(
        "residual_printed_gyro",
        residual_with_gyro(&sol.b2x, &sol.b2y, &x2, &y2, &efg, n, printed_gyro, &w),
        tol.b2,
    ));
    let closed = closed_b2(p, &nm, &w).ok();
    if let Some((cx, cy)) = &closed {
        st.push(Check::info(
            "closed_vs_oracle",
            b2_discrepancy((cx, cy), (&sol.b2x, &sol.b2y)),
            10.0 * p.perturbation_size().powi(2) + 1e-12,
        ));
        let mut t = CsvBlock::new("r and s", &["coefficient", "closed_form", "oracle"]);
        let (rc, ro) = (coefficients_of(cx), coefficients_of(&sol.b2x));
        let (sc, so) = (coefficients_of(&cy.scale(-1.0)), coefficients_of(&sol.b2y.scale(-1.0)));
        for i in 0..10 {
            t.push(vec![format!("r{}", i + 1), fmt17(rc[i]), fmt17(ro[i])]);
        }
        for i in 0..10 {
            t.push(vec![format!("s{}", i + 1), fmt17(sc[i]), fmt17(so[i])]);
        }
        st.tables.push(t);
    }
    if opts.halving_table {
        let mut t = CsvBlock::new(
            "halving",
            &["perturbation", "h", "d_zero", "d_h", "d_half", "ratio", "class"],
        );
        let inner = PipelineOptions {
            through: Stage::B2,
            halving_table: false,
            ..*opts
        };
        for pert in Perturbation::ALL {
            let row = halving(p.mu(), pert, DEFAULT_STEP, |q| {
                let r = run_pipeline(q, &inner)?;
                let sol = r.b2.as_ref().expect("b2 stage ran");
                let (cx, cy) = r.b2_closed.as_ref().ok_or_else(|| {
                    Error::Contract("closed-form second order unavailable".into())
                })?;
                Ok(b2_discrepancy((cx, cy), (&sol.b2x, &sol.b2y)))
            });
            match row {
                Ok(r) => t.push(vec![
                    pert.name().into(),
                    fmt17(r.h),
                    fmt17(r.d_zero),
                    fmt17(r.d_h),
                    fmt17(r.d_half),
                    fmt17(r.ratio),
                    r.class.label().into(),
                ]),
                Err(e) => st.notes.push(format!("halving for {} failed: {e}", pert.name())),
            }
        }
        st.tables.push(t);
    }
    report.stages.push(st);
    run.forcing = Some((x2, y2));
    run.b2 = Some(sol.clone());
    run.b2_closed = closed;
    if opts.through == Stage::B2 {
        run.report = report;
        return Ok(run);
    }

    // h3
    let energy = energy_function(run.lagrangian.as_ref().expect("taylor stage ran"));
    let h3 = h3_normal_coefficients(&energy, (&b1x, &b1y), (&sol.b2x, &sol.b2y), &w);
    let zero = DAlembertSeries::zero();
    let ablation = h3_normal_coefficients(&energy, (&b1x, &b1y), (&zero, &zero), &w);
    let bound = tol.h3 * h3.scale.max(f64::MIN_POSITIVE);
    let mut st = StageReport::new("h3");
    for (name, v) in H3NormalCoefficients::NAMES.iter().zip(h3.as_array()) {
        st.push(Check::gate(*name, v.abs(), bound));
    }
    st.push(Check::info("scale", h3.scale, f64::INFINITY));
    st.push(Check::at_least("ablation_max", ablation.max_abs(), 1e3 * bound));
    report.stages.push(st);
    run.h3 = Some(h3);
    run.h3_ablation = Some(ablation);
    run.report = report;
    Ok(run)
}

fn drag_free_efg(p: &ModelParams, shift: &OriginShift) -> Result<QuadraticCoefficients> {
    let q = p.with_w1(0.0)?;
    extract_efg(&taylor_lagrangian(&q, shift, 2)?.slice(2), &q)
}

/// Closed-form second order built on the pipeline's `J` and frequencies.
pub fn closed_b2(
    p: &ModelParams,
    nm: &NormalModeData,
    w: &FrequencyPair,
) -> Result<(DAlembertSeries, DAlembertSeries)> {
    let rs = rs_tables(&nm.entries(), w, &fg_tables(p))?;
    Ok(second_order_closed_form(&rs))
}

/// `max |closed − oracle|` over both components.
pub fn b2_discrepancy(
    closed: (&DAlembertSeries, &DAlembertSeries),
    oracle: (&DAlembertSeries, &DAlembertSeries),
) -> f64 {
    closed.0.max_abs_diff(oracle.0).max(closed.1.max_abs_diff(oracle.1))
}
