//! Parameter sweeps: the resonance scan over `μ` and batched pipeline runs.
//!
//! Points are independent, so both sweeps map over their inputs either
//! sequentially or with rayon (feature `parallel`). Results keep input order.

use crate::dalembert::{moser_check, moser_pairs, FrequencyPair};
use crate::error::{Error, Result};
use crate::normalform::freq::frequencies;
use crate::normalform::pipeline::{run_pipeline, PipelineOptions, Stage};
use crate::numfmt::fmt17;
use crate::params::ModelParams;
use crate::report::CsvBlock;

/// Bisection tolerance in `μ`.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Order-preserving map, parallel when asked and compiled in.
pub fn map_points<I, T, F>(items: &[I], exec: Execution, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Perturbations held fixed while `μ` varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanTemplate {
    pub q1: f64,
    pub a2: f64,
    pub w1: f64,
}

impl Default for ScanTemplate {
    fn default() -> Self {
        Self {
            q1: 1.0,
            a2: 0.0,
            w1: 0.0,
        }
    }
}

impl ScanTemplate {
    pub fn params(&self, mu: f64) -> Result<ModelParams> {
        ModelParams::with_drag_strength(mu, self.q1, self.a2, self.w1)
    }

    /// Basic frequencies at `μ`.
    pub fn frequencies(&self, mu: f64) -> Result<FrequencyPair> {
        let p = self.params(mu)?;
        let opts = PipelineOptions {
            through: Stage::Taylor,
            ..Default::default()
        };
        let run = run_pipeline(&p, &opts)?;
        frequencies(&p, run.efg.as_ref().expect("taylor stage ran"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub mu: f64,
    /// `None` outside the linearly stable range.
    pub freq: Option<FrequencyPair>,
    pub min_combination: f64,
    pub worst_pair: (i32, i32),
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceRoot {
    pub mu: f64,
    pub pair: (i32, i32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    pub roots: Vec<ResonanceRoot>,
}

impl ScanResult {
    pub fn unstable_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.freq.is_none()).count()
    }

    pub fn to_csv(&self) -> CsvBlock {
        let mut t = CsvBlock::new(
            "resonance scan",
            &["mu", "omega1", "omega2", "min_combination", "worst_pair", "pass"],
        );
        for r in &self.rows {
            match r.freq {
                Some(w) => t.push(vec![
                    fmt17(r.mu),
                    fmt17(w.omega1),
                    fmt17(w.omega2),
                    fmt17(r.min_combination),
                    format!("{}:{}", r.worst_pair.0, r.worst_pair.1),
                    r.pass.to_string(),
                ]),
                None => t.push(vec![
                    fmt17(r.mu),
                    "nan".into(),
                    "nan".into(),
                    "nan".into(),
                    "unstable".into(),
                    "false".into(),
                ]),
            }
        }
        t
    }

    pub fn roots_csv(&self) -> CsvBlock {
        let mut t = CsvBlock::new("resonance roots", &["mu", "k1", "k2"]);
        for r in &self.roots {
            t.push(vec![fmt17(r.mu), r.pair.0.to_string(), r.pair.1.to_string()]);
        }
        t
    }
}

fn combination(w: &FrequencyPair, (k1, k2): (i32, i32)) -> f64 {
    k1 as f64 * w.omega1 + k2 as f64 * w.omega2
}

/// Bisects `k1ω1 + k2ω2 = 0` on `[lo, hi]`, where the signs differ.
fn bisect_pair(t: &ScanTemplate, pair: (i32, i32), mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = combination(&t.frequencies(lo)?, pair);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = combination(&t.frequencies(mid)?, pair);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grid scan of the Moser condition on `steps` equally spaced `μ` values,
/// with every sign change of a low-order combination refined by bisection.
pub fn resonance_scan(
    t: &ScanTemplate,
    mu_min: f64,
    mu_max: f64,
    steps: usize,
    tol: f64,
    exec: Execution,
) -> Result<ScanResult> {
    if !(mu_min.is_finite() && mu_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: if mu_min.is_finite() { mu_max } else { mu_min },
            reason: "scan bounds must be finite",
        });
    }
    if steps == 0 || mu_max < mu_min {
        return Ok(ScanResult {
            rows: Vec::new(),
            roots: Vec::new(),
        });
    }
    let grid: Vec<f64> = if steps == 1 {
        vec![mu_min]
    } else {
        (0..steps)
            .map(|i| mu_min + (mu_max - mu_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let rows: Vec<ScanRow> = map_points(&grid, exec, |&mu| match t.frequencies(mu) {
        Ok(w) => {
            let m = moser_check(&w, tol);
            ScanRow {
                mu,
                freq: Some(w),
                min_combination: m.min_value,
                worst_pair: m.witness,
                pass: m.pass,
            }
        }
        Err(_) => ScanRow {
            mu,
            freq: None,
            min_combination: f64::NAN,
            worst_pair: (0, 0),
            pass: false,
        },
    });
    if rows.iter().any(|r| r.freq.is_none()) {
        log::warn!("scan range reaches beyond the linearly stable region");
    }

    let mut brackets = Vec::new();
    for pair in moser_pairs() {
        for win in rows.windows(2) {
            if let (Some(a), Some(b)) = (win[0].freq, win[1].freq) {
                let (fa, fb) = (combination(&a, pair), combination(&b, pair));
                if fa == 0.0 {
                    brackets.push((pair, win[0].mu, win[0].mu));
                } else if fa.signum() != fb.signum() && fb != 0.0 {
                    brackets.push((pair, win[0].mu, win[1].mu));
                }
            }
        }
    }
    let refined = map_points(&brackets, exec, |&(pair, lo, hi)| {
        let mu = if lo == hi { Ok(lo) } else { bisect_pair(t, pair, lo, hi) };
        mu.map(|mu| ResonanceRoot { mu, pair })
    });
    let mut roots = refined.into_iter().collect::<Result<Vec<_>>>()?;
    roots.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    Ok(ScanResult { rows, roots })
}

/// Smallest `μ` in `[lo, hi]` at which the frequencies cease to exist,
/// bracketed to `tol`. `lo` must be stable and `hi` unstable.
pub fn stability_boundary(t: &ScanTemplate, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let stable = |mu: f64| t.frequencies(mu).is_ok();
    if !stable(lo) || stable(hi) {
        return Err(Error::Contract(format!(
            "stability boundary not bracketed by [{lo}, {hi}]"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Summary of one pipeline run in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: ModelParams,
    pub pass: bool,
    pub first_failure: Option<String>,
    pub freq: Option<FrequencyPair>,
    pub max_a: Option<f64>,
    pub h3_scale: Option<f64>,
    pub b2_residual: Option<f64>,
    pub error: Option<String>,
}

pub fn sweep(points: &[ModelParams], opts: &PipelineOptions, exec: Execution) -> Vec<SweepRow> {
    map_points(points, exec, |p| match run_pipeline(p, opts) {
        Ok(run) => SweepRow {
            params: *p,
            pass: run.report.pass(),
            first_failure: run.report.first_failure().map(str::to_string),
            freq: run.modes.as_ref().map(|m| m.freq),
            max_a: run.h3.map(|h| h.max_abs()),
            h3_scale: run.h3.map(|h| h.scale),
            b2_residual: run.b2.as_ref().map(|s| s.residual),
            error: None,
        },
        Err(e) => SweepRow {
            params: *p,
            pass: false,
            first_failure: None,
            freq: None,
            max_a: None,
            h3_scale: None,
            b2_residual: None,
            error: Some(e.kind().to_string()),
        },
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> CsvBlock {
    let mut t = CsvBlock::new(
        "sweep",
        &[
            "mu", "q1", "a2", "w1", "pass", "first_failure", "omega1", "omega2", "max_A", "h3_scale",
            "b2_residual", "error",
        ],
    );
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_else(|| "nan".into());
    for r in rows {
        t.push(vec![
            fmt17(r.params.mu()),
            fmt17(r.params.q1()),
            fmt17(r.params.a2()),
            fmt17(r.params.w1()),
            r.pass.to_string(),
            r.first_failure.clone().unwrap_or_default(),
            opt(r.freq.map(|w| w.omega1)),
            opt(r.freq.map(|w| w.omega2)),
            opt(r.max_a),
            opt(r.h3_scale),
            opt(r.b2_residual),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_points_keeps_order() {
        let v: Vec<usize> = (0..100).collect();
        let a = map_points(&v, Execution::Parallel, |x| x * x);
        let b = map_points(&v, Execution::Sequential, |x| x * x);
        assert_eq!(a, b);
    }

    #[test]
    fn empty_range_gives_no_rows() {
        let r = resonance_scan(&ScanTemplate::default(), 0.02, 0.01, 10, 1e-6, Execution::Sequential).unwrap();
        assert!(r.rows.is_empty() && r.roots.is_empty());
        assert_eq!(r.to_csv().to_csv(), "mu,omega1,omega2,min_combination,worst_pair,pass\n");
    }

    #[test]
    fn rows_past_critical_mass_are_unstable() {
        let r = resonance_scan(&ScanTemplate::default(), 0.03, 0.05, 5, 1e-6, Execution::Sequential).unwrap();
        assert!(r.unstable_rows() >= 2);
        assert!(r.rows[0].freq.is_some());
    }
}
