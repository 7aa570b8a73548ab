use crate::config::{ConfigError, Format, RunConfig};
use prtbp_core::dalembert::moser_check;
use prtbp_core::equilibria::{epsilon_form, solve_triangular_numeric, triangular_series, Branch};
use prtbp_core::normalform::freq::frequencies;
use prtbp_core::normalform::pipeline::{run_pipeline, PipelineOptions, Stage};
use prtbp_core::numfmt::fmt17;
use prtbp_core::report::{CsvBlock, VerificationReport};
use prtbp_core::sweep::{resonance_scan, sweep, sweep_csv, Execution, ScanTemplate};
use std::fs;
use std::io::Write;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_GATE: u8 = 3;
pub const EXIT_PIPELINE: u8 = 4;

/// A failed command: exit status plus the message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

fn pipeline_error(e: prtbp_core::Error) -> Failure {
    Failure {
        code: EXIT_PIPELINE,
        message: format!("{}: {e}", e.kind()),
    }
}

fn solver_error(e: prtbp_core::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: format!("{}: {e}", e.kind()),
    }
}

fn io_error(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: format!("output: {e}"),
    }
}

/// Writes to `<out>.<ext>` when an output prefix is set, stdout otherwise.
fn emit(cfg: &RunConfig, suffix: &str, text: &str) -> Result<(), Failure> {
    let ext = match cfg.format() {
        Format::Csv => "csv",
        Format::Report => "txt",
    };
    match &cfg.out {
        Some(prefix) => fs::write(format!("{prefix}{suffix}.{ext}"), text).map_err(io_error),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io_error),
    }
}

/// Records the normalized config next to file outputs.
pub fn save_config(cfg: &RunConfig) -> Result<(), Failure> {
    match &cfg.out {
        Some(prefix) => fs::write(format!("{prefix}.cfg"), cfg.normalized()).map_err(io_error),
        None => Ok(()),
    }
}

/// `key: value` header followed by the CSV blocks.
fn as_report(header: &[(&str, String)], blocks: &[&CsvBlock]) -> String {
    let mut s: String = header.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
    for b in blocks {
        s.push_str(&format!("--- csv {}\n{}--- end\n", b.title, b.to_csv()));
    }
    s
}

fn param_header(cfg: &RunConfig, mu: f64) -> Result<Vec<(&'static str, String)>, Failure> {
    let p = cfg.params_at(mu)?;
    Ok(vec![
        ("mu", fmt17(p.mu())),
        ("q1", fmt17(p.q1())),
        ("A2", fmt17(p.a2())),
        ("W1", fmt17(p.w1())),
    ])
}

fn branch(cfg: &RunConfig) -> Branch {
    cfg.branch.unwrap_or(Branch::L4)
}

fn options(cfg: &RunConfig) -> PipelineOptions {
    let through = cfg.through();
    let mut o = PipelineOptions {
        branch: branch(cfg),
        through,
        tol: cfg.tolerances(),
        halving_table: cfg.stages.as_ref().is_some_and(|s| s.contains(&Stage::B2)),
        ..Default::default()
    };
    if let Some(t) = cfg.moser_tol {
        o.moser_tol = t;
    }
    o
}

pub fn equilibria(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.params()?;
    let b = branch(cfg);
    let numeric = solve_triangular_numeric(&p, b).map_err(solver_error)?;
    let mut t = CsvBlock::new("equilibria", &["method", "x", "y", "residual", "numeric_distance"]);
    let mut rows = vec![numeric];
    rows.push(triangular_series(&p, b).map_err(solver_error)?);
    rows.push(epsilon_form(&p, b).map_err(solver_error)?);
    for pt in &rows {
        t.push(vec![
            pt.method.label().to_string(),
            fmt17(pt.x),
            fmt17(pt.y),
            fmt17(pt.residual),
            fmt17(pt.distance(&numeric)),
        ]);
    }
    let text = match cfg.format() {
        Format::Csv => t.to_csv(),
        Format::Report => as_report(&param_header(cfg, p.mu())?, &[&t]),
    };
    emit(cfg, "", &text)
}

pub fn frequencies_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.params()?;
    let opts = PipelineOptions {
        through: Stage::Taylor,
        ..options(cfg)
    };
    let run = run_pipeline(&p, &opts).map_err(pipeline_error)?;
    let w = frequencies(&p, run.efg.as_ref().expect("taylor stage ran")).map_err(pipeline_error)?;
    let m = moser_check(&w, opts.moser_tol);
    let mut t = CsvBlock::new(
        "frequencies",
        &["mu", "omega1", "omega2", "sum_of_squares", "product_of_squares", "min_combination", "worst_pair", "pass"],
    );
    t.push(vec![
        fmt17(p.mu()),
        fmt17(w.omega1),
        fmt17(w.omega2),
        fmt17(w.omega1.powi(2) + w.omega2.powi(2)),
        fmt17((w.omega1 * w.omega2).powi(2)),
        fmt17(m.min_value),
        format!("{}:{}", m.witness.0, m.witness.1),
        m.pass.to_string(),
    ]);
    let text = match cfg.format() {
        Format::Csv => t.to_csv(),
        Format::Report => as_report(&param_header(cfg, p.mu())?, &[&t]),
    };
    emit(cfg, "", &text)
}

fn checks_csv(r: &VerificationReport) -> CsvBlock {
    let mut t = CsvBlock::new("checks", &["stage", "check", "value", "tolerance", "pass", "gate"]);
    for s in &r.stages {
        for c in &s.checks {
            t.push(vec![
                s.name.clone(),
                c.name.clone(),
                fmt17(c.value),
                fmt17(c.tolerance),
                c.pass.to_string(),
                c.gate.to_string(),
            ]);
        }
    }
    t
}

pub fn verify(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.params()?;
    let run = run_pipeline(&p, &options(cfg)).map_err(pipeline_error)?;
    let text = match cfg.format() {
        Format::Csv => checks_csv(&run.report).to_csv(),
        Format::Report => run.report.to_text(),
    };
    emit(cfg, "", &text)?;
    match run.report.first_failure() {
        None => Ok(()),
        Some(stage) => Err(Failure {
            code: EXIT_GATE,
            message: format!("gate failed in stage {stage}"),
        }),
    }
}

fn scan_range(cfg: &RunConfig) -> Result<(f64, f64, usize), Failure> {
    Ok((
        cfg.mu_min.ok_or(ConfigError::Missing("mu_min"))?,
        cfg.mu_max.ok_or(ConfigError::Missing("mu_max"))?,
        cfg.steps.ok_or(ConfigError::Missing("steps"))?,
    ))
}

fn template(cfg: &RunConfig) -> Result<ScanTemplate, Failure> {
    // validates the perturbations once at a harmless mass ratio
    let p = cfg.params_at(0.01)?;
    Ok(ScanTemplate {
        q1: p.q1(),
        a2: p.a2(),
        w1: p.w1(),
    })
}

pub fn resonance_scan_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let (lo, hi, steps) = scan_range(cfg)?;
    let t = template(cfg)?;
    let moser_tol = cfg.moser_tol.unwrap_or(PipelineOptions::default().moser_tol);
    let r = resonance_scan(&t, lo, hi, steps, moser_tol, Execution::default()).map_err(solver_error)?;
    for root in &r.roots {
        log::info!("resonance {}:{} at mu = {}", root.pair.0, root.pair.1, fmt17(root.mu));
    }
    match cfg.format() {
        Format::Csv => {
            emit(cfg, "", &r.to_csv().to_csv())?;
            if cfg.out.is_some() {
                emit(cfg, "_roots", &r.roots_csv().to_csv())?;
            }
            Ok(())
        }
        Format::Report => {
            let header = [("mu_min", fmt17(lo)), ("mu_max", fmt17(hi)), ("steps", steps.to_string())];
            emit(cfg, "", &as_report(&header, &[&r.to_csv(), &r.roots_csv()]))
        }
    }
}

pub fn sweep_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let (lo, hi, steps) = scan_range(cfg)?;
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let mu = if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 };
        points.push(cfg.params_at(mu)?);
    }
    let rows = sweep(&points, &options(cfg), Execution::default());
    let t = sweep_csv(&rows);
    let text = match cfg.format() {
        Format::Csv => t.to_csv(),
        Format::Report => {
            let header = [("mu_min", fmt17(lo)), ("mu_max", fmt17(hi)), ("steps", steps.to_string())];
            as_report(&header, &[&t])
        }
    };
    emit(cfg, "", &text)
}
