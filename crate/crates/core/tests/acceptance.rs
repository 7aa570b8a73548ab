//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits non-zero when any criterion's outcome differs from the
//! expected one. Criterion 3 is expected to fail: the printed `J` entries
//! disagree with the numeric normalization at first order and the closed
//! form of `B2` disagrees already without perturbation.

use prtbp_core::convergence::{OrderClass, Perturbation, DEFAULT_STEP, EXACT_TOL};
use prtbp_core::dalembert::moser_check;
use prtbp_core::equilibria::{solve_triangular_numeric, Branch};
use prtbp_core::errata::{default_audit, errata, snapshot, KNOWN_ERRATA};
use prtbp_core::error::Error;
use prtbp_core::normalform::freq::frequencies;
use prtbp_core::normalform::jmatrix::LinearModel;
use prtbp_core::normalform::pipeline::{run_pipeline, PipelineOptions, Stage};
use prtbp_core::sweep::{resonance_scan, stability_boundary, Execution, ScanTemplate};
use prtbp_core::{ModelParams, Result};
use std::collections::BTreeSet;
use std::process::ExitCode;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn through(stage: Stage) -> PipelineOptions {
    PipelineOptions {
        through: stage,
        ..Default::default()
    }
}

fn classical_reduction() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for mu in [0.001, 0.01, 0.0385, 0.2, 0.4] {
        let p = ModelParams::classical(mu)?;
        let pt = solve_triangular_numeric(&p, Branch::L4)?;
        worst = worst.max((pt.x - (0.5 - mu)).abs()).max((pt.y - 3f64.sqrt() / 2.0).abs());
    }
    let mut rejected = true;
    for mu in [0.2, 0.4] {
        let r = run_pipeline(&ModelParams::classical(mu)?, &PipelineOptions::default());
        rejected &= matches!(r, Err(Error::StabilityDomain { .. }));
    }
    let admitted = run_pipeline(&ModelParams::classical(0.0385)?, &through(Stage::B1)).is_ok();
    Ok(outcome(
        worst < 1e-12 && rejected && admitted,
        format!("max deviation {worst:e}, supercritical rejected {rejected}"),
    ))
}

fn frequency_identity() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let mu = 0.0005 + 0.0379 * i as f64 / 49.0;
        let p = ModelParams::classical(mu)?;
        let run = run_pipeline(&p, &through(Stage::Taylor))?;
        let w = frequencies(&p, run.efg.as_ref().expect("taylor ran"))?;
        let sum = w.omega1.powi(2) + w.omega2.powi(2) - 1.0;
        let prod = (w.omega1 * w.omega2).powi(2) - 6.75 * mu * (1.0 - mu);
        worst = worst.max(sum.abs()).max(prod.abs());
    }
    // smaller root of 27μ² − 27μ + 1 = 0
    let root = (27.0 - (27.0f64 * 27.0 - 4.0 * 27.0).sqrt()) / 54.0;
    let (lo, hi) = stability_boundary(&ScanTemplate::default(), 0.03, 0.05, 1e-9)?;
    let off = (0.5 * (lo + hi) - root).abs();
    Ok(outcome(
        worst < 1e-10 && off < 1e-6 && lo <= root + 1e-9 && hi >= root - 1e-9,
        format!("identity error {worst:e}, boundary [{lo}, {hi}] vs {root}"),
    ))
}

fn series_order_gates() -> Result<(Outcome, BTreeSet<String>)> {
    let mu = 0.01;
    let h = DEFAULT_STEP;
    let tracked = |k: &str| {
        k.starts_with("series.")
            || (k.starts_with('J') && k.len() == 3)
            || ((k.starts_with('r') || k.starts_with('s')) && k[1..].parse::<u32>().is_ok())
    };
    let mut failing = BTreeSet::new();
    let mut checked = 0;
    for pert in Perturbation::ALL {
        let a = snapshot(&pert.params(mu, h)?)?;
        let b = snapshot(&pert.params(mu, h / 2.0)?)?;
        for (k, &da) in a.iter().filter(|(k, _)| tracked(k)) {
            checked += 1;
            let ratio = da / b[k];
            // an exact match has no remainder to halve
            let exact = da < EXACT_TOL && b[k] < EXACT_TOL;
            if !exact && !(3.5..=4.5).contains(&ratio) {
                failing.insert(k.clone());
            }
        }
    }
    let detail = format!(
        "{} of {} ratios outside [3.5, 4.5]; failing: {}",
        failing.len(),
        checked,
        failing.iter().cloned().collect::<Vec<_>>().join(" ")
    );
    Ok((outcome(failing.is_empty(), detail), failing))
}

fn linear_stage() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for mu in [0.002, 0.01, 0.02, 0.03, 0.038] {
        let run = run_pipeline(&ModelParams::classical(mu)?, &through(Stage::B1))?;
        let nm = run.modes.expect("b1 ran");
        worst = worst.max(nm.symplectic_defect).max(nm.h2_residual);
    }
    let defect = |w1: f64| -> Result<f64> {
        let opts = PipelineOptions {
            through: Stage::B1,
            linear_model: LinearModel::FullDrag,
            ..Default::default()
        };
        let run = run_pipeline(&ModelParams::from_epsilon(0.01, 0.0, 0.0, w1)?, &opts)?;
        Ok(run.modes.expect("b1 ran").symplectic_defect)
    };
    let mut ratios = Vec::new();
    for w1 in [1e-4, 1e-5, 1e-6] {
        ratios.push(defect(w1)? / defect(w1 / 2.0)?);
    }
    let linear = ratios.iter().all(|r| (1.9..2.1).contains(r));
    Ok(outcome(
        worst < 1e-10 && linear,
        format!("drag-free defect {worst:e}, halving ratios {ratios:?}"),
    ))
}

fn grid() -> Result<Vec<ModelParams>> {
    let mut v = Vec::new();
    for mu in [0.005, 0.01, 0.02] {
        v.push(ModelParams::classical(mu)?);
        for pert in Perturbation::ALL {
            v.push(pert.params(mu, 1e-3)?);
            v.push(pert.params(mu, 5e-4)?);
        }
        v.push(ModelParams::from_epsilon(mu, 1e-3, 1e-3, 1e-3)?);
    }
    Ok(v)
}

fn back_substitution() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let points = grid()?;
    for p in &points {
        let sol = run_pipeline(p, &through(Stage::B2))?.b2.expect("b2 ran");
        worst = worst.max(sol.residual);
    }
    Ok(outcome(worst < 1e-9, format!("max residual {worst:e} over {} points", points.len())))
}

fn h3_vanishing() -> Result<Outcome> {
    let opts = PipelineOptions::default();
    let classical = run_pipeline(&ModelParams::classical(0.01)?, &opts)?;
    let h3 = classical.h3.expect("h3 ran");
    let bound = 1e-8 * h3.scale;
    let mut pass = h3.max_abs() < bound;
    let mut ablation = classical.h3_ablation.expect("h3 ran").max_abs();
    let mut worst_ratio: f64 = 0.0;
    for pert in Perturbation::ALL {
        let a = run_pipeline(&pert.params(0.01, 1e-3)?, &opts)?.h3.expect("h3 ran");
        let b = run_pipeline(&pert.params(0.01, 5e-4)?, &opts)?.h3.expect("h3 ran");
        // a first-order remainder C·h would be at most twice the half-step value
        let first_order = 2.0 * b.max_abs() + 1e-8 * b.scale;
        pass &= a.max_abs() <= first_order && a.max_abs() < 1e-8 * a.scale;
        worst_ratio = worst_ratio.max(a.max_abs() / a.scale);
    }
    for p in grid()? {
        let run = run_pipeline(&p, &opts)?;
        ablation = ablation.min(run.h3_ablation.expect("h3 ran").max_abs());
    }
    pass &= ablation > 1e3 * bound;
    Ok(outcome(
        pass,
        format!(
            "classical max|A| {:e} (bound {bound:e}), perturbed max|A|/S {worst_ratio:e}, smallest ablation {ablation:e}",
            h3.max_abs()
        ),
    ))
}

fn resonance_roots() -> Result<Outcome> {
    let t = ScanTemplate::default();
    let scan = resonance_scan(&t, 0.005, 0.035, 400, 1e-6, Execution::default())?;
    let find = |pair: (i32, i32), target: f64| {
        scan.roots
            .iter()
            .find(|r| r.pair == pair && (r.mu - target).abs() < 1e-6)
            .map(|r| r.mu)
    };
    let r2 = find((1, -2), 0.0242939);
    let r3 = find((1, -3), 0.0135160);
    let mut rejected = true;
    for mu in [r2, r3].into_iter().flatten() {
        for d in [-1e-9, 0.0, 1e-9] {
            rejected &= !moser_check(&t.frequencies(mu + d)?, 1e-6).pass;
        }
    }
    Ok(outcome(
        r2.is_some() && r3.is_some() && rejected,
        format!("1:2 at {r2:?}, 1:3 at {r3:?}, neighborhoods rejected {rejected}"),
    ))
}

fn ledger_completeness() -> Result<Outcome> {
    let entries = default_audit()?;
    let found: BTreeSet<String> = errata(&entries).into_iter().collect();
    let known: BTreeSet<String> = KNOWN_ERRATA.iter().map(|s| s.to_string()).collect();
    let unlisted: Vec<_> = found.difference(&known).cloned().collect();
    let stale: Vec<_> = known.difference(&found).cloned().collect();
    let inconclusive: Vec<_> = entries
        .iter()
        .filter(|e| e.class == OrderClass::Inconclusive)
        .map(|e| e.location.clone())
        .collect();
    Ok(outcome(
        unlisted.is_empty() && stale.is_empty() && inconclusive.is_empty(),
        format!(
            "{} errata over {} locations; unlisted {unlisted:?}, stale {stale:?}, inconclusive {inconclusive:?}",
            found.len(),
            entries.len()
        ),
    ))
}

/// Prints the criterion line; true when the outcome is the expected one.
fn report(n: u32, expect_pass: bool, r: Result<Outcome>) -> bool {
    let (pass, detail) = match r {
        Ok(o) => (o.pass, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!("criterion {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    pass == expect_pass
}

fn main() -> ExitCode {
    let expected_series_failures: BTreeSet<String> = KNOWN_ERRATA
        .iter()
        .filter(|k| {
            (k.starts_with('J') && k.len() == 3) || ((k.starts_with('r') || k.starts_with('s')) && k[1..].parse::<u32>().is_ok())
        })
        .map(|s| s.to_string())
        .collect();

    let mut ok = report(1, true, classical_reduction());
    ok &= report(2, true, frequency_identity());
    match series_order_gates() {
        Ok((o, failing)) => {
            ok &= report(3, false, Ok(o));
            if failing != expected_series_failures {
                println!("criterion 3: failing set differs from the documented errata");
                ok = false;
            }
        }
        Err(e) => ok &= report(3, false, Err(e)),
    }
    ok &= report(4, true, linear_stage());
    ok &= report(5, true, back_substitution());
    ok &= report(6, true, h3_vanishing());
    ok &= report(7, true, resonance_roots());
    ok &= report(8, true, ledger_completeness());

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
