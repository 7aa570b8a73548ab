use std::fs;
use std::process::{Command, Output};

fn prtbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prtbp"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classical_equilibria_csv() {
    let o = prtbp(&["equilibria", "--mu", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,x,y,residual,numeric_distance"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "numeric");
    let x: f64 = row[1].parse().unwrap();
    let y: f64 = row[2].parse().unwrap();
    assert!((x - 0.25).abs() < 1e-12 && (y - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert!(row[3].parse::<f64>().unwrap() < 1e-12);
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains('\r'));
}

#[test]
fn perturbed_equilibria_have_three_methods() {
    let o = prtbp(&["equilibria", "--mu", "0.01", "--epsilon", "1e-3"]);
    let text = stdout(&o);
    let methods: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(methods, ["numeric", "series", "epsilon-form"]);
    let gaps: Vec<f64> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(gaps[0], 0.0);
    assert!(gaps[1] < 1e-12);
    assert!(gaps[2] < 1e-5);
}

#[test]
fn invalid_mass_ratio_exits_2() {
    let o = prtbp(&["equilibria", "--mu", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu"), "{}", stderr(&o));
}

#[test]
fn classical_verify_passes() {
    let o = prtbp(&["verify", "--mu", "0.01", "--stages", "h3", "--format", "report"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for name in ["A30", "A21", "A12", "A03"] {
        let line = text.lines().find(|l| l.starts_with(&format!("{name}:"))).unwrap();
        assert!(line.contains(" pass gate"), "{line}");
    }
    assert!(text.contains("ablation_max"));
}

#[test]
fn resonance_exits_4() {
    let o = prtbp(&["verify", "--mu", "0.024293897171068307"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("SmallDivisor/Moser"));
}

#[test]
fn failed_gate_exits_3_and_names_the_stage() {
    let o = prtbp(&["verify", "--mu", "0.01", "--tol", "b2=1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("stage b2"), "{}", stderr(&o));
}

#[test]
fn b2_stage_attaches_halving_table() {
    let o = prtbp(&["verify", "--mu", "0.01", "--stages", "b2", "--format", "report"]);
    let text = stdout(&o);
    assert!(text.contains("--- csv halving"), "{text}");
    assert!(!text.contains("[stage h3]"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "mu = 0.3\nepsilon = 0.001\nformat = csv\n").unwrap();
    let prefix = dir.path().join("out");
    let o = prtbp(&[
        "equilibria",
        "--config",
        cfg.to_str().unwrap(),
        "--mu",
        "0.25",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let saved = fs::read_to_string(dir.path().join("out.cfg")).unwrap();
    assert!(saved.contains("mu = 0.25\n") && saved.contains("epsilon = 0.001\n"), "{saved}");
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert!(csv.starts_with("method,x,y"));

    // the saved config reproduces the run byte for byte
    let again = dir.path().join("again");
    let o = prtbp(&[
        "equilibria",
        "--config",
        dir.path().join("out.cfg").to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(dir.path().join("again.csv")).unwrap(), csv);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "mu = 0.01\nmass = 3\n").unwrap();
    let o = prtbp(&["equilibria", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mass"));
}

#[test]
fn resonance_scan_finds_both_roots() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("scan");
    let p = prefix.to_str().unwrap();
    let o = prtbp(&["resonance-scan", "--mu-min", "0.001", "--mu-max", "0.038", "--steps", "400", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let roots = fs::read_to_string(format!("{p}_roots.csv")).unwrap();
    let rows: Vec<(f64, String)> = roots
        .lines()
        .skip(1)
        .map(|l| {
            let (mu, pair) = l.split_once(',').unwrap();
            (mu.parse().unwrap(), pair.to_string())
        })
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0].0 - 0.0135160).abs() < 1e-6 && rows[0].1 == "1,-3");
    assert!((rows[1].0 - 0.0242939).abs() < 1e-6 && rows[1].1 == "1,-2");
    let scan = fs::read_to_string(format!("{p}.csv")).unwrap();
    assert_eq!(scan.lines().count(), 401);
}

#[test]
fn empty_scan_is_header_only() {
    let o = prtbp(&["resonance-scan", "--mu-min", "0.02", "--mu-max", "0.01", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "mu,omega1,omega2,min_combination,worst_pair,pass\n");
}

#[test]
fn scan_past_critical_mass_warns() {
    let o = prtbp(&["resonance-scan", "--mu-min", "0.03", "--mu-max", "0.05", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unstable"));
    assert!(stderr(&o).contains("WARN"));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["sweep", "--mu-min", "0.005", "--mu-max", "0.045", "--steps", "9", "--a2", "1e-3"];
    let (a, b) = (prtbp(&args), prtbp(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 10);
    assert!(text.contains("StabilityDomain"));
}

#[test]
fn frequencies_satisfy_the_classical_identities() {
    let o = prtbp(&["frequencies", "--mu", "0.01"]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let sum: f64 = row[3].parse().unwrap();
    let prod: f64 = row[4].parse().unwrap();
    assert!((sum - 1.0).abs() < 1e-12);
    assert!((prod - 6.75 * 0.01 * 0.99).abs() < 1e-12);
    assert_eq!(row[7], "true");
}
