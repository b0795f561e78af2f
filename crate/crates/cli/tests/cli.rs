use std::path::Path;
use std::process::{Command, Output};

use ehcrn_cli::config::{load_scenario, parse_scenario};
use ehcrn_cli::output::{emit_csv, emit_json, emit_plot_script, parse_csv, CSV_HEADER};
use ehcrn_cli::sweep::{run_sweep, SweepResultRow, SweepSpec, SweepVariable};
use ehcrn_core::SimConfig;

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/configs"))
}

fn ehcrn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehcrn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_rows() -> Vec<SweepResultRow> {
    let loaded = load_scenario(configs().join("case2.cfg")).unwrap();
    let spec = SweepSpec::case_two(loaded.scenario, SimConfig::new(5_000, 2, 3))
        .unwrap()
        .with_grid(vec![1.0, 1.05, 1.1])
        .unwrap();
    run_sweep(&spec).unwrap()
}

#[test]
fn bundled_configs_load() {
    for name in ["case1.cfg", "case2.cfg"] {
        let c = load_scenario(configs().join(name)).unwrap();
        assert_eq!(c.scenario.battery_levels(), 100);
        assert_eq!(c.scenario.detector().samples(), 2000);
        assert_eq!(c.sim.slots, 1_000_000);
    }
}

#[test]
fn csv_round_trip_keeps_nine_digits() {
    let rows = small_rows();
    let mut buf = Vec::new();
    emit_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert!(!text.contains('\r'));
    let back = parse_csv(buf.as_slice()).unwrap();
    assert_eq!(back.len(), rows.len());
    for (a, b) in rows.iter().zip(&back) {
        assert_eq!((&a.variant, a.slots, a.seed), (&b.variant, b.slots, b.seed));
        for (x, y) in [(a.analytic_pl, b.analytic_pl), (a.sim_pl, b.sim_pl), (a.pd, b.pd)] {
            assert!((x - y).abs() <= 5e-9 * x.abs(), "{x} vs {y}");
        }
    }
}

#[test]
fn json_uses_csv_field_names() {
    let rows = small_rows();
    let mut buf = Vec::new();
    emit_json(&rows, &mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    let first = v.as_array().unwrap()[0].as_object().unwrap();
    let mut keys: Vec<&str> = first.keys().map(String::as_str).collect();
    let mut want = CSV_HEADER.to_vec();
    keys.sort_unstable();
    want.sort_unstable();
    assert_eq!(keys, want);

    let mut csv = Vec::new();
    emit_csv(&rows, &mut csv).unwrap();
    let from_csv = parse_csv(csv.as_slice()).unwrap();
    let from_json: Vec<SweepResultRow> = serde_json::from_slice(&buf).unwrap();
    assert_eq!(from_csv, from_json);
}

#[test]
fn parse_csv_rejects_foreign_header() {
    assert!(parse_csv("a,b\n1,2\n".as_bytes()).is_err());
}

#[test]
fn plot_script_labels_axis_per_variable() {
    let labels = vec!["x".to_string(), "y".to_string()];
    let snr = emit_plot_script(SweepVariable::PrimarySnrDb, &labels, "case1.csv", "t");
    assert!(snr.contains("set xlabel 'primary SNR (dB)'"));
    assert!(snr.contains("data = 'case1.csv'"));
    assert_eq!(snr.matches("yerrorbars").count(), 2);
    let th = emit_plot_script(SweepVariable::NormalizedThreshold, &labels, "case2.csv", "t");
    assert!(th.contains("set xlabel 'normalized detection threshold'"));
}

#[test]
fn custom_sweep_table() {
    let text = std::fs::read_to_string(configs().join("case1.cfg")).unwrap()
        + r#"
[sweep]
variable = "normalized_threshold"
grid = [1.0, 1.05]

[[sweep.variant]]
label = "base"

[[sweep.variant]]
label = "quiet"
q_idle = 0.8
q_occupied = 0.4
"#;
    let c = parse_scenario(&text).unwrap();
    let s = c.sweep.unwrap();
    assert_eq!(s.variable, SweepVariable::NormalizedThreshold);
    assert_eq!(s.variants[1].spectrum, Some((0.8, 0.4)));
    let half = text.replace("q_occupied = 0.4\n", "");
    assert!(parse_scenario(&half).unwrap_err().contains("quiet"));
}

#[test]
fn analyze_prints_header_and_row() {
    let cfg = configs().join("case1.cfg");
    let out = ehcrn(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split(',').collect();
    let values: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    let pl = header.iter().position(|h| *h == "packet_loss").unwrap();
    assert!((values[pl] - 0.735896505).abs() < 1e-9);
}

#[test]
fn simulate_json_is_reproducible() {
    let cfg = configs().join("case1.cfg");
    let args = ["simulate", "--config", cfg.to_str().unwrap(), "--slots", "20000", "--seed", "4", "--json"];
    let a = ehcrn(&args);
    let b = ehcrn(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["simulation"]["slots_per_replication"], 20000);
    assert_eq!(v["simulation"]["seed"], 4);
}

#[test]
fn validate_passes_on_bundled_config() {
    let cfg = configs().join("case2.cfg");
    let out = ehcrn(&["validate", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert_eq!(ehcrn(&["analyze", "--config", missing.to_str().unwrap()]).status.code(), Some(2));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "[spectrum]\nq_idle = 2.0\n").unwrap();
    let out = ehcrn(&["analyze", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.cfg"));

    let cfg = configs().join("case1.cfg");
    let out = ehcrn(&["sweep", "--case", "custom", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Output directory blocked by a regular file.
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = ehcrn(&["sweep", "--case", "2", "--config", cfg.to_str().unwrap(), "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn sweep_writes_json_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("case1.cfg"))
        .unwrap()
        .replace("slots = 1000000", "slots = 2000")
        + "\n[sweep]\nvariable = \"primary_snr_db\"\ngrid = [-15.0, -10.0]\ntarget_pf = 0.05\n\n[[sweep.variant]]\nlabel = \"only\"\n";
    let cfg = dir.path().join("custom.cfg");
    std::fs::write(&cfg, text).unwrap();
    let out_dir = dir.path().join("out");
    let out = ehcrn(&[
        "sweep", "--case", "custom", "--config", cfg.to_str().unwrap(),
        "--out", out_dir.to_str().unwrap(), "--format", "json", "--plots",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<serde_json::Value> =
        serde_json::from_slice(&std::fs::read(out_dir.join("custom.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["pf"].as_f64().unwrap() - 0.05).abs() < 1e-9);
    assert!(out_dir.join("custom.csv").exists());
    let gp = std::fs::read_to_string(out_dir.join("custom.gp")).unwrap();
    assert!(gp.contains("'custom.csv'"));
}
