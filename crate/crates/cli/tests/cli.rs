use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adrc-bench"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in:\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("cfg.toml");
    fs::write(&p, body).unwrap();
    p
}

fn run_into(config: &Path, out: &Path) -> Output {
    bin().arg("run").arg(config).arg("--out").arg(out).output().unwrap()
}

#[test]
fn run_writes_series_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_into(&configs().join("scenario1_eso3.toml"), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,q,q_d,e,y,e_hat,edot_hat,f_hat,f_true,tau");
    assert_eq!(csv.lines().count(), 20_002);
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!((value(&summary, "J_u") - 59.77).abs() / 59.77 < 0.15);
    assert_eq!(summary, stdout(&o));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("scenario2_eso3.toml");
    let o = bin().arg("run").arg(&cfg).arg("--out").arg(dir.path()).args(["--seed", "9"]).output().unwrap();
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "seed"), 9.0);
}

#[test]
fn excessive_bandwidth_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[observer]\nvariant = \"eso3\"\nomega_o = 5000.0\n",
    );
    let o = run_into(&cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("stability margin"), "{}", stderr(&o));
}

#[test]
fn missing_observer_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "preset = \"scenario1\"\n");
    let o = run_into(&cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("observer.variant required"), "{}", stderr(&o));
}

#[test]
fn compare_prints_and_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().args(["compare", "1", "--out"]).arg(dir.path()).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let file = fs::read_to_string(dir.path().join("compare_scenario1.csv")).unwrap();
    assert_eq!(file, stdout(&o));
    let lines: Vec<&str> = file.lines().collect();
    assert_eq!(lines[0], "observer,omega_o,J_e,J_u,J_f");
    assert_eq!(lines.len(), 7);
    assert!(lines[3].starts_with("RESO,27.32,"));
}

#[test]
fn unknown_scenario_is_rejected() {
    let o = bin().args(["compare", "3"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tune_converges_on_reachable_target() {
    let o = bin()
        .arg("tune")
        .arg(configs().join("scenario1_reso.toml"))
        .args(["--target-je", "0.01"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let w = value(&stdout(&o), "omega_o");
    assert!((w - 27.32).abs() / 27.32 < 0.25, "{w}");
}

#[test]
fn tune_reports_unreachable_target() {
    let o = bin()
        .arg("tune")
        .arg(configs().join("scenario1_eso3.toml"))
        .args(["--target-je", "1e-9"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not bracketed"), "{}", stderr(&o));
}

#[test]
fn spectrum_and_bound_check_on_a_noisy_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("scenario2_eso3.toml");
    assert!(run_into(&cfg, dir.path()).status.success());
    let run = dir.path().join("run.csv");

    let spec = dir.path().join("spectrum.csv");
    let o = bin().arg("spectrum").arg(&run).args(["--from", "10"]).arg("--out").arg(&spec).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let width = value(&text, "bin_width_rad_s");
    assert!((value(&text, "peak_omega_rad_s") - 15.0).abs() <= width);
    assert!(fs::read_to_string(&spec).unwrap().starts_with("omega_rad_s,magnitude\n"));

    let bounds = dir.path().join("bound.csv");
    let o = bin().arg("bound-check").arg(&run).arg(&cfg).arg("--out").arg(&bounds).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l == "PASS"));
    assert!(value(&stdout(&o), "observer_min_margin") >= 0.0);
    assert!(fs::read_to_string(&bounds).unwrap().starts_with("t,actual,bound\n"));

    let o = bin().arg("bound-check").arg(&run).arg(&cfg).args(["--nu", "1.5"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_check_needs_third_order_luenberger() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("scenario2_reso.toml");
    assert!(run_into(&cfg, dir.path()).status.success());
    let o = bin().arg("bound-check").arg(dir.path().join("run.csv")).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
