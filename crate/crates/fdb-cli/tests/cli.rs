//! End-to-end checks of the command-line driver: exit statuses, output
//! determinism and the Article-91 toggle.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fdb")
}

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn run_emits_base_tables() {
    let cfg = repo_config("base.conf");
    let (code, stdout, _) = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("date,lb,ub,fdb,eps,delta,ii,cog"));
    assert!(stdout.contains("\n2017,"));
    assert!(stdout.contains("scenario,date,dfdb,dlb,dub"));
}

#[test]
fn run_is_deterministic_and_writes_files() {
    let cfg = repo_config("base.conf");
    let dir1 = std::env::temp_dir().join(format!("fdbout1-{}", std::process::id()));
    let dir2 = std::env::temp_dir().join(format!("fdbout2-{}", std::process::id()));
    for dir in [&dir1, &dir2] {
        let (code, _, _) = run(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    for name in ["base.csv", "base_pct.csv", "sensitivities.csv"] {
        let a = std::fs::read(dir1.join(name)).unwrap();
        let b = std::fs::read(dir2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    std::fs::remove_dir_all(&dir1).ok();
    std::fs::remove_dir_all(&dir2).ok();
}

#[test]
fn markdown_format() {
    let cfg = repo_config("base.conf");
    let (code, stdout, _) = run(&["run", cfg.to_str().unwrap(), "--format", "md"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("| date | lb | ub |"));
}

#[test]
fn no_art91_shifts_bounds_by_surplus_fund() {
    let cfg = repo_config("base.conf");
    let (_, with, _) = run(&["run", cfg.to_str().unwrap()]);
    let (_, without, _) = run(&["run", cfg.to_str().unwrap(), "--no-art91"]);
    let lb = |s: &str| -> f64 {
        s.lines()
            .find(|l| l.starts_with("2017,"))
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    // 2017 surplus fund is 10.4 bn.
    assert!((lb(&without) - lb(&with) - 10.4).abs() < 0.02);
}

#[test]
fn missing_file_exits_one() {
    let (code, _, stderr) = run(&["run", "/nonexistent/nowhere.conf"]);
    assert_eq!(code, 1);
    assert!(!stderr.is_empty());
}

#[test]
fn bad_config_exits_one() {
    let dir = std::env::temp_dir().join(format!("fdbbad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.conf");
    std::fs::write(&cfg, "[date 2017]\nlp0 = not-a-number\n").unwrap();
    let (code, _, _) = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(code, 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_passes_on_bundled_goldens() {
    let cfg = repo_config("base.conf");
    let (code, stdout, _) = run(&["check", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("all golden checks passed"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn check_exits_three_on_golden_breach() {
    let data_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let dir = std::env::temp_dir().join(format!("fdbgold-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // Golden table with a value far off the computed one.
    std::fs::write(dir.join("golden.csv"), "year,lb,ub,fdb,eps,ii,cog\n2017,99.0,49.73,46.78,2.96,1.10,0.50\n").unwrap();
    std::fs::write(dir.join("empty.csv"), "scenario,year,dfdb,dlb,dub\n").unwrap();
    std::fs::write(dir.join("pct.csv"), "year,lb,ub,fdb,eps,ii,cog\n").unwrap();
    std::fs::write(dir.join("cal.csv"), "year,gamma_pct,gph_pct\n").unwrap();
    let cfg = dir.join("check.conf");
    std::fs::write(
        &cfg,
        format!(
            "[date 2017]\nlp0 = 179.4\nsf0 = 10.4\nug0 = 41.4\ngb = 154.1\nfdb_reported = 48.6\nrho = 0.0263\ngamma = 0.0080\ncurve = {data}/curve_2017.csv\n\n[params]\nvols = {data}/vols_base.csv\n\n[reference]\nbase = golden.csv\nbase_pct = pct.csv\nsensitivities = empty.csv\ncalibration = cal.csv\n",
            data = data_dir.display()
        ),
    )
    .unwrap();
    let (code, stdout, _) = run(&["check", cfg.to_str().unwrap()]);
    assert_eq!(code, 3, "{stdout}");
    assert!(stdout.contains("FAIL"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn calibrate_reports_average() {
    let cfg = repo_config("base.conf");
    let (code, stdout, _) = run(&["calibrate", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("average,,,75.5"));
}

#[test]
fn simulate_reports_bracketing() {
    let cfg = repo_config("simulate.conf");
    let (code, stdout, _) = run(&["simulate", cfg.to_str().unwrap(), "--paths", "2000", "--seed", "9"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("bracket fdb_mc: true"));
}
