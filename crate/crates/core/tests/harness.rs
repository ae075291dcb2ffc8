//! End-to-end runs of the `fim` command-line tool.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fim_core::harness::decode_snapshot;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fim-harness-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn fim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fim")).args(args).output().unwrap()
}

fn run_config(cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", cfg.to_str().unwrap(), "--outdir", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    fim(&args)
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn missing_key_is_reported_with_exit_code_two() {
    let dir = scratch("missing");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "problem.kind = couette\nproblem.kn = 0.1\nproblem.n1 = 16\nsolver.kind = fim\nsolver.variant = fim-3\n").unwrap();
    let out = run_config(&cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("problem.order"), "{err}");

    let out = run_config(&configs().join("couette.cfg"), &dir, &["--solver", "newton"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("newton"));
}

#[test]
fn couette_quickstart_writes_documented_outputs() {
    let dir = scratch("quick");
    let out = run_config(&configs().join("couette.cfg"), &dir, &["--grid", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("converged in"));

    let (header, rows) = read_csv(&dir.join("profile.csv"));
    assert_eq!(header, "x,rho,theta,u2,q1");
    assert_eq!(rows.len(), 16);
    let (header, hist) = read_csv(&dir.join("history.csv"));
    assert_eq!(header, "iter,residual,seconds");
    assert!(hist.last().unwrap()[1] < 1e-8);

    let snap = decode_snapshot(&std::fs::read(dir.join("snapshot.bin")).unwrap()).unwrap();
    assert_eq!((snap.order, snap.dims.clone(), snap.cells.len()), (5, vec![16], 16));
}

#[test]
fn max_iteration_cap_gives_exit_code_one() {
    let dir = scratch("cap");
    let out = run_config(&configs().join("couette.cfg"), &dir, &["--grid", "16", "--max-iters", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let (_, hist) = read_csv(&dir.join("history.csv"));
    assert_eq!(hist.len(), 4);
}

#[test]
fn solver_override_changes_iteration_not_solution() {
    let fim3 = scratch("fim3");
    let sisgs = scratch("sisgs");
    let base = ["--grid", "16", "--order", "4", "--kn", "0.1"];
    let a = run_config(&configs().join("couette.cfg"), &fim3, &base);
    let mut args = base.to_vec();
    args.extend(["--solver", "sisgs"]);
    let b = run_config(&configs().join("couette.cfg"), &sisgs, &args);
    assert!(a.status.success() && b.status.success());
    let (_, ha) = read_csv(&fim3.join("history.csv"));
    let (_, hb) = read_csv(&sisgs.join("history.csv"));
    assert!(hb.len() > 3 * ha.len(), "{} vs {}", hb.len(), ha.len());
    let (_, pa) = read_csv(&fim3.join("profile.csv"));
    let (_, pb) = read_csv(&sisgs.join("profile.csv"));
    for (ra, rb) in pa.iter().zip(&pb) {
        for (x, y) in ra.iter().zip(rb).take(4) {
            assert!((x - y).abs() < 1e-5, "{ra:?} vs {rb:?}");
        }
    }
}

#[test]
fn reruns_are_bit_identical() {
    let a = scratch("rerun-a");
    let b = scratch("rerun-b");
    for dir in [&a, &b] {
        let out = run_config(&configs().join("cavity.cfg"), dir, &["--grid", "16x16", "--order", "3"]);
        assert!(out.status.success());
    }
    for f in ["profile.csv", "snapshot.bin"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    // the history differs only in its wall-clock column
    let (_, ha) = read_csv(&a.join("history.csv"));
    let (_, hb) = read_csv(&b.join("history.csv"));
    let strip = |h: &[Vec<f64>]| h.iter().map(|r| (r[0], r[1])).collect::<Vec<_>>();
    assert_eq!(strip(&ha), strip(&hb));
}

#[test]
fn couette_profile_is_symmetric_about_the_centre() {
    let dir = scratch("symmetry");
    let out = run_config(&configs().join("couette.cfg"), &dir, &["--grid", "32", "--kn", "0.05"]);
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.join("profile.csv"));
    let n = rows.len();
    let mid = 0.5 * (rows[0][0] + rows[n - 1][0]);
    for i in 0..n / 2 {
        let (l, r) = (&rows[i], &rows[n - 1 - i]);
        assert!((l[0] + r[0] - 2.0 * mid).abs() < 1e-12, "cell centres");
        assert!((l[1] - r[1]).abs() < 1e-6, "rho at {i}");
        assert!((l[2] - r[2]).abs() < 1e-6, "theta at {i}");
        assert!((l[3] + r[3]).abs() < 1e-6, "u2 at {i}");
    }
}
