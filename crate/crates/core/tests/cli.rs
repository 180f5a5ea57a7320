use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobstats"))
        .arg("--cache")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_small_genus_exits_clean() {
    let dir = tempfile::tempdir().unwrap();
    for g in ["1", "2"] {
        let o = run(dir.path(), &["verify", "--q", "3", "--g", g]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("identities checked:"));
    }
}

#[test]
fn odd_moments_of_quadratic_family_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["moments", "--kind", "quadratic", "--q", "3", "--g", "2", "--n", "1..6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (n_col, num_col) = (col("n"), col("avg_S_num"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let n: usize = f[n_col].parse().unwrap();
        if n % 2 == 1 {
            assert_eq!(f[num_col], "0", "row {line}");
        }
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["moments", "--kind", "ell", "--q", "7", "--d", "2", "--n", "1..6"];
    let a = run(dir.path(), &[&base[..], &["--threads", "1"]].concat());
    let b = run(dir.path(), &[&base[..], &["--threads", "2"]].concat());
    let c = run(dir.path(), &[&base[..], &["--threads", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    // the header line records the configuration, thread count included
    let body = |o: &Output| stdout(o).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&a), body(&b));
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn budget_refusal_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["family", "--kind", "quadratic", "--q", "3", "--g", "2", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn support_guard_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["old", "--kind", "quadratic", "--q", "3", "--g", "2", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(dir.path(), &["old", "--kind", "ell", "--q", "7", "--d", "2", "--alpha", "0.6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zeta_of_one_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["zeta", "--q", "3", "--Q", "1,0,-1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let json = text.lines().find(|l| !l.starts_with('#')).unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["genus"], 1);
    assert_eq!(v["rh_ok"], true);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dens.csv");
    let args = ["density", "--kind", "quadratic", "--q", "3", "--g", "1"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(b.status.code(), Some(0));
    let file = std::fs::read_to_string(&path).unwrap();
    // headers differ only in the recorded --out value
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&stdout(&a)), body(&file));
    assert!(stdout(&b).is_empty());
}

#[test]
fn lindelof_small_range_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["lindelof", "--q", "3", "--dmin", "3", "--dmax", "4", "--grid", "512"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count() > 1);
}

#[test]
fn bad_arguments_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["moments", "--kind", "quadratic"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["zeta", "--q", "4", "--Q", "1,1,1"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}
