use std::path::Path;
use std::process::{Command, Output};

fn locman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locman")).args(args).env("RUST_LOG", "error").output().unwrap()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let out = dir.join(name);
    let mut a = args.to_vec();
    let p = out.to_str().unwrap();
    a.extend(["--out", p]);
    let o = locman(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn fig5_is_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a.csv", &["fig5"]);
    let b = run_to(dir.path(), "b.csv", &["fig5"]);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,T_galerkin,T_weak_asymptotic,T_strong_asymptotic"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.len() == 4 && !r[1].is_empty()));
    assert!(!rows[0][2].is_empty() && !rows[14][3].is_empty());
}

#[test]
fn simulate_repeats_under_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# short run\nk = 2\nn_trials = 2000\nlambda_per_hr = 0.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let a = run_to(dir.path(), "a.csv", &["--config", c, "--seed", "9", "simulate"]);
    let b = run_to(dir.path(), "b.csv", &["--config", c, "--seed", "9", "simulate"]);
    let other = run_to(dir.path(), "c.csv", &["--config", c, "--seed", "10", "simulate"]);
    assert_eq!(a, b);
    assert_ne!(a, other);
    assert!(String::from_utf8(a).unwrap().starts_with("k,lambda,x_km,y_km,R_km,mean_T,ci,n,censored_count\n"));
}

#[test]
fn episode_and_optimize_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ep.cfg");
    std::fs::write(&cfg, "k = 20\nlambda_per_hr = 0.2\nduration_hr = 100\nstrategy = center\n").unwrap();
    let c = cfg.to_str().unwrap();
    let ep = String::from_utf8(run_to(dir.path(), "ep.csv", &["--config", c, "simulate", "--episode"])).unwrap();
    assert!(ep.lines().nth(1).unwrap().starts_with("center,20,0.2,100,"));
    let opt = String::from_utf8(run_to(dir.path(), "o.csv", &["--config", c, "--provider", "asymptotic", "optimize"])).unwrap();
    assert!(opt.lines().nth(1).unwrap().starts_with("20,0.2,asymptotic,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "k = 1\nspeed = 3\n").unwrap();
    let o = locman(&["--config", bad.to_str().unwrap(), "optimize"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let ok = locman(&["validate", "--only", "2,4"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.starts_with("[PASS]") && l.ends_with(" s)")));

    let fault = locman(&["validate", "--only", "0.asym", "--fault", "flip-drift"]);
    assert_eq!(fault.status.code(), Some(1));
    let fault = locman(&["validate", "--only", "0.psd", "--fault", "flip-sigma"]);
    assert_eq!(fault.status.code(), Some(1));

    assert_eq!(locman(&["validate", "--only", "nope"]).status.code(), Some(1));
}
