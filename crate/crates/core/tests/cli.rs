use std::process::Command;

fn siegel() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_siegel"));
    c.env_remove("SIEGEL_CACHE_DIR").env_remove("SIEGEL_THREADS");
    c
}

fn run(c: &mut Command) -> (bool, String) {
    let o = c.output().unwrap();
    (o.status.success(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn dims_lists_the_series() {
    let (ok, out) = run(siegel().args(["dims", "odd", "23"]));
    assert!(ok);
    assert!(out.contains("11:1") && out.contains("23:9"), "{out}");
}

#[test]
fn unknown_form_fails() {
    let (ok, _) = run(siegel().args(["classical", "chi7"]));
    assert!(!ok);
    let (ok, _) = run(siegel().args(["verify-theorem", "1,2"]));
    assert!(!ok);
}

#[test]
fn classical_cache_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.txt");
    let out2 = dir.path().join("b.txt");
    let (ok, _) = run(siegel().args(["classical", "chi5", "--tmax", "6", "--out"]).arg(&out1).env("SIEGEL_CACHE_DIR", dir.path()));
    assert!(ok);
    let cached = dir.path().join("chi5.t6.txt");
    let first = std::fs::read(&cached).unwrap();
    let (ok, _) = run(siegel().args(["classical", "chi5", "--tmax", "6", "--threads", "2", "--out"]).arg(&out2).arg("--cache").arg(dir.path()));
    assert!(ok);
    assert_eq!(std::fs::read(&cached).unwrap(), first);
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    assert!(std::fs::read_to_string(&out1).unwrap().contains("PASS"));
}

#[test]
fn corrupt_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (ok, _) = run(siegel().args(["classical", "phi4", "--tmax", "4", "--cache"]).arg(dir.path()));
    assert!(ok);
    let path = dir.path().join("phi4.t4.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let last = text.lines().last().unwrap().to_string();
    let bad = text.replace(&last, &format!("{last}1"));
    std::fs::write(&path, bad).unwrap();
    let (ok, _) = run(siegel().args(["classical", "phi4", "--tmax", "4", "--cache"]).arg(dir.path()));
    assert!(!ok);
}

#[test]
fn rc_space_reports_a_basis() {
    let (ok, out) = run(siegel().args(["rc-space", "6", "0", "4,6"]));
    assert!(ok, "{out}");
}

#[test]
fn hecke_without_charpoly_flag() {
    let (ok, out) = run(siegel().args(["hecke", "2", "6", "11"]));
    assert!(ok, "{out}");
}
