use std::process::{Command, Output};

fn adt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adt")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = adt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn region_corners() {
    assert!(stdout(&["region", "1,2/2,1"]).lines().any(|l| l == "4/3 4/3"));
    assert!(stdout(&["region", "2,4/3,1"]).lines().any(|l| l == "8/3 2"));
    let zero = stdout(&["region", "0,0/0,0"]);
    let corners: Vec<_> = zero.split("\n\n").nth(1).unwrap().lines().collect();
    assert_eq!(corners, ["0 0"]);
    assert!(!adt(&["region", "1,2"]).status.success());
}

#[test]
fn decompose_and_plan() {
    assert_eq!(stdout(&["decompose", "2", "4"]).trim(), "(1,2)^2");
    assert_eq!(stdout(&["decompose", "0", "0"]).trim(), "empty");
    let p = stdout(&["plan", "2,4/3,1", "perfect-both"]);
    assert!(p.contains("PREDICTED 8/3 2\n") && p.contains("EXECUTABLE true\n"), "{p}");
    assert_eq!(p.lines().filter(|l| l.starts_with("PAIR ")).count(), 2);
    assert!(!adt(&["plan", "2,4/3,1", "sideways"]).status.success());
}

#[test]
fn simulate_reports() {
    assert!(stdout(&["simulate", "ex1:L=2"]).ends_with("achieved 4/3 2/3 PASS\n"));
    assert!(stdout(&["simulate", "nf:0,1"]).ends_with("achieved 0 0 PASS\n"));
    assert!(stdout(&["simulate", "ex2:L=2,M=16"]).ends_with("achieved 1 1/2 PASS\n"));
    let bad = adt(&["simulate", "warp:9"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("ex1:L=<L>"));
}

#[test]
fn simulate_composed_plan_file() {
    let dir = std::env::temp_dir().join(format!("adt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let plan = dir.join("plan.txt");
    std::fs::write(&plan, stdout(&["plan", "2,3/1,0", "favor-backward"])).unwrap();
    let id = format!("compose:{}", plan.display());
    let dump = dir.join("t.txt");
    let out = stdout(&["simulate", &id, "--seed", "4", "--dump-transcript", dump.to_str().unwrap()]);
    assert!(out.ends_with("achieved 2 2/3 PASS\n"), "{out}");
    let by_flag = stdout(&["simulate", "--plan", plan.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(by_flag, out);
    let t = std::fs::read_to_string(&dump).unwrap();
    assert!(t.starts_with("t=1 ") && t.contains("\ndec node="));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_is_deterministic_and_exact() {
    let args = ["sweep", "--gamma", "1/1", "--step", "1/6", "--format", "csv"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert_eq!(a.lines().count(), 1 + 19 * 19);
    assert!(a.lines().any(|l| l.starts_with("1/2,2,1,1,2,4,2,PERFECT_FEEDBACK_ACHIEVABLE,true")));
    assert!(!a.contains('.'));
    let text = stdout(&["sweep", "--gamma", "0", "--step", "1", "--max", "1"]);
    assert_eq!(text.lines().filter(|l| l.contains("skipped")).count(), 4);
    assert!(!adt(&["sweep", "--step", "0"]).status.success());
}
