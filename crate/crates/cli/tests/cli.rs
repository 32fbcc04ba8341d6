use std::path::Path;
use std::process::{Command, Output};

fn ghtree(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ghtree"));
    cmd.args(args);
    for var in ["GHTREE_C1", "GHTREE_C2", "GHTREE_C_DEPTH", "GHTREE_PENALTY"] {
        cmd.env_remove(var);
    }
    cmd.envs(env.iter().copied());
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const DUMBBELL: &str = "p 6 7\n\
e 0 1 10\ne 1 2 10\ne 0 2 10\n\
e 3 4 10\ne 4 5 10\ne 3 5 10\n\
e 2 3 1\n";

#[test]
fn exact_query_and_kcut() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = (dir.path().join("g.txt"), dir.path().join("t.txt"));
    std::fs::write(&g, DUMBBELL).unwrap();

    let o = ghtree(&["exact", "--input", p(&g), "--out", p(&t)], &[]);
    assert!(o.status.success(), "{o:?}");

    let o = ghtree(&["query", "--tree", p(&t), "--graph", p(&g), "-s", "0", "-t", "5", "--true-weight"], &[]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("value 1\n"), "{out}");
    assert!(out.contains("side 0 1 2\n"), "{out}");
    assert!(out.contains("true_weight 1 (not private)"), "{out}");

    let o = ghtree(&["kcut", "--tree", p(&t), "--graph", p(&g), "-k", "2"], &[]);
    assert_eq!(stdout(&o), "value 1\npart 0 1 2\npart 3 4 5\n");
}

#[test]
fn build_is_reproducible_and_noiseless_matches_exact() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(&g, DUMBBELL).unwrap();
    let run = |eps: &str, name: &str| {
        let t = dir.path().join(name);
        let o = ghtree(&["build", "--input", p(&g), "--eps", eps, "--seed", "4", "--out", p(&t)], &[]);
        assert!(o.status.success(), "{o:?}");
        std::fs::read_to_string(t).unwrap()
    };
    assert_eq!(run("1.0", "a.txt"), run("1.0", "b.txt"));

    let noiseless = dir.path().join("inf.txt");
    std::fs::write(&noiseless, run("inf", "inf.txt")).unwrap();
    let o = ghtree(&["query", "--tree", p(&noiseless), "--graph", p(&g), "-s", "1", "-t", "4"], &[]);
    assert!(stdout(&o).starts_with("value 1\n"));
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = (dir.path().join("g.txt"), dir.path().join("t.txt"));
    std::fs::write(&g, "p 2 1\ne 0 1 -3\n").unwrap();
    let o = ghtree(&["build", "--input", p(&g), "--eps", "1", "--seed", "0", "--out", p(&t)], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    std::fs::write(&g, DUMBBELL).unwrap();
    let o = ghtree(&["build", "--input", p(&g), "--eps", "-1", "--seed", "0", "--out", p(&t)], &[]);
    assert_eq!(o.status.code(), Some(1));
    let o = ghtree(&["build", "--input", p(&g), "--eps", "1", "--seed", "0", "--out", p(&t)], &[("GHTREE_C1", "zero")]);
    assert_eq!(o.status.code(), Some(1));
    let o = ghtree(&["query", "--tree", "/nonexistent", "--graph", p(&g), "-s", "0", "-t", "1"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(ghtree(&["frobnicate"], &[]).status.code(), Some(1));
}

#[test]
fn abort_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t) = (dir.path().join("g.txt"), dir.path().join("t.txt"));
    let edges: String = (0..15).map(|i| format!("e {i} {} 1\n", i + 1)).collect();
    std::fs::write(&g, format!("p 16 15\n{edges}")).unwrap();
    let o = ghtree(
        &["build", "--input", p(&g), "--eps", "inf", "--seed", "0", "--out", p(&t)],
        &[("GHTREE_C_DEPTH", "0.01")],
    );
    assert_eq!(o.status.code(), Some(2), "{o:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed 0"));
    assert!(!t.exists());
}

#[test]
fn bench_writes_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "mode = \"private\"\neps = [1, 4]\nseeds = [0, 1]\noutput = \"r.csv\"\n\
         [instance]\ngenerator = \"erdos-renyi-weighted\"\nn = 10\np = 0.4\nseed = 2\n",
    )
    .unwrap();
    let o = ghtree(&["bench", "--config", p(&cfg)], &[]);
    assert!(o.status.success(), "{o:?}");
    let first = std::fs::read(dir.path().join("r.csv")).unwrap();
    let other = dir.path().join("r2.csv");
    assert!(ghtree(&["bench", "--config", p(&cfg), "--out", p(&other)], &[]).status.success());
    assert_eq!(first, std::fs::read(&other).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("pair_s,pair_t,seed,eps,lambda_exact,tree_value,side_true_weight,side_error,value_error\n"));
    assert_eq!(text.lines().count(), 1 + 45 * 2 * 2);
}
