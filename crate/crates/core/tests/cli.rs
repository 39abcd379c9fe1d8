use std::process::Command;

fn sgtree(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sgtree"))
        .args(args)
        .env_remove("SGTREE_MAX_NODES")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn count_exit_codes() {
    let (code, out, _) = sgtree(&["count", "--max-genus", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "genus,n_g\n0,1\n1,1\n2,2\n3,4\n4,7\n");
    assert_eq!(sgtree(&["count", "--max-genus", "0"]).1, "genus,n_g\n0,1\n");
    let (code, _, err) = sgtree(&["count", "--max-genus", "-1"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
}

#[test]
fn stats_table() {
    let (code, out, _) = sgtree(&["stats", "--max-genus", "10", "--epsilon", "1/10", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "genus,n_g,count_Am,count_AF,count_AmF,count_B,count_not_infinite,count_infinite");
    assert_eq!(lines.len(), 12);
    let (_, out, _) = sgtree(&["stats", "--max-genus", "0", "--epsilon", "1/10"]);
    assert_eq!(out.lines().nth(1).unwrap(), "0,1,0,0,0,0,0,1");
    assert_eq!(sgtree(&["stats", "--max-genus", "3", "--epsilon", "0"]).0, 2);
}

#[test]
fn verify_passes_to_fifteen() {
    let (code, out, _) = sgtree(&["verify", "--max-genus", "15", "--workers", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    // three checks for each of two epsilons at g = 6..=15, plus the chain check
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 10 * 6 + 1);
    assert_eq!(sgtree(&["verify", "--max-genus", "5"]).0, 2);
}

#[test]
fn node_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sgtree"))
        .args(["count", "--max-genus", "12"])
        .env("SGTREE_MAX_NODES", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_sgtree"))
        .args(["count", "--max-genus", "3"])
        .env("SGTREE_MAX_NODES", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn draw_is_byte_stable() {
    let a = sgtree(&["draw", "--max-genus", "6"]).1;
    let b = sgtree(&["draw", "--max-genus", "6"]).1;
    assert_eq!(a, b);
    assert!(a.starts_with("digraph semigroup_tree {"));
    assert_eq!(a.matches(" -> ").count(), 1 + 1 + 2 + 4 + 7 + 12 + 23 - 1);
}
