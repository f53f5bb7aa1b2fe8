use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_school-choice"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn emit(dir: &TempDir, family: &str, n: Option<&str>) -> PathBuf {
    let path = dir.path().join(format!("{family}{}.txt", n.unwrap_or("")));
    let mut args = vec!["family", family];
    if let Some(n) = n {
        args.extend(["--n", n]);
    }
    args.extend(["--emit", path.to_str().unwrap()]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn on(cmd: &str, path: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn solve_eada_on_the_extremal_family() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "example1", Some("7"));
    let o = on("solve", &path, &["--mechanism", "eada", "--consent", "all"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("improved = {i1, i2}\n"), "{text}");
    assert!(text.contains("blocking = {(i7,s1)}\n"), "{text}");
    assert!(text.contains("mechanism = eada\n"), "{text}");
}

#[test]
fn solve_every_mechanism() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "example2", None);
    for (mechanism, matching) in [
        ("da", "i1:s1 i2:s2 i3:s3 i4:s4 i5:s5 i6:s6 i7:s7"),
        ("da-school", "i1:s1 i2:s2 i3:s3 i4:s4 i5:s5 i6:s6 i7:s7"),
        ("da-ttc", "i1:s2 i2:s1 i3:s6 i4:s5 i5:s3 i6:s4 i7:s7"),
        ("eada", "i1:s6 i2:s2 i3:s3 i4:s5 i5:s1 i6:s4 i7:s7"),
    ] {
        let o = on("solve", &path, &["--mechanism", mechanism]);
        assert!(o.status.success());
        assert!(stdout(&o).contains(&format!("matching = {matching}\n")), "{mechanism}");
    }
}

#[test]
fn consent_list_restricts_eada() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "example1", Some("7"));
    // i1 gives up its interrupting seat at s2, which frees the i2..i5 cycle
    let o = on("solve", &path, &["--mechanism", "eada", "--consent", "i1,i2"]);
    let text = stdout(&o);
    assert!(text.contains("improved = {i2, i3, i4, i5}\n"), "{text}");
    assert!(text.contains("blocking = {(i1,s2)}\n"), "{text}");
    let o = on("solve", &path, &["--mechanism", "eada", "--consent", "i7"]);
    assert!(stdout(&o).contains("improved = {i1, i2}\n"));
}

#[test]
fn cycles_lists_the_envy_cycles() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "example1", Some("7"));
    let o = on("cycles", &path, &[]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("(i1 -> i2 -> i1) ") && l.ends_with(" {(i7,s1)}")), "{text}");
    assert!(text.contains("cycles = 10\n"), "{text}");
    assert!(text.contains("envy_edges = 13\n"), "{text}");
}

#[test]
fn oracle_commands() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "example1", Some("7"));
    let text = stdout(&on("feedback-sets", &path, &[]));
    assert!(text.contains("feedback_sets = 9\n"), "{text}");
    let text = stdout(&on("max-improve", &path, &[]));
    assert!(text.contains("max_improvement = 6\n"), "{text}");
    let text = stdout(&on("frontier", &path, &[]));
    assert!(text.contains("frontier_size = 9\n"), "{text}");
    assert!(text.contains("minimal_blocking_set.1 = {(i7,s1)}\n"), "{text}");
    assert!(!text.contains("minimal_blocking_set.2"), "{text}");
}

#[test]
fn compare_reports_double_domination() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "example3", None);
    let o = on("compare", &path, &["--consent", "all"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("doubly_dominates.eada[all].da-ttc = true\n"), "{text}");
    assert!(text.contains("da-ttc.blocking_count = 4\n"), "{text}");
    assert_eq!(text, stdout(&on("compare", &path, &["--consent", "all"])));
}

#[test]
fn ratio_of_the_extremal_family() {
    for n in 5..=10 {
        let want = format!("{:?}\n", (n as f64 - 1.0) / 2.0);
        for mechanism in ["eada", "da-ttc"] {
            let o = run(&["ratio", "--family", "example1", "--n", &n.to_string(), "--mechanism", mechanism]);
            assert!(o.status.success());
            assert_eq!(stdout(&o), want, "n={n} {mechanism}");
        }
    }
    assert_eq!(stdout(&run(&["ratio", "--family", "example1", "--n", "9"])), "4.0\n");
}

#[test]
fn family_prints_to_stdout() {
    let text = stdout(&run(&["family", "example3"]));
    assert!(text.starts_with("students: i1 i2 i3 i4 i5\n"), "{text}");
}

#[test]
fn invalid_input_exits_with_1() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "students: a\nschools: x:1 y:1\npref a: x y x\n").unwrap();
    let o = on("solve", &path, &["--mechanism", "da"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(on("solve", &dir.path().join("missing.txt"), &["--mechanism", "da"]).status.code(), Some(1));
    assert_eq!(run(&["family", "example1", "--n", "4"]).status.code(), Some(1));
    assert_eq!(run(&["family", "example1"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--mechanism", "bogus"]).status.code(), Some(1));
}

#[test]
fn resource_guard_exits_with_3() {
    let dir = TempDir::new().unwrap();
    // 16 students share three single seats; the 13 who end at h keep
    // 4 options each, and 4^13 exceeds the 10^7 search cap
    let students: Vec<String> = (1..=16).map(|k| format!("i{k}")).collect();
    let mut text = format!("students: {}\nschools: a:1 b:1 c:1 h:16\n", students.join(" "));
    for s in &students {
        text.push_str(&format!("pref {s}: a b c h\n"));
    }
    let path = dir.path().join("big.txt");
    std::fs::write(&path, text).unwrap();
    let o = on("frontier", &path, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource guard"));
}

#[test]
fn verify_paper_reports_each_check() {
    let o = run(&["verify-paper"]);
    let text = stdout(&o);
    // the reference cycle table disagrees with the computed one
    assert_eq!(o.status.code(), Some(4));
    assert!(text.contains("FAIL [5] number of trading cycles\n"), "{text}");
    assert!(text.contains("PASS [7] two-cycle matching doubly dominates eada[all]\n"), "{text}");
    assert!(text.contains("rows_matching = 3\n"), "{text}");
    assert!(!text.contains("FAIL [1]") && !text.contains("FAIL [9]"));
}
