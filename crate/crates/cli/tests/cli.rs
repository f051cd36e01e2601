use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use symcas_cli::{run_script, Options, OutputMode, Session};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symcas"))
}

fn scripts() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scripts")
}

fn normalize(s: &str) -> String {
    s.lines().map(str::trim_end).collect::<Vec<_>>().join("\n").trim_end().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const CORPUS: [&str; 6] = ["euler_limit", "taylor_cos", "lagrange_multinomial", "anova", "ppca", "assumptions"];

#[test]
fn golden_transcripts() {
    for name in CORPUS {
        let script = scripts().join(format!("{name}.sym"));
        let golden = std::fs::read_to_string(scripts().join(format!("{name}.out"))).unwrap();
        let o = bin().arg("--script").arg(&script).output().unwrap();
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert_eq!(normalize(&stdout(&o)), normalize(&golden), "{name}");
    }
}

#[test]
fn replay_is_deterministic() {
    for name in CORPUS {
        let text = std::fs::read_to_string(scripts().join(format!("{name}.sym"))).unwrap();
        let a = run_script(&mut Session::new(Options::default()), &text, false);
        let b = run_script(&mut Session::new(Options::default()), &text, false);
        assert!(a.ok(), "{name}: {:?}", a.diagnostics);
        assert_eq!(a, b);
    }
}

#[test]
fn eval_one_statement() {
    let o = bin().args(["--eval", "der(a*x + b*x^2 + c*sin(x^2), x)"]).output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim_end(), "a + 2*b*x + 2*c*x*cos(x^2)");
}

#[test]
fn latex_flag() {
    let o = bin().args(["--latex", "--eval", "Limit((1 + 1/n)^n, n, oo)"]).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim_end(), r"\lim_{n \to \infty} \left(1 + \frac{1}{n}\right)^{n}");
}

#[test]
fn digits_change_only_numeric_output() {
    let stmt = "e := exp(x^2)\nsubs(e, x, 1/3)\nevalf(subs(e, x, 1/3))";
    let run = |d: &str| {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(stmt.as_bytes()).unwrap();
        let o = bin().args(["--digits", d, "--script"]).arg(f.path()).output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        stdout(&o)
    };
    let a = run("15");
    let b = run("30");
    let (a, b): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
    assert_eq!(a[0], "exp(1/9)");
    assert_eq!(a[0], b[0]);
    assert_eq!(a[1], "1.11751906874186");
    assert_eq!(b[1].len(), a[1].len() + 15);
}

#[test]
fn empty_script_succeeds() {
    let f = tempfile::NamedTempFile::new().unwrap();
    let o = bin().arg("--script").arg(f.path()).output().unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn error_stops_script_and_fails() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x + \n1 + 1").unwrap();
    let o = bin().arg("--script").arg(f.path()).output().unwrap();
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
    let err = stderr(&o);
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains('^'), "{err}");
}

#[test]
fn keep_going_runs_remaining_lines() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "inv(matrix([[1, 1], [1, 1]]))\n1 + 1").unwrap();
    let o = bin().args(["--keep-going", "--script"]).arg(f.path()).output().unwrap();
    assert!(!o.status.success());
    assert_eq!(stdout(&o).trim_end(), "2");
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn missing_script_file() {
    let o = bin().args(["--script", "/nonexistent/none.sym"]).output().unwrap();
    assert!(!o.status.success());
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn repl_reads_stdin() {
    let mut child = bin()
        .arg("--repl")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"A := matrix([[a, c], [b, d]])\ndet(A)\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim_end(), "a*d - b*c");
}

#[test]
fn failed_statement_keeps_bindings() {
    let mut s = Session::new(Options { mode: OutputMode::Infix, digits: 15 });
    s.run_statement("y := x^2").unwrap();
    assert!(s.run_statement("y := 1/0").is_err());
    assert!(s.run_statement("y := (").is_err());
    assert_eq!(s.run_statement("y").unwrap(), "x^2");
}
