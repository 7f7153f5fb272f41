use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const K3: &str = "3 3\n0 1\n1 2\n0 2\n";

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_pq-orient"))
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn balanced_triangle_golden() {
    let s = Sandbox::new();
    s.file("k3.txt", K3);
    let o = s.run(&["orient", "balanced", "--graph", "k3.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 1\n1 2\n2 0\n");
}

#[test]
fn verify_examples() {
    let s = Sandbox::new();
    s.file("k3.txt", &format!("{K3}0 0 1\n1 0 1\n2 0 1\n"));
    s.file("cycle.txt", "0 1\n1 2\n2 0\n");
    s.file("source.txt", "0 1\n1 2\n0 2\n");
    for claim in ["pq", "boundary", "balanced"] {
        let o = s.run(&["verify", "--graph", "k3.txt", "--result", "cycle.txt", "--claim", claim]);
        assert_eq!(o.status.code(), Some(0), "{claim}: {}", stderr(&o));
        assert_eq!(stdout(&o), format!("pass {claim}\n"));
    }
    let o = s.run(&["verify", "--graph", "k3.txt", "--result", "source.txt", "--claim", "pq"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "fail pq\nvertex 0 degree 2 allowed [0, 1]\n");

    s.file("short.txt", "0 1\n");
    let o = s.run(&["verify", "--graph", "k3.txt", "--result", "short.txt", "--claim", "pq"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("edge list"), "{}", stderr(&o));
}

#[test]
fn exit_codes() {
    let s = Sandbox::new();
    // K4 with p = 2 everywhere needs 8 edges of out-degree but has 6.
    s.file(
        "k4.txt",
        "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n0 2 3\n1 2 3\n2 2 3\n3 2 3\n",
    );
    assert_eq!(s.run(&["orient", "pq", "--graph", "k4.txt"]).status.code(), Some(2));
    assert_eq!(s.run(&["orient", "boundary", "--graph", "k4.txt"]).status.code(), Some(2));
    let o = s.run(&["check", "fg", "--graph", "k4.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "violating 0 1 2 3\n");

    // q = 1 at a degree-3 vertex breaks 2q >= d.
    s.file(
        "weak.txt",
        "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n0 0 1\n1 0 3\n2 0 3\n3 0 3\n",
    );
    assert_eq!(s.run(&["orient", "boundary", "--graph", "weak.txt"]).status.code(), Some(3));
    assert_eq!(s.run(&["orient", "pq", "--graph", "weak.txt"]).status.code(), Some(0));

    s.file("loop.txt", "2 1\n0 0\n");
    let o = s.run(&["orient", "balanced", "--graph", "loop.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    s.file("odd.txt", K3);
    assert_eq!(s.run(&["factor", "halves", "--graph", "odd.txt"]).status.code(), Some(1));
}

#[test]
fn json_output_fields() {
    let s = Sandbox::new();
    s.file("k3.txt", &format!("{K3}0 0 2\n1 0 2\n2 0 2\n"));
    let o = s.run(&["orient", "boundary", "--graph", "k3.txt", "--json", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "feasible");
    assert_eq!(v["degrees"].as_array().unwrap().len(), 3);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["trace"].is_array());
}

#[test]
fn generator_is_deterministic_and_round_trips() {
    let s = Sandbox::new();
    for regime in ["theorem", "corollary", "factor"] {
        let args = ["gen", "--n", "30", "--prob", "0.2", "--regime", regime, "--seed", "11"];
        let a = s.run(&args);
        let b = s.run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        s.file("inst.txt", &stdout(&a));
        let (solve, claim): (&[&str], &str) = match regime {
            "theorem" => (&["orient", "boundary"], "boundary"),
            "corollary" => (&["orient", "corollary"], "boundary"),
            _ => (&["factor", "boundary"], "factor-boundary"),
        };
        let mut args = solve.to_vec();
        args.extend(["--graph", "inst.txt", "--out", "res.txt"]);
        let o = s.run(&args);
        assert_eq!(o.status.code(), Some(0), "{regime}: {}", stderr(&o));
        let o = s.run(&["verify", "--graph", "inst.txt", "--result", "res.txt", "--claim", claim]);
        assert_eq!(o.status.code(), Some(0), "{regime}: {}", stdout(&o));
    }
}

#[test]
fn factor_commands() {
    let s = Sandbox::new();
    // C4 with a perfect matching requested on every vertex.
    s.file("c4.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n0 1 1\n1 1 1\n2 1 1\n3 1 1\n");
    let o = s.run(&["factor", "gf", "--graph", "c4.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    s.file("f.txt", &stdout(&o));
    let o = s.run(&["verify", "--graph", "c4.txt", "--result", "f.txt", "--claim", "gf"]);
    assert_eq!(o.status.code(), Some(0));
    let o = s.run(&["factor", "halves", "--graph", "c4.txt"]);
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(" 1")).count(), 2);
}

#[test]
fn cross_validate_reports_agreement() {
    let s = Sandbox::new();
    let o = s.run(&["gen", "--n", "7", "--prob", "0.5", "--seed", "3", "--out", "i.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let o = s.run(&["cross-validate", "--graph", "i.txt", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agreement"], true);
    assert!(v["enumeration"].is_boolean());
}
