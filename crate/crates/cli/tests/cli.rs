use std::process::{Command, Output};

fn calderon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calderon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// (xi, |γ|) rows of a single-level CSV profile.
fn rows(csv: &str) -> Vec<(f64, f64)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[3])
        })
        .collect()
}

#[test]
fn oscexp_profile_row_at_one() {
    let o = calderon(&["gamma", "--symbol", "oscexp()", "--k", "0"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 201);
    let (xi, m) = r.iter().copied().min_by(|a, b| (a.0 - 1.0).abs().total_cmp(&(b.0 - 1.0).abs())).unwrap();
    assert!((xi - 1.0).abs() < 1e-12 && (m - 0.5f64.sqrt()).abs() < 1e-12, "{xi} {m}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("sup="));
}

#[test]
fn constant_profile_is_one() {
    let o = calderon(&["gamma", "--symbol", "const(1)", "--k", "7"]);
    assert!(rows(&stdout(&o)).iter().all(|&(_, m)| (m - 1.0).abs() < 1e-12));
}

#[test]
fn power_profile_at_half() {
    let o = calderon(&["gamma", "--symbol", "vpow(p=0.5)", "--k", "0", "--xi-min", "0.5", "--xi-max", "2", "--points", "3"]);
    let r = rows(&stdout(&o));
    assert!((r[0].1 - 0.886_226_925_452_758).abs() < 1e-12, "{r:?}");
}

#[test]
fn level_ranges_add_a_column() {
    let o = calderon(&["gamma", "--symbol", "oscexp()", "--k-range", "0..2", "--points", "11"]);
    let text = stdout(&o);
    assert!(text.starts_with("k,xi,re,im,abs"));
    assert_eq!(text.lines().count(), 1 + 3 * 11);
}

#[test]
fn classification_examples() {
    for (sym, verdict) in [
        ("logpow(alpha=1,beta=0)", "unbounded_all_k"),
        ("sininvpow(alpha=2,beta=0.5)", "bounded_all_k_with_zero_limits"),
        ("const(0)", "bounded_all_k"),
    ] {
        let o = calderon(&["classify", "--symbol", sym]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["verdict"], verdict, "{sym}");
        if sym == "const(0)" {
            assert_eq!(v["norm"], 0.0);
        }
    }
}

#[test]
fn verification_examples() {
    let o = calderon(&["verify", "--suite", "equivalence", "--symbol", "oscexp()", "--k", "2"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["checks"][0]["value"].as_f64().unwrap() <= 3e-2);
    assert_eq!(report["passed"], true);

    let o = calderon(&["verify", "--suite", "decay", "--alpha", "1", "--beta", "0.5", "--k", "1"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["decay"][0]["slope"].as_f64().unwrap() >= 0.425);
}

#[test]
fn out_file_is_deterministic_and_summary_goes_to_stdout() {
    let dir = std::env::temp_dir();
    let (a, b) = (dir.join("calderon_cli_a.csv"), dir.join("calderon_cli_b.csv"));
    for path in [&a, &b] {
        let o = calderon(&["gamma", "--symbol", "sininvpow(alpha=1,beta=0.5)", "--k", "1", "--points", "31", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("limit_at_zero="));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty() && x == y);
    let _ = (std::fs::remove_file(a), std::fs::remove_file(b));
}

#[test]
fn errors_exit_nonzero() {
    let o = calderon(&["gamma", "--symbol", "sininvpow(alpha=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
    let o = calderon(&["classify", "--symbol", "oscexp()", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = calderon(&["gamma", "--symbol", "vpow(p=-1)"]);
    assert!(!o.status.success());
}
