//! End-to-end tests of the binary: golden JSON against the regression
//! corpus, determinism across thread counts, exit codes, and parser
//! robustness (round trips and byte noise).

use std::io::Write;
use std::process::Command;

use diffreg_cli::parse::{parse_system, print_system};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diffreg"))
}

fn write_system(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("diffreg-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

const PDE: &str = "indep x y;\ndep u;\neq u*u_x - y*u - y^2;\neq y*u_y - u;\n";
const GATHER: &str = "indep x;\ndep u;\neq D(u,x)^3 + u*D(u,x) - x;\n";

#[test]
fn regdecomp_json_matches_golden() {
    let path = write_system("pde.sys", PDE);
    let out = bin()
        .args(["regdecomp", path.to_str().unwrap(), "--order", "1", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let got = String::from_utf8(out.stdout).unwrap();
    let golden = include_str!("golden/pde_regdecomp.json");
    assert_eq!(got, golden, "JSON report drifted from the golden file");
}

#[test]
fn json_report_has_the_pinned_field_set() {
    let path = write_system("pde2.sys", PDE);
    let out = bin()
        .args(["regdecomp", path.to_str().unwrap(), "--order", "1", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.get("order").is_some());
    let primes = v.get("prime_components").unwrap().as_array().unwrap();
    assert!(!primes.is_empty());
    for p in primes {
        for key in ["generators", "dimension", "flags", "regularity_components"] {
            assert!(p.get(key).is_some(), "missing {key}");
        }
        for c in p["regularity_components"].as_array().unwrap() {
            for key in [
                "equations",
                "inequations",
                "classification",
                "vessiot_dim",
                "symbol_dim",
                "complement_dim",
                "N_a",
                "N_b",
                "N_cd",
                "generic",
            ] {
                assert!(c.get(key).is_some(), "missing {key}");
            }
        }
    }
}

#[test]
fn output_is_byte_identical_across_job_counts() {
    let path = write_system("pde3.sys", PDE);
    let run = |jobs: &str| {
        bin()
            .args([
                "--jobs",
                jobs,
                "regdecomp",
                path.to_str().unwrap(),
                "--order",
                "1",
                "--json",
            ])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical for any --jobs");
    // and across repeated runs
    let c = run("4");
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn order_too_small_exits_with_code_two() {
    let path = write_system("pde4.sys", PDE);
    let out = bin()
        .args(["regdecomp", path.to_str().unwrap(), "--order", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("too small"), "{err}");
}

#[test]
fn unknown_identifier_exits_with_code_one() {
    let path = write_system("bad.sys", "indep x; dep u; eq v + 1;");
    let out = bin()
        .args(["regdecomp", path.to_str().unwrap(), "--order", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown identifier"));
}

#[test]
fn classify_point_gather_goldens() {
    let path = write_system("gather.sys", GATHER);
    let run = |pt: &str| {
        let out = bin()
            .args([
                "classify-point",
                path.to_str().unwrap(),
                "--order",
                "1",
                "--point",
                pt,
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap().trim().to_string()
    };
    assert_eq!(run("x=-2, u=-3, u'=1"), "irregular_singular, purely=true");
    assert_eq!(run("x=-16, u=-12, u'=2"), "regular_singular");
    assert_eq!(run("x=2, u=1, u'=1"), "regular");
}

#[test]
fn plotdata_has_csv_header() {
    let path = write_system("gather2.sys", GATHER);
    let out = bin()
        .args(["plotdata", path.to_str().unwrap(), "--order", "1", "--count", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,u,up,vx,vu,vup"));
    let mut rows = 0;
    for line in lines {
        assert_eq!(line.split(',').count(), 6, "six CSV columns: {line}");
        rows += 1;
    }
    assert!(rows > 0);
}

#[test]
fn parser_round_trips_random_prints() {
    // randomized well-formed systems print and reparse structurally equal
    let mut seed = 0x1234u64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    for _ in 0..50 {
        let n = 1 + (next() % 2) as usize;
        let mut text = String::new();
        text.push_str(if n == 1 { "indep x;\n" } else { "indep x y;\n" });
        text.push_str("dep u;\n");
        for _ in 0..(1 + next() % 2) {
            let mut terms = Vec::new();
            for _ in 0..(1 + next() % 3) {
                let c = (next() % 7) as i64 - 3;
                let var = match next() % 3 {
                    0 => "x".to_string(),
                    1 => "u".to_string(),
                    _ => {
                        if n == 1 {
                            "u[1]".to_string()
                        } else {
                            "u[1,0]".to_string()
                        }
                    }
                };
                terms.push(format!("{c}*{var}^{}", 1 + next() % 2));
            }
            text.push_str(&format!("eq {};\n", terms.join(" + ")));
        }
        let parsed = parse_system(&text).unwrap();
        let printed = print_system(&parsed);
        let reparsed = parse_system(&printed)
            .unwrap_or_else(|e| panic!("printed form must reparse: {e}\n{printed}"));
        assert_eq!(parsed, reparsed, "round trip changed the system:\n{printed}");
    }
}

#[test]
fn parser_never_panics_on_byte_noise() {
    let mut seed = 0x77u64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    let alphabet: Vec<char> =
        "abxyu_ ;=+-*/^()[],0123456789'#\n\u{e9}".chars().collect();
    for _ in 0..500 {
        let len = (next() % 60) as usize;
        let text: String =
            (0..len).map(|_| alphabet[(next() % alphabet.len() as u64) as usize]).collect();
        // must return Ok or a positioned error, never panic
        match parse_system(&text) {
            Ok(_) => {}
            Err(e) => {
                assert!(e.line >= 1 && e.col >= 1);
            }
        }
    }
}
