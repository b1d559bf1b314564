use std::process::{Command, Output};

fn jacgb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacgb"))
        .args(args)
        .env_remove("JACGB_THREADS")
        .output()
        .expect("failed to run jacgb")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn table_prints_five_entries() {
    let out = jacgb(&["table"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "~E_1 = C_{-3} + C_{-1}^2\n\
         ~E_2 = C_{-4} + 2*C_{-1}*C_{-2}\n\
         ~E_3 = C_{-5} + C_{-2}^2 - 5/3*C_{-1}^3\n\
         ~E_4 = C_{-6} - 5*C_{-1}^2*C_{-2}\n\
         ~E_5 = C_{-7} - 5*C_{-1}*C_{-2}^2 + 10/3*C_{-1}^4\n"
    );
}

#[test]
fn excluded_m_exits_2() {
    for m in ["6", "3", "2"] {
        let out = jacgb(&["system", "--m", m]);
        assert_eq!(out.status.code(), Some(2), "m = {m}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("3∤m>3"));
    }
}

#[test]
fn solve_m4_has_five_branches() {
    let out = jacgb(&["solve", "--m", "4", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["analysis"]["branches"].as_array().unwrap().len(), 5);
    assert_eq!(doc["m"], 4);
}

#[test]
fn solve_is_thread_independent() {
    let a = jacgb(&["solve", "--m", "8", "--threads", "1"]);
    let b = jacgb(&["solve", "--m", "8", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn threads_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_jacgb"))
        .args(["verify", "--m", "5"])
        .env("JACGB_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        out.stdout,
        jacgb(&["verify", "--m", "5", "--threads", "3"]).stdout
    );
}

#[test]
fn verify_text_passes() {
    let out = jacgb(&["verify", "--m", "7", "--text", "--y-sample", "-2,0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().last() == Some("PASS"), "{text}");
    assert!(text.contains("y = -2.000000000000+0.500000000000i"));
}

#[test]
fn check_gb_full() {
    let out = jacgb(&["check-gb", "--m", "10", "--full", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["system"]["is_basis"], true);
    assert_eq!(doc["system"]["pairs_skipped"], 0);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("jacgb-groebner-{}.json", std::process::id()));
    let out = jacgb(&["groebner", "--m", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(doc["R"]["6"]["terms"][0]["c"], "-5/1");
}

#[test]
fn bad_arguments() {
    assert_eq!(
        jacgb(&["solve", "--m", "4", "--tol", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        jacgb(&["solve", "--m", "4", "--y-sample", "0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(jacgb(&["solve"]).status.code(), Some(2));
    assert!(!jacgb(&["solve", "--m", "4", "--json", "--text"])
        .status
        .success());
}
