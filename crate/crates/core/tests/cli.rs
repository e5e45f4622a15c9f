use std::path::Path;
use std::process::{Command, Output};

fn bin(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unital-iso"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn construct_verify_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&bin(d, &["construct", "hermitian", "--q", "3", "-o", "h3.json"])), 0);
    assert_eq!(code(&bin(d, &["construct", "order2", "-o", "u2.json"])), 0);
    let out = bin(d, &["bounds", "h3.json", "--exact-arc", "--out", "h3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&bin(d, &["verify", "h3/certificate.json", "h3.json"])), 0);

    // wrong design
    assert_eq!(code(&bin(d, &["verify", "h3/certificate.json", "u2.json"])), 1);

    // claimed value edited
    let cert = std::fs::read_to_string(d.join("h3/certificate.json")).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&cert).unwrap();
    json["claimed"]["num"] = serde_json::json!(21);
    std::fs::write(d.join("bad.json"), serde_json::to_string(&json).unwrap()).unwrap();
    assert_eq!(code(&bin(d, &["verify", "bad.json", "h3.json"])), 1);

    // a witness point removed
    let mut json: serde_json::Value = serde_json::from_str(&cert).unwrap();
    json["witness"]["points"].as_array_mut().unwrap().pop();
    std::fs::write(d.join("bad2.json"), serde_json::to_string(&json).unwrap()).unwrap();
    assert_eq!(code(&bin(d, &["verify", "bad2.json", "h3.json"])), 1);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&bin(d, &["construct", "hermitian", "--q", "6"])), 2);
    assert_eq!(code(&bin(d, &["construct", "bm", "--q", "3", "--alpha", "0", "--beta", "0"])), 2);
    assert_eq!(code(&bin(d, &["verify", "missing.json", "missing.json"])), 2);
    std::fs::write(d.join("bad.json"), r#"{"v": 4, "blocks": [[0, 1], [1, 2]]}"#).unwrap();
    assert_eq!(code(&bin(d, &["construct", "import", "bad.json"])), 2);
}

#[test]
fn work_guard_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&bin(d, &["construct", "hermitian", "--q", "3", "-o", "h3.json"])), 0);
    assert_eq!(code(&bin(d, &["iso", "h3.json", "--brute"])), 3);
}

#[test]
fn manifests_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<_> = ["1", "4"]
        .iter()
        .map(|t| {
            let d = dir.path().join(format!("t{t}"));
            std::fs::create_dir(&d).unwrap();
            assert_eq!(code(&bin(&d, &["construct", "hermitian", "--q", "3", "-o", "h3.json"])), 0);
            let args = ["--threads", t, "bounds", "h3.json", "--seed", "7", "--out", "b", "--manifest", "bm.json"];
            assert_eq!(code(&bin(&d, &args)), 0);
            let args = ["--threads", t, "iso", "h3.json", "--heuristic", "--seed", "7", "--budget", "8", "-o", "iso.json", "--manifest", "im.json"];
            assert_eq!(code(&bin(&d, &args)), 0);
            d
        })
        .collect();
    for f in ["h3.json", "b/certificate.json", "b/report.json", "bm.json", "iso.json", "im.json"] {
        assert_eq!(std::fs::read(runs[0].join(f)).unwrap(), std::fs::read(runs[1].join(f)).unwrap(), "{f}");
    }
    assert_eq!(code(&bin(&runs[0], &["replay", "bm.json"])), 0);
    assert_eq!(code(&bin(&runs[1], &["--threads", "2", "replay", "im.json"])), 0);
}
