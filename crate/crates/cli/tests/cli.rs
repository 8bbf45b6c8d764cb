use std::path::PathBuf;
use std::process::{Command, Output};

fn atk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atk")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("atk-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_solve_then_td() {
    let d = scratch("flow");
    let gr = d.join("g.gr");
    let td = d.join("g.td");
    let out = atk(&["gen", "--n", "40", "--k", "2", "--p", "0.8", "--seed", "3", "--out", s(&gr)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(td.exists());

    let rep = d.join("r.json");
    let out = atk(&[
        "solve", "--problem", "vc", "--eps", "0.5", "--graph", s(&gr), "--td", s(&td), "--oracle", "exact-dp", "--out", s(&rep),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(json["rows"][0]["ratio"].as_f64().unwrap() <= 1.5);
    assert!(rep.with_extension("csv").exists());

    let out = atk(&["solve", "--problem", "vc", "--engine", "friendly", "--eps", "1", "--graph", s(&gr)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["rows"][0]["td_source"], "heuristic");

    let out = atk(&["td", "validate", "--graph", s(&gr), "--td", s(&td)]);
    assert!(out.status.success());
    let out = atk(&["td", "nice", "--graph", s(&gr), "--td", s(&td)]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("s td"));
    let out = atk(&["td", "subconnected", "--graph", s(&gr), "--td", s(&td)]);
    assert!(out.status.success() || out.status.code() == Some(1));
    std::fs::remove_dir_all(d).ok();
}

#[test]
fn exit_codes() {
    let d = scratch("codes");
    let gr = d.join("p3.gr");
    std::fs::write(&gr, "p tw 3 2\n1 2\n2 3\n").unwrap();
    let bad_td = d.join("bad.td");
    std::fs::write(&bad_td, "s td 2 1 3\nb 1 1\nb 2 3\n1 2\n").unwrap();
    let out = atk(&["td", "validate", "--graph", s(&gr), "--td", s(&bad_td)]);
    assert_eq!(out.status.code(), Some(1));
    let broken = d.join("broken.gr");
    std::fs::write(&broken, "1 2\n").unwrap();
    let out = atk(&["solve", "--problem", "vc", "--eps", "1", "--graph", s(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let out = atk(&["solve", "--problem", "vc", "--eps", "3", "--graph", s(&gr)]);
    assert_eq!(out.status.code(), Some(1));
    let out = atk(&["solve", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(atk(&["--help"]).status.success());
    std::fs::remove_dir_all(d).ok();
}

#[test]
fn bench_from_spec() {
    let d = scratch("bench");
    let spec = d.join("spec.json");
    let out = d.join("is.json");
    std::fs::write(
        &spec,
        format!(
            r#"{{"problem":"is","epsilons":[0.5,1.0],"oracle":"exact-dp","out":{:?},
                "family":{{"generator":{{"n":80,"k":2,"p":0.8,"seed":5,"repetitions":2}}}}}}"#,
            out
        ),
    )
    .unwrap();
    let res = atk(&["bench", s(&spec)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
    std::fs::remove_dir_all(d).ok();
}
