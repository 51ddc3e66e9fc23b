use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn corpus(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("asctool").chain(args.iter().copied());
    let code = asctool::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, v)
}

#[test]
fn asc_check_on_monadic_s2() {
    let spec = corpus("specs/monadic-s2.json");
    let (code, out, _) = run(&["asc", "check", "--spec", &spec]);
    assert_eq!(code, 0);
    assert!(out.starts_with("HOLDS"), "{out}");
    let (code, out, _) = run(&["asc", "sc-check", "--spec", &spec]);
    assert_eq!(code, 1);
    assert!(out.starts_with("FAILS"), "{out}");
    assert!(out.contains("no_hom_to_retract"));
}

#[test]
fn hom_search_exit_codes() {
    let (code, out, _) = run(&["alg", "hom", &corpus("s2.json"), &corpus("two.json")]);
    assert_eq!((code, out.trim()), (1, "no homomorphism"));
    let (code, _, _) = run(&["alg", "hom", &corpus("two.json"), &corpus("s2.json")]);
    assert_eq!(code, 0);
    let (code, v) = json(&["alg", "hom", "--all", "catalog:s2", "catalog:s2"]);
    assert_eq!(code, 0);
    assert_eq!(v["homomorphisms"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(run(&["frobnicate"]).0, 64);
    assert_eq!(run(&["alg", "validate", "catalog:nope"]).0, 64);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"size": 2}"#).unwrap();
    let (code, _, err) = run(&["alg", "validate", bad.to_str().unwrap()]);
    assert_eq!(code, 65);
    assert!(err.contains("parse error"), "{err}");
    let (code, _, err) = run(&["alg", "check-id", "catalog:two", "(= (meet v0 v1)"]);
    assert_eq!(code, 65, "{err}");
    assert_eq!(
        run(&["--rank-max", "0", "asc", "check", "--spec", "catalog:s2"]).0,
        64
    );
}

#[test]
fn caps_give_inconclusive() {
    let (code, _, err) = run(&[
        "--rank-max",
        "1",
        "var",
        "free",
        "--spec",
        "catalog:two",
        "--rank",
        "2",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("INCONCLUSIVE"), "{err}");
    let (code, _, err) = run(&[
        "--size-max",
        "10",
        "var",
        "free",
        "--spec",
        "catalog:s2",
        "--rank",
        "1",
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn saved_verdicts_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let spec = corpus("specs/monadic-s2.json");
    for (name, args) in [
        ("asc.json", vec!["asc", "check", "--spec", spec.as_str()]),
        ("sc.json", vec!["asc", "sc-check", "--spec", spec.as_str()]),
        ("m3b.json", vec!["asc", "check", "--spec", "catalog:m3b"]),
        (
            "split.json",
            vec!["asc", "splitting", "--spec", spec.as_str(), "--with-asc"],
        ),
        (
            "heyting.json",
            vec!["--rank-max", "1", "asc", "non-embed", "heyting-2sq"],
        ),
    ] {
        let mut full = vec!["--json"];
        full.extend(args);
        let (_, out, _) = run(&full);
        let path = dir.path().join(name);
        std::fs::write(&path, &out).unwrap();
        let (code, text, err) = run(&["--verify", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}: {text}{err}");
        assert!(text.starts_with("VERIFIED"));
        let (code, _, _) = run(&["asc", "verify", path.to_str().unwrap()]);
        assert_eq!(code, 0);
    }

    let path = dir.path().join("asc.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for c in v["certificates"].as_array_mut().unwrap() {
        if c["kind"] == "embedding" {
            c["map"].as_array_mut().unwrap().swap(0, 1);
        }
    }
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, text, _) = run(&["--verify", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(text.starts_with("REJECTED"), "{text}");

    std::fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["--verify", path.to_str().unwrap()]).0, 65);
}

/// Text and JSON reports carry the same status and exit code.
#[test]
fn text_and_json_agree() {
    let spec = corpus("specs/monadic-s2.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["asc", "check", "--spec", &spec],
        vec!["asc", "sc-check", "--spec", &spec],
        vec!["asc", "check", "--spec", "catalog:m3b"],
        vec!["asc", "splitting", "--spec", "catalog:four"],
        vec![
            "--rank-max",
            "1",
            "asc",
            "classify",
            "--spec",
            "catalog:s2",
            "--qi",
            "(qi (vars 1) (prem (= (meet (dia v0) (dia (neg v0))) one)) (concl (= zero one)))",
        ],
        vec![
            "asc",
            "free-decomp",
            "--mckinsey",
            "catalog:four",
            "--monadic",
            "catalog:s2",
            "--rank",
            "1",
        ],
        vec!["asc", "ascc", "--spec", "catalog:s2", "catalog:s2"],
    ];
    for args in cases {
        let (code, text, _) = run(&args);
        let (jcode, v) = json(&args);
        assert_eq!(code, jcode, "{args:?}");
        let status = v["status"].as_str().unwrap();
        assert!(text.starts_with(status), "{args:?}: {text} vs {status}");
        let (_, again) = json(&args);
        assert_eq!(v, again, "{args:?}: JSON not stable");
    }
}

#[test]
fn citations_only_with_flag() {
    let (_, plain, _) = run(&["asc", "sc-check", "--spec", "catalog:two-lattice"]);
    let (_, cited, _) = run(&["--cite", "asc", "sc-check", "--spec", "catalog:two-lattice"]);
    assert!(!plain.contains("citations:"));
    assert!(cited.contains("citations:"));
    assert!(cited.contains("distributive law"));
}

#[test]
fn algebra_commands() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("four-sq.json");
    let sq_s = sq.to_str().unwrap();
    assert_eq!(
        run(&["alg", "product", "catalog:four", "catalog:four", "-o", sq_s]).0,
        0
    );
    let (code, v) = json(&["cong", "list", sq_s]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(9)));
    assert_eq!(run(&["cong", "si", sq_s]).0, 1);
    assert_eq!(run(&["cong", "si", "catalog:four"]).0, 0);
    assert_eq!(run(&["cong", "simple", "catalog:s2"]).0, 0);
    let (_, v) = json(&["alg", "decompose", sq_s]);
    assert_eq!(v["factor_sizes"], serde_json::json!([4, 4]));

    let q = dir.path().join("q.json");
    let (code, _, err) = run(&[
        "alg",
        "quotient",
        sq_s,
        "--pair",
        "0,1",
        "-o",
        q.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(run(&["alg", "validate", q.to_str().unwrap()]).0, 0);

    assert_eq!(
        run(&["alg", "check-id", "catalog:four", "(= (mu v0) one)"]).0,
        0
    );
    assert_eq!(
        run(&["alg", "check-id", "catalog:s2", "(= (mu v0) one)"]).0,
        1
    );
    assert_eq!(
        run(&[
            "alg",
            "check-qi",
            "catalog:s2",
            "(qi (vars 1) (prem (= (dia v0) v0)) (concl (= (box v0) v0)))"
        ])
        .0,
        0
    );
    assert_eq!(run(&["alg", "embed", "catalog:two", "catalog:s2"]).0, 0);
    assert_eq!(run(&["alg", "embed", "catalog:four", "catalog:s2"]).0, 1);
    assert_eq!(run(&["alg", "iso", "catalog:s1", "catalog:two"]).0, 0);
}

#[test]
fn variety_and_catalog_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = json(&["var", "free", "--spec", "catalog:s2", "--rank", "1"]);
    assert_eq!((code, v["size"].as_u64()), (0, Some(16)));
    let f = dir.path().join("f.json");
    assert_eq!(
        run(&[
            "var",
            "free",
            "--spec",
            "catalog:s2",
            "--rank",
            "1",
            "-o",
            f.to_str().unwrap()
        ])
        .0,
        0
    );
    assert_eq!(
        run(&["var", "member", "--spec", "catalog:s2", f.to_str().unwrap()]).0,
        0
    );
    assert_eq!(
        run(&["var", "member", "--spec", "catalog:s2", "catalog:four"]).0,
        1
    );
    let (_, v) = json(&["var", "si-list", "--spec", "catalog:s2"]);
    assert_eq!(v["members"].as_array().unwrap().len(), 2);
    let (code, v) = json(&[
        "var",
        "present",
        "--spec",
        "catalog:heyting-lev2",
        "--rank",
        "1",
        "--rel",
        "(= (join v0 (neg v0)) one)",
    ]);
    assert_eq!((code, v["size"].as_u64()), (0, Some(4)));
    assert_eq!(
        run(&["var", "unify", "--spec", "catalog:s2", "catalog:s2"]).0,
        1
    );
    assert_eq!(
        run(&["var", "unify", "--spec", "catalog:s2", "catalog:two"]).0,
        0
    );
    assert_eq!(
        run(&["var", "in-qf", "--spec", "catalog:s2", "catalog:two"]).0,
        0
    );

    let (_, v) = json(&["catalog", "list"]);
    assert!(v["names"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n == "m-closure"));
    let lev = dir.path().join("lev2.json");
    assert_eq!(
        run(&["catalog", "poset-lev", "2", "-o", lev.to_str().unwrap()]).0,
        0
    );
    let (_, v) = json(&["catalog", "complex", lev.to_str().unwrap()]);
    assert_eq!(v["size"].as_u64(), Some(8));
    let (_, v) = json(&["catalog", "upset", lev.to_str().unwrap()]);
    assert_eq!(v["size"].as_u64(), Some(5));
    let b = dir.path().join("b.json");
    assert_eq!(
        run(&[
            "catalog",
            "complex",
            lev.to_str().unwrap(),
            "-o",
            b.to_str().unwrap()
        ])
        .0,
        0
    );
    let (_, v) = json(&["catalog", "open", b.to_str().unwrap()]);
    assert_eq!(v["size"].as_u64(), Some(5));
    let (_, v) = json(&["catalog", "s", "3"]);
    assert_eq!(v["size"].as_u64(), Some(8));
    let (code, out, _) = run(&["catalog", "four"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"signature\""));
    assert_eq!(run(&["catalog", "classify", "catalog:m-closure"]).0, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_asctool");
    let spec = corpus("specs/monadic-s2.json");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["asc", "check", "--spec", &spec]), Some(0));
    assert_eq!(status(&["asc", "sc-check", "--spec", &spec]), Some(1));
    assert_eq!(
        status(&["alg", "hom", &corpus("s2.json"), &corpus("two.json")]),
        Some(1)
    );
    assert_eq!(status(&["nope"]), Some(64));
    assert_eq!(status(&["--help"]), Some(0));
    let out = Command::new(bin)
        .args(["asc", "check", "--spec", "catalog:s2"])
        .env("ASCTOOL_RANK_MAX", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}
