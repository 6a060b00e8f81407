//! End-to-end tests running the real binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn kb_path(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    root.join("../../kb")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn crank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn parse_echoes_the_base() {
    let out = crank(&["parse", &kb_path("penguin.ckb")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("signature: p, b, f, w, a  (32 worlds)"));
    assert!(text.contains("r3: (!f | p)"));
}

#[test]
fn parse_error_exits_2() {
    let out = crank(&["parse", "/nonexistent.ckb"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ckb");
    std::fs::write(&bad, "signature: a, b\nr1: (b | a, !a)\n").unwrap();
    let out = crank(&["parse", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structures_text_matches_the_table() {
    let out = crank(&["structures", &kb_path("nonmincore.ckb")]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "\
world   structure
abc     a1+ a2+ a3+
ab!c    a1+ a2- a3-
a!bc    a1- a3+
a!b!c   a1- a3-
!abc    a2+
!ab!c   a2-
!a!bc   1
!a!b!c  1
";
    assert_eq!(stdout_of(&out), expected);
}

#[test]
fn json_output_is_byte_stable() {
    for args in [
        vec!["structures", &kb_path("penguin.ckb"), "--json"],
        vec!["compare", &kb_path("penguin.ckb"), "--json"],
        vec!["crep", &kb_path("swedes.ckb"), "--json"],
    ] {
        let first = crank(&args);
        let second = crank(&args);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(first.status.code(), Some(0));
    }
}

#[test]
fn kernel_elements_are_reported() {
    let out = crank(&["kernel", &kb_path("nonmincore.ckb"), "--top", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["include_top"], serde_json::json!(true));
    assert!(!v["basis"].as_array().unwrap().is_empty());
}

#[test]
fn zrank_and_zstar_emit_rank_vectors() {
    let out = crank(&["zrank", &kb_path("penguin.ckb"), "--json"]);
    assert_eq!(json_of(&out)["Z"], serde_json::json!([0, 1, 1, 0, 0]));

    let out = crank(&["zstar", &kb_path("penguin.ckb"), "--json"]);
    assert_eq!(json_of(&out)["Zstar"], serde_json::json!([1, 2, 2, 1, 1]));
}

#[test]
fn zstar_rejects_non_minimal_core_bases() {
    let out = crank(&["zstar", &kb_path("nonmincore.ckb"), "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert_eq!(v["minimal_core"], serde_json::json!(false));
    assert_eq!(v["witness"], serde_json::json!("r3"));
}

#[test]
fn inconsistent_base_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let clash = dir.path().join("clash.ckb");
    std::fs::write(&clash, "signature: a, b\nr1: (b | a)\nr2: (!b | a)\n").unwrap();
    let out = crank(&["zrank", clash.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = crank(&["crep", clash.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn query_exit_codes_follow_the_verdict() {
    let kb = kb_path("penguin.ckb");
    let accepted = crank(&["query", &kb, "(w | p,b,!f,a)", "--engine", "crep"]);
    assert_eq!(accepted.status.code(), Some(0));
    let rejected = crank(&["query", &kb, "(w | p,b,!f,a)", "--engine", "z"]);
    assert_eq!(rejected.status.code(), Some(1));
    let garbled = crank(&["query", &kb, "(w | p,"]);
    assert_eq!(garbled.status.code(), Some(2));
}

#[test]
fn ocf_json_pipes_between_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let kz = dir.path().join("kz.json");

    // zrank --ocf produces the system-Z ranking as OCF JSON
    let out = crank(&["zrank", &kb_path("penguin.ckb"), "--ocf"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&kz, &out.stdout).unwrap();

    // which query consumes directly
    let out = crank(&["query", kz.to_str().unwrap(), "(w | p,b,!f,a)"]);
    assert_eq!(out.status.code(), Some(1));

    // and check-indifference rejects with a kernel witness
    let out = crank(&[
        "check-indifference",
        kz.to_str().unwrap(),
        &kb_path("penguin.ckb"),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["indifferent"], serde_json::json!(false));
    assert_eq!(v["witness"]["kind"], serde_json::json!("kernel_element"));
}

#[test]
fn revise_accepts_a_prior_and_reports_constants() {
    let dir = tempfile::tempdir().unwrap();
    let prior = dir.path().join("prior.json");
    // uniform prior over the swedes signature
    let out = crank(&[
        "crep",
        &kb_path("swedes.ckb"),
        "--mode",
        "from_z_ranks",
        "--json",
    ]);
    let v = json_of(&out);
    std::fs::write(&prior, serde_json::to_string(&v["ocf"]).unwrap()).unwrap();

    let out = crank(&[
        "revise",
        &kb_path("swedes.ckb"),
        "--prior",
        prior.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    // the prior already accepts both rules, so no shift is needed
    assert_eq!(v["constants"]["minus"], serde_json::json!([0, 0]));
}

#[test]
fn check_indifference_accepts_the_additive_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let ocf = dir.path().join("crep.json");
    let out = crank(&["crep", &kb_path("penguin.ckb"), "--json"]);
    let v = json_of(&out);
    std::fs::write(&ocf, serde_json::to_string(&v["ocf"]).unwrap()).unwrap();

    let out = crank(&[
        "check-indifference",
        ocf.to_str().unwrap(),
        &kb_path("penguin.ckb"),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["indifferent"], serde_json::json!(true));
    assert_eq!(v["constants"]["minus"], serde_json::json!([1, 2, 2, 1, 1]));
}

#[test]
fn postulates_subcommand_reports_per_postulate() {
    let dir = tempfile::tempdir().unwrap();
    let prior = dir.path().join("prior.json");
    let posterior = dir.path().join("posterior.json");

    let sig = r#"{"signature":["a","b","c"],"ranks":["#;
    let uniform: String = (0..8)
        .map(|i| {
            let w = [
                "abc", "ab!c", "a!bc", "a!b!c", "!abc", "!ab!c", "!a!bc", "!a!b!c",
            ][i];
            format!("{{\"world\":\"{w}\",\"rank\":0}}")
        })
        .collect::<Vec<_>>()
        .join(",");
    std::fs::write(&prior, format!("{sig}{uniform}]}}")).unwrap();

    let kb = dir.path().join("single.ckb");
    std::fs::write(&kb, "signature: a, b, c\nr1: (b | a)\n").unwrap();
    let out = crank(&["crep", kb.to_str().unwrap(), "--json"]);
    let v = json_of(&out);
    std::fs::write(&posterior, serde_json::to_string(&v["ocf"]).unwrap()).unwrap();

    let out = crank(&[
        "postulates",
        "--prior",
        prior.to_str().unwrap(),
        "--posterior",
        posterior.to_str().unwrap(),
        "--rev",
        "(b | a)",
        "--max-literals",
        "2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    for p in ["CR5", "CR6", "CR7"] {
        assert_eq!(v[p]["holds"], serde_json::json!(true), "{p}");
    }
}

#[test]
fn text_and_json_encode_the_same_numbers() {
    let kb = kb_path("penguin.ckb");
    let text = stdout_of(&crank(&["compare", &kb]));
    let v = json_of(&crank(&["compare", &kb, "--json"]));
    let worlds = v["worlds"].as_array().unwrap();
    let kz = v["kappa_z"].as_array().unwrap();
    let kzc = v["kappa_z_c"].as_array().unwrap();
    let kstar = v["kappa_star"].as_array().unwrap();
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines.len(), worlds.len());
    for (i, line) in lines.iter().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[0], worlds[i].as_str().unwrap());
        assert_eq!(cols[1], kz[i].to_string());
        assert_eq!(cols[2], kzc[i].to_string());
        assert_eq!(cols[3], kstar[i].to_string());
    }
}

#[test]
fn max_atoms_flag_caps_the_signature() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("two.ckb");
    std::fs::write(&kb, "signature: a, b\nr1: (b | a)\n").unwrap();
    let out = crank(&["parse", kb.to_str().unwrap(), "--max-atoms", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = crank(&["parse", kb.to_str().unwrap(), "--max-atoms", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn stdin_is_accepted_for_kb_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_crank"))
        .args(["zrank", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"signature: a, b\nr1: (b | a)\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["Z"], serde_json::json!([0]));
}
