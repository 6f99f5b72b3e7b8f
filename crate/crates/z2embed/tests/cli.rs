//! End-to-end tests of the command-line interface: exit-code protocol,
//! certificate round trips, and byte-level seed reproducibility.

use std::process::{Command, Output};

fn z2e(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2e"))
        .args(args)
        .output()
        .expect("spawn z2e")
}

#[test]
fn dims_matches_formula() {
    let out = z2e(&["dims", "--complex", "join:4,4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["full"], 25);
    assert_eq!(v["symmetric"], 13);
    // Human-readable form without the flag.
    let out = z2e(&["dims", "--complex", "join:4,4"]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "full=25 symmetric=13"
    );
}

#[test]
fn decompose_chain_rook() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    // The interior grid square of [3]*[3]: faces (0,0),(0,1),(1,0),(1,1)
    // have indices 0,1,3,4 in lexicographic order.
    std::fs::write(&path, "[0, 1, 3, 4]").unwrap();
    let out = z2e(&[
        "decompose",
        "--complex",
        "join:3,3",
        "--chain",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["parallelepipeds"].as_array().unwrap().len(), 4);
}

#[test]
fn search_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = z2e(&[
        "search",
        "--complex",
        "join:3,3",
        "--omega",
        "H",
        "--beta",
        "2",
        "--json",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(parsed["columns"], "lexicographic-octahedra");
    assert_eq!(parsed["omega"]["kind"], "H");

    let out = z2e(&["verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // Tamper with one bit of Y: verification must fail with exit 1.
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let row = doc["Y"][0].as_str().unwrap().to_string();
    let mut bytes = row.into_bytes();
    bytes[0] = if bytes[0] == b'0' { b'1' } else { b'0' };
    doc["Y"][0] = serde_json::Value::String(String::from_utf8(bytes).unwrap());
    std::fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = z2e(&["verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("INVALID"));
}

#[test]
fn exit_codes() {
    // No: K33 into the sphere.
    let out = z2e(&[
        "search", "--complex", "K33", "--omega", "I", "--beta", "0", "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // Usage error: bad flag.
    let out = z2e(&["search", "--complex", "K33", "--omega", "Q", "--beta", "0"]);
    assert_eq!(out.status.code(), Some(64));
    // Usage error: unknown descriptor.
    let out = z2e(&["dims", "--complex", "nonsense"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn seed_reproducibility() {
    let run = || {
        z2e(&[
            "vankampen",
            "--complex",
            "join:3,3",
            "--seed",
            "1234",
            "--json",
        ])
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "identical bytes across runs");
}

#[test]
fn decompose_random_join() {
    let out = z2e(&[
        "decompose",
        "--complex",
        "join:4,4",
        "--random",
        "--seed",
        "5",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["tori"].is_array());
    assert!(v["triples"].is_array());
}

#[test]
fn check_zero_matrix_fails_nontriviality() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    // 9x9 zero matrix for join:3,3.
    let mut text = String::from("9 9\n");
    for _ in 0..9 {
        text.push_str("000000000\n");
    }
    std::fs::write(&path, text).unwrap();
    let out = z2e(&[
        "check",
        "--complex",
        "join:3,3",
        "--matrix",
        path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["independent"], true);
    assert_eq!(v["additive"], true);
    assert_eq!(v["nontrivial"], false);
}

#[test]
fn graph_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"vertices": 4, "edges": [[0,1],[1,2],[2,3],[3,0],[0,2],[1,3]]}"#,
    )
    .unwrap();
    let desc = format!("graph:{}", path.display());
    let out = z2e(&["info", "--complex", &desc, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["vertices"], 4);
    assert_eq!(v["edges"], 6);

    // K4 as an edge list, searched at beta 0: planar, so yes.
    let elist = dir.path().join("k4.txt");
    std::fs::write(&elist, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let desc = format!("graph:{}", elist.display());
    let out = z2e(&[
        "search", "--complex", &desc, "--omega", "I", "--beta", "0", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn graph_certificate_is_self_contained() {
    // A certificate produced from a graph file verifies standalone: the
    // graph travels inside it.
    let dir = tempfile::tempdir().unwrap();
    let elist = dir.path().join("k33.txt");
    std::fs::write(&elist, "0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n").unwrap();
    let desc = format!("graph:{}", elist.display());
    let cert = dir.path().join("cert.json");
    let out = z2e(&[
        "search",
        "--complex",
        &desc,
        "--omega",
        "H",
        "--beta",
        "2",
        "--json",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["graph"]["vertices"], 6);
    let out = z2e(&["verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tabulate_table() {
    let out = z2e(&[
        "tabulate",
        "--complex",
        "K33",
        "--complex",
        "K5",
        "--kinds",
        "I,H",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // K33 hyperbolic minimum is 2 (the torus), K5 identity minimum is 1
    // (the projective plane).
    let find = |complex: &str, kind: &str| {
        rows.iter()
            .find(|r| r["complex"] == complex && r["kind"] == kind)
            .unwrap()
    };
    assert_eq!(find("join:3,3", "H")["min_beta"], 2);
    assert_eq!(find("Kn:5", "I")["min_beta"], 1);
    assert_eq!(find("Kn:5", "H")["min_beta"], 2);
    for r in rows {
        assert_eq!(r["exact"], true);
    }
}
