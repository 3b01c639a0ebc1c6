use parahoric::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("parahoric").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn bernstein_suite_passes_for_a1() {
    let (code, out, _) = call(&["verify", "bernstein", "--type", "A1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("bernstein-centrality"));
    assert!(out.contains("result: PASS"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn cones_suite_honours_samples_and_seed() {
    let (code, out, _) = call(&["verify", "cones", "--type", "C2", "--samples", "10000", "--seed", "7", "--format", "json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["samples"], 10000);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));
    let arthur = checks.iter().find(|c| c["name"] == "arthur-identity").unwrap();
    assert!(arthur["evaluations"].as_u64().unwrap() >= 10000);
}

#[test]
fn all_suites_for_the_flip() {
    let (code, out, _) = call(&["verify", "all", "--type", "A2", "--theta", "flip", "--r", "2", "--orbit-cutoff", "2"]);
    assert_eq!(code, 0, "{out}");
    for suite in ["weyl/", "hecke/", "basechange/", "descent-cosets/", "cones/", "atiyah-bott/"] {
        assert!(out.contains(suite), "missing {suite}");
    }
}

#[test]
fn same_arguments_give_same_bytes() {
    let args = ["verify", "cones", "--type", "A2", "--samples", "200"];
    assert_eq!(call(&args).1, call(&args).1);
}

#[test]
fn compute_examples() {
    let (code, out, _) = call(&["compute", "zmu", "--mu", "1", "--J", "iwahori", "--type", "A1"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.trim().is_empty());

    let (code, out, _) = call(&["compute", "bc", "--mu", "1,0", "--type", "A2", "--theta", "flip", "--r", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("z(0) + z(1)"), "{out}");

    let (code, short, _) = call(&["bc", "--mu", "1,0", "--type", "A2", "--theta", "flip", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(short, out);

    let (code, out, _) = call(&["compute", "cosets", "--P", "alpha2", "--J", "s1", "--type", "C2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.ends_with("true\ttrue")).count(), 2, "{out}");

    let (code, out, _) = call(&["compute", "cosets", "--P", "alpha2", "--J", "s1", "--type", "C2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 3);
}

#[test]
fn json_output_parses() {
    let (code, out, _) = call(&["compute", "bc", "--mu", "1", "--type", "A1", "--r", "2", "--format", "json"]);
    assert_eq!(code, 0);
    serde_json::from_str::<serde_json::Value>(&out).unwrap();
    let (_, out, _) = call(&["verify", "weyl", "--type", "G2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["suite"], "weyl");
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = call(&["cache", "stat", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert!(out.contains("entries: 0"), "{out}");

    let (code, _, _) = call(&["cache", "warm", "--cache-dir", d, "--type", "A1", "--length-cutoff", "4"]);
    assert_eq!(code, 0);
    let (_, out, _) = call(&["cache", "stat", "--cache-dir", d]);
    assert!(!out.contains("entries: 0"), "{out}");

    let plain = call(&["verify", "hecke", "--type", "A1"]).1;
    let cached = call(&["verify", "hecke", "--type", "A1", "--cache-dir", d]).1;
    assert_eq!(plain, cached);

    for _ in 0..2 {
        assert_eq!(call(&["cache", "clear", "--cache-dir", d]).0, 0);
        assert!(call(&["cache", "stat", "--cache-dir", d]).1.contains("entries: 0"));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["verify", "nope"]).0, 2);
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["compute", "zmu", "--type", "A1"]).0, 2);
    assert_eq!(call(&["verify", "weyl", "--type", "E8"]).0, 2);
    assert_eq!(call(&["verify", "weyl", "--type", "A2", "--theta", "flip", "--r", "3"]).0, 2);
}

#[test]
fn tampered_cache_fails_with_integrity_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    call(&["cache", "warm", "--cache-dir", d, "--type", "A1", "--length-cutoff", "3"]);
    let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&file, "broken\n").unwrap();
    let (code, _, err) = call(&["verify", "hecke", "--type", "A1", "--cache-dir", d]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}
