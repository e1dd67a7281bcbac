use equihom::cli::run;
use equihom::io::parse_result;

fn ok(args: &[&str]) -> String {
    let mut argv = vec!["equihom"];
    argv.extend_from_slice(args);
    let out = run(&argv);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    let mut argv = vec!["equihom"];
    argv.extend_from_slice(args);
    run(&argv).code
}

#[test]
fn bbur_text_and_json_match_golden() {
    assert_eq!(ok(&["demo", "bbur", "--trunc", "12"]), include_str!("golden/bbur.txt"));
    assert_eq!(
        ok(&["--format", "json", "demo", "bbur", "--trunc", "12"]),
        include_str!("golden/bbur.json")
    );
}

#[test]
fn bbur_formats_agree() {
    let text = parse_result(&ok(&["demo", "bbur"])).unwrap();
    let json = parse_result(&ok(&["demo", "bbur", "--format", "json"])).unwrap();
    assert_eq!(text, json);
    let rels = text.section("relations").unwrap();
    assert_eq!(rels.rows, [["y1^2 = a_s*y3"], ["y2^2 = a_s*y5"]]);
}

#[test]
fn bbur_truncation_ten() {
    let r = parse_result(&ok(&["demo", "bbur", "--trunc", "10"])).unwrap();
    assert_eq!(r.section("relations").unwrap().rows.len(), 1);
    assert_eq!(r.section("beyond truncation").unwrap().rows.len(), 3);
}

#[test]
fn gset_product() {
    let r = parse_result(&ok(&["gset", "prod", "--group", "c4", "--orbits", "C2,C2"])).unwrap();
    assert_eq!(r.section("gset").unwrap().rows, [["2 x C4/C2", "4"]]);
    let r = parse_result(&ok(&["gset", "prod", "--group", "c8", "--orbits", "C2,C4"])).unwrap();
    assert_eq!(r.section("gset").unwrap().rows, [["2 x C8/C2", "8"]]);
}

#[test]
fn point_classes() {
    let r = parse_result(&ok(&["point-homology", "--deg", "1,-1"])).unwrap();
    let levels = r.section("levels").unwrap();
    assert_eq!(levels.rows[0], ["C2", "Z/2", "u_s"]);
    let r = parse_result(&ok(&["point-homology", "--deg", "0,-3"])).unwrap();
    assert_eq!(r.section("levels").unwrap().rows, [["C2", "Z/2", "a_s^3"], ["e", "0", ""]]);
}

#[test]
fn pure_commands() {
    let r = parse_result(&ok(&["pure", "norm", "--model", "builtin:bur", "--x", "a3"])).unwrap();
    assert_eq!(r.section("norm").unwrap().rows[0][0], "-a3^2");
    let r = parse_result(&ok(&["pure", "dl", "--model", "builtin:bur", "--i", "2", "--x", "a1"])).unwrap();
    assert_eq!(r.section("operation").unwrap().rows, [["a3", "true"]]);
}

#[test]
fn e2_only_pages_are_marked() {
    for kind in ["twisted", "em"] {
        let r = parse_result(&ok(&["ss", kind, "--model", "builtin:bur", "--trunc", "6"])).unwrap();
        let summary = r.section("summary").unwrap();
        assert!(summary.rows.iter().any(|row| row[0] == "note" && row[1].contains("no convergence")));
    }
    let r = parse_result(&ok(&["ss", "bar", "--model", "builtin:bur", "--trunc", "6"])).unwrap();
    assert!(r.section("summary").unwrap().rows.iter().all(|row| row[0] != "note"));
}

#[test]
fn basis_files_round_trip_through_commands() {
    let dir = std::env::temp_dir().join(format!("equihom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b.basis");
    std::fs::write(&path, "format: equihom-basis 1\ngroup: p=2 n=1\ncoeff: Z\ncell x C2 1*rho[C2]\ncell y e 3\n").unwrap();
    let p = path.to_str().unwrap();
    let dual = parse_result(&ok(&["basis", "dual", "--basis", p])).unwrap();
    assert_eq!(dual.section("basis").unwrap().rows[0][..3], ["x*", "C2", "-1*rho[C2]"]);
    let boxed = parse_result(&ok(&["basis", "box", "--basis", p, "--basis", p])).unwrap();
    assert!(!boxed.section("basis").unwrap().rows.is_empty());
    let h = parse_result(&ok(&["basis", "homology", "--basis", p, "--level", "C2", "--k", "1"])).unwrap();
    assert_eq!(h.section("levels").unwrap().rows[0][1], "Z");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn digests_depend_on_inputs() {
    let a = parse_result(&ok(&["demo", "bbur", "--trunc", "8"])).unwrap();
    let b = parse_result(&ok(&["demo", "bbur", "--trunc", "10"])).unwrap();
    assert_ne!(a.digest, b.digest);
    assert!(a.digest.starts_with("sha256:"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["gset", "prod", "--group", "c6", "--orbits", "e"]), 2);
    assert_eq!(code(&["point-homology", "--deg", "x"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["demo", "bbur", "--trunc", "40"]), 1);
    assert_eq!(code(&["pure", "norm", "--model", "/nonexistent", "--x", "a1"]), 1);
    assert_eq!(code(&["basis", "dual"]), 2);
}

#[test]
fn check_command_passes() {
    let out = ok(&["check", "--format", "text"]);
    let r = parse_result(&out).unwrap();
    assert_eq!(r.section("checks").unwrap().rows.len(), 10);
}
