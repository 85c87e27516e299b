use std::path::PathBuf;
use std::process::Command;

use discord_forge::cli::run;
use discord_forge::state_file::{load_density, parse_state};
use discord_forge::discord::{discord, Party};
use discord_forge::report::fmt_num;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let mut argv = vec!["discord-forge".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .to_string()
}

fn num(text: &str, key: &str) -> f64 {
    field(text, key).parse().unwrap()
}

#[test]
fn analyze_omega_machine_output() {
    let r = cli(&["--format", "machine", "analyze", "--state", &data("omega.dm")]);
    assert_eq!(r.code, 0, "{}", r.err);
    let dm = load_density(data("omega.dm").as_ref()).unwrap();
    assert_eq!(field(&r.out, "D_AB"), fmt_num(discord(&dm, Party::B)));
    assert_eq!(field(&r.out, "D_BA"), fmt_num(discord(&dm, Party::A)));
    assert!((num(&r.out, "D_AB") - 0.026218).abs() < 1e-5);
    let mi = num(&r.out, "mutual_info");
    assert!((num(&r.out, "J_AB") + num(&r.out, "D_AB") - mi).abs() < 1e-10);
    assert!(field(&r.out, "convention").starts_with("U = exp[(i/2)"));
}

#[test]
fn analyze_swapped_ordering_exchanges_sides() {
    let a = cli(&["--format", "machine", "analyze", "--state", &data("omega.dm")]);
    let b = cli(&["--format", "machine", "analyze", "--state", &data("omega_swapped.dm")]);
    assert!((num(&a.out, "D_AB") - num(&b.out, "D_BA")).abs() < 1e-9);
    assert!((num(&a.out, "D_BA") - num(&b.out, "D_AB")).abs() < 1e-9);
}

#[test]
fn human_output_is_a_table() {
    let r = cli(&["analyze", "--state", &data("singlet.bloch")]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("discord\n"));
    assert!(r.out.lines().any(|l| l.trim_start().starts_with("D_AB") && l.contains("1.000000000")));
}

#[test]
fn rsp_fidelity_is_square_of_geometric_discord() {
    let r = cli(&["--format", "machine", "rsp", "--state", &data("omega.dm"), "--angles", "1/2pi,0,1/2pi"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let g = num(&r.out, "post_geo_discord");
    let f = num(&r.out, "fidelity");
    assert!((f - g * g).abs() < 1e-12);
    assert!((f - 0.08).abs() < 1e-10);
    assert_eq!(field(&r.out, "success"), "true");
}

#[test]
fn rsp_phi_regimes() {
    let r = cli(&["--format", "machine", "rsp", "--phi", "0,0,0.3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!((num(&r.out, "fidelity") - 0.01125).abs() < 1e-12);
    assert!(r.err.contains("unsatisfiable"));

    let none = cli(&["--format", "machine", "rsp", "--phi", "0.2,0,0"]);
    assert_eq!(none.code, 0);
    assert_eq!(field(&none.out, "phi_regime"), "none");
}

#[test]
fn rsp_singlet_simulation() {
    let r = cli(&["--format", "machine", "--seed", "4", "rsp", "--simulate-singlet", "--theta", "0.7", "--shots", "2000"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(num(&r.out, "max_state_error") < 1e-12);
    assert_eq!(num(&r.out, "bit0") + num(&r.out, "bit1"), 2000.0);
}

#[test]
fn classify_product_state() {
    let r = cli(&["--format", "machine", "classify", "--state", &data("product.bloch")]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "cq_row"), "CQ-18");
    assert_eq!(field(&r.out, "qc_row"), "QC-20");
    assert_eq!(field(&r.out, "cq_family"), "single-axis-1");

    let singlet = cli(&["--format", "machine", "classify", "--state", &data("singlet.bloch"), "--side", "cq"]);
    assert_eq!(singlet.code, 0);
    assert_eq!(field(&singlet.out, "cq_class"), "not-zero-discord");
}

#[test]
fn activate_writes_output_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("active.bloch");
    let r = cli(&[
        "--format", "machine", "--out", out.to_str().unwrap(),
        "activate", "--state", &data("product.bloch"), "--side", "qc",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "row"), "QC-20");
    assert!(num(&r.out, "D_AB") > 1e-4);
    let back = parse_state(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let d = discord(&back.into_density().unwrap(), Party::B);
    assert!((d - num(&r.out, "D_AB")).abs() < 1e-9);
}

#[test]
fn activate_maximally_mixed_has_no_prescription() {
    let r = cli(&["activate", "--state", &data("mixed.dm"), "--side", "cq"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("no prescription: maximally mixed"), "{}", r.err);
}

#[test]
fn activate_rejects_discordant_input() {
    let r = cli(&["activate", "--state", &data("singlet.bloch"), "--side", "cq"]);
    assert_eq!(r.code, 1);
    assert!(!r.err.is_empty());
}

#[test]
fn malformed_file_is_a_domain_error() {
    let r = cli(&["analyze", "--state", &data("malformed.dm")]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("line 2"), "{}", r.err);
    assert!(r.out.is_empty());
}

#[test]
fn unphysical_state_is_a_domain_error() {
    let r = cli(&["analyze", "--state", &data("unphysical.bloch")]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("not a state"), "{}", r.err);
}

#[test]
fn missing_file_is_a_domain_error() {
    let r = cli(&["analyze", "--state", &data("does-not-exist.dm")]);
    assert_eq!(r.code, 1);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["analyze", "--bogus"],
        vec!["frobnicate"],
        vec![],
        vec!["--tol", "-1", "analyze", "--state", "x"],
        vec!["--lattice", "100", "analyze", "--state", "x"],
        vec!["--format", "xml", "analyze", "--state", "x"],
    ] {
        let r = cli(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.err);
        assert!(!r.err.is_empty());
    }
}

#[test]
fn verify_reports() {
    let r = cli(&["--format", "machine", "verify", "--consistency", "50"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "failed"), "0");
    assert_eq!(field(&r.out, "passed"), "50");

    let t = cli(&["--format", "machine", "--seed", "3", "verify", "--theorem", "1", "--samples", "40"]);
    assert_eq!(t.code, 0, "{}", t.err);
    assert_eq!(field(&t.out, "failed"), "0");
    assert!(!t.out.contains("runtime"));
}

#[test]
fn verify_writes_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let r = cli(&[
        "--format", "machine", "verify", "--appendix", "QC-03", "--trials", "5",
        "--witness-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(field(&r.out, "failed"), "5");
    assert_eq!(r.code, 0);
    assert_eq!(field(&r.out, "all_passed"), "false");
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 5);
    for f in files {
        parse_state(&std::fs::read_to_string(f.unwrap().path()).unwrap()).unwrap();
    }
}

#[test]
fn sample_files_parse() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["dm", "bloch"] {
        let r = cli(&[
            "--seed", "8", "sample", "--kind", "generic", "--count", "3", "--file-kind", kind,
            "--out-dir", dir.path().to_str().unwrap(),
        ]);
        assert_eq!(r.code, 0, "{}", r.err);
    }
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|f| f.unwrap().path()).collect();
    assert_eq!(files.len(), 6);
    for f in files {
        load_density(&f).unwrap();
    }
}

#[test]
fn machine_output_is_byte_deterministic() {
    for args in [
        vec!["--format", "machine", "analyze", "--state", &data("omega.dm")],
        vec!["--format", "machine", "--seed", "2", "verify", "--theorem", "3", "--samples", "20"],
        vec!["--format", "machine", "--seed", "2", "sample", "--kind", "CQ-05", "--count", "4"],
        vec!["--format", "machine", "--seed", "2", "rsp", "--simulate-singlet", "--shots", "500"],
    ] {
        let (x, y) = (cli(&args), cli(&args));
        assert_eq!(x.code, 0, "{args:?}: {}", x.err);
        assert_eq!(x.out, y.out);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_discord-forge");
    let ok = Command::new(bin).args(["--format", "machine", "analyze", "--state", &data("omega.dm")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let inproc = cli(&["--format", "machine", "analyze", "--state", &data("omega.dm")]);
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), inproc.out);

    let domain = Command::new(bin).args(["activate", "--state", &data("mixed.dm"), "--side", "qc"]).output().unwrap();
    assert_eq!(domain.status.code(), Some(1));
    let usage = Command::new(bin).arg("--no-such-flag").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(!usage.stderr.is_empty());

    let threads = Command::new(bin)
        .env("DISCORD_FORGE_THREADS", "2")
        .args(["--format", "machine", "verify", "--consistency", "10"])
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(0));
}
