use std::collections::{HashMap, HashSet};
use std::process::Command;

use corrdyn::cli::{dispatch, COVERAGE, SUBCOMMANDS};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = dispatch(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

const Y2_X3_1: &str = "f=1,0,0,1;g=0,0,1";

/// One working invocation per subcommand.
fn smoke() -> Vec<Vec<&'static str>> {
    vec![
        vec!["normalize", "--corr", "f=0,0,0,1;g=0,0,1"],
        vec!["crit", "--corr", Y2_X3_1],
        vec!["branch", "--corr", Y2_X3_1, "--c", "2"],
        vec!["lambda", "--form", "s=1,2;t=3", "--p", "3"],
        vec!["green-min", "--corr", Y2_X3_1, "--c", "0", "--depth", "12"],
        vec!["capital-lambda", "--form", "s=2,3;t=1", "--p", "3"],
        vec!["hweil", "--form", "s=2,3;t=1"],
        vec!["hcrit", "--form", "s=2,3;t=1", "--depth", "12"],
        vec!["compare-heights", "--d", "3", "--e", "2", "--n", "3", "--seed", "4", "--depth", "10"],
        vec!["fn", "--p", "3", "--e", "2", "--n", "3"],
        vec!["primitive", "--p", "3", "--e", "2", "--n", "2"],
        vec!["bound-threshold", "--p", "3", "--e", "2"],
        vec!["period-search", "--p", "3", "--e", "2", "--n", "2", "--k", "1"],
        vec!["member", "--d", "3", "--e", "2", "--c", "5+0i", "--depth", "24"],
        vec!["render", "--res", "16x16", "--depth", "8"],
        vec!["mc-green", "--form", "s=2,3;t=1", "--c", "1", "--n", "32", "--seed", "3"],
    ]
}

#[test]
fn coverage_map_is_complete_and_unambiguous() {
    let subs: HashSet<&str> = SUBCOMMANDS.iter().copied().collect();
    assert_eq!(subs.len(), 16);
    let mut seen = HashMap::new();
    for (op, sub) in COVERAGE {
        assert!(subs.contains(sub), "{op} maps to unknown subcommand {sub}");
        assert!(seen.insert(*op, *sub).is_none(), "{op} listed twice");
    }
    let used: HashSet<&str> = COVERAGE.iter().map(|(_, s)| *s).collect();
    for s in &subs {
        assert!(used.contains(s), "{s} exposes no operation");
    }
    // every subcommand parses and runs
    let smoked: HashSet<&str> = smoke().iter().map(|a| a[0]).collect();
    assert_eq!(smoked, subs);
    for args in smoke() {
        let out = ok(&args);
        assert!(!out.is_empty(), "{args:?} printed nothing");
    }
}

#[test]
fn documented_examples() {
    // c^9 + 2c^6 + 2c^5 + 2c^4 over F_3
    assert_eq!(ok(&["fn", "--p", "3", "--e", "2", "--n", "3"]), "p=3; coeffs=0,0,0,0,2,2,2,0,0,1\n");
    let member = ok(&["member", "--d", "3", "--e", "2", "--c", "5+0i", "--depth", "24"]);
    let k: usize = member.trim().strip_prefix("status=escaped,k=").unwrap().parse().unwrap();
    assert!((1..=24).contains(&k));
    let t = ok(&["bound-threshold", "--p", "3", "--e", "2"]);
    assert!(t.trim().strip_prefix("threshold=").unwrap().parse::<u32>().is_ok());
    assert_eq!(ok(&["primitive", "--p", "3", "--e", "2", "--n", "2"]), "primitive=true,witness=p=3; coeffs=2,1\n");
    assert_eq!(ok(&["primitive", "--p", "3", "--e", "2", "--n", "1"]), "primitive=true,witness=p=3; coeffs=0,1\n");
}

#[test]
fn records_parse_back() {
    let out = ok(&["green-min", "--corr", Y2_X3_1, "--c", "0", "--depth", "12"]);
    let fields: HashMap<&str, &str> = out.trim().split(',').filter_map(|kv| kv.split_once('=')).collect();
    let lo: f64 = fields["lo"].parse().unwrap();
    let hi: f64 = fields["hi"].parse().unwrap();
    assert!(lo <= hi && fields["tie"].parse::<bool>().is_ok());
    let certs = ok(&["period-search", "--p", "3", "--e", "2", "--n", "3", "--k", "2"]);
    for line in certs.lines().filter(|l| !l.starts_with("count=")) {
        let c: corrdyn::unicritical::PeriodCertificate = line.parse().unwrap();
        assert!(c.validate().unwrap());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).0, 1);
    assert_eq!(run(&["fn", "--p", "3", "--e", "2", "--n", "3", "--nope"]).0, 1);
    assert_eq!(run(&["fn", "--p", "4", "--e", "2", "--n", "3"]).0, 1);
    assert_eq!(run(&["fn", "--p", "3", "--e", "2", "--n", "3", "--degree-cap", "0"]).0, 1);
    assert_eq!(run(&["member", "--c", "zz"]).0, 1);
    let (code, _, err) = run(&["fn", "--p", "3", "--e", "2", "--n", "30"]);
    assert_eq!(code, 2, "{err}");
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("period-search"));
}

#[test]
fn render_writes_a_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.pgm");
    let out = ok(&["render", "--res", "24x16", "--depth", "10", "--out", path.to_str().unwrap()]);
    assert!(out.starts_with("survived_pixels="));
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P5\n24 16\n255\n"));
    assert_eq!(bytes.len(), b"P5\n24 16\n255\n".len() + 24 * 16);
}

fn binary(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_corrdyn")).args(args).env("CORRDYN_THREADS", threads).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn output_is_deterministic() {
    let stochastic: [&[&str]; 3] = [
        &["mc-green", "--corr", Y2_X3_1, "--c", "1+1i", "--n", "200", "--seed", "11"],
        &["compare-heights", "--d", "3", "--e", "2", "--n", "6", "--seed", "2", "--depth", "10"],
        &["render", "--res", "20x20", "--depth", "10"],
    ];
    for args in stochastic {
        let a = binary(args, "1");
        assert_eq!(a, binary(args, "1"));
        assert_eq!(a, binary(args, "4"), "{args:?} depends on the thread count");
    }
    let a = ok(&["mc-green", "--corr", Y2_X3_1, "--c", "1+1i", "--n", "200", "--seed", "11"]);
    let b = ok(&["mc-green", "--corr", Y2_X3_1, "--c", "1+1i", "--n", "200", "--seed", "12"]);
    assert_ne!(a, b);
}
