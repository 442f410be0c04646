use std::path::PathBuf;
use std::process::Command;

use bsgroupoid::cli::{run, Output, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    run(std::iter::once("bsgroupoid").chain(args.iter().copied()))
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bsgroupoid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn action_groupoid() -> String {
    let out = cli(&["groupoid", "from-action", "--gen", "1,2,0", "--gen", "0,2,1"]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    out.stdout
}

#[test]
fn modular_example() {
    let out = cli(&["bs", "modular", "--p", "2", "--q", "3", "--word", "t^2 a^5"]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, "{\"value\":\"9/4\"}\n"));
}

#[test]
fn level_model_corollary() {
    let out = cli(&["cocycle", "level-model", "--p", "2", "--q", "3", "--k", "1", "--l", "1", "--verify-corollary"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["product"], "3/2");
    let out = cli(&["cocycle", "level-model", "--p", "2", "--q", "-3", "--k", "2", "--l", "1", "--verify-corollary"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["product"], "3/2");
}

#[test]
fn validate_accepts_good_and_rejects_broken_tables() {
    let good = action_groupoid();
    let path = scratch("good.json", &good);
    let out = cli(&["groupoid", "validate", "--in", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    assert_eq!(json(&out)["arrows"], 18);

    let mut doc: Value = serde_json::from_str(&good).unwrap();
    let products = doc["products"].as_array_mut().unwrap();
    let i = products.iter().position(|t| t[0] != t[2] && t[1] != t[2]).unwrap();
    let wrong = products.iter().map(|t| t[2].as_u64().unwrap()).find(|&c| c != products[i][2].as_u64().unwrap()).unwrap();
    products[i][2] = wrong.into();
    let path = scratch("broken.json", &doc.to_string());
    let out = cli(&["groupoid", "validate", "--in", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_FAILURE, "{out:?}");
    assert_eq!(json(&out)["valid"], false);
    assert!(out.stderr.contains("verification failed"));

    let path = scratch("garbage.json", "{ not json");
    assert_eq!(cli(&["groupoid", "validate", "--in", path.to_str().unwrap()]).code, EXIT_USAGE);
}

#[test]
fn groupoid_commands_on_an_action() {
    let path = scratch("action.json", &action_groupoid());
    let p = path.to_str().unwrap();
    let out = cli(&["groupoid", "index", "--in", p, "--sub", "0,1,2"]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    assert_eq!(json(&out)["units"].as_array().unwrap().len(), 3);
    assert_eq!(cli(&["groupoid", "decompose", "--in", p]).code, EXIT_OK);
    assert_eq!(json(&cli(&["cocycle", "classify", "--in", p]))["type"], "II");
    assert_eq!(cli(&["groupoid", "index", "--in", p, "--sub", "99"]).code, EXIT_USAGE);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&["suite", ""]).code, EXIT_USAGE);
    assert_eq!(cli(&["suite"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bs", "modular", "--p", "2", "--q", "3", "--word", "x"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bs", "modular", "--p", "1", "--q", "3", "--word", "a"]).code, EXIT_USAGE);
    assert_eq!(cli(&["nonsense"]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    assert!(cli(&["dynamics", "cesaro", "--help"]).stdout.contains("--horizon"));
}

#[test]
fn suite_is_byte_identical_per_seed() {
    let args = ["suite", "lemmas", "--seed", "7", "--index", "30", "--towers", "10", "--quotients", "10"];
    let a = cli(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a, cli(&args));
    assert_eq!(json(&a)["summary"]["passed"], true);
    let csv = cli(&[&args[..], &["--format", "csv"]].concat());
    assert!(csv.stdout.starts_with("law,checks,failures,passed\n"));
}

#[test]
fn config_file_fills_missing_options() {
    let cfg = scratch("modular.cfg", "# parameters\np = 2\nq = 3\nword = t^2 a^5\n");
    let out = cli(&["bs", "modular", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.stdout, "{\"value\":\"9/4\"}\n", "{out:?}");
    // the command line wins over the file
    let out = cli(&["bs", "modular", "--config", cfg.to_str().unwrap(), "--word", "t"]);
    assert_eq!(json(&out)["value"], "3/2");
    let cfg = scratch("flags.cfg", "p=2\nq=3\nk=1\nl=1\nverify-corollary=true\nformat=text\n");
    let out = cli(&["cocycle", "level-model", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    assert!(out.stdout.contains("product: 3/2"));
    let bad = scratch("bad.cfg", "p=2\nq=3\nword=a\ncolour=blue\n");
    let out = cli(&["bs", "modular", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("colour"));
}

#[test]
fn formats_render_the_same_report() {
    let base = ["profinite", "arith", "--p", "2", "--q", "3", "--x", "5@(1,1)", "--y", "4@(1,1)"];
    let j = json(&cli(&base));
    let text = cli(&[&base[..], &["--format", "text"]].concat()).stdout;
    let csv = cli(&[&base[..], &["--format", "csv"]].concat()).stdout;
    for key in ["sum", "difference", "product"] {
        let v = j[key].as_str().unwrap();
        assert!(text.contains(&format!("{key}: {v}")));
        assert!(csv.contains(&format!("{key},\"{v}\"")), "{csv}");
    }
}

#[test]
fn other_subcommands_run() {
    for args in [
        &["bs", "normal-form", "--p", "2", "--q", "3", "--word", "a^7 t"][..],
        &["bs", "elliptic", "--p", "2", "--q", "3", "--word", "t a^2 T"],
        &["bs", "conjugation", "--p", "2", "--q", "3", "--g", "t", "--x", "a"],
        &["bs", "isomorphic", "--p", "2", "--q", "3", "--r", "-3", "--s", "-2"],
        &["tree", "neighbors", "--p", "2", "--q", "3"],
        &["tree", "geodesic", "--p", "2", "--q", "3", "--to", "t a T^2"],
        &["tree", "stabilizer-index", "--p", "4", "--q", "6", "--to", "t a t", "--verify"],
        &["cocycle", "flow", "--p", "2", "--q", "3", "--modulus", "5", "--n", "3"],
        &["profinite", "sigma", "--p", "2", "--q", "3", "--x", "6@(2,1)", "--k", "1", "--l", "0"],
        &["profinite", "unit", "--p", "2", "--q", "3", "--x", "7@(2,1)"],
        &["profinite", "valuation", "--p0", "2", "--m", "12"],
        &["dynamics", "beta", "--theta", "3/2", "--n", "-7", "--x", "1/3"],
        &["dynamics", "act", "--p", "2", "--q", "3", "--theta", "golden", "--word", "t a", "--x", "1/2", "--kappa", "5@(2,2)"],
        &["dynamics", "rotation", "--theta", "3/2", "--level", "6"],
        &["dynamics", "components", "--c", "1", "--n", "12", "--r", "2", "--s", "3"],
        &["dynamics", "odometer", "--p", "4", "--q", "6", "--k", "2", "--l", "1"],
        &["dynamics", "n-elements", "--p", "2", "--q", "3"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, EXIT_OK, "{args:?}: {out:?}");
    }
    let flow = json(&cli(&["cocycle", "flow", "--p", "2", "--q", "3", "--modulus", "5", "--n", "3"]));
    assert_eq!((flow["flow"].as_str(), flow["label"].as_str()), (Some("cycle"), Some("8/27")));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bsgroupoid");
    let ok = Command::new(bin).args(["bs", "modular", "--p", "2", "--q", "3", "--word", "t^2 a^5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "{\"value\":\"9/4\"}\n");
    let bad = Command::new(bin).args(["suite", ""]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
