use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pn(args: &[&str]) -> Output {
    pn_with_cache(args, None)
}

fn pn_with_cache(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pn"));
    cmd.args(args).env_remove("PN_CACHE");
    if let Some(dir) = cache {
        cmd.env("PN_CACHE", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pn(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    pn(args).status.code().unwrap()
}

#[test]
fn documented_examples() {
    let v = json(&["genus", "18"]);
    assert_eq!(v["n"], 18);
    assert_eq!(v["status"], "Unknown");
    assert_eq!(v["source"], "ObstructionNonZeroConjecture");
    assert!(v["conjecture_note"].is_string());

    let words = json(&["dl", "words", "3", "2", "--dim", "33"]);
    let words: Vec<&str> = words.as_array().unwrap().iter().map(|r| r["word"].as_str().unwrap()).collect();
    assert_eq!(words, ["bQ7Q1u", "Q7bQ1u", "Q6bQ2u"]);

    let h = json(&["complex", "kn", "4", "--homology"]);
    assert_eq!(h[2]["group"], "Z^6");
    assert_eq!(h[0]["group"], "0");
}

#[test]
fn verdict_and_report_shapes() {
    let v = json(&["dl", "obstruction", "18"]);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["n", "p", "k", "dimension", "status", "mod_p_dimension", "bockstein_image_rank", "witnesses"]
    );
    assert_eq!(v["witnesses"][0], "bQ7Q1u");
    for check in ["cor3", "cor4", "les4"] {
        let rows = json(&["verify", check]);
        for r in rows.as_array().unwrap() {
            let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
            assert_eq!(keys, ["degree", "left", "right", "equal", "paper_ref"]);
            assert_eq!(r["equal"], true, "{check}: {r}");
        }
    }
    assert_eq!(json(&["verify", "filtration", "5"])["agree"], true);
    assert_eq!(json(&["homology", "coinvariants", "3", "--sign-twist"])["group"], "Z/3");
    assert_eq!(json(&["homology", "bar", "3", "--degree", "2"])["group"], "Z/3");
    assert_eq!(json(&["lattice", "6", "--mobius"])["mobius"], -120);
    assert_eq!(json(&["complex", "klambda", "1,2|3,4"])[1]["group"], "Z");
    assert_eq!(json(&["module", "extract", "3", "--character"])[2]["value"], -1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["genus", "7"]), 0);
    // invalid input
    assert_eq!(code(&["genus", "0"]), 2);
    assert_eq!(code(&["complex", "klambda", "1,2|2,3"]), 2);
    assert_eq!(code(&["dl", "words", "4", "1", "--dim", "4"]), 2);
    assert_eq!(code(&["dl", "obstruction", "12"]), 2);
    assert_eq!(code(&["genus", "table", "--max", "2000000"]), 2);
    assert_eq!(code(&["verify", "cor3", "--max-degree", "9"]), 2);
    assert_eq!(code(&["lattice"]), 2);
    assert_eq!(code(&["genus", "7", "--budget", "entries"]), 2);
    assert_eq!(code(&["genus", "7", "--threads", "0"]), 2);
    // resource limits
    assert_eq!(code(&["complex", "kn", "10"]), 3);
    assert_eq!(code(&["complex", "kn", "6", "--budget", "entries=100"]), 3);
    assert_eq!(code(&["homology", "bar", "5", "--degree", "3", "--budget", "entries=1e6"]), 3);
    assert_eq!(code(&["dl", "words", "3", "30", "--dim", "100"]), 3);
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let commands: [&[&str]; 4] = [
        &["genus", "18"],
        &["complex", "kn", "5", "--homology"],
        &["module", "extract", "4"],
        &["genus", "table", "--max", "60"],
    ];
    for args in commands {
        for format in ["json", "csv", "text"] {
            let mut a = args.to_vec();
            a.extend(["--format", format]);
            let fresh = pn(&a);
            let cold = pn_with_cache(&a, Some(dir.path()));
            let warm = pn_with_cache(&a, Some(dir.path()));
            assert!(fresh.status.success() && warm.status.success());
            assert_eq!(fresh.stdout, cold.stdout, "{a:?}");
            assert_eq!(cold.stdout, warm.stdout, "{a:?}");
        }
    }
    // one entry per operation, shared by all formats
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), commands.len());
    for e in entries {
        let text = std::fs::read_to_string(e.unwrap().path()).unwrap();
        assert!(text.starts_with("pn-cache 1\nkey ") && text.is_ascii());
    }
}

#[test]
fn cache_is_keyed_by_operation_and_survives_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let a = pn_with_cache(&["genus", "18"], Some(dir.path()));
    let b = pn_with_cache(&["genus", "19"], Some(dir.path()));
    assert_ne!(a.stdout, b.stdout);
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), "pn-cache 1\nkey nonsense\n").unwrap();
    }
    let again = pn_with_cache(&["genus", "18"], Some(dir.path()));
    assert_eq!(again.stdout, a.stdout);
}

#[test]
fn cache_dir_flag_and_environment() {
    let flag_dir = tempfile::tempdir().unwrap();
    let env_dir = tempfile::tempdir().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    pn(&["genus", "10", "--cache-dir", flag]);
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 1);
    pn_with_cache(&["genus", "11", "--cache-dir", flag], Some(env_dir.path()));
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 1);
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
}

/// Independent flattening of a JSON value into dotted keys.
fn flatten(v: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    let join = |k: String| if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| flatten(x, join(k.clone()), out)),
        Value::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, x)| flatten(x, join(i.to_string()), out)),
        Value::String(s) => out.push((prefix, s.clone())),
        Value::Null => out.push((prefix, String::new())),
        other => out.push((prefix, other.to_string())),
    }
}

#[test]
fn csv_and_json_carry_the_same_data() {
    let commands: [&[&str]; 9] = [
        &["genus", "18"],
        &["genus", "table", "--max", "120"],
        &["dl", "obstruction", "54"],
        &["dl", "words", "5", "2", "--dim", "97"],
        &["complex", "kn", "5"],
        &["lattice", "4"],
        &["verify", "cor3"],
        &["verify", "filtration", "4"],
        &["module", "extract", "4", "--character", "--sign-twist"],
    ];
    for args in commands {
        let v = json(args);
        let items: Vec<Value> = match v {
            Value::Array(a) => a,
            other => vec![other],
        };
        let mut a = args.to_vec();
        a.extend(["--format", "csv"]);
        let text = stdout(&a);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(records.len(), items.len(), "{args:?}");
        for (item, rec) in items.iter().zip(&records) {
            let mut flat = Vec::new();
            flatten(item, String::new(), &mut flat);
            for (k, want) in &flat {
                let col = header.iter().position(|h| h == k).unwrap_or_else(|| panic!("{args:?}: no column {k}"));
                assert_eq!(&rec[col], want, "{args:?} column {k}");
            }
            // columns absent from this JSON row are empty in the CSV row
            for (i, h) in header.iter().enumerate() {
                if !flat.iter().any(|(k, _)| k == h) {
                    assert_eq!(&rec[i], "", "{args:?} column {h}");
                }
            }
        }
    }
}

#[test]
fn output_is_ascii_and_thread_independent() {
    let one = stdout(&["genus", "table", "--max", "3000", "--threads", "1", "--format", "json"]);
    let four = stdout(&["genus", "table", "--max", "3000", "--threads", "4", "--format", "json"]);
    assert_eq!(one, four);
    assert!(one.is_ascii());
    for args in [&["verify", "les4", "--format", "text"][..], &["module", "extract", "3", "--format", "json"]] {
        assert!(stdout(args).is_ascii(), "{args:?}");
    }
}
