//! End-to-end checks of the command-line surface.

use std::path::PathBuf;
use std::process::Command;

fn lieks() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lieks"))
}

fn stdout_of(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn forms_listing() {
    let out = lieks().args(["forms", "--type", "A", "--rank", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("A2:inner:compact"));
    assert!(text.contains("su(2,1)"));
    assert!(text.contains("sl(3,R)"));
    assert_eq!(text.lines().count(), 4); // header + three forms

    let bad = lieks().args(["forms", "--type", "B", "--rank", "9"]).output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn forms_json_parses() {
    let out = lieks()
        .args(["forms", "--type", "G", "--rank", "2", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn orbit_reports() {
    let out = lieks().args(["orbits", "A1:inner:k1"]).output().unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).starts_with("2 orbit(s)"));

    // Compact form: empty report, exit code 0.
    let compact = lieks().args(["orbits", "A1:inner:compact"]).output().unwrap();
    assert!(compact.status.success());
    assert!(stdout_of(&compact).starts_with("0 orbit(s)"));
}

#[test]
fn representatives_and_exit_codes() {
    let out = lieks().args(["representatives", "A1:inner:k1"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.matches("solver=principal").count(), 2);

    // JSON round-trips through the scalar grammar.
    let json = lieks()
        .args(["representatives", "A2:outer", "--json", "--jobs", "2"])
        .output()
        .unwrap();
    assert!(json.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&json)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for entry in arr {
        for part in ["f", "h", "e"] {
            for coeff in entry[part].as_array().unwrap() {
                let s = coeff.as_str().unwrap();
                let parsed: lieks::exact::ExactScalar = s.parse().unwrap();
                assert_eq!(parsed.to_string(), s);
            }
        }
    }
}

#[test]
fn iso_command() {
    let yes = lieks()
        .args(["iso", "--form-a", "A2:inner:k1", "--form-b", "A2:inner:k1"])
        .output()
        .unwrap();
    assert!(yes.status.success());
    assert!(stdout_of(&yes).starts_with("isomorphic"));

    let no = lieks()
        .args(["iso", "--form-a", "A2:inner:k1", "--form-b", "A2:outer", "--json"])
        .output()
        .unwrap();
    assert!(no.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&no)).unwrap();
    assert_eq!(v["isomorphic"], serde_json::json!(false));
}

#[test]
fn export_table_grammar() {
    let out = lieks().args(["export-table", "--form", "A1:inner:k1"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    // One line per nonzero bracket over ℬ = {K1, P1, P2}.
    assert!(text.contains("[K1,P1]"));
    for line in text.lines() {
        assert!(line.contains(" = "), "malformed line {line}");
    }
}

#[test]
fn verify_command() {
    let out = lieks().args(["verify", "--form", "A2:inner:k1"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.lines().all(|l| l.ends_with("PASS")));
}

#[test]
fn db_workflow() {
    let dir: PathBuf = std::env::temp_dir().join(format!("lieks-cli-db-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    // Solving split G2 with a database stores its non-principal carrier.
    let run1 = lieks()
        .args(["representatives", "G2:inner:k1", "--db"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(run1.status.success());
    assert!(stdout_of(&run1).contains("solver=groebner"));

    let list = lieks().args(["db", "list", "--path"]).arg(&dir).output().unwrap();
    assert!(list.status.success());
    assert!(stdout_of(&list).contains("G2"));

    // The second run resolves through the stored record.
    let run2 = lieks()
        .args(["representatives", "G2:inner:k1", "--db"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(run2.status.success());
    assert!(stdout_of(&run2).contains("solver=database:"));

    // LIEKS_DB is the default path.
    let run3 = lieks()
        .args(["representatives", "G2:inner:k1"])
        .env("LIEKS_DB", &dir)
        .output()
        .unwrap();
    assert!(run3.status.success());
    assert!(stdout_of(&run3).contains("solver=database:"));

    // find / add on record files.
    let found = lieks()
        .args(["db", "find", "--path"])
        .arg(&dir)
        .args(["--type", "G2", "--lambda", "-1,1", "--eps", "0,1"])
        .output()
        .unwrap();
    assert!(found.status.success());
    let text = stdout_of(&found);
    assert!(text.starts_with("found "));
    // Re-adding the same record to a fresh database through `db add`.
    let dir2: PathBuf = std::env::temp_dir().join(format!("lieks-cli-db2-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir2);
    std::fs::create_dir_all(&dir2).unwrap();
    let record_file = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .find(|p| p.extension().is_some_and(|x| x == "carrier"))
        .unwrap();
    let added = lieks()
        .args(["db", "add", "--path"])
        .arg(&dir2)
        .arg("--record")
        .arg(&record_file)
        .output()
        .unwrap();
    assert!(added.status.success());
    assert!(stdout_of(&added).starts_with("stored "));
    std::fs::remove_dir_all(&dir).ok();
    std::fs::remove_dir_all(&dir2).ok();
}

#[test]
fn malformed_inputs_fail_cleanly() {
    for args in [
        vec!["orbits", "Z9:inner:k1"],
        vec!["orbits", "A2"],
        vec!["representatives", "A2:inner:k7"],
    ] {
        let out = lieks().args(&args).output().unwrap();
        assert!(!out.status.success(), "{args:?} should fail");
        assert_eq!(out.status.code(), Some(1));
    }
}
