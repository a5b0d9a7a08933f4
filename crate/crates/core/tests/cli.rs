use std::path::PathBuf;
use std::process::Command;

use tmlab::cli::{self, EXIT_BOUND, EXIT_IRREDUCIBLE, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("tmlab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn table_file() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("machines/table1.tm")
        .display()
        .to_string()
}

#[test]
fn binary_simulates_busy_beaver() {
    let out = Command::new(env!("CARGO_BIN_EXE_tmlab"))
        .args(["simulate", &table_file(), "--name", "bb5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "bb5 47176870 4097 halted\n");
}

#[test]
fn binary_exit_code_for_bound() {
    let out = Command::new(env!("CARGO_BIN_EXE_tmlab"))
        .args(["simulate", "--name", "looper", "--max-steps", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BOUND));
    assert!(String::from_utf8_lossy(&out.stdout).contains("bound exceeded"));
}

#[test]
fn missing_file() {
    let (code, _, err) = call(&["simulate", "missing.tm"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("missing.tm"));
}

#[test]
fn malformed_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tm");
    std::fs::write(&path, "ok: 0\n\nbad: 2, 0, 11\n").unwrap();
    let (code, _, err) = call(&["simulate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn machines_flag_and_positional_agree() {
    let file = table_file();
    let a = call(&["simulate", &file, "--name", "m21"]);
    let b = call(&["simulate", "--machines", &file, "--name", "m21"]);
    assert_eq!(a, b);
    assert_eq!(a.1, "m21 515 21 halted\n");
}

#[test]
fn simulate_csv_and_input() {
    let (code, out, _) = call(&["simulate", "--name", "m14", "--name", "m26", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "name,t_T,ones,halted\nm14,314,14,true\nm26,264,26,true\n");
    assert_eq!(call(&["simulate", "--name", "m14", "--input", "012"]).0, EXIT_USAGE);
}

#[test]
fn trace_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let (code, _, _) = call(&["simulate", "--name", "m26", "--trace-csv", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("step,state,head_offset,read,write,move\n"));
    assert_eq!(text.lines().count(), 1 + 263 + 1);
    assert!(text.ends_with("# halted,t_T=264,ones=26\n"));
    assert_eq!(call(&["simulate", "--trace-csv", path.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn ccstar_row_two() {
    assert_eq!(call(&["ccstar", "--name", "m14"]).1, "name,cc_star\nm14,7\n");
    assert_eq!(call(&["ccstar", "--name", "m14", "--bsearch"]).1, "name,cc_star\nm14,7\n");
    assert_eq!(call(&["ccstar", "--name", "m14", "--mode", "global"]).1, "name,cc_star\nm14,1\n");
}

#[test]
fn ccstar_irreducible_batch_continues() {
    let (code, out, err) = call(&["ccstar", "--name", "blank-walker", "--name", "m21"]);
    assert_eq!(code, EXIT_IRREDUCIBLE);
    assert_eq!(out, "name,cc_star\nblank-walker,irreducible\nm21,12\n");
    assert!(err.contains("blank-walker"));
}

#[test]
fn learn_exit_codes() {
    let (code, out, _) = call(&["learn", "--name", "m21", "--radius", "12"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(&format!("machine: {}", tmlab::encode(&tmlab::catalog::by_name("m21").unwrap().machine))));
    let (code, out, _) = call(&["learn", "--name", "m21", "--radius", "11"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(out.contains("ambiguous steps: "));
    assert_eq!(call(&["learn", "--name", "m21", "--full"]).0, EXIT_OK);
    assert_eq!(call(&["learn", "--name", "empty"]).0, EXIT_OK);
    assert_eq!(call(&["learn", "--name", "blank-walker", "--full"]).0, EXIT_IRREDUCIBLE);
}

#[test]
fn unknown_name_rejected_up_front() {
    let (code, out, err) = call(&["table", "--name", "m14", "--name", "zz"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("\"zz\""));
}

#[test]
fn cc_command_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let fig2 = dir.path().join("fig2.csv");
    let (code, out, _) = call(&[
        "cc",
        "--name",
        "m26",
        "--curve",
        curve.to_str().unwrap(),
        "--emit-fig2",
        fig2.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let row = out.lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("m26,264,"), "{row}");
    let curve = std::fs::read_to_string(curve).unwrap();
    assert!(curve.starts_with("episode,errors,cumulative_interactions\n1,"));
    let cc = row.split(',').nth(2).unwrap();
    assert!(curve.lines().last().unwrap().ends_with(&format!(",0,{cc}")));
    assert_eq!(std::fs::read_to_string(fig2).unwrap(), format!("name,t_T,cc\nm26,264,{cc}\n"));
}

#[test]
fn table_with_cc_is_deterministic() {
    let args = ["table", "--with-cc", "--seed", "7", "--name", "m26", "--name", "m14"];
    let a = call(&args);
    let b = call(&args);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
    let rows: Vec<&str> = a.1.lines().collect();
    assert_eq!(rows[0], "name,t_T,ones,cc,cc_star");
    assert!(rows[1].starts_with("m26,264,26,") && rows[1].ends_with(",24"));
}

#[test]
fn table_fig5_export() {
    let dir = tempfile::tempdir().unwrap();
    let fig5 = dir.path().join("fig5.csv");
    let (code, out, _) = call(&["table", "--emit-fig5", fig5.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 7);
    assert_eq!(
        std::fs::read_to_string(fig5).unwrap(),
        "name,cc_star\nm26,24\nm14,7\nm21,12\nm32,41\nm160,160\nschult,664\n"
    );
}

#[test]
fn thread_cap_keeps_order() {
    std::env::set_var(cli::THREADS_ENV, "2");
    let (_, out, _) = call(&["ccstar", "--name", "m32", "--name", "m14", "--name", "m26"]);
    assert_eq!(out, "name,cc_star\nm32,41\nm14,7\nm26,24\n");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["simulate", "ccstar", "learn", "cc", "table"] {
        assert!(out.contains(sub));
    }
}
