use std::process::{Command, Output};

use airic::air::parse_matrix_text;
use airic::formats::{parse_plan_text, parse_symbolic_listing, parse_table_csv, parse_usage_csv};

fn airic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_airic")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = airic(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const EXAMPLE: [&str; 10] = ["--K", "13", "--D", "4", "--U", "1", "--a", "1", "--b", "5"];

fn with_example<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend(EXAMPLE);
    v.extend(extra);
    v
}

#[test]
fn chain_output() {
    assert_eq!(stdout(&["chain", "65", "26"]), "lambda: 26,39,26,13\nbeta: 0,1,2\ngcd: 13\n");
    assert!(stdout(&["chain", "26", "26"]).ends_with("gcd: 26\n"));
    assert!(stdout(&["chain", "2130", "781"]).ends_with("gcd: 71\n"));
}

#[test]
fn air_formats_round_trip() {
    let text = stdout(&["air", "65", "26"]);
    assert_eq!(text.lines().count(), 66);
    let m = parse_matrix_text(&text).unwrap();
    assert_eq!((m.rows(), m.cols()), (65, 26));
    assert_eq!(stdout(&["air", "3", "3"]), "3 3\n100\n010\n001\n");
    let csv = stdout(&["air", "7", "3", "--format", "csv"]);
    assert_eq!(csv.lines().last(), Some("1,1,1"));
}

#[test]
fn plan_contains_two_symbol_case() {
    let text = stdout(&with_example("plan", &[]));
    let lines = parse_plan_text(&text).unwrap();
    assert_eq!(lines.len(), 65);
    assert!(text.lines().any(|l| l.starts_with("7 5 CASE II codes 0,13 side ")));
    assert!(text.lines().any(|l| l.starts_with("8 1 CASE II codes 1,14 side ")));
}

#[test]
fn symbolic_encoding_parses() {
    let text = stdout(&with_example("encode", &["--symbolic"]));
    let listing = parse_symbolic_listing(&text).unwrap();
    assert_eq!(listing.len(), 26);
    assert_eq!(listing[0], vec![(0, 1), (5, 2), (10, 3)]);
}

#[test]
fn encode_given_message() {
    let x: Vec<String> = (0..65).map(|i| ((i == 0) as u8).to_string()).collect();
    let x = x.join(",");
    let out = stdout(&with_example("encode", &["--x", &x]));
    let y = out.lines().nth(1).unwrap();
    let expected: Vec<&str> = (0..26).map(|c| if c == 0 { "1" } else { "0" }).collect();
    assert_eq!(y, format!("y: {}", expected.join(",")));
    assert_eq!(airic(&with_example("encode", &["--x", "1,2"])).status.code(), Some(1));
}

#[test]
fn verify_and_exit_codes() {
    assert!(stdout(&with_example("verify", &[])).trim_end().ends_with("PASS"));
    let bad = ["verify", "--K", "13", "--D", "4", "--U", "3", "--a", "1", "--b", "5"];
    let out = airic(&bad);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pair not in S_{K,D,U}"), "{err}");
    assert!(err.contains("gcd(65, 26) = 13 < b(U+1) = 20"), "{err}");
    let mut unchecked = bad.to_vec();
    unchecked.push("--unchecked");
    let out = airic(&unchecked);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().trim_end().ends_with("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(airic(&["chain", "3", "5"]).status.code(), Some(1));
    assert_eq!(airic(&["nonsense"]).status.code(), Some(1));
    assert_eq!(airic(&["plan", "--K", "13"]).status.code(), Some(1));
    assert_eq!(airic(&["--help"]).status.code(), Some(0));
    assert_eq!(
        airic(&with_example("simulate", &["--p", "3", "--decoder", "plan"])).status.code(),
        Some(1)
    );
}

#[test]
fn simulate_is_clean_and_deterministic() {
    let args = with_example("simulate", &["--trials", "100", "--seed", "7"]);
    let text = stdout(&args);
    assert!(text.contains("failures: 0"), "{text}");
    assert_eq!(text, stdout(&args));
    let csv = stdout(&with_example("simulate", &["--trials", "5", "--format", "csv", "--p", "3", "--decoder", "oracle"]));
    let (usage, footer) = parse_usage_csv(&csv).unwrap();
    assert_eq!(usage.len(), 65);
    assert!(footer.contains(&("failures".to_string(), "0".to_string())));
}

#[test]
fn table_rows() {
    let text = stdout(&["table", "--K", "71", "--D-max", "1"]);
    assert_eq!(text, "K,D,U,a,b,rate,m,n\n71,1,1,1,35,2.0285,2485,71\n");
    let text = stdout(&["table", "--K", "12", "--D-max", "3", "--b-max", "12"]);
    let rows = parse_table_csv(&text).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("12,3,")).all(|l| l.contains(",4.0000,")));
    assert_eq!(rows.len(), 6);
    let pairs = stdout(&["pairs", "--K", "13", "--D", "4", "--U", "1", "--b-max", "5"]);
    assert!(pairs.lines().any(|l| l == "13,4,1,1,5,5.2000,65,26"), "{pairs}");
}
