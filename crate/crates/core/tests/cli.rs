use std::process::{Command, Output};

use qotto::cli::{run_with, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows as `header -> value` maps.
fn rows(csv: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    lines
        .map(|l| {
            header
                .iter()
                .cloned()
                .zip(l.split(',').map(str::to_owned))
                .collect()
        })
        .collect()
}

fn field<'a>(row: &'a [(String, String)], key: &str) -> &'a str {
    &row.iter().find(|(k, _)| k == key).unwrap().1
}

fn num(row: &[(String, String)], key: &str) -> f64 {
    field(row, key).parse().unwrap()
}

#[test]
fn cycle_point_values() {
    let o = otto(&["cycle", "--pc", "0.4", "--ph", "0.8", "--xi", "0.25"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    assert!(text.starts_with("# energy unit: h*kHz; time unit: us\n"));
    let r = &rows(&text)[0];
    assert!((num(r, "w_fric") + 0.12).abs() < 1e-12);
    assert!((num(r, "w_net") + 0.76).abs() < 1e-12);
    assert!((num(r, "eta") - 0.603174603175).abs() < 1e-12);
    assert!((num(r, "eta_ad") - 4.0 / 9.0).abs() < 1e-11);
    assert_eq!(field(r, "mode"), "engine");
}

#[test]
fn exponent_flags_round_trip() {
    let by_p = otto(&["cycle", "--pc", "0.4", "--ph", "0.8", "--xi", "0.1"]);
    let r = &rows(&stdout(&by_p))[0];
    let (uc, uh) = (field(r, "u_c").to_owned(), field(r, "u_h").to_owned());
    assert!(num(r, "u_h") < 0.0 && num(r, "u_c") > 0.0);
    let by_u = otto(&["cycle", "--uc", &uc, "--uh", &uh, "--xi", "0.1"]);
    assert_eq!(by_u.status.code(), Some(EXIT_OK));
    let s = &rows(&stdout(&by_u))[0];
    assert!((num(s, "p_c") - 0.4).abs() < 1e-11);
    assert!((num(s, "p_h") - 0.8).abs() < 1e-11);
    assert!((num(s, "w_net") - num(r, "w_net")).abs() < 1e-10);
}

#[test]
fn xi_endpoints() {
    let o = otto(&["xi", "--points", "5"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let rs = rows(&stdout(&o));
    assert_eq!(rs.len(), 5);
    let (first, last) = (&rs[0], &rs[4]);
    assert_eq!(num(first, "tau_us"), 10.0);
    assert_eq!(num(last, "tau_us"), 1000.0);
    assert!((num(first, "xi") - 0.498649618779).abs() < 1e-8);
    assert!((num(last, "xi") - 0.003223633897941).abs() < 1e-8);
    assert!(rs.iter().all(|r| field(r, "converged") == "true"));
}

#[test]
fn tau_sweep_and_phase_map_shapes() {
    let o = otto(&[
        "tau-sweep",
        "--pc",
        "0.4",
        "--ph",
        "0.8",
        "--points",
        "6",
        "--linear",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let rs = rows(&stdout(&o));
    assert_eq!(rs.len(), 6);
    assert!(rs
        .iter()
        .all(|r| field(r, "mode") == "engine" && num(r, "w_fric") < 0.0));

    let o = otto(&[
        "phase-map",
        "--xi",
        "0.25",
        "--ph-points",
        "10",
        "--pc-points",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let rs = rows(&stdout(&o));
    assert_eq!(
        rs.iter().filter(|r| field(r, "series") == "cell").count(),
        50
    );
    assert!(rs.iter().any(|r| field(r, "series") == "zero_line"));
}

#[test]
fn windows_output() {
    let o = otto(&["windows", "--ph", "0.8", "--pc", "0.4"]);
    let rs = rows(&stdout(&o));
    assert_eq!(field(&rs[0], "solve_for"), "p_c");
    assert!((num(&rs[0], "lower") - 1.0 / 3.0).abs() < 1e-11);
    assert_eq!(field(&rs[0], "upper_inclusive"), "false");
    assert_eq!(field(&rs[1], "solve_for"), "p_h");
    assert!((num(&rs[1], "lower") - 0.68).abs() < 1e-12);
    assert_eq!(field(&rs[1], "upper_inclusive"), "true");
    // No window for a non-inverted hot bath.
    let o = otto(&["windows", "--ph", "0.3"]);
    assert_eq!(field(&rows(&stdout(&o))[0], "empty"), "true");
}

#[test]
fn verify_passes() {
    let o = otto(&["verify"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    // Names and details may hold commas; the status sits before the quoted detail.
    let checks: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert!(checks.len() >= 8);
    assert!(checks.iter().all(|l| l.contains(",pass,\"")), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec![
            "cycle", "--pc", "0.4", "--uc", "1", "--ph", "0.8", "--xi", "0.1",
        ],
        vec!["cycle", "--ph", "0.8", "--xi", "0.1"],
        vec!["cycle", "--pc", "0.4", "--ph", "0.8"],
        vec!["cycle", "--pc", "1.4", "--ph", "0.8", "--xi", "0.1"],
        vec!["cycle", "--pc", "0.4", "--ph", "0.8", "--xi", "0.7"],
        vec![
            "cycle", "--nu-c", "4", "--pc", "0.4", "--ph", "0.8", "--xi", "0.1",
        ],
        vec!["xi", "--tau-min", "-3"],
        vec!["tau-sweep", "--pc", "0.6", "--ph", "0.8"],
        vec!["bogus"],
    ] {
        let o = otto(&args);
        assert_eq!(o.status.code(), Some(EXIT_USAGE), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unconverged_points_are_written_and_flagged() {
    let o = otto(&[
        "xi",
        "--points",
        "2",
        "--max-doublings",
        "0",
        "--steps",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_FAILURE));
    let rs = rows(&stdout(&o));
    assert_eq!(rs.len(), 2);
    assert!(rs.iter().any(|r| field(r, "converged") == "false"));
}

#[test]
fn output_file_and_reproducibility() {
    let dir = std::env::temp_dir().join(format!("otto-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let args = ["tau-sweep", "--pc", "0.2", "--ph", "0.4", "--points", "5"];
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["-o", p]);
    let o = otto(&with_file);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(o.stdout.is_empty());
    let file = std::fs::read(&path).unwrap();

    let a = otto(&args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    let b = otto(&threaded);
    assert_eq!(a.stdout, file);
    assert_eq!(a.stdout, b.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn in_process_entry_point() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(["otto", "windows", "--pc", "0.25"], &mut out, &mut err);
    assert_eq!(code, EXIT_OK);
    assert!(String::from_utf8(out).unwrap().contains("p_h,0.25,"));
}
