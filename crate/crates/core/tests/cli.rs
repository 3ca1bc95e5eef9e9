use std::fs;
use std::process::{Command, Output};

fn xyz2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xyz2"))
        .args(args)
        .env_remove("XYZ2_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn build_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    let o = xyz2(&["build", "xyz2", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = xyz2(&["validate", "--code", path.to_str().unwrap(), "--distances"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("overall          ok"));
}

#[test]
fn broken_code_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    let text = stdout(&xyz2(&["build", "xzzx", "3"]));
    // Swap one letter of the first generator so it stops commuting.
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let idx = lines.iter().position(|l| l.contains("XZZX") || l.contains("ZXXZ")).unwrap_or(1);
    let broken = lines[idx].replacen("X", "Y", 1);
    lines[idx] = broken;
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let o = xyz2(&["validate", "--code", path.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(2) | Some(3)), "{:?}", o.status);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(xyz2(&["build", "hexagon", "3"]).status.code(), Some(2));
    assert_eq!(xyz2(&["build", "xyz2", "4"]).status.code(), Some(2));
    assert_eq!(xyz2(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(xyz2(&["analytic", "--p", "0.7"]).status.code(), Some(2));
}

#[test]
fn exact_beyond_cap_exits_4() {
    let s = "0".repeat(49);
    let o = xyz2(&["decode", "--d", "5", "--syndrome", &s, "--decoder", "exact"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("20"));
}

#[test]
fn decode_prints_scores() {
    let s = "0".repeat(17);
    let o = xyz2(&["decode", "--syndrome", &s, "--noise", "p=0.1,eta=inf,axis=Y", "--decoder", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chosen"], "I");
    // Pure noise leaves two of the four classes impossible.
    let nulls = v["class_scores"].as_array().unwrap().iter().filter(|x| x.is_null()).count();
    assert_eq!(nulls, 2);
}

#[test]
fn analytic_table() {
    let o = xyz2(&["analytic", "--family", "xzzx", "--d", "3", "--axis", "Z", "--p-range", "0.1:0.3:0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("xzzx,3,9,0.1,inf,Z,analytic,"));
    let pf: f64 = rows[1].split(',').nth(10).unwrap().parse().unwrap();
    assert!((pf - 0.028).abs() < 1e-15);
}

#[test]
fn experiment_then_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(
        &cfg,
        r#"
seed = 5
[sweep.pure]
family = "xyz2"
distances = [3, 5]
p = [0.3, 0.4, 0.45]
eta = "inf"
axis = "X"
decoder = "analytic"
"#,
    )
    .unwrap();
    let out = dir.path().join("r.csv");
    let o = xyz2(&["experiment", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("family,d,n,p,eta,axis,decoder,p_sample,trials,failures,pf,stderr,seed\n"));
    assert_eq!(csv.lines().count(), 7);
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.csv.json")).unwrap()).unwrap();
    assert!(side["detail"]["sweeps"].is_array());
    assert_eq!(side["argv"][1], "experiment");

    // Below 1/2 the larger code is always better, so nothing crosses.
    let o = xyz2(&["threshold", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_config_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[sweep.a]\nfamily = \"xyz2\"\ndistances = [3]\np = [0.1]\ntrails = 5\n").unwrap();
    let o = xyz2(&["experiment", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("trails") && err.contains("line 5"), "{err}");
}

#[test]
fn experiment_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    fs::write(
        &cfg,
        "[sweep.s]\nfamily = \"xzzx\"\ndistances = [3]\np = [0.1, 0.2]\ndecoder = \"ewd\"\ntrials = 60\n",
    )
    .unwrap();
    let a = xyz2(&["experiment", cfg.to_str().unwrap(), "--workers", "1", "--seed", "9"]);
    let b = xyz2(&["experiment", cfg.to_str().unwrap(), "--workers", "3", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn single_bulk_x_error_decodes_to_identity() {
    use xyz2::code::build_xyz2;
    use xyz2::decode::syndrome;
    use xyz2::{Letter, PauliOperator};

    let code = build_xyz2(3).unwrap();
    let n = code.num_qubits();
    let mut checked = 0;
    for q in 0..n {
        let s = syndrome(&code, &PauliOperator::single(n, q, Letter::X)).unwrap();
        // Bulk X errors flag exactly two plaquettes and nothing else.
        if s.bits.count_ones() != 2 {
            continue;
        }
        let o = xyz2(&["decode", "--syndrome", &s.to_string(), "--noise", "p=0.05", "--decoder", "exact"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["chosen"], "I", "qubit {q}");
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn bad_noise_letter_is_a_usage_error() {
    let s = "0".repeat(17);
    let o = xyz2(&["decode", "--syndrome", &s, "--noise", "p=0.1,axis=Q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_get_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = xyz2(&["analytic", "--p", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("curve.csv.json")).unwrap()).unwrap();
    assert_eq!(side["argv"][1], "analytic");
}

#[test]
fn build_counts_generator_lines() {
    for (family, d, gens) in [("xyz2", "3", 17), ("xzzx", "5", 24)] {
        let text = stdout(&xyz2(&["build", family, d]));
        let count = text
            .lines()
            .filter(|l| ["plaquette", "link", "half_plaquette", "square_plaquette", "boundary_pair"].contains(&l.split(' ').next().unwrap_or("")))
            .count();
        assert_eq!(count, gens, "{family} {d}");
    }
}
