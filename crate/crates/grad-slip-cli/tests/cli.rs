use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grad-slip"))
        .args(args)
        .args(["--out", out.to_str().unwrap()])
        .env("RUST_BACKTRACE", "0")
        .output()
        .expect("spawn grad-slip")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn assemble_reports_signature() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["assemble", "--M", "5", "--chi", "1.0"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("assemble.txt")).unwrap();
    assert!(text.contains("22 positive, 22 negative, 12 zero"), "{text}");
}

#[test]
fn assemble_creates_missing_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("a/b");
    let o = run(&["assemble", "--M", "3"], &nested);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(nested.join("assemble.txt").exists());
}

#[test]
fn couette_rejects_even_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["assemble", "--couette", "--M", "4"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("odd M"), "{}", stderr(&o));
}

#[test]
fn empty_order_list_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["slip-coeffs", "--M", ""], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("empty M list"), "{}", stderr(&o));
}

#[test]
fn eps_outside_unit_interval_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["couette", "--eps", "1.5"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("(0, 1)"), "{}", stderr(&o));
}

#[test]
fn slip_coeffs_table_has_reference_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["slip-coeffs", "--M", "4", "--chi", "1.0,0.5"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(dir.path().join("slip_coeffs.csv")).unwrap();
    let head = rdr.headers().unwrap().clone();
    let col = |name: &str| head.iter().position(|h| h == name).unwrap();
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    let k0: f64 = rows[0][col("k0")].parse().unwrap();
    assert!((k0 - 0.99247).abs() < 2e-4);
    assert_eq!(&rows[0][col("ref_k0")], "1.01619");
    assert_eq!(&rows[1][col("ref_k0")], "");
    assert_eq!(&rows[1][col("status")], "ok");
}

#[test]
fn couette_cfl_violation_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "couette", "--eps", "0.1", "--T", "0.1", "--grid", "200", "--dt", "0.1",
        ],
        dir.path(),
    );
    assert!(!o.status.success());
    assert!(stderr(&o).contains("CFL"), "{}", stderr(&o));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn couette_profiles_share_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "couette", "--eps", "0.1", "--T", "0.1,0.25", "--grid", "200",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for t in ["0.1", "0.25"] {
        let path = dir.path().join(format!("couette_M7_chi1_eps0.1_t{t}.csv"));
        let mut rdr = csv::Reader::from_path(&path).unwrap();
        let head: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(
            head,
            [
                "x2",
                "x2_over_sqrt_eps",
                "moment",
                "noslip",
                "slip1",
                "slip2"
            ]
        );
        assert_eq!(rdr.records().count(), 201);
    }
}

#[test]
fn single_eps_gives_data_without_slope() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "convergence",
            "--eps",
            "0.0625",
            "--T",
            "0.25",
            "--grid",
            "200",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let data = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert_eq!(data.lines().count(), 3);
    let slopes = fs::read_to_string(dir.path().join("slopes.csv")).unwrap();
    assert!(
        slopes.lines().skip(1).all(|l| l.ends_with(",0.25,")),
        "{slopes}"
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# slip table\nM = 3\nchi = 0.5\n").unwrap();
    let o = run(
        &["slip-coeffs", "--config", cfg.to_str().unwrap(), "--M", "4"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("slip_coeffs.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("4,0.5,"), "{text}");
}

#[test]
fn malformed_config_is_reported_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "M 3\n").unwrap();
    let o = run(
        &["slip-coeffs", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert!(!o.status.success());
    assert!(stderr(&o).contains("bad.cfg:1"), "{}", stderr(&o));
}

#[test]
fn wall_table_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let wall = dir.path().join("wall.csv");
    fs::write(&wall, "t,u\n0,0\n1,1\n").unwrap();
    let o = run(
        &[
            "couette",
            "--eps",
            "0.1",
            "--T",
            "0.1",
            "--grid",
            "100",
            "--wall",
            wall.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn slip_bc_records_order_zero_is_no_slip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["slip-bc-records", "--M", "4"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("slip_bc_records.csv")).unwrap();
    let order0: Vec<_> = text.lines().filter(|l| l.starts_with("4,1,0,")).collect();
    assert!(!order0.is_empty());
    assert!(order0.iter().all(|l| l.ends_with(",,")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [a.path(), b.path()] {
        let o = run(
            &["couette", "--eps", "0.05", "--T", "0.1", "--grid", "200"],
            d,
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let name = "couette_M7_chi1_eps0.05_t0.1.csv";
    assert_eq!(
        fs::read(a.path().join(name)).unwrap(),
        fs::read(b.path().join(name)).unwrap()
    );
}
