use std::path::Path;
use std::process::{Command, Output};

use tpsa::cli::CSV_HEADER;

fn tpsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpsa")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_grid_reports_admissibility() {
    let out = tpsa(&["check-grid", "gt1:4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("admissible: yes"), "{text}");
    assert!(text.contains("cells: 16"));

    let out = tpsa(&["check-grid", "gt9:4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_writes_csv_and_vtk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.cfg",
        "model = elastic\ngrid = gt1\nlevels = 4, 8\nlambda = 1, inf\nsolution = elastic_stream\n",
    );
    let out_dir = dir.path().join("out");
    let out = tpsa(&["run", &cfg, "--out", out_dir.to_str().unwrap(), "--vtk"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 4);
    let row: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(row.len(), CSV_HEADER.split(',').count());
    assert_eq!(&row[..3], &["elastic", "gt1", "8"]);
    assert_eq!(row[5], "lambda");
    assert!(row[12].parse::<f64>().unwrap() > 1.0, "order column: {}", row[12]);
    assert_eq!(row[13], "", "wall time only with --timing");

    let vtk: Vec<_> = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "vtk"))
        .collect();
    assert_eq!(vtk.len(), 4);
    let body = std::fs::read_to_string(vtk[0].path()).unwrap();
    assert!(body.starts_with("# vtk DataFile Version 3.0"));
    assert!(body.contains("CELL_DATA"));
}

#[test]
fn timing_fills_wall_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.cfg", "model = poromech\ngrid = gt1\nlevels = 4\ntheta = 1\nkappa = 1\nsolution = poromech_sine\n");
    let out = tpsa(&["run", &cfg, "--out", dir.path().to_str().unwrap(), "--timing"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let last = csv.lines().nth(1).unwrap().rsplit(',').next().unwrap().to_string();
    assert!(last.parse::<f64>().unwrap() >= 0.0);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert_eq!(tpsa(&["run", missing.to_str().unwrap()]).status.code(), Some(2));

    let bad = write_config(dir.path(), "bad.cfg", "model = elastic\ngrid = gt1\nlevels = 4\nlambda = soft\nsolution = zero\n");
    let out = tpsa(&["run", &bad, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));

    let traction = write_config(
        dir.path(),
        "traction.cfg",
        "model = elastic\ngrid = gt1\nlevels = 4\nbc_u = neumann\nsolution = elastic_stream\n",
    );
    let out = tpsa(&["run", &traction, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "rough.cfg", "model = cosserat\ngrid = gt4\nlevels = 4, 8\nseed = 3\nell = 1e-2\nsolution = elastic_stream\n");
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let d = dir.path().join(sub);
        assert!(tpsa(&["run", &cfg, "--out", d.to_str().unwrap()]).status.success());
        outputs.push(std::fs::read(d.join("rough.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);

    // another seed perturbs the grid differently
    let other = write_config(dir.path(), "rough2.cfg", "model = cosserat\ngrid = gt4\nlevels = 4, 8\nseed = 4\nell = 1e-2\nsolution = elastic_stream\n");
    assert!(tpsa(&["run", &other, "--out", dir.path().to_str().unwrap()]).status.success());
    let a = String::from_utf8(outputs[0].clone()).unwrap();
    let b = std::fs::read_to_string(dir.path().join("rough2.csv")).unwrap();
    assert_ne!(a.lines().nth(1), b.lines().nth(1));
}
