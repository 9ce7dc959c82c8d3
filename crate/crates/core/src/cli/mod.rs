//! Command implementations behind the `tpsa` binary.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O or parse error,
//! 3 solver failure.

pub mod config;
pub mod vtk;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Result, TpsaError};
use crate::geometry::{check_admissibility, check_face_orthogonality, mesh_io, Grid, GridFamily};
use crate::verification::{run_convergence, ConvergenceReport};
use config::{parse_config, ExperimentConfig};

pub const CSV_HEADER: &str =
    "model,grid,n,delta,cells,param_name,param_value,rel_err_total,rel_err_u,rel_err_r,rel_err_p,rel_err_w,order,wall_ms";

pub fn exit_code(e: &TpsaError) -> i32 {
    match e {
        TpsaError::Io(_) | TpsaError::Parse { .. } => 2,
        TpsaError::SingularSystem(_) => 3,
        _ => 1,
    }
}

/// `gt1:8`, `gt4:8:<seed>` or `file:<path>`.
pub fn parse_grid_spec(spec: &str) -> Result<Grid<f64>> {
    if let Some(path) = spec.strip_prefix("file:") {
        return mesh_io::read_mesh(Path::new(path));
    }
    let bad = || TpsaError::Config { key: "grid".into(), message: format!("expected family:n[:seed] or file:<path>, got `{spec}`") };
    let parts: Vec<&str> = spec.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let fam = GridFamily::parse(parts[0]).ok_or_else(bad)?;
    let n: usize = parts[1].parse().ok().filter(|n| *n > 0).ok_or_else(bad)?;
    let seed: u64 = match parts.get(2) {
        Some(s) => s.parse().map_err(|_| bad())?,
        None => 0,
    };
    fam.build(n, seed)
}

/// Admissibility report text and exit code.
pub fn cmd_check_grid(spec: &str) -> (String, i32) {
    match parse_grid_spec(spec) {
        Err(e) => (format!("error: {e}"), exit_code(&e)),
        Ok(grid) => {
            let adm = check_admissibility(&grid);
            let defect = check_face_orthogonality(&grid).max;
            let head = if adm.admissible { "yes".to_string() } else { format!("no ({})", adm.violation.unwrap_or_default()) };
            let text = format!(
                "admissible: {head}, orthogonality defect: {defect:.1e}\ncells: {}, faces: {}, closure defect: {:.1e}, volume defect: {:.1e}",
                grid.num_cells(),
                grid.num_faces(),
                adm.closure_defect,
                adm.volume_defect
            );
            (text, if adm.admissible { 0 } else { 1 })
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub vtk: bool,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

/// CSV text for the reports of every sweep point, in sweep order.
pub fn format_csv(cfg: &ExperimentConfig, reports: &[ConvergenceReport<f64>], timing: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{CSV_HEADER}");
    for (i, (spec, rep)) in cfg.points.iter().zip(reports).enumerate() {
        let (pname, pval) = match &cfg.sweep {
            Some((k, vs)) => (k.as_str(), vs[i].as_str()),
            None => ("", ""),
        };
        for l in &rep.levels {
            let e = &l.errors;
            let order = l.order.map_or(String::new(), |o| format!("{o:.4}"));
            let wall = if timing { format!("{:.1}", l.wall_ms) } else { String::new() };
            let _ = writeln!(
                s,
                "{},{},{},{:.6e},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{},{}",
                spec.model.name(),
                spec.grid.name(),
                l.n,
                l.delta,
                l.cells,
                pname,
                pval,
                e.total,
                e.u,
                e.r,
                e.p,
                e.w,
                order,
                wall
            );
        }
    }
    s
}

/// Runs every sweep point of the configuration at `path`, writes
/// `<out>/<config stem>.csv` (and VTK files if requested) and returns the CSV
/// path.
pub fn cmd_run(path: &Path, opts: &RunOptions) -> Result<PathBuf> {
    let text = std::fs::read_to_string(path)?;
    let cfg = parse_config(&text)?;
    let reports: Vec<ConvergenceReport<f64>> = cfg.points.iter().map(run_convergence).collect::<Result<_>>()?;
    let out = opts.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)?;
    let stem = path.file_stem().map_or("run".to_string(), |s| s.to_string_lossy().into_owned());
    let csv_path = out.join(format!("{}.csv", sanitize(&stem)));
    std::fs::write(&csv_path, format_csv(&cfg, &reports, opts.timing))?;
    if opts.vtk {
        for (i, (spec, rep)) in cfg.points.iter().zip(&reports).enumerate() {
            let tag = cfg.sweep.as_ref().map_or(String::new(), |(k, vs)| format!("_{k}-{}", vs[i]));
            for l in &rep.levels {
                let name = sanitize(&format!("{stem}_{}{tag}_n{}", spec.model.name(), l.n));
                std::fs::write(out.join(format!("{name}.vtk")), vtk::write_vtk(&l.grid, &l.solution, &name))?;
            }
        }
    }
    Ok(csv_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid_spec("gt1:3").unwrap().num_cells(), 9);
        assert_eq!(parse_grid_spec("gt3:2").unwrap().num_cells(), 10);
        assert!(parse_grid_spec("gt4:8:1").is_ok());
        assert!(matches!(parse_grid_spec("gt9:3"), Err(TpsaError::Config { .. })));
        assert!(matches!(parse_grid_spec("gt1:0"), Err(TpsaError::Config { .. })));
        assert!(matches!(parse_grid_spec("file:/nonexistent/mesh.txt"), Err(TpsaError::Io(_))));
    }

    #[test]
    fn check_grid_text() {
        let (text, code) = cmd_check_grid("gt1:8");
        assert_eq!(code, 0);
        assert!(text.starts_with("admissible: yes, orthogonality defect: 0.0e0"), "{text}");
        let (text, code) = cmd_check_grid("gt4:8:1");
        assert_eq!(code, 0);
        let defect: f64 = text.split("defect: ").nth(1).unwrap().split('\n').next().unwrap().parse().unwrap();
        assert!(defect > 1e-2);
    }
}
