//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # elasticity on the Cartesian family, sweeping λ
//! model = elastic
//! grid = gt1
//! levels = 8, 16, 32, 64
//! lambda = 1, 1e2, 1e4, inf
//! solution = elastic_stream
//! bc_u = dirichlet
//! bc_u_top = neumann
//! ```
//!
//! Keys: `model`, `grid`, `levels`, `seed`, `solution`, the material keys
//! `mu`, `lambda` (or `lambda_inv`), `ell`, `theta`, `kappa`, `eta_w`, and
//! boundary keys `bc_<field>` or `bc_<field>_<side>` with field `u`, `r` or
//! `w`. Boundary values are `dirichlet`, `neumann`, `inf` or a nonnegative
//! Robin weight. At most one material key may hold a comma list; it becomes
//! the sweep parameter.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::boundary::{Robin, Side};
use crate::error::{Result, TpsaError};
use crate::geometry::GridFamily;
use crate::materials::MaterialParams;
use crate::verification::exact::SOLUTION_NAMES;
use crate::verification::{ExperimentSpec, GridSource, Model, SideKinds};

const MATERIAL_KEYS: [&str; 7] = ["mu", "lambda", "lambda_inv", "ell", "theta", "kappa", "eta_w"];

/// A parsed configuration: one experiment per sweep value.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub sweep: Option<(String, Vec<String>)>,
    pub points: Vec<ExperimentSpec>,
}

fn cfg(key: &str, message: impl Into<String>) -> TpsaError {
    TpsaError::Config { key: key.to_string(), message: message.into() }
}

fn number(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| cfg(key, format!("`{v}` is not a number")))?;
    if x.is_nan() {
        return Err(cfg(key, "NaN is not allowed"));
    }
    Ok(x)
}

fn robin(key: &str, v: &str) -> Result<Robin<f64>> {
    match v {
        "dirichlet" => Ok(Robin::dirichlet()),
        "neumann" | "inf" => Ok(Robin::neumann()),
        _ => {
            let b = number(key, v)?;
            Robin::finite(b).map_err(|e| cfg(key, e.to_string()))
        }
    }
}

fn set_material(p: &mut MaterialParams<f64>, key: &str, v: &str) -> Result<()> {
    if key == "lambda" {
        p.lambda_inv = if v == "inf" {
            0.0
        } else {
            let l = number(key, v)?;
            if !(l > 0.0) || !l.is_finite() {
                return Err(cfg(key, "λ must be positive (use `inf` or `lambda_inv = 0` for the incompressible limit)"));
            }
            1.0 / l
        };
        return Ok(());
    }
    let x = number(key, v)?;
    if !x.is_finite() {
        return Err(cfg(key, "value must be finite"));
    }
    match key {
        "mu" => p.mu = x,
        "lambda_inv" => p.lambda_inv = x,
        "ell" => p.ell = x,
        "theta" => p.theta = x,
        "kappa" => p.kappa = x,
        "eta_w" => p.eta_w = x,
        _ => unreachable!("material key"),
    }
    Ok(())
}

fn apply_bc(kinds: &mut SideKinds, key: &str, v: &str) -> Result<()> {
    let rest = &key[3..];
    let (field, side) = match rest.split_once('_') {
        Some((f, s)) => (f, Some(Side::parse(s).ok_or_else(|| cfg(key, format!("unknown side `{s}`")))?)),
        None => (rest, None),
    };
    let r = robin(key, v)?;
    let sides: Vec<Side> = side.map_or(Side::ALL.to_vec(), |s| vec![s]);
    for s in sides {
        let k = kinds.get_mut(s);
        match field {
            "u" => k.b_u = r,
            "r" => k.b_r = r,
            "w" => k.b_w = r,
            _ => return Err(cfg(key, format!("unknown boundary field `{field}`"))),
        }
    }
    Ok(())
}

/// Parses the configuration text. Errors name the offending key.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| cfg(&format!("line {}", ln + 1), format!("expected `key = value`, found `{line}`")))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if v.is_empty() {
            return Err(cfg(&k, "missing value"));
        }
        if entries.insert(k.clone(), (ln + 1, v)).is_some() {
            return Err(cfg(&k, "key given twice"));
        }
    }
    let known = |k: &str| {
        ["model", "grid", "levels", "seed", "solution"].contains(&k) || MATERIAL_KEYS.contains(&k) || k.starts_with("bc_")
    };
    if let Some(k) = entries.keys().find(|k| !known(k)) {
        return Err(cfg(k, "unknown key"));
    }
    let get = |k: &str| entries.get(k).map(|(_, v)| v.as_str());
    let required = |k: &str| get(k).ok_or_else(|| cfg(k, "required key missing"));

    let model = Model::parse(required("model")?).ok_or_else(|| cfg("model", "expected elastic, cosserat, stokes or poromech"))?;
    let grid_s = required("grid")?;
    let grid = match grid_s.strip_prefix("file:") {
        Some(p) if !p.is_empty() => GridSource::File(PathBuf::from(p)),
        Some(_) => return Err(cfg("grid", "empty file path")),
        None => GridSource::Family(GridFamily::parse(grid_s).ok_or_else(|| cfg("grid", "expected gt1..gt4 or file:<path>"))?),
    };
    let levels: Vec<usize> = match get("levels") {
        Some(v) => v
            .split(',')
            .map(|s| s.trim().parse::<usize>().ok().filter(|n| *n > 0).ok_or_else(|| cfg("levels", format!("invalid level `{}`", s.trim()))))
            .collect::<Result<_>>()?,
        None if matches!(grid, GridSource::File(_)) => Vec::new(),
        None => return Err(cfg("levels", "required key missing")),
    };
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(cfg("levels", "levels must be strictly increasing"));
    }
    let seed = match get("seed") {
        Some(v) => v.parse::<u64>().map_err(|_| cfg("seed", format!("`{v}` is not an unsigned integer")))?,
        None => 0,
    };
    let solution = required("solution")?.to_string();
    if !SOLUTION_NAMES.contains(&solution.as_str()) {
        return Err(cfg("solution", format!("expected one of {}", SOLUTION_NAMES.join(", "))));
    }
    if get("lambda").is_some() && get("lambda_inv").is_some() {
        return Err(cfg("lambda", "give either lambda or lambda_inv, not both"));
    }

    let mut sweep: Option<(String, Vec<String>)> = None;
    for (k, (_, v)) in &entries {
        if v.contains(',') && k != "levels" {
            if !MATERIAL_KEYS.contains(&k.as_str()) {
                return Err(cfg(k, "only material parameters can be swept"));
            }
            if let Some((other, _)) = &sweep {
                return Err(cfg(k, format!("only one key may be swept, `{other}` already is")));
            }
            sweep = Some((k.clone(), v.split(',').map(|s| s.trim().to_string()).collect()));
        }
    }

    let mut base = MaterialParams::<f64>::default();
    for k in MATERIAL_KEYS {
        if let Some(v) = get(k) {
            if sweep.as_ref().is_none_or(|(s, _)| s != k) {
                set_material(&mut base, k, v)?;
            }
        }
    }
    if model == Model::Stokes
        && (get("lambda").is_some_and(|v| v != "inf") || get("lambda_inv").is_some_and(|v| number("lambda_inv", v).ok() != Some(0.0))) {
            return Err(cfg("lambda", "the stokes model is incompressible"));
        }

    let mut kinds = SideKinds::default();
    // side-less keys first so that side keys override them
    let mut bc_keys: Vec<&String> = entries.keys().filter(|k| k.starts_with("bc_")).collect();
    bc_keys.sort_by_key(|k| k.matches('_').count());
    for k in bc_keys {
        apply_bc(&mut kinds, k, &entries[k].1)?;
    }

    let values: Vec<Option<(String, String)>> = match &sweep {
        Some((k, vs)) => vs.iter().map(|v| Some((k.clone(), v.clone()))).collect(),
        None => vec![None],
    };
    let mut points = Vec::with_capacity(values.len());
    for sv in values {
        let mut params = base;
        if let Some((k, v)) = &sv {
            set_material(&mut params, k, v)?;
        }
        let spec = ExperimentSpec { model, grid: grid.clone(), levels: levels.clone(), params, bc: kinds, solution: solution.clone(), seed };
        let key = sv.as_ref().map_or("mu", |(k, _)| k.as_str());
        crate::materials::MaterialField::uniform(1, spec.effective_params())
            .validate(1, model.has_fluid())
            .map_err(|e| cfg(key, e.to_string()))?;
        points.push(spec);
    }
    Ok(ExperimentConfig { sweep, points })
}
