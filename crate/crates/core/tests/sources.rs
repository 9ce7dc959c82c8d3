//! Manufactured sources against an independent fourth-order difference oracle.

use tpsa::assembly::evaluate_sources;
use tpsa::geometry::GridFamily;
use tpsa::verification::exact::{ElasticStream, ExactSolution, PoromechSine};
use tpsa::{Grid64, MaterialField, MaterialParams};

const H: f64 = 2e-3;

fn d(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3], axis: usize) -> f64 {
    let at = |s: f64| {
        let mut y = x;
        y[axis] += s * H;
        f(y)
    };
    (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * H)
}

fn dd(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3], axis: usize) -> f64 {
    let at = |s: f64| {
        let mut y = x;
        y[axis] += s * H;
        f(y)
    };
    (-at(-2.0) + 16.0 * at(-1.0) - 30.0 * at(0.0) + 16.0 * at(1.0) - at(2.0)) / (12.0 * H * H)
}

fn lap(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3]) -> f64 {
    dd(f, x, 0) + dd(f, x, 1)
}

/// Planar sources written out component by component.
fn oracle(e: &dyn ExactSolution, p: &MaterialParams<f64>, x: [f64; 3]) -> [f64; 5] {
    let ux = |y: [f64; 3]| e.u(y)[0];
    let uy = |y: [f64; 3]| e.u(y)[1];
    let r = |y: [f64; 3]| e.r(y)[2];
    let pr = |y: [f64; 3]| e.p(y);
    let w = |y: [f64; 3]| e.w(y);
    let eta = p.eta_w + p.lambda_inv * p.theta * p.theta;
    [
        2.0 * p.mu * lap(&ux, x) - d(&r, x, 1) + d(&pr, x, 0),
        2.0 * p.mu * lap(&uy, x) + d(&r, x, 0) + d(&pr, x, 1),
        -(d(&uy, x, 0) - d(&ux, x, 1)) + p.ell * p.ell * lap(&r, x) - r(x) / p.mu,
        d(&ux, x, 0) + d(&uy, x, 1) - p.lambda_inv * pr(x) - p.theta * p.lambda_inv * w(x),
        -p.kappa * lap(&w, x) + p.theta * p.lambda_inv * pr(x) + eta * w(x),
    ]
}

#[test]
fn sources_match_oracle_at_twenty_points() {
    // perturbed grid so that the sample points are not on a lattice
    let grid: Grid64 = GridFamily::Gt4.build(5, 11).unwrap();
    let p = MaterialParams { mu: 1.3, lambda_inv: 0.7, ell: 0.4, theta: 0.9, kappa: 1.1, eta_w: 0.2 };
    let mat = MaterialField::uniform(grid.num_cells(), p);
    for exact in [&ElasticStream as &dyn ExactSolution, &PoromechSine] {
        let src = evaluate_sources(exact, &mat, &grid, true).unwrap();
        for (i, c) in grid.cells().iter().take(20).enumerate() {
            let o = oracle(exact, &p, c.center);
            let got = [src.fu[2 * i], src.fu[2 * i + 1], src.fr[i], src.fp[i], src.fw[i]];
            for (k, (a, b)) in got.iter().zip(&o).enumerate() {
                assert!((a - b).abs() <= 1e-6 * (1.0 + b.abs()), "{} cell {i} component {k}: {a} vs {b}", exact.name());
            }
        }
    }
}

#[test]
fn stream_function_field_is_solenoidal() {
    let grid: Grid64 = GridFamily::Gt2.build(8, 1).unwrap();
    let mat = MaterialField::uniform(grid.num_cells(), MaterialParams::default());
    let src = evaluate_sources(&ElasticStream, &mat, &grid, false).unwrap();
    // p = 0, so f^p is the divergence alone
    assert!(src.fp.iter().all(|v| v.abs() <= 1e-10), "{:?}", src.fp.iter().fold(0.0f64, |m, v| m.max(v.abs())));
}

#[test]
fn poromech_fluid_source_at_center() {
    let grid: Grid64 = GridFamily::Gt1.build(1, 0).unwrap();
    let p = MaterialParams { theta: 1.0, kappa: 1.0, ..Default::default() };
    let mat = MaterialField::uniform(1, p);
    let src = evaluate_sources(&PoromechSine, &mat, &grid, true).unwrap();
    let o = oracle(&PoromechSine, &p, [0.5, 0.5, 0.0]);
    assert!((src.fw[0] - o[4]).abs() <= 1e-6);
    // closed form: −Δw + p + w with w = sin(πx) y(1−y), p = sin(πy) x(1−x)
    let pi = std::f64::consts::PI;
    let closed = 2.0 + pi * pi / 4.0 + 0.25 + 0.25;
    assert!((src.fw[0] - closed).abs() <= 1e-6, "{} vs {closed}", src.fw[0]);
}
