use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{HolonomyError, Result};
use crate::paths::{solid_angle, TriangleGeometry};
use crate::sjoqvist::{qubit_amplitude, PhaseResult};
use crate::uhlmann::{triangle_closed_form, triangle_trace_formula};

use super::csv::Table;
use super::gibbs::{figure_xi_grid, gibbs_sweep};
use super::ratios::{circular_ratios, triangle_ratios};
use super::spec_file::{Param, Scenario, SweepSpec};
use super::ComparisonRow;

/// Points per axis of the `(r, ξ)` figure grids.
pub const FIGURE_GRID: usize = 101;

/// Runs `f` on a pool capped at `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads.map(|n| rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()) {
        Some(Ok(pool)) => pool.install(f),
        _ => f(),
    }
}

/// `lo + (hi - lo)(i + 1)/(n + 1)`, `i = 0..n`.
fn interior(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i + 1) as f64 / (n + 1) as f64).collect()
}

fn triangle_row(r: f64, theta1: f64, theta2: f64, phibar: f64) -> ComparisonRow {
    let mut row = ComparisonRow {
        r: Some(r),
        theta1: Some(theta1),
        theta2: Some(theta2),
        phibar: Some(phibar),
        ..Default::default()
    };
    let Ok(tri) = TriangleGeometry::new(theta1, theta2, phibar, r) else {
        return row;
    };
    if let Ok(s) = solid_angle(&tri).and_then(|omega| qubit_amplitude(r, omega)) {
        let s = PhaseResult::from_amplitude(s);
        row.gamma_sjoqvist = Some(s.gamma);
        row.nu_sjoqvist = Some(s.visibility);
    }
    // The trace formula keeps the full branch; the arctan closed form only fixes it mod π.
    if let Ok(u) = triangle_trace_formula(r, &tri).or_else(|_| triangle_closed_form(r, &tri)) {
        row.gamma_uhlmann = Some(u.gamma);
        row.nu_uhlmann = Some(u.visibility);
    }
    if let Ok(q) = triangle_ratios(r, &tri) {
        row.tan_ratio = q.tan_ratio;
        row.nu_ratio = q.nu_ratio;
    }
    row
}

fn circle_row(r: f64, xi: f64) -> ComparisonRow {
    let mut row = ComparisonRow { r: Some(r), xi: Some(xi), ..Default::default() };
    if let Ok(c) = circular_ratios(r, xi) {
        row.gamma_sjoqvist = Some(c.sjoqvist.gamma);
        row.nu_sjoqvist = Some(c.sjoqvist.visibility);
        row.gamma_uhlmann = Some(c.uhlmann.gamma);
        row.nu_uhlmann = Some(c.uhlmann.visibility);
        row.tan_ratio = c.tan_ratio;
        row.nu_ratio = c.nu_ratio;
    }
    row
}

fn product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

/// Evaluates every point of `spec`; rows follow the nesting order of the
/// scenario parameters (gibbs: `k`, then `ξ`). Points where a quantity is
/// undefined keep their inputs and leave that output empty.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<Vec<ComparisonRow>> {
    match spec.scenario {
        Scenario::Gibbs => {
            let alpha = spec.values(Param::InvTemp);
            let mut rows = Vec::new();
            for &k in &spec.k_list {
                for &a in &alpha {
                    rows.extend(gibbs_sweep(&[k], a, &spec.values(Param::Xi), threads)?);
                }
            }
            Ok(rows)
        }
        scenario => {
            let axes: Vec<Vec<f64>> = scenario.params().iter().map(|&p| spec.values(p)).collect();
            let points = product(&axes);
            Ok(with_threads(threads, || {
                points
                    .par_iter()
                    .map(|p| match scenario {
                        Scenario::Triangle => triangle_row(p[0], p[1], p[2], p[3]),
                        _ => circle_row(p[0], p[1]),
                    })
                    .collect()
            }))
        }
    }
}

type InputCells = fn(&ComparisonRow) -> Vec<Option<f64>>;

/// Column layout for a scenario's sweep rows.
pub fn sweep_table(scenario: Scenario, rows: &[ComparisonRow]) -> Table {
    let outputs = |r: &ComparisonRow| vec![r.gamma_sjoqvist, r.nu_sjoqvist, r.gamma_uhlmann, r.nu_uhlmann];
    let (inputs, header): (InputCells, Vec<&'static str>) = match scenario {
        Scenario::Triangle => (|r| vec![r.r, r.theta1, r.theta2, r.phibar], vec!["r", "theta1", "theta2", "phibar"]),
        Scenario::Circle => (|r| vec![r.r, r.xi], vec!["r", "xi"]),
        Scenario::Gibbs => (|r| vec![r.k.map(|k| k as f64), r.alpha, r.xi], vec!["k", "alpha", "xi"]),
    };
    let mut header = header;
    header.extend(["gamma_sjoqvist", "nu_sjoqvist", "gamma_uhlmann", "nu_uhlmann"]);
    let ratios = scenario != Scenario::Gibbs;
    if ratios {
        header.extend(["tan_ratio", "nu_ratio"]);
    }
    let rows = rows
        .iter()
        .map(|r| {
            let mut cells = inputs(r);
            cells.extend(outputs(r));
            if ratios {
                cells.extend([r.tan_ratio, r.nu_ratio]);
            }
            cells
        })
        .collect();
    Table { header, rows }
}

/// Data behind the four figures.
///
/// * 1, 2: tangent and visibility ratios of the circular orbit over the
///   interior `101 × 101` grid of `(0, 1) × (0, π)`, `r` outer.
/// * 3, 4: Uhlmann and interferometric Gibbs phases for `k = 2..=11`,
///   `α = 2`, on [`figure_xi_grid`], with a flag where a curve jumps by more
///   than π from its previous point.
pub fn figure_data(figure: u8, threads: Option<usize>) -> Result<Table> {
    match figure {
        1 | 2 => {
            let axes = [interior(0.0, 1.0, FIGURE_GRID), interior(0.0, PI, FIGURE_GRID)];
            let points = product(&axes);
            let rows = with_threads(threads, || {
                points
                    .par_iter()
                    .map(|p| {
                        let c = circular_ratios(p[0], p[1]).ok();
                        let value = c.and_then(|c| if figure == 1 { c.tan_ratio } else { c.nu_ratio });
                        vec![Some(p[0]), Some(p[1]), value]
                    })
                    .collect()
            });
            let name = if figure == 1 { "tan_ratio" } else { "nu_ratio" };
            Ok(Table { header: vec!["r", "xi", name], rows })
        }
        3 | 4 => {
            let ks: Vec<usize> = (2..=11).collect();
            let rows = gibbs_sweep(&ks, 2.0, &figure_xi_grid(), threads)?;
            let mut out = Vec::with_capacity(rows.len());
            let mut prev: Option<(usize, f64)> = None;
            for row in &rows {
                let k = row.k.expect("gibbs rows carry k");
                let gamma = if figure == 3 { row.gamma_uhlmann } else { row.gamma_sjoqvist }.expect("gibbs phase");
                let jump = matches!(prev, Some((pk, pg)) if pk == k && (gamma - pg).abs() > PI);
                out.push(vec![Some(k as f64), row.xi, Some(gamma), Some(if jump { 1.0 } else { 0.0 })]);
                prev = Some((k, gamma));
            }
            Ok(Table { header: vec!["k", "xi", "gamma", "branch_crossing"], rows: out })
        }
        _ => Err(HolonomyError::OutOfDomain { name: "figure", value: figure as f64, domain: "{1, 2, 3, 4}" }),
    }
}
