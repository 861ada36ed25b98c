//! Scenario-level comparisons of the two phases: ratio identities,
//! perturbative expansions, Gibbs sweeps and the figure tables.

mod csv;
mod expansion;
mod gibbs;
mod ratios;
mod spec_file;
mod sweep;
pub mod validation;

use serde::Serialize;

pub use csv::{format_g12, Table};
pub use expansion::{expansion_check, ExpansionBase, ExpansionKind, ExpansionReport, EXPANSION_DELTAS};
pub use gibbs::{
    figure_xi_grid, gibbs_sweep, sjoqvist_clustering, uhlmann_dominance, OrderingReport, ORDER_SLACK,
};
pub use ratios::{
    circular_ratios, par1, par1_stable, par2, triangle_ratios, CircularRatios, TriangleRatios, RATIO_FLOOR,
};
pub use spec_file::{GridAxis, Param, Scenario, SweepSpec, MAX_AXIS_COUNT};
pub use sweep::{figure_data, run_sweep, sweep_table, with_threads, FIGURE_GRID};

/// One evaluated point of a scenario. Inputs that do not apply to the
/// scenario and outputs that are undefined at the point are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub r: Option<f64>,
    pub xi: Option<f64>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub phibar: Option<f64>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma_sjoqvist: Option<f64>,
    pub nu_sjoqvist: Option<f64>,
    pub gamma_uhlmann: Option<f64>,
    pub nu_uhlmann: Option<f64>,
    pub tan_ratio: Option<f64>,
    pub nu_ratio: Option<f64>,
}
