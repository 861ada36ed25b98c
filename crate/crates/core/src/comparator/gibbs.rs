use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{HolonomyError, Result};
use crate::sjoqvist::gibbs_interferometric_invariant;
use crate::uhlmann::gibbs_invariant;

use super::sweep::with_threads;
use super::ComparisonRow;

/// Dominance checks require gaps strictly above this.
pub const ORDER_SLACK: f64 = 1e-12;

/// `ξ_i = (π/2)(i + 1)/201`, `i = 0..201`.
pub fn figure_xi_grid() -> Vec<f64> {
    (0..201).map(|i| FRAC_PI_2 * (i + 1) as f64 / 201.0).collect()
}

/// Both Gibbs invariants at every `(k, ξ)`, ordered by `k` then grid index.
pub fn gibbs_sweep(k_list: &[usize], inv_temp: f64, xi_grid: &[f64], threads: Option<usize>) -> Result<Vec<ComparisonRow>> {
    if let Some(&k) = k_list.iter().find(|&&k| !(2..=12).contains(&k)) {
        return Err(HolonomyError::InvalidDimension(k));
    }
    if !inv_temp.is_finite() {
        return Err(HolonomyError::OutOfDomain { name: "alpha", value: inv_temp, domain: "finite" });
    }
    let points: Vec<(usize, f64)> = k_list.iter().flat_map(|&k| xi_grid.iter().map(move |&xi| (k, xi))).collect();
    with_threads(threads, || {
        points
            .par_iter()
            .map(|&(k, xi)| {
                let u = gibbs_invariant(k, inv_temp, xi, None)?;
                let s = gibbs_interferometric_invariant(k, inv_temp, xi)?;
                Ok(ComparisonRow {
                    k: Some(k),
                    alpha: Some(inv_temp),
                    xi: Some(xi),
                    gamma_sjoqvist: Some(s.gamma),
                    nu_sjoqvist: Some(s.visibility),
                    gamma_uhlmann: Some(u.gamma),
                    nu_uhlmann: Some(u.visibility),
                    ..Default::default()
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    /// Grid points inspected.
    pub points: usize,
    /// Smallest required gap seen.
    pub min_gap: f64,
    /// Pairs in the wrong order by more than the slack.
    pub violations: usize,
    /// Pairs within the slack of each other.
    pub ties: usize,
    pub first_failure: Option<String>,
}

impl OrderingReport {
    pub fn passed(&self) -> bool {
        self.points > 0 && self.violations == 0 && self.ties == 0
    }

    fn new() -> Self {
        Self { points: 0, min_gap: f64::INFINITY, violations: 0, ties: 0, first_failure: None }
    }

    /// Records that `hi` should exceed `lo` by more than the slack.
    fn require(&mut self, hi: f64, lo: f64, what: impl FnOnce() -> String) {
        let gap = hi - lo;
        self.min_gap = self.min_gap.min(gap);
        if gap > ORDER_SLACK {
            return;
        }
        if gap.abs() <= ORDER_SLACK {
            self.ties += 1;
        } else {
            self.violations += 1;
        }
        self.first_failure.get_or_insert_with(|| format!("{} (gap {gap:e})", what()));
    }
}

/// `ξ ↦ [(k, γ)]` sorted by `k`, restricted to `0 < ξ < xi_max`.
fn curves_by_xi(
    rows: &[ComparisonRow],
    xi_max: f64,
    pick: impl Fn(&ComparisonRow) -> Option<f64>,
) -> BTreeMap<u64, (f64, Vec<(usize, f64)>)> {
    let mut by_xi: BTreeMap<u64, (f64, Vec<(usize, f64)>)> = BTreeMap::new();
    for row in rows {
        if let (Some(k), Some(xi), Some(g)) = (row.k, row.xi, pick(row)) {
            if xi > 0.0 && xi < xi_max {
                by_xi.entry(xi.to_bits()).or_insert_with(|| (xi, Vec::new())).1.push((k, g));
            }
        }
    }
    for (_, curve) in by_xi.values_mut() {
        curve.sort_by_key(|&(k, _)| k);
    }
    by_xi
}

fn descending(report: &mut OrderingReport, xi: f64, curve: &[(usize, f64)]) {
    for w in curve.windows(2) {
        let ((ka, ga), (kb, gb)) = (w[0], w[1]);
        report.require(ga, gb, || format!("xi = {xi}: k = {ka} vs k = {kb}"));
    }
}

/// Uhlmann phases strictly decreasing in `k` at every `ξ < xi_max`.
pub fn uhlmann_dominance(rows: &[ComparisonRow], xi_max: f64) -> OrderingReport {
    let mut report = OrderingReport::new();
    for (xi, curve) in curves_by_xi(rows, xi_max, |r| r.gamma_uhlmann).values() {
        report.points += 1;
        descending(&mut report, *xi, curve);
    }
    report
}

/// Interferometric phases split into an even-`k` cluster above an odd-`k`
/// cluster, each strictly decreasing in `k`, at every `ξ < xi_max`.
pub fn sjoqvist_clustering(rows: &[ComparisonRow], xi_max: f64) -> OrderingReport {
    let mut report = OrderingReport::new();
    for (xi, curve) in curves_by_xi(rows, xi_max, |r| r.gamma_sjoqvist).values() {
        report.points += 1;
        let (even, odd): (Vec<_>, Vec<_>) = curve.iter().partition(|&&(k, _)| k % 2 == 0);
        descending(&mut report, *xi, &even);
        descending(&mut report, *xi, &odd);
        let lowest_even = even.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1));
        let highest_odd = odd.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1));
        if let (Some((ke, ge)), Some((ko, go))) = (lowest_even, highest_odd) {
            report.require(ge, go, || format!("xi = {xi}: even k = {ke} vs odd k = {ko}"));
        }
    }
    report
}
