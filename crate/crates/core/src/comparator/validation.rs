//! Self-check suites behind `holonomy validate`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HolonomyError, Result};
use crate::paths::{circular_orbit, geodesic_triangle_path, solid_angle, TriangleGeometry};
use crate::quantum::linalg::max_abs_diff;
use crate::quantum::{bloch_to_density, BlochState};
use crate::sjoqvist::{gibbs_interferometric_invariant, interferometric_phase};
use crate::uhlmann::{
    circular_closed_form, circular_lift, gibbs_invariant, transport_integrate, transport_integrate_with,
    triangle_closed_form, triangle_trace_formula, TransportOptions,
};

use super::expansion::{expansion_check, ExpansionBase, ExpansionKind};
use super::gibbs::{figure_xi_grid, gibbs_sweep, sjoqvist_clustering, uhlmann_dominance, OrderingReport};
use super::ratios::{circular_ratios, par1, par2, triangle_ratios};

const SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Integrator,
    Reductions,
    Orderings,
    All,
}

impl Suite {
    const NAMES: [(Suite, &'static str); 5] = [
        (Self::ClosedForms, "closed-forms"),
        (Self::Integrator, "integrator"),
        (Self::Reductions, "reductions"),
        (Self::Orderings, "orderings"),
        (Self::All, "all"),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(s, _)| *s == self).map(|(_, n)| *n).unwrap_or("all")
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HolonomyError;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(s, _)| *s)
            .ok_or_else(|| HolonomyError::Undefined(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn residual(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_residual, tolerance, passed: max_residual <= tolerance }
    }

    fn ordering(name: &str, report: &OrderingReport) -> Self {
        // Residual is the number of misordered or tied pairs.
        Self {
            name: name.into(),
            max_residual: (report.violations + report.ties) as f64,
            tolerance: 0.0,
            passed: report.passed(),
        }
    }

    fn failed(name: &str, err: &HolonomyError) -> Self {
        Self { name: format!("{name} ({err})"), max_residual: f64::INFINITY, tolerance: 0.0, passed: false }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: max residual {:.3e} (tolerance {:.1e})", self.name, self.max_residual, self.tolerance)
    }
}

pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    match suite {
        Suite::ClosedForms => closed_forms(),
        Suite::Integrator => integrator(),
        Suite::Reductions => reductions(),
        Suite::Orderings => orderings(),
        Suite::All => [closed_forms(), integrator(), reductions(), orderings()].concat(),
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    (x + period / 2.0).rem_euclid(period) - period / 2.0
}

fn random_triangle(rng: &mut ChaCha8Rng, r: f64) -> TriangleGeometry {
    loop {
        let t1 = rng.gen_range(0.05..PI - 0.05);
        let t2 = rng.gen_range(0.05..PI - 0.05);
        let pb = rng.gen_range(-PI + 0.05..PI - 0.05);
        if pb.abs() < 0.05 {
            continue;
        }
        let tri = TriangleGeometry::new(t1, t2, pb, r).expect("sampled in range");
        if tri.ensure_nondegenerate().is_ok() && tri.mu().abs() > 1e-3 {
            return tri;
        }
    }
}

fn check(name: &str, f: impl FnOnce() -> Result<(f64, f64)>) -> CheckOutcome {
    match f() {
        Ok((res, tol)) => CheckOutcome::residual(name, res, tol),
        Err(e) => CheckOutcome::failed(name, &e),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn closed_forms() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rc = (2.0f64 / 3.0).sqrt();
    let mut out = vec![
        check("triangle tangent ratio equals beta/(mu r^2)", || {
            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let r = rng.gen_range(0.05..=1.0);
                let q = triangle_ratios(r, &random_triangle(&mut rng, 1.0))?;
                if let Some(t) = q.tan_ratio {
                    worst = worst.max(rel(t, q.analytic_tan_ratio));
                }
            }
            Ok((worst, 1e-9))
        }),
        check("triangle ratios at r = 1 and r = sqrt(2/3)", || {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let tri = random_triangle(&mut rng, 1.0);
                for (r, nu) in [(1.0, 1.0), (rc, 1.5)] {
                    let q = triangle_ratios(r, &tri)?;
                    worst = worst.max(rel(q.tan_ratio.unwrap_or(f64::NAN), 1.0));
                    worst = worst.max(rel(q.nu_ratio.unwrap_or(f64::NAN), nu));
                }
            }
            Ok((worst, 1e-9))
        }),
        check("visibility ratio tends to mu/4 as r -> 0", || {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let tri = loop {
                    let t = random_triangle(&mut rng, 1.0);
                    if t.mu() > 0.05 {
                        break t;
                    }
                };
                let q = triangle_ratios(1e-4, &tri)?;
                worst = worst.max(rel(q.nu_ratio.unwrap_or(f64::NAN), tri.mu() / 4.0));
            }
            Ok((worst, 1e-3))
        }),
        check("trace formula matches arctan(alpha/beta) and nu-tilde", || {
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let r = rng.gen_range(0.05..=1.0);
                let tri = random_triangle(&mut rng, 1.0);
                let direct = triangle_trace_formula(r, &tri)?;
                let closed = triangle_closed_form(r, &tri)?;
                worst = worst.max(wrap(direct.gamma - closed.gamma, PI).abs());
                worst = worst.max(rel(direct.visibility, closed.visibility));
            }
            Ok((worst, 1e-9))
        }),
        check("solid angle cotangent formula matches spherical excess", || {
            let mut worst: f64 = 0.0;
            for _ in 0..500 {
                let tri = random_triangle(&mut rng, 1.0);
                let omega = solid_angle(&tri)?;
                worst = worst.max(wrap(tri.solid_angle_cot_formula() - omega, 2.0 * PI).abs());
            }
            Ok((worst, 1e-9))
        }),
        check("mu spans [-1/2, 4]", || {
            let (lo, hi) = mu_extrema(200);
            Ok(((lo + 0.5).abs().max((hi - 4.0).abs()), 1e-6))
        }),
        check("circular ratio formulas match computed phases", || {
            let mut worst: f64 = 0.0;
            for i in 0..20 {
                for j in 0..20 {
                    let (r, xi) = (0.04 + 0.048 * i as f64, 0.08 + 0.15 * j as f64);
                    let c = circular_ratios(r, xi)?;
                    worst = worst.max(c.imag_residue);
                    if let (Some(f), Some(n)) = (c.tan_ratio, c.computed_tan_ratio) {
                        let den = c.uhlmann.amplitude.im / c.uhlmann.amplitude.re;
                        if den.abs() > 1e-6 && c.sjoqvist.amplitude.re.abs() > 1e-6 {
                            worst = worst.max(rel(f, n));
                        }
                    }
                    if let (Some(f), Some(n)) = (c.nu_ratio, c.computed_nu_ratio) {
                        worst = worst.max(rel(f, n));
                    }
                }
            }
            Ok((worst, 1e-8))
        }),
        check("circular ratio formulas are unity for pure states", || {
            let worst = (1..20)
                .map(|j| 0.15 * j as f64)
                .map(|xi| rel(par1(1.0, xi).re, 1.0).max(rel(par2(1.0, xi).re, 1.0)))
                .fold(0.0, f64::max);
            Ok((worst, 1e-8))
        }),
    ];
    let tri = ExpansionBase::Triangle(TriangleGeometry::new(0.9, 1.2, 1.7, 1.0).expect("valid triangle"));
    for kind in ExpansionKind::ALL {
        let base = if kind == ExpansionKind::XiSmall { ExpansionBase::Circle { r: 0.6 } } else { tri };
        out.push(check(&format!("expansion {kind} scales as delta^2"), || {
            let rep = expansion_check(kind, &base)?;
            Ok((rep.ratios.iter().map(|q| (q - 4.0).abs()).fold(0.0, f64::max), 1.0))
        }));
    }
    out
}

/// Extremes of `μ(θ₁, θ₂, φ̄)` from an `n³` grid followed by local zooming.
pub fn mu_extrema(n: usize) -> (f64, f64) {
    let mu = |t1: f64, t2: f64, pb: f64| (1.0 + t1.cos()) * (1.0 + t2.cos()) + pb.cos() * t1.sin() * t2.sin();
    let theta: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
    let (ct, st): (Vec<f64>, Vec<f64>) = theta.iter().map(|t| (t.cos(), t.sin())).unzip();
    let phi: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect();
    let cp: Vec<f64> = phi.iter().map(|p| p.cos()).collect();
    let (mut lo, mut hi) = ((f64::INFINITY, [0.0; 3]), (f64::NEG_INFINITY, [0.0; 3]));
    for a in 0..n {
        for b in 0..n {
            let base = (1.0 + ct[a]) * (1.0 + ct[b]);
            let ss = st[a] * st[b];
            for (c, &cpc) in cp.iter().enumerate() {
                let v = base + cpc * ss;
                if v < lo.0 {
                    lo = (v, [theta[a], theta[b], phi[c]]);
                }
                if v > hi.0 {
                    hi = (v, [theta[a], theta[b], phi[c]]);
                }
            }
        }
    }
    let refine = |(mut best, mut x): (f64, [f64; 3]), sign: f64| {
        let mut step = PI / (n - 1) as f64;
        for _ in 0..60 {
            let centre = x;
            for da in -5..=5 {
                for db in -5..=5 {
                    for dc in -5..=5 {
                        let p = [
                            (centre[0] + step * da as f64 / 5.0).clamp(0.0, PI),
                            (centre[1] + step * db as f64 / 5.0).clamp(0.0, PI),
                            centre[2] + 2.0 * step * dc as f64 / 5.0,
                        ];
                        let v = mu(p[0], p[1], p[2]);
                        if sign * v > sign * best {
                            best = v;
                            x = p;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        best
    };
    (refine(lo, -1.0), refine(hi, 1.0))
}

fn integrator() -> Vec<CheckOutcome> {
    let grid: Vec<(f64, f64)> = [0.1, 0.3, 0.5, 0.7, 0.9]
        .iter()
        .flat_map(|&r| [0.3, 0.9, 1.5, 2.1, 2.7].map(|xi| (r, xi)))
        .collect();
    let mut lift = 0.0f64;
    let mut defect = 0.0f64;
    let mut unitarity = 0.0f64;
    let mut failure = None;
    for &(r, xi) in &grid {
        let mut run = || -> Result<()> {
            let rho = bloch_to_density(&BlochState::new(r, 0.0, 0.0)?)?;
            let res = transport_integrate(&rho, &circular_orbit(xi, 2, 1.0)?, 10_000)?;
            lift = lift.max(max_abs_diff(&res.v_final, &circular_closed_form(r, xi)?.v_final));
            defect = defect.max(res.parallelity_defect);
            unitarity = unitarity.max(res.unitarity_defect);
            Ok(())
        };
        if let Err(e) = run() {
            failure.get_or_insert(e);
        }
    }
    if let Some(e) = failure {
        return vec![CheckOutcome::failed("transport along circular orbits", &e)];
    }
    vec![
        CheckOutcome::residual("transported lift matches closed form", lift, 1e-6),
        CheckOutcome::residual("parallelity defect along transport", defect, 1e-6),
        CheckOutcome::residual("unitarity of transported ancilla", unitarity, 1e-8),
        check("Runge-Kutta convergence order is 4", || {
            let order = convergence_order(&[(0.5, 0.7), (0.3, 1.9), (0.8, 1.2)])?;
            Ok(((order - 4.0).abs(), 0.3))
        }),
    ]
}

/// Mean observed order from step counts 500 and 1000 on four-turn orbits.
pub fn convergence_order(cases: &[(f64, f64)]) -> Result<f64> {
    let mut total = 0.0;
    for &(r, xi) in cases {
        let rho = bloch_to_density(&BlochState::new(r, 0.0, 0.0)?)?;
        let path = circular_orbit(xi, 2, 4.0)?;
        let exact = circular_lift(&rho, xi, 8.0 * PI)?;
        let err = |steps| -> Result<f64> {
            let mut opts = TransportOptions::with_steps(steps);
            opts.defect_tolerance = f64::INFINITY;
            Ok(max_abs_diff(&transport_integrate_with(&rho, &path, &opts)?.v_final, &exact))
        };
        total += (err(500)? / err(1000)?).log2();
    }
    Ok(total / cases.len() as f64)
}

fn reductions() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    vec![
        check("pure states give -Omega/2 with unit visibility", || {
            let pole = bloch_to_density(&BlochState::new(1.0, 0.0, 0.0)?)?;
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let tri = random_triangle(&mut rng, 1.0);
                let target = -solid_angle(&tri)? / 2.0;
                let s = interferometric_phase(&pole, &geodesic_triangle_path(&tri)?, 200)?.phase;
                let u = triangle_trace_formula(1.0, &tri)?;
                for p in [s, u] {
                    worst = worst.max(wrap(p.gamma - target, 2.0 * PI).abs()).max((p.visibility - 1.0).abs());
                }
            }
            Ok((worst, 1e-6))
        }),
        check("Gibbs invariant with a = 0 reduces to the interferometric one", || {
            let mut worst: f64 = 0.0;
            for k in 2..=11 {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                for alpha in [0.5, 2.0, 5.0] {
                    for i in 0..10 {
                        let xi = PI * i as f64 / 9.0;
                        let reduced = gibbs_invariant(k, alpha, xi, Some(0.0))?.amplitude;
                        let sjo = gibbs_interferometric_invariant(k, alpha, xi)?.amplitude;
                        worst = worst.max((reduced - sjo * sign).norm());
                    }
                }
            }
            Ok((worst, 1e-10))
        }),
        check("two-level Gibbs invariant matches the circular lift", || {
            let mut worst: f64 = 0.0;
            for alpha in [0.5f64, 1.0, 2.0, 3.0] {
                for i in 1..10 {
                    let xi = PI * i as f64 / 10.0;
                    let g = gibbs_invariant(2, alpha, xi, None)?.amplitude;
                    let c = circular_closed_form((alpha / 2.0).tanh(), xi)?.phase.amplitude;
                    worst = worst.max((g - c).norm());
                }
            }
            Ok((worst, 1e-12))
        }),
    ]
}

fn orderings() -> Vec<CheckOutcome> {
    let ks: Vec<usize> = (2..=11).collect();
    match gibbs_sweep(&ks, 2.0, &figure_xi_grid(), None) {
        Ok(rows) => vec![
            CheckOutcome::ordering("Uhlmann phases ordered by k for xi < 0.6", &uhlmann_dominance(&rows, 0.6)),
            CheckOutcome::ordering(
                "interferometric phases cluster by parity for xi < 0.4",
                &sjoqvist_clustering(&rows, 0.4),
            ),
        ],
        Err(e) => vec![CheckOutcome::failed("Gibbs sweep", &e)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for (s, n) in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes() {
        for outcome in run_suite(Suite::All) {
            assert!(outcome.passed, "{outcome}");
        }
    }
}
