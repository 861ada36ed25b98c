use std::f64::consts::PI;

use clap::{Args, Subcommand};

use holonomy_core::comparator::{circular_ratios, format_g12, triangle_ratios, RATIO_FLOOR};
use holonomy_core::paths::{circular_orbit, geodesic_triangle_path, solid_angle, TriangleGeometry, UnitaryPath};
use holonomy_core::quantum::{bloch_to_density, gibbs_density, BlochState, DensityMatrix};
use holonomy_core::sjoqvist::{gibbs_interferometric_invariant, qubit_amplitude, PhaseResult};
use holonomy_core::uhlmann::{gibbs_invariant, transport_integrate_with, triangle_trace_formula, TransportOptions};
use holonomy_core::HolonomyError;

use crate::{emit, json_cell, Failure, Format, OutputArgs};

#[derive(Subcommand, Debug)]
pub(crate) enum Scenario {
    /// Pole state of Bloch radius r carried around the geodesic triangle
    /// with vertices z, (theta1, phibar) and (theta2, 0).
    Triangle {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
        #[arg(long, allow_hyphen_values = true)]
        phibar: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Pole state of Bloch radius r turned once about (0, sin xi, cos xi).
    Circle {
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Gibbs state e^{alpha Jz}/Z of a k-level system turned once about
    /// (0, sin xi, cos xi).
    Gibbs {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=12))]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
pub(crate) struct Common {
    /// Read angles in degrees.
    #[arg(long)]
    degrees: bool,
    /// Runge-Kutta steps for the transported Uhlmann phase.
    #[arg(long, value_parser = clap::value_parser!(u64).range(500..))]
    steps: Option<u64>,
    /// Largest accepted parallelity defect of the transport.
    #[arg(long)]
    defect_tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

impl Common {
    fn angle(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    fn options(&self, path: &UnitaryPath) -> Result<TransportOptions, Failure> {
        let mut opts = match self.steps {
            Some(n) => TransportOptions::with_steps(n as usize),
            None => TransportOptions::for_path(path),
        };
        if let Some(tol) = self.defect_tol {
            if !(tol > 0.0) {
                return Err(Failure::Usage(format!("--defect-tol must be positive, got {tol}")));
            }
            opts.defect_tolerance = tol;
        }
        Ok(opts)
    }
}

type Row = Vec<(&'static str, Option<f64>)>;

fn finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{name} must be finite")))
    }
}

fn in_range(name: &str, v: f64, lo: f64, hi: f64, domain: &str) -> Result<f64, Failure> {
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{name} = {v} outside {domain}")))
    }
}

fn tangent(p: &PhaseResult) -> Option<f64> {
    (p.amplitude.re.abs() > RATIO_FLOOR).then(|| p.amplitude.im / p.amplitude.re)
}

fn phases(row: &mut Row, s: &PhaseResult, u: &PhaseResult) {
    row.extend([
        ("gamma_sjoqvist", Some(s.gamma)),
        ("nu_sjoqvist", Some(s.visibility)),
        ("gamma_uhlmann", Some(u.gamma)),
        ("nu_uhlmann", Some(u.visibility)),
    ]);
}

/// Transported Uhlmann phase; left empty when `ρ(0)` is too close to
/// singular for the transport equation.
fn transported(row: &mut Row, rho: &DensityMatrix, path: &UnitaryPath, common: &Common) -> Result<(), Failure> {
    let result = match transport_integrate_with(rho, path, &common.options(path)?) {
        Ok(res) => Some(res.phase),
        Err(HolonomyError::SingularState { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    row.push(("gamma_uhlmann_transported", result.map(|p| p.gamma)));
    row.push(("nu_uhlmann_transported", result.map(|p| p.visibility)));
    Ok(())
}

fn triangle(r: f64, t1: f64, t2: f64, pb: f64, common: &Common) -> Result<Row, Failure> {
    let r = in_range("r", finite("r", r)?, 0.0, 1.0, "[0, 1]")?;
    let t1 = in_range("theta1", finite("theta1", common.angle(t1))?, 0.0, PI, "[0, pi]")?;
    let t2 = in_range("theta2", finite("theta2", common.angle(t2))?, 0.0, PI, "[0, pi]")?;
    let pb = finite("phibar", common.angle(pb))?;
    let tri = TriangleGeometry::new(t1, t2, pb, r)?;
    let s = PhaseResult::from_amplitude(qubit_amplitude(r, solid_angle(&tri)?)?);
    let u = triangle_trace_formula(r, &tri)?;
    let mut row: Row = vec![("r", Some(r)), ("theta1", Some(t1)), ("theta2", Some(t2)), ("phibar", Some(pb))];
    phases(&mut row, &s, &u);
    let ratios = triangle_ratios(r, &tri).ok();
    row.push(("tan_ratio", ratios.and_then(|q| q.tan_ratio)));
    row.push(("nu_ratio", ratios.and_then(|q| q.nu_ratio)));
    let rho = bloch_to_density(&BlochState::new(r, 0.0, 0.0)?)?;
    transported(&mut row, &rho, &geodesic_triangle_path(&tri)?, common)?;
    Ok(row)
}

fn circle(r: f64, xi: f64, common: &Common) -> Result<Row, Failure> {
    let r = in_range("r", finite("r", r)?, 0.0, 1.0, "[0, 1]")?;
    let xi = finite("xi", common.angle(xi))?;
    let c = circular_ratios(r, xi)?;
    let mut row: Row = vec![("r", Some(r)), ("xi", Some(xi))];
    phases(&mut row, &c.sjoqvist, &c.uhlmann);
    row.push(("tan_ratio", c.tan_ratio));
    row.push(("nu_ratio", c.nu_ratio));
    let rho = bloch_to_density(&BlochState::new(r, 0.0, 0.0)?)?;
    transported(&mut row, &rho, &circular_orbit(xi, 2, 1.0)?, common)?;
    Ok(row)
}

fn gibbs(k: usize, alpha: f64, xi: f64, common: &Common) -> Result<Row, Failure> {
    let alpha = finite("alpha", alpha)?;
    let xi = finite("xi", common.angle(xi))?;
    let s = gibbs_interferometric_invariant(k, alpha, xi)?;
    let u = gibbs_invariant(k, alpha, xi, None)?;
    let mut row: Row = vec![("k", Some(k as f64)), ("alpha", Some(alpha)), ("xi", Some(xi))];
    phases(&mut row, &s, &u);
    let tan_ratio = match (tangent(&s), tangent(&u)) {
        (Some(a), Some(b)) if b.abs() > RATIO_FLOOR => Some(a / b),
        _ => None,
    };
    row.push(("tan_ratio", tan_ratio));
    row.push(("nu_ratio", (u.visibility > RATIO_FLOOR).then(|| s.visibility / u.visibility)));
    let rho = gibbs_density(k, alpha, [0.0, 0.0, 1.0])?;
    transported(&mut row, &rho, &circular_orbit(xi, k, 1.0)?, common)?;
    Ok(row)
}

fn render(row: &Row, format: Format) -> String {
    match format {
        Format::Csv => {
            let header: Vec<&str> = row.iter().map(|(k, _)| *k).collect();
            let values: Vec<String> = row.iter().map(|(_, v)| v.map(format_g12).unwrap_or_default()).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = row
                .iter()
                .map(|(k, v)| (k.to_string(), json_cell(k, *v)))
                .collect();
            let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("json values serialize");
            text.push('\n');
            text
        }
    }
}

pub(crate) fn run(scenario: &Scenario) -> Result<(), Failure> {
    let (row, common) = match scenario {
        Scenario::Triangle { r, theta1, theta2, phibar, common } => {
            (triangle(*r, *theta1, *theta2, *phibar, common)?, common)
        }
        Scenario::Circle { r, xi, common } => (circle(*r, *xi, common)?, common),
        Scenario::Gibbs { k, alpha, xi, common } => (gibbs(*k as usize, *alpha, *xi, common)?, common),
    };
    emit(&common.out, &render(&row, common.out.format))
}
