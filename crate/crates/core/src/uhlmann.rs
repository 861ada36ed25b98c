//! Purification (Uhlmann) mixed-state phase.
//!
//! The amplitude `W(t) = U(t)√ρ(0)V(t)` is parallel when `Ẇ†W` is
//! Hermitian. Writing `X = VV̇†`, that condition reads
//! `Xρ + ρX = 2√ρ U†U̇ √ρ`, a Sylvester equation solved afresh at every
//! stage of a fourth-order Runge-Kutta integration of `V̇ = -XV`. The phase
//! and visibility come from the overlap `Tr(W(0)†W(T))`.
//!
//! Closed forms cover the geodesic-triangle trace formula, the circular
//! orbit lift and the Gibbsian holonomy invariant.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HolonomyError, Result};
use crate::paths::{RotationSegment, TriangleGeometry, UnitaryPath};
use crate::quantum::linalg::{
    hermiticity_defect, identity, matrix_exp, polar_unitary, trace, unitarity_defect, ComplexMatrix, I,
};
use crate::quantum::state::{solve_sylvester_with_floor, RANK_FLOOR};
use crate::quantum::{bloch_to_density, gibbs_density, hatted_operator, BlochState, DensityMatrix, SpinRep};
use crate::sjoqvist::PhaseResult;

pub const MIN_STEPS: usize = 500;
pub const DEFAULT_DEFECT_TOL: f64 = 1e-6;

/// `max(2000, 500·sweep/π)`.
pub fn default_steps(path: &UnitaryPath) -> usize {
    2000usize.max((500.0 * path.total_sweep() / PI).ceil() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    pub steps: usize,
    /// Largest accepted `‖Ẇ†W - (Ẇ†W)†‖_max` along the run.
    pub defect_tolerance: f64,
    /// Positive-definiteness floor for the Sylvester solves.
    pub eps_rank: f64,
}

impl TransportOptions {
    pub fn with_steps(steps: usize) -> Self {
        Self { steps, defect_tolerance: DEFAULT_DEFECT_TOL, eps_rank: RANK_FLOOR }
    }

    pub fn for_path(path: &UnitaryPath) -> Self {
        Self::with_steps(default_steps(path))
    }
}

#[derive(Debug, Clone)]
pub struct TransportResult {
    /// Ancilla unitary `V(T)`.
    pub v_final: ComplexMatrix,
    pub phase: PhaseResult,
    /// Largest Hermiticity violation of `Ẇ†W` over the integration nodes,
    /// with `V̇` taken from finite differences of the integrated trajectory.
    pub parallelity_defect: f64,
    /// Largest `‖V†V - 1‖_max` over the accepted steps.
    pub unitarity_defect: f64,
    pub steps: usize,
}

struct Transporter<'a> {
    rho: &'a DensityMatrix,
    sqrt_rho: ComplexMatrix,
    eps_rank: f64,
}

impl Transporter<'_> {
    /// `X(t)` solving `Xρ + ρX = 2√ρ U†U̇ √ρ` on one segment.
    fn generator(&self, seg: &RotationSegment, t: f64) -> Result<ComplexMatrix> {
        let u = seg.evaluate(t);
        let du = seg.derivative(t);
        let g = (&self.sqrt_rho * u.adjoint() * du * &self.sqrt_rho).scale(2.0);
        solve_sylvester_with_floor(self.rho, &g, self.eps_rank)
    }

    fn rk4_step(&self, seg: &RotationSegment, t: f64, h: f64, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        let x1 = self.generator(seg, t)?;
        let x2 = self.generator(seg, t + 0.5 * h)?;
        let x4 = self.generator(seg, t + h)?;
        let k1 = -(&x1 * v);
        let k2 = -(&x2 * (v + k1.scale(0.5 * h)));
        let k3 = -(&x2 * (v + k2.scale(0.5 * h)));
        let k4 = -(&x4 * (v + k3.scale(h)));
        let next = v + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
        polar_unitary(&next)
    }

    /// Hermiticity defect of `Ẇ†W` at the nodes of one segment, with `V̇`
    /// from fourth-order five-point differences (one-sided near the ends).
    fn defect(&self, seg: &RotationSegment, nodes: &[ComplexMatrix], h: f64) -> f64 {
        const FORWARD: [[f64; 5]; 2] = [[-25.0, 48.0, -36.0, 16.0, -3.0], [-3.0, -10.0, 18.0, -6.0, 1.0]];
        const CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
        let n = nodes.len() - 1;
        let stencil = |start: usize, weights: &[f64; 5], sign: f64| {
            let mut acc = ComplexMatrix::zeros(nodes[0].nrows(), nodes[0].ncols());
            for (j, w) in weights.iter().enumerate() {
                if *w != 0.0 {
                    acc += nodes[start + j].scale(*w);
                }
            }
            acc.scale(sign / (12.0 * h))
        };
        let mut worst: f64 = 0.0;
        for (i, v) in nodes.iter().enumerate() {
            let dv = match i {
                0 | 1 => stencil(0, &FORWARD[i], 1.0),
                _ if i + 2 > n => {
                    let mut w = FORWARD[n - i];
                    w.reverse();
                    stencil(n - 4, &w, -1.0)
                }
                _ => stencil(i - 2, &CENTRAL, 1.0),
            };
            let t = seg.t_start() + h * i as f64;
            let u = seg.evaluate(t);
            let du = seg.derivative(t);
            let w = &u * &self.sqrt_rho * v;
            let dw = du * &self.sqrt_rho * v + &u * &self.sqrt_rho * dv;
            worst = worst.max(hermiticity_defect(&(dw.adjoint() * w)));
        }
        worst
    }
}

/// Integrates the Uhlmann parallel lift of `ρ(0)` along `path`.
pub fn transport_integrate(rho0: &DensityMatrix, path: &UnitaryPath, steps: usize) -> Result<TransportResult> {
    transport_integrate_with(rho0, path, &TransportOptions::with_steps(steps))
}

pub fn transport_integrate_with(
    rho0: &DensityMatrix,
    path: &UnitaryPath,
    opts: &TransportOptions,
) -> Result<TransportResult> {
    if rho0.dim() != path.dim() {
        return Err(HolonomyError::DimensionMismatch { expected: rho0.dim(), found: path.dim() });
    }
    if opts.steps < MIN_STEPS {
        return Err(HolonomyError::OutOfDomain { name: "steps", value: opts.steps as f64, domain: ">= 500" });
    }
    let min = rho0.min_eigenvalue();
    if min < opts.eps_rank {
        return Err(HolonomyError::SingularState { min_eigenvalue: min, floor: opts.eps_rank });
    }
    let transporter = Transporter { rho: rho0, sqrt_rho: rho0.sqrt(), eps_rank: opts.eps_rank };
    let total = path.duration();

    let mut v = identity(rho0.dim());
    let mut parallelity_defect: f64 = 0.0;
    let mut worst_unitarity: f64 = 0.0;
    let mut taken = 0;
    for seg in path.segments() {
        let span = seg.t_end() - seg.t_start();
        let n = ((opts.steps as f64 * span / total).round() as usize).max(4);
        let h = span / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        nodes.push(v.clone());
        for i in 0..n {
            v = transporter.rk4_step(seg, seg.t_start() + h * i as f64, h, &v)?;
            worst_unitarity = worst_unitarity.max(unitarity_defect(&v));
            nodes.push(v.clone());
        }
        taken += n;
        parallelity_defect = parallelity_defect.max(transporter.defect(seg, &nodes, h));
    }
    if parallelity_defect > opts.defect_tolerance {
        return Err(HolonomyError::ParallelityDefect {
            defect: parallelity_defect,
            tolerance: opts.defect_tolerance,
        });
    }
    let s = &transporter.sqrt_rho;
    let amplitude = trace(&(s * path.end_unitary() * s * &v));
    Ok(TransportResult {
        v_final: v,
        phase: PhaseResult::from_amplitude(amplitude),
        parallelity_defect,
        unitarity_defect: worst_unitarity,
        steps: taken,
    })
}

/// Projector overlaps entering the triangle trace formula, vertices labelled
/// `1 = v₀`, `2 = v₁`, `3 = v₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleOverlaps {
    pub a12: f64,
    pub a23: f64,
    pub a31: f64,
    /// `⟨3|2⟩⟨2|1⟩⟨1|3⟩ = Tr(P₃P₂P₁)`.
    pub a321: Complex64,
}

fn check_open_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(HolonomyError::OutOfDomain { name: "r", value: r, domain: "(0, 1]" });
    }
    Ok(())
}

/// Overlaps of the projectors `P_j = (2ρ̃_j - (1 - r)·1)/(2r)` built from
/// the radius-`r` vertex states.
pub fn triangle_overlaps(r: f64, tri: &TriangleGeometry) -> Result<TriangleOverlaps> {
    check_open_radius(r)?;
    let projectors = tri
        .vertices()
        .iter()
        .map(|&v| {
            let rho = bloch_to_density(&BlochState::from_direction(r, v)?)?;
            Ok((rho.matrix().scale(2.0) - identity(2).scale(1.0 - r)).scale(0.5 / r))
        })
        .collect::<Result<Vec<ComplexMatrix>>>()?;
    let [p1, p2, p3] = [&projectors[0], &projectors[1], &projectors[2]];
    let overlap = |a: &ComplexMatrix, b: &ComplexMatrix| trace(&(a * b)).re;
    Ok(TriangleOverlaps {
        a12: overlap(p1, p2),
        a23: overlap(p2, p3),
        a31: overlap(p3, p1),
        a321: trace(&(p3 * p2 * p1)),
    })
}

/// Geodesic-triangle trace formula: the published right-hand side divided by
/// `√(a₁₂a₂₃a₃₁)`, giving `Tr ρ₁U` directly.
pub fn triangle_trace_formula(r: f64, tri: &TriangleGeometry) -> Result<PhaseResult> {
    let o = triangle_overlaps(r, tri)?;
    let smallest = o.a12.min(o.a23).min(o.a31);
    if smallest <= 1e-12 {
        return Err(HolonomyError::OrthogonalVertices { overlap: smallest });
    }
    let q = 1.0 - r;
    let sum = o.a12 + o.a23 + o.a31;
    let rhs = o.a321 * r.powi(4)
        + (o.a321 * 2.0 + sum - 3.0) * (r.powi(3) * q / 2.0)
        + r * r * q * q * (sum + 6.0) / 2.0
        + 4.0 * r * q.powi(3)
        + q.powi(4);
    Ok(PhaseResult::from_amplitude(rhs / (o.a12 * o.a23 * o.a31).sqrt()))
}

/// `γ̃ = arctan(α/β)` (principal branch) and
/// `ν̃ = √((α² + β²)/((α/r³)² + μ²))`.
pub fn triangle_closed_form(r: f64, tri: &TriangleGeometry) -> Result<PhaseResult> {
    check_open_radius(r)?;
    let tri = tri.with_r(r)?;
    let (mu, alpha, beta) = (tri.mu(), tri.alpha_num(), tri.beta());
    let a_r3 = alpha / r.powi(3);
    if mu == 0.0 && a_r3 == 0.0 {
        return Err(HolonomyError::Undefined("mu and alpha both vanish".into()));
    }
    let gamma = (alpha / beta).atan();
    let visibility = ((alpha * alpha + beta * beta) / (a_r3 * a_r3 + mu * mu)).sqrt();
    Ok(PhaseResult { gamma, visibility, amplitude: Complex64::from_polar(visibility, gamma) })
}

/// Closed-form Uhlmann lift `V(φ) = e^{iφ·n̂·Ĵ}` along the orbit generated by
/// `n⃗ = (0, sin ξ, cos ξ)`, where `Ĵ` is the hatted generator of `ρ(0)`.
/// Valid for any full-rank `ρ(0)` because `U†U̇ = -i n⃗·J⃗` is constant.
pub fn circular_lift(rho0: &DensityMatrix, xi: f64, phi: f64) -> Result<ComplexMatrix> {
    let spin = SpinRep::new(rho0.dim())?;
    let hat = hatted_operator(rho0, &spin.along([0.0, xi.sin(), xi.cos()]))?;
    matrix_exp(&hat.map(|z| I * phi * z))
}

#[derive(Debug, Clone)]
pub struct CircularClosedForm {
    pub phase: PhaseResult,
    /// `√((r² - 2 - r² cos 2ξ)/2)`, equal to `i√(1 - r² sin²ξ)` for `r < 1`.
    pub chi: Complex64,
    /// `π cos ξ`.
    pub kappa: f64,
    /// `Ĵ_y = √(1 - r²) J_y` for the polar qubit state.
    pub hatted_jy: ComplexMatrix,
    /// `V(2π)`.
    pub v_final: ComplexMatrix,
}

/// Qubit circular orbit: Bloch vector `(0, 0, r)` rotated once about
/// `(0, sin ξ, cos ξ)`. The amplitude is `Tr[√ρ U(2π) V(2π) √ρ]`.
pub fn circular_closed_form(r: f64, xi: f64) -> Result<CircularClosedForm> {
    if !(r > 0.0 && r < 1.0) {
        return Err(HolonomyError::OutOfDomain { name: "r", value: r, domain: "(0, 1)" });
    }
    let spin = SpinRep::new(2)?;
    let rho = bloch_to_density(&BlochState::new(r, 0.0, 0.0)?)?;
    let hatted_jy = hatted_operator(&rho, &spin.jy)?;
    let lifted = hatted_jy.scale(xi.sin()) + hatted_operator(&rho, &spin.jz)?.scale(xi.cos());
    let v_final = matrix_exp(&lifted.map(|z| I * 2.0 * PI * z))?;
    let u_final = matrix_exp(&spin.along([0.0, xi.sin(), xi.cos()]).map(|z| -I * 2.0 * PI * z))?;
    let s = rho.sqrt();
    let amplitude = trace(&(&s * u_final * &v_final * &s));
    let chi = Complex64::new((r * r - 2.0 - r * r * (2.0 * xi).cos()) / 2.0, 0.0).sqrt();
    Ok(CircularClosedForm {
        phase: PhaseResult::from_amplitude(amplitude),
        chi,
        kappa: PI * xi.cos(),
        hatted_jy,
        v_final,
    })
}

/// Gibbsian first-order holonomy invariant
/// `(-1)^{2j} Tr[√ρ e^{2πi(cos ξ J_z + a sin ξ J_y)} √ρ]` for
/// `ρ = e^{αJ_z}/Z`, with `a = sech(α/2)` unless overridden.
pub fn gibbs_invariant(k: usize, inv_temp: f64, xi: f64, a_override: Option<f64>) -> Result<PhaseResult> {
    let spin = SpinRep::new(k)?;
    let rho = gibbs_density(k, inv_temp, [0.0, 0.0, 1.0])?;
    let a = a_override.unwrap_or(1.0 / (inv_temp / 2.0).cosh());
    let generator = spin.jz.scale(xi.cos()) + spin.jy.scale(a * xi.sin());
    let e = matrix_exp(&generator.map(|z| I * 2.0 * PI * z))?;
    let s = rho.sqrt();
    let amplitude = trace(&(&s * e * &s)) * spin.full_turn_sign();
    Ok(PhaseResult::from_amplitude(amplitude))
}

/// Uhlmann transport of the radius-`r` pole state around the unitary
/// great-circle triangle. Not expected to reproduce the trace formula, whose
/// sides are Bures geodesics rather than unitary orbits.
pub fn triangle_transport(r: f64, tri: &TriangleGeometry, steps: usize) -> Result<TransportResult> {
    let rho = bloch_to_density(&BlochState::new(r, 0.0, 0.0)?)?;
    transport_integrate(&rho, &crate::paths::geodesic_triangle_path(tri)?, steps)
}
