//! Piecewise rotation paths `t ↦ U(t)` and spherical triangle geometry.
//!
//! A [`UnitaryPath`] is a chain of [`RotationSegment`]s. Each segment rotates
//! about a fixed axis at constant angular rate, so `U(t)` and `U̇(t)` are
//! available in closed form from one cached eigendecomposition per segment.

use std::f64::consts::PI;

use crate::error::{HolonomyError, Result};
use crate::quantum::linalg::{identity, ComplexMatrix, HermitianEigen, I};
use crate::quantum::SpinRep;

/// Pairwise vertex cross products below this norm make a triangle degenerate.
const DEGENERATE_TOL: f64 = 1e-12;

pub type Vec3 = [f64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Great-circle distance between unit vectors.
fn arc(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Requested rotation: `sweep` radians about `axis`, traversed over
/// `duration` units of path parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub axis: Vec3,
    pub sweep: f64,
    pub duration: f64,
}

impl Rotation {
    /// Arc-length parameterization: `duration = |sweep|`.
    pub fn arc_length(axis: Vec3, sweep: f64) -> Self {
        Self { axis, sweep, duration: sweep.abs() }
    }
}

#[derive(Debug, Clone)]
pub struct RotationSegment {
    axis: Vec3,
    sweep: f64,
    t_start: f64,
    t_end: f64,
    generator: ComplexMatrix,
    generator_eigen: HermitianEigen,
    u_start: ComplexMatrix,
}

impl RotationSegment {
    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn sweep(&self) -> f64 {
        self.sweep
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// `n⃗·J⃗` for this segment's axis.
    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    /// Angular speed `dφ/dt`.
    pub fn rate(&self) -> f64 {
        self.sweep / (self.t_end - self.t_start)
    }

    /// `U(t)` from this segment's formula; `t` is not range-checked.
    pub fn evaluate(&self, t: f64) -> ComplexMatrix {
        let angle = self.rate() * (t - self.t_start);
        self.generator_eigen.exp_i(-angle) * &self.u_start
    }

    pub fn derivative(&self, t: f64) -> ComplexMatrix {
        let rate = self.rate();
        self.generator.map(|z| -I * rate * z) * self.evaluate(t)
    }
}

/// Continuous chain of rotation segments starting at `U(0) = 1`.
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    segments: Vec<RotationSegment>,
    dim: usize,
}

impl UnitaryPath {
    pub fn new(spin: &SpinRep, rotations: &[Rotation]) -> Result<Self> {
        if rotations.is_empty() {
            return Err(HolonomyError::InvalidState("a path needs at least one segment".into()));
        }
        let dim = spin.dim();
        let mut segments = Vec::with_capacity(rotations.len());
        let mut t = 0.0;
        let mut u = identity(dim);
        for rot in rotations {
            let len = norm(rot.axis);
            if !(len > 0.0) || !len.is_finite() {
                return Err(HolonomyError::InvalidState("rotation axis must be a nonzero vector".into()));
            }
            if !rot.sweep.is_finite() {
                return Err(HolonomyError::OutOfDomain { name: "sweep", value: rot.sweep, domain: "finite" });
            }
            if !(rot.duration > 0.0) || !rot.duration.is_finite() {
                return Err(HolonomyError::OutOfDomain {
                    name: "duration",
                    value: rot.duration,
                    domain: "(0, inf)",
                });
            }
            let axis = [rot.axis[0] / len, rot.axis[1] / len, rot.axis[2] / len];
            let generator = spin.along(axis);
            let generator_eigen = HermitianEigen::new(&generator)?;
            let seg = RotationSegment {
                axis,
                sweep: rot.sweep,
                t_start: t,
                t_end: t + rot.duration,
                generator,
                generator_eigen,
                u_start: u,
            };
            u = seg.evaluate(seg.t_end);
            t = seg.t_end;
            segments.push(seg);
        }
        Ok(Self { segments, dim })
    }

    /// `U(t) = 1` for `t ∈ [0, duration]`.
    pub fn constant(dim: usize, duration: f64) -> Result<Self> {
        let spin = SpinRep::new(dim)?;
        Self::new(&spin, &[Rotation { axis: [0.0, 0.0, 1.0], sweep: 0.0, duration }])
    }

    /// Same image, new per-segment durations.
    pub fn reparameterized(&self, durations: &[f64]) -> Result<Self> {
        if durations.len() != self.segments.len() {
            return Err(HolonomyError::DimensionMismatch {
                expected: self.segments.len(),
                found: durations.len(),
            });
        }
        let spin = SpinRep::new(self.dim)?;
        let rotations: Vec<Rotation> = self
            .segments
            .iter()
            .zip(durations)
            .map(|(s, &duration)| Rotation { axis: s.axis, sweep: s.sweep, duration })
            .collect();
        Self::new(&spin, &rotations)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[RotationSegment] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t_end)
    }

    pub fn total_sweep(&self) -> f64 {
        self.segments.iter().map(|s| s.sweep.abs()).sum()
    }

    fn segment_at(&self, t: f64) -> Result<(&RotationSegment, f64)> {
        let end = self.duration();
        let slack = 1e-12 * end.max(1.0);
        if !(t >= -slack && t <= end + slack) {
            return Err(HolonomyError::OutOfRange { t, end });
        }
        let t = t.clamp(0.0, end);
        let seg = self
            .segments
            .iter()
            .find(|s| t <= s.t_end)
            .unwrap_or_else(|| self.segments.last().unwrap());
        Ok((seg, t))
    }

    pub fn evaluate(&self, t: f64) -> Result<ComplexMatrix> {
        let (seg, t) = self.segment_at(t)?;
        Ok(seg.evaluate(t))
    }

    /// Exact `U̇(t)`. At a joint the derivative of the earlier segment is
    /// returned.
    pub fn derivative(&self, t: f64) -> Result<ComplexMatrix> {
        let (seg, t) = self.segment_at(t)?;
        Ok(seg.derivative(t))
    }

    /// `U(T)`.
    pub fn end_unitary(&self) -> ComplexMatrix {
        let last = self.segments.last().unwrap();
        last.evaluate(last.t_end)
    }
}

/// `φ ↦ e^{-iφ(sin ξ J_y + cos ξ J_z)}` for `φ ∈ [0, 2π·turns]`.
pub fn circular_orbit(xi: f64, k: usize, turns: f64) -> Result<UnitaryPath> {
    if !(turns != 0.0 && turns.is_finite()) {
        return Err(HolonomyError::OutOfDomain { name: "turns", value: turns, domain: "nonzero, finite" });
    }
    if !xi.is_finite() {
        return Err(HolonomyError::OutOfDomain { name: "xi", value: xi, domain: "finite" });
    }
    let spin = SpinRep::new(k)?;
    let axis = [0.0, xi.sin(), xi.cos()];
    UnitaryPath::new(&spin, &[Rotation::arc_length(axis, 2.0 * PI * turns)])
}

/// Spherical triangle with one vertex at the north pole and two movable
/// vertices `(θ₁, φ̄)` and `(θ₂, 0)`, plus the Bloch radius `r` of the states
/// placed at the vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeometry {
    pub theta1: f64,
    pub theta2: f64,
    pub phibar: f64,
    pub r: f64,
}

impl TriangleGeometry {
    pub fn new(theta1: f64, theta2: f64, phibar: f64, r: f64) -> Result<Self> {
        for (name, value) in [("theta1", theta1), ("theta2", theta2)] {
            if !(0.0..=PI).contains(&value) {
                return Err(HolonomyError::OutOfDomain { name, value, domain: "[0, pi]" });
            }
        }
        if !phibar.is_finite() {
            return Err(HolonomyError::OutOfDomain { name: "phibar", value: phibar, domain: "finite" });
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(HolonomyError::OutOfDomain { name: "r", value: r, domain: "[0, 1]" });
        }
        Ok(Self { theta1, theta2, phibar, r })
    }

    pub fn with_r(self, r: f64) -> Result<Self> {
        Self::new(self.theta1, self.theta2, self.phibar, r)
    }

    /// Unit vertices in traversal order `v₀ → v₁ → v₂`.
    pub fn vertices(&self) -> [Vec3; 3] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        let (sp, cp) = self.phibar.sin_cos();
        [[0.0, 0.0, 1.0], [s1 * cp, s1 * sp, c1], [s2, 0.0, c2]]
    }

    /// `μ = (1 + cos θ₁)(1 + cos θ₂) + cos φ̄ sin θ₁ sin θ₂`, which equals
    /// `1 + v₀·v₁ + v₁·v₂ + v₂·v₀`.
    pub fn mu(&self) -> f64 {
        (1.0 + self.theta1.cos()) * (1.0 + self.theta2.cos())
            + self.phibar.cos() * self.theta1.sin() * self.theta2.sin()
    }

    /// `r³ sin φ̄ sin θ₁ sin θ₂`.
    pub fn alpha_num(&self) -> f64 {
        self.r.powi(3) * self.phibar.sin() * self.theta1.sin() * self.theta2.sin()
    }

    /// `4 + (μ - 10) r² + 6 r⁴`.
    pub fn beta(&self) -> f64 {
        let r2 = self.r * self.r;
        4.0 + (self.mu() - 10.0) * r2 + 6.0 * r2 * r2
    }

    /// Triple product `v₀·(v₁×v₂) = -sin θ₁ sin θ₂ sin φ̄`.
    pub fn orientation(&self) -> f64 {
        let [v0, v1, v2] = self.vertices();
        dot(v0, cross(v1, v2))
    }

    pub fn ensure_nondegenerate(&self) -> Result<()> {
        let v = self.vertices();
        for i in 0..3 {
            let (a, b) = (v[i], v[(i + 1) % 3]);
            if norm(cross(a, b)) < DEGENERATE_TOL {
                let what = if dot(a, b) > 0.0 { "coincident" } else { "antipodal" };
                return Err(HolonomyError::DegenerateTriangle(format!(
                    "vertices {i} and {} are {what}",
                    (i + 1) % 3
                )));
            }
        }
        Ok(())
    }

    /// Unsigned spherical excess from the side lengths (L'Huilier).
    pub fn spherical_excess(&self) -> Result<f64> {
        self.ensure_nondegenerate()?;
        let [v0, v1, v2] = self.vertices();
        let (a, b, c) = (arc(v1, v2), arc(v2, v0), arc(v0, v1));
        let s = 0.5 * (a + b + c);
        let product = (0.5 * s).tan() * (0.5 * (s - a)).tan() * (0.5 * (s - b)).tan() * (0.5 * (s - c)).tan();
        Ok(4.0 * product.max(0.0).sqrt().atan())
    }

    /// Raw cotangent form `-2 arccot(cot φ̄ + (cot θ₁ + csc θ₁)(cot θ₂ + csc θ₂) csc φ̄)`
    /// with the principal `arccot x = atan(1/x)`, valued in `[-π, π]`.
    pub fn solid_angle_cot_formula(&self) -> f64 {
        let half_cot = |t: f64| t.cos() / t.sin() + 1.0 / t.sin();
        let x = self.phibar.cos() / self.phibar.sin()
            + half_cot(self.theta1) * half_cot(self.theta2) / self.phibar.sin();
        -2.0 * (1.0 / x).atan()
    }
}

/// Signed solid angle `Ω` enclosed by the loop `v₀ → v₁ → v₂ → v₀`.
///
/// The magnitude is the spherical excess and the sign is that of
/// `v₀·(v₁×v₂)`, so `Ω ∈ (-2π, 2π)`.
pub fn solid_angle(tri: &TriangleGeometry) -> Result<f64> {
    let excess = tri.spherical_excess()?;
    let orientation = tri.orientation();
    if orientation == 0.0 {
        if excess < PI {
            return Ok(0.0);
        }
        return Err(HolonomyError::DegenerateTriangle("great-circle loop has no orientation".into()));
    }
    Ok(orientation.signum() * excess)
}

/// Qubit path traversing the three great-circle sides of `tri`.
///
/// Side `i` rotates about `(v_i × v_{i+1})/|v_i × v_{i+1}|` by the arc angle,
/// so conjugation by the path carries the Bloch vector `v₀` around the
/// triangle and back.
pub fn geodesic_triangle_path(tri: &TriangleGeometry) -> Result<UnitaryPath> {
    tri.ensure_nondegenerate()?;
    let spin = SpinRep::new(2)?;
    let v = tri.vertices();
    let rotations: Vec<Rotation> = (0..3)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % 3]);
            let n = cross(a, b);
            let len = norm(n);
            Rotation::arc_length([n[0] / len, n[1] / len, n[2] / len], len.atan2(dot(a, b)))
        })
        .collect();
    UnitaryPath::new(&spin, &rotations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{max_abs_diff, unitarity_defect};
    use crate::quantum::{bloch_to_density, BlochState};
    use approx::assert_abs_diff_eq;

    fn octant() -> TriangleGeometry {
        TriangleGeometry::new(PI / 2.0, PI / 2.0, PI / 2.0, 1.0).unwrap()
    }

    #[test]
    fn full_turn_signs() {
        let half = circular_orbit(0.0, 2, 1.0).unwrap();
        assert!(max_abs_diff(&half.end_unitary(), &identity(2).scale(-1.0)) < 1e-14);
        let integer = circular_orbit(0.0, 3, 1.0).unwrap();
        assert!(max_abs_diff(&integer.end_unitary(), &identity(3)) < 1e-14);
    }

    #[test]
    fn tilted_orbit_axis() {
        let p = circular_orbit(PI / 2.0, 2, 1.0).unwrap();
        let axis = p.segments()[0].axis();
        assert_abs_diff_eq!(axis[0], 0.0);
        assert_abs_diff_eq!(axis[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(axis[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_triangles_rejected() {
        let same = TriangleGeometry::new(0.0, 0.0, 0.3, 1.0).unwrap();
        assert!(matches!(geodesic_triangle_path(&same), Err(HolonomyError::DegenerateTriangle(_))));
        assert!(solid_angle(&same).is_err());
        let antipodal = TriangleGeometry::new(PI, 1.0, 0.3, 1.0).unwrap();
        assert!(geodesic_triangle_path(&antipodal).is_err());
    }

    #[test]
    fn octant_sides_are_quarter_turns() {
        let p = geodesic_triangle_path(&octant()).unwrap();
        for s in p.segments() {
            assert_abs_diff_eq!(s.sweep(), PI / 2.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(solid_angle(&octant()).unwrap().abs(), PI / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn octant_orientation_is_negative() {
        assert_abs_diff_eq!(solid_angle(&octant()).unwrap(), -PI / 2.0, epsilon = 1e-14);
        let flipped = TriangleGeometry { phibar: -PI / 2.0, ..octant() };
        assert_abs_diff_eq!(solid_angle(&flipped).unwrap(), PI / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn merging_vertices_shrink_the_angle() {
        let mut last = f64::INFINITY;
        for theta1 in [1e-2, 1e-4, 1e-6, 1e-8] {
            let tri = TriangleGeometry::new(theta1, 1.1, 0.7, 1.0).unwrap();
            let omega = solid_angle(&tri).unwrap().abs();
            assert!(omega < last);
            last = omega;
        }
        assert!(last < 1e-7);
    }

    #[test]
    fn path_closes_the_bloch_loop() {
        for (t1, t2, pb) in [(0.4, 1.3, 0.9), (2.0, 0.7, -2.5), (1.0, 1.0, 3.0)] {
            let tri = TriangleGeometry::new(t1, t2, pb, 0.6).unwrap();
            let path = geodesic_triangle_path(&tri).unwrap();
            let rho = bloch_to_density(&BlochState::new(0.6, 0.0, 0.0).unwrap()).unwrap();
            let u = path.end_unitary();
            assert!(max_abs_diff(&rho.conjugated(&u), rho.matrix()) < 1e-13);
            // each joint lands on the next vertex
            let v = tri.vertices();
            for (i, seg) in path.segments().iter().enumerate() {
                let ui = path.evaluate(seg.t_end()).unwrap();
                let b = crate::quantum::DensityMatrix::new(rho.conjugated(&ui))
                    .unwrap()
                    .bloch_vector()
                    .unwrap();
                let target = v[(i + 1) % 3];
                for c in 0..3 {
                    assert_abs_diff_eq!(b[c], 0.6 * target[c], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn evaluate_and_derivative() {
        let tri = TriangleGeometry::new(1.2, 0.8, 1.9, 1.0).unwrap();
        let path = geodesic_triangle_path(&tri).unwrap();
        assert!(max_abs_diff(&path.evaluate(0.0).unwrap(), &identity(2)) < 1e-15);
        let h = 1e-5;
        let samples = 40;
        for i in 0..=samples {
            let t = path.duration() * i as f64 / samples as f64;
            let u = path.evaluate(t).unwrap();
            assert!(unitarity_defect(&u) < 1e-12);
            // central differences away from the joints
            if path.segments().iter().all(|s| (t - s.t_start()).abs() > 2.0 * h && (t - s.t_end()).abs() > 2.0 * h) {
                let fd = (path.evaluate(t + h).unwrap() - path.evaluate(t - h).unwrap()).scale(0.5 / h);
                assert!(max_abs_diff(&fd, &path.derivative(t).unwrap()) < 1e-6);
            }
        }
        for pair in path.segments().windows(2) {
            let before = pair[0].evaluate(pair[0].t_end());
            let after = pair[1].evaluate(pair[1].t_start());
            assert!(max_abs_diff(&before, &after) < 1e-15);
        }
        assert!(matches!(path.evaluate(-0.1), Err(HolonomyError::OutOfRange { .. })));
        assert!(path.evaluate(path.duration() + 0.1).is_err());
    }

    #[test]
    fn single_segment_end_is_full_exponential() {
        let spin = SpinRep::new(3).unwrap();
        let axis = [0.3, -0.4, 0.5];
        let path = UnitaryPath::new(&spin, &[Rotation { axis, sweep: 2.3, duration: 0.7 }]).unwrap();
        let n = norm(axis);
        let gen = spin.along([axis[0] / n, axis[1] / n, axis[2] / n]).map(|z| -I * 2.3 * z);
        let expected = crate::quantum::matrix_exp(&gen).unwrap();
        assert!(max_abs_diff(&path.evaluate(0.7).unwrap(), &expected) < 1e-14);
    }

    #[test]
    fn mu_extremes() {
        let min = TriangleGeometry::new(2.0 * PI / 3.0, 2.0 * PI / 3.0, PI, 1.0).unwrap();
        assert_abs_diff_eq!(min.mu(), -0.5, epsilon = 1e-15);
        let max = TriangleGeometry::new(0.0, 0.0, 0.4, 1.0).unwrap();
        assert_abs_diff_eq!(max.mu(), 4.0);
        for t in [0.2, 1.0, 2.9] {
            assert_abs_diff_eq!(TriangleGeometry::new(PI, t, 0.8, 1.0).unwrap().mu(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(TriangleGeometry::new(t, PI, 0.8, 1.0).unwrap().mu(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn half_angle_tangent_identity() {
        for (t1, t2, pb, r) in [(0.4, 1.3, 0.9, 0.7), (2.0, 0.7, -2.5, 1.0), (1.0, 2.6, 2.8, 0.2)] {
            let tri = TriangleGeometry::new(t1, t2, pb, r).unwrap();
            let omega = solid_angle(&tri).unwrap();
            let expected = -tri.alpha_num() / (tri.mu() * r.powi(3));
            assert!(((omega / 2.0).tan() - expected).abs() <= 1e-9 * expected.abs());
        }
    }
}
