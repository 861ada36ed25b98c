use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HolonomyError, Result};
use crate::paths::{solid_angle, TriangleGeometry};
use crate::sjoqvist::{qubit_amplitude, PhaseResult};
use crate::uhlmann::{circular_closed_form, triangle_closed_form};

/// Ratios are reported only where their denominators exceed this.
pub const RATIO_FLOOR: f64 = 1e-12;

/// Largest accepted imaginary part of the complex-χ ratio formulas.
const IMAG_TOL: f64 = 1e-10;

fn tangent(p: &PhaseResult) -> Option<f64> {
    (p.amplitude.re.abs() > RATIO_FLOOR).then(|| p.amplitude.im / p.amplitude.re)
}

fn ratio(num: Option<f64>, den: Option<f64>) -> Option<f64> {
    match (num, den) {
        (Some(n), Some(d)) if d.abs() > RATIO_FLOOR => Some(n / d),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleRatios {
    /// `tan γ_g / tan γ̃_g` from the two closed-form phases.
    pub tan_ratio: Option<f64>,
    /// `ν / ν̃`.
    pub nu_ratio: Option<f64>,
    /// `β/(μr²)`.
    pub analytic_tan_ratio: f64,
    pub sjoqvist: PhaseResult,
    pub uhlmann: PhaseResult,
}

/// Both qubit phases for the pole state carried around `tri` at radius `r`,
/// and their tangent and visibility ratios.
pub fn triangle_ratios(r: f64, tri: &TriangleGeometry) -> Result<TriangleRatios> {
    let tri = tri.with_r(r)?;
    let mu = tri.mu();
    if mu.abs() <= RATIO_FLOOR {
        return Err(HolonomyError::Undefined("mu vanishes (theta1 or theta2 equals pi)".into()));
    }
    let omega = solid_angle(&tri)?;
    let sjoqvist = PhaseResult::from_amplitude(qubit_amplitude(r, omega)?);
    let uhlmann = triangle_closed_form(r, &tri)?;
    Ok(TriangleRatios {
        tan_ratio: ratio(tangent(&sjoqvist), tangent(&uhlmann)),
        nu_ratio: ratio(Some(sjoqvist.visibility), Some(uhlmann.visibility)),
        analytic_tan_ratio: tri.beta() / (mu * r * r),
        sjoqvist,
        uhlmann,
    })
}

fn chi(r: f64, xi: f64) -> Complex64 {
    Complex64::new((r * r - 2.0 - r * r * (2.0 * xi).cos()) / 2.0, 0.0).sqrt()
}

/// Tangent ratio `χ sec ξ coth(πχ) tan(π cos ξ)` in complex arithmetic.
pub fn par1(r: f64, xi: f64) -> Complex64 {
    let c = chi(r, xi);
    let pc = c * PI;
    c / xi.cos() * (pc.cosh() / pc.sinh()) * (PI * xi.cos()).tan()
}

/// Visibility ratio
/// `χ√2 √(cos²κ + r² sin²κ) / √(1 - r² + 2χ² + (r² - 1) cosh 2πχ)`.
pub fn par2(r: f64, xi: f64) -> Complex64 {
    let c = chi(r, xi);
    let (s, co) = (PI * xi.cos()).sin_cos();
    let r2 = r * r;
    let num = c * 2f64.sqrt() * (co * co + r2 * s * s).sqrt();
    let den = (c * c * 2.0 + (1.0 - r2) + (c * 2.0 * PI).cosh() * (r2 - 1.0)).sqrt();
    num / den
}

/// Real form of [`par1`] that avoids the cancellations of `π cos ξ` near π
/// and `π√(1 - r² sin²ξ)` near π at small `ξ`.
pub fn par1_stable(r: f64, xi: f64) -> f64 {
    let s2 = xi.sin().powi(2);
    let lambda = (1.0 - r * r * s2).sqrt();
    let tan_kappa = (2.0 * PI * (xi / 2.0).sin().powi(2)).tan();
    let cot_lambda = 1.0 / (PI * r * r * s2 / (1.0 + lambda)).tan();
    tan_kappa * cot_lambda * lambda / xi.cos()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularRatios {
    /// Complex-χ tangent-ratio formula, when finite and real.
    pub tan_ratio: Option<f64>,
    /// Complex-χ visibility-ratio formula, when finite and real.
    pub nu_ratio: Option<f64>,
    /// `tan γ_g / tan γ̆_g` from the two computed phases.
    pub computed_tan_ratio: Option<f64>,
    pub computed_nu_ratio: Option<f64>,
    /// Largest imaginary part left by the complex-χ evaluation.
    pub imag_residue: f64,
    pub sjoqvist: PhaseResult,
    pub uhlmann: PhaseResult,
}

/// Circular orbit at tilt `ξ`: the interferometric phase of a qubit spanning
/// `Ω = -2π cos ξ` against the purification phase of the closed-form lift.
pub fn circular_ratios(r: f64, xi: f64) -> Result<CircularRatios> {
    let uhlmann = circular_closed_form(r, xi)?.phase;
    let sjoqvist = PhaseResult::from_amplitude(qubit_amplitude(r, -2.0 * PI * xi.cos())?);
    let tan_u = tangent(&uhlmann);
    let computed_tan_ratio = ratio(tangent(&sjoqvist), tan_u);
    let computed_nu_ratio = ratio(Some(sjoqvist.visibility), Some(uhlmann.visibility));

    let p1 = par1(r, xi);
    let p2 = par2(r, xi);
    let mut imag_residue: f64 = 0.0;
    let mut real_part = |z: Complex64| {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        imag_residue = imag_residue.max(z.im.abs());
        (z.im.abs() <= IMAG_TOL * (1.0 + z.re.abs())).then_some(z.re)
    };
    let tan_ratio = real_part(p1).filter(|_| tan_u.is_some_and(|t| t.abs() > RATIO_FLOOR));
    let nu_ratio = real_part(p2).filter(|_| uhlmann.visibility > RATIO_FLOOR);
    Ok(CircularRatios { tan_ratio, nu_ratio, computed_tan_ratio, computed_nu_ratio, imag_residue, sjoqvist, uhlmann })
}
