use std::fmt;
use std::str::FromStr;

use crate::error::{HolonomyError, Result};
use crate::paths::TriangleGeometry;

use super::ratios::{par1_stable, triangle_ratios};

/// Offsets at which every expansion is probed.
pub const EXPANSION_DELTAS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Accepted band for the ratio of successive residuals when `Δ` halves.
const RATIO_BAND: (f64, f64) = (3.0, 5.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    /// `r = 1 - Δ`: tangent ratio `≈ 1 - 4Δ/μ`.
    RNear1,
    /// `r = √(2/3) + Δ`: tangent ratio `≈ 1 - 2√6 Δ/μ`.
    RNearRc,
    /// `r = Δ`: tangent ratio `≈ 1 + (4 - 10Δ²)/(μΔ²)`.
    RNear0,
    /// Circular orbit with `ξ = √Δ`: tangent ratio `≈ (4 + 3(1 - r²)ξ²)/(4r²)`.
    XiSmall,
}

impl ExpansionKind {
    pub const ALL: [ExpansionKind; 4] = [Self::RNear1, Self::RNearRc, Self::RNear0, Self::XiSmall];

    pub fn name(self) -> &'static str {
        match self {
            Self::RNear1 => "r_near_1",
            Self::RNearRc => "r_near_rc",
            Self::RNear0 => "r_near_0",
            Self::XiSmall => "xi_small",
        }
    }
}

impl fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExpansionKind {
    type Err = HolonomyError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HolonomyError::Undefined(format!("unknown expansion kind `{s}`")))
    }
}

/// Fixed parameters around which an expansion is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpansionBase {
    Triangle(TriangleGeometry),
    Circle { r: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub kind: ExpansionKind,
    pub deltas: Vec<f64>,
    pub exact: Vec<f64>,
    pub expansion: Vec<f64>,
    /// `|exact - expansion|` at each offset.
    pub residuals: Vec<f64>,
    /// Successive residual ratios; `≈ 4` for quadratic scaling.
    pub ratios: Vec<f64>,
    pub passed: bool,
}

/// Compares the exact tangent ratio with its leading-order expansion at
/// each of [`EXPANSION_DELTAS`].
pub fn expansion_check(kind: ExpansionKind, base: &ExpansionBase) -> Result<ExpansionReport> {
    let (exact, expansion): (Vec<f64>, Vec<f64>) = EXPANSION_DELTAS
        .iter()
        .map(|&d| evaluate(kind, base, d))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let residuals: Vec<f64> = exact.iter().zip(&expansion).map(|(e, x)| (e - x).abs()).collect();
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    let passed = ratios.iter().all(|q| (RATIO_BAND.0..=RATIO_BAND.1).contains(q));
    Ok(ExpansionReport { kind, deltas: EXPANSION_DELTAS.to_vec(), exact, expansion, residuals, ratios, passed })
}

fn evaluate(kind: ExpansionKind, base: &ExpansionBase, d: f64) -> Result<(f64, f64)> {
    let triangle_ratio = |tri: &TriangleGeometry, r: f64| {
        triangle_ratios(r, tri)?
            .tan_ratio
            .ok_or_else(|| HolonomyError::Undefined(format!("tangent ratio undefined at r = {r}")))
    };
    match (kind, base) {
        (ExpansionKind::XiSmall, ExpansionBase::Circle { r }) => {
            let xi = d.sqrt();
            Ok((par1_stable(*r, xi), (4.0 + 3.0 * (1.0 - r * r) * d) / (4.0 * r * r)))
        }
        (ExpansionKind::XiSmall, _) => Err(HolonomyError::Undefined("xi_small needs a circle base".into())),
        (_, ExpansionBase::Circle { .. }) => {
            Err(HolonomyError::Undefined(format!("{kind} needs a triangle base")))
        }
        (_, ExpansionBase::Triangle(tri)) => {
            let mu = tri.mu();
            let (r, approx) = match kind {
                ExpansionKind::RNear1 => (1.0 - d, 1.0 - 4.0 * d / mu),
                ExpansionKind::RNearRc => ((2.0f64 / 3.0).sqrt() + d, 1.0 - 2.0 * 6f64.sqrt() * d / mu),
                _ => (d, 1.0 + (4.0 - 10.0 * d * d) / (mu * d * d)),
            };
            Ok((triangle_ratio(tri, r)?, approx))
        }
    }
}
