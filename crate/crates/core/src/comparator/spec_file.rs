//! Flat `key = value` description of a parameter sweep.
//!
//! ```text
//! # tilt scan at two radii
//! scenario = circle
//! grid.r = 0.25, 0.75, 2
//! grid.xi = 0.1, 3.0, 30
//! ```
//!
//! Keys are `scenario`, `grid.<param> = min, max, count`,
//! `fixed.<param> = value` and `k_list = k, k, ...`. Everything after `#`
//! on a line is ignored.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{HolonomyError, Result};

/// Upper bound on the count of a single grid axis.
pub const MAX_AXIS_COUNT: usize = 100_000;
/// Upper bound on the total number of sweep points.
const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    R,
    Theta1,
    Theta2,
    Phibar,
    Xi,
    InvTemp,
}

impl Param {
    pub const ALL: [Param; 6] = [Self::R, Self::Theta1, Self::Theta2, Self::Phibar, Self::Xi, Self::InvTemp];

    pub fn name(self) -> &'static str {
        match self {
            Self::R => "r",
            Self::Theta1 => "theta1",
            Self::Theta2 => "theta2",
            Self::Phibar => "phibar",
            Self::Xi => "xi",
            Self::InvTemp => "inv_temp",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Triangle,
    Circle,
    Gibbs,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Triangle => "triangle",
            Self::Circle => "circle",
            Self::Gibbs => "gibbs",
        }
    }

    /// Parameters the scenario needs, in sweep nesting order.
    pub fn params(self) -> &'static [Param] {
        match self {
            Self::Triangle => &[Param::R, Param::Theta1, Param::Theta2, Param::Phibar],
            Self::Circle => &[Param::R, Param::Xi],
            Self::Gibbs => &[Param::InvTemp, Param::Xi],
        }
    }

    fn check(self, p: Param, v: f64) -> std::result::Result<(), &'static str> {
        let ok = match (self, p) {
            (Self::Triangle, Param::R) => v > 0.0 && v <= 1.0,
            (Self::Circle, Param::R) => v > 0.0 && v < 1.0,
            (_, Param::Theta1 | Param::Theta2) => (0.0..=PI).contains(&v),
            _ => v.is_finite(),
        };
        if ok {
            return Ok(());
        }
        Err(match (self, p) {
            (Self::Triangle, Param::R) => "(0, 1]",
            (Self::Circle, Param::R) => "(0, 1)",
            (_, Param::Theta1 | Param::Theta2) => "[0, pi]",
            _ => "finite",
        })
    }
}

impl FromStr for Scenario {
    type Err = HolonomyError;

    fn from_str(s: &str) -> Result<Self> {
        [Self::Triangle, Self::Circle, Self::Gibbs]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| HolonomyError::Undefined(format!("unknown scenario `{s}`")))
    }
}

/// Inclusive evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + (self.max - self.min) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub grid: BTreeMap<Param, GridAxis>,
    pub fixed: BTreeMap<Param, f64>,
    pub k_list: Vec<usize>,
}

fn parse_err(line: usize, message: impl Into<String>) -> HolonomyError {
    HolonomyError::Parse { line, message: message.into() }
}

fn parse_float(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| parse_err(line, format!("`{}` is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("`{}` is not finite", s.trim())));
    }
    Ok(v)
}

fn parse_count(line: usize, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| parse_err(line, format!("`{}` is not a non-negative integer", s.trim())))
}

impl SweepSpec {
    /// Parses and validates a spec. Errors carry the 1-based line number,
    /// or 0 for problems with the file as a whole.
    pub fn parse(text: &str) -> Result<Self> {
        let mut scenario = None;
        let mut grid = BTreeMap::new();
        let mut fixed = BTreeMap::new();
        let mut k_list: Option<Vec<usize>> = None;
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut param_line: BTreeMap<Param, usize> = BTreeMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| parse_err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line) {
                return Err(parse_err(line, format!("duplicate key `{key}` (first on line {prev})")));
            }
            if key == "scenario" {
                scenario = Some(value.parse::<Scenario>().map_err(|_| parse_err(line, format!("unknown scenario `{value}`")))?);
            } else if key == "k_list" {
                let ks = value.split(',').map(|s| parse_count(line, s)).collect::<Result<Vec<_>>>()?;
                if let Some(&k) = ks.iter().find(|&&k| !(2..=12).contains(&k)) {
                    return Err(parse_err(line, format!("k = {k} outside 2..=12")));
                }
                k_list = Some(ks);
            } else if let Some((kind, name)) = key.split_once('.') {
                let param = Param::from_name(name).ok_or_else(|| parse_err(line, format!("unknown parameter `{name}`")))?;
                if let Some(prev) = param_line.insert(param, line) {
                    return Err(parse_err(line, format!("`{name}` already set on line {prev}")));
                }
                match kind {
                    "grid" => {
                        let parts: Vec<&str> = value.split(',').collect();
                        let [min, max, count] = parts[..] else {
                            return Err(parse_err(line, "grid needs `min, max, count`"));
                        };
                        let axis = GridAxis {
                            min: parse_float(line, min)?,
                            max: parse_float(line, max)?,
                            count: parse_count(line, count)?,
                        };
                        if !(2..=MAX_AXIS_COUNT).contains(&axis.count) {
                            return Err(parse_err(line, format!("count must be in 2..={MAX_AXIS_COUNT}")));
                        }
                        if axis.min > axis.max {
                            return Err(parse_err(line, "min exceeds max"));
                        }
                        grid.insert(param, axis);
                    }
                    "fixed" => {
                        fixed.insert(param, parse_float(line, value)?);
                    }
                    _ => return Err(parse_err(line, format!("unknown key `{key}`"))),
                }
            } else {
                return Err(parse_err(line, format!("unknown key `{key}`")));
            }
        }

        let scenario = scenario.ok_or_else(|| parse_err(0, "missing `scenario`"))?;
        let spec = Self { scenario, grid, fixed, k_list: k_list.unwrap_or_default() };
        spec.validate(&param_line, seen.get("k_list").copied())?;
        Ok(spec)
    }

    fn validate(&self, param_line: &BTreeMap<Param, usize>, k_line: Option<usize>) -> Result<()> {
        let needed = self.scenario.params();
        for (&p, &line) in param_line {
            if !needed.contains(&p) {
                return Err(parse_err(line, format!("`{}` does not apply to {}", p.name(), self.scenario.name())));
            }
            let values: Vec<f64> = match self.grid.get(&p) {
                Some(a) => vec![a.min, a.max],
                None => vec![self.fixed[&p]],
            };
            for v in values {
                self.scenario
                    .check(p, v)
                    .map_err(|domain| parse_err(line, format!("{} = {v} outside {domain}", p.name())))?;
            }
        }
        if let Some(p) = needed.iter().find(|p| !param_line.contains_key(p)) {
            return Err(parse_err(0, format!("`{}` must be given as grid or fixed", p.name())));
        }
        match (self.scenario, k_line) {
            (Scenario::Gibbs, None) => return Err(parse_err(0, "gibbs needs `k_list`")),
            (Scenario::Gibbs, Some(_)) => {}
            (_, Some(line)) => return Err(parse_err(line, "`k_list` applies only to gibbs")),
            (_, None) => {}
        }
        if self.point_count() > MAX_POINTS {
            return Err(parse_err(0, format!("more than {MAX_POINTS} points")));
        }
        Ok(())
    }

    /// Values taken by `p`: the grid if one is given, else the fixed value.
    pub fn values(&self, p: Param) -> Vec<f64> {
        match self.grid.get(&p) {
            Some(axis) => axis.values(),
            None => self.fixed.get(&p).map(|&v| vec![v]).unwrap_or_default(),
        }
    }

    pub fn point_count(&self) -> usize {
        let grid = self.grid.values().fold(1usize, |n, a| n.saturating_mul(a.count));
        match self.scenario {
            Scenario::Gibbs => grid.saturating_mul(self.k_list.len()),
            _ => grid,
        }
    }
}

impl FromStr for SweepSpec {
    type Err = HolonomyError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario = {}", self.scenario.name())?;
        for (p, a) in &self.grid {
            writeln!(f, "grid.{} = {}, {}, {}", p.name(), a.min, a.max, a.count)?;
        }
        for (p, v) in &self.fixed {
            writeln!(f, "fixed.{} = {v}", p.name())?;
        }
        if !self.k_list.is_empty() {
            let ks: Vec<String> = self.k_list.iter().map(|k| k.to_string()).collect();
            writeln!(f, "k_list = {}", ks.join(", "))?;
        }
        Ok(())
    }
}
