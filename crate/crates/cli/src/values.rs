//! Parsers for flag values that accept named constants as well as numbers.

use std::f64::consts::{PI, TAU};

use cuspkit::bound_calculus::CAO_MEYERHOFF_AREA;

/// Area floor for a cusp-backed command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaFloor {
    Value(f64),
    /// The cusp's own area.
    Shape,
}

impl AreaFloor {
    pub fn resolve(self, shape_area: f64) -> f64 {
        match self {
            AreaFloor::Value(v) => v,
            AreaFloor::Shape => shape_area,
        }
    }
}

impl Default for AreaFloor {
    fn default() -> Self {
        AreaFloor::Value(CAO_MEYERHOFF_AREA)
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

/// A length: a number, or `2pi` / `pi` (also spelled with `π`).
pub fn parse_length(s: &str) -> Result<f64, String> {
    match s.trim() {
        "2pi" | "2π" | "tau" => Ok(TAU),
        "pi" | "π" => Ok(PI),
        _ => finite(s),
    }
}

/// An area floor: a number, `cao-meyerhoff` (3.35) or `adams` (√3).
pub fn parse_area(s: &str) -> Result<f64, String> {
    match s.trim() {
        "cao-meyerhoff" => Ok(CAO_MEYERHOFF_AREA),
        "adams" => Ok(3f64.sqrt()),
        _ => finite(s),
    }
}

/// Like [`parse_area`], plus `shape` for the cusp's own area.
pub fn parse_cusp_area(s: &str) -> Result<AreaFloor, String> {
    match s.trim() {
        "shape" => Ok(AreaFloor::Shape),
        _ => parse_area(s).map(AreaFloor::Value),
    }
}
