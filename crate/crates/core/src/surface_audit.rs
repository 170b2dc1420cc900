//! Audit predicates for the cusp-length inequalities of essential surfaces.
//!
//! These check user-supplied numbers against the inequalities; they never
//! certify that a surface is essential.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack below which an inequality counts as satisfied, and within
/// which it is reported as sharp.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

/// `Area(H) <= (3 / pi) Area(S)` for disjoint horocusps `H` in a hyperbolic surface `S`.
pub const BOROCZKY_RATIO: f64 = 3.0 / PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuditError {
    #[error("surface with Euler characteristic {0} is not hyperbolic (need χ < 0)")]
    Inapplicable(i64),
    #[error("{lengths} cusp lengths given but the surface has only {punctures} punctures")]
    TooManyLengths { lengths: usize, punctures: u32 },
    #[error("{lengths} cusp lengths given for {punctures} punctures; every puncture needs a length")]
    MissingLengths { lengths: usize, punctures: u32 },
    #[error("{what} must be finite and positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("punctured sphere needs at least 3 punctures, got {0}")]
    TooFewPunctures(u64),
    #[error("{0} horocusps cannot touch the boundary of a surface with {1} punctures")]
    TooManyBoundaryCusps(u64, u64),
    #[error("slope length {length} is below 6 + epsilon = {floor}")]
    SlopeTooShort { length: f64, floor: f64 },
    #[error("cannot parse surface type from {0:?}; expected genus,punctures,boundary")]
    ParseSurface(String),
}

/// Topological type of a surface of finite type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: u32,
    pub punctures: u32,
    pub boundary_circles: u32,
}

impl SurfaceType {
    pub const fn new(genus: u32, punctures: u32, boundary_circles: u32) -> Self {
        Self {
            genus,
            punctures,
            boundary_circles,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64 - self.boundary_circles as i64
    }

    fn hyperbolic_chi(&self) -> Result<u64, AuditError> {
        let chi = self.euler_characteristic();
        if chi >= 0 {
            return Err(AuditError::Inapplicable(chi));
        }
        Ok(chi.unsigned_abs())
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "genus {}, {} punctures, {} boundary circles",
            self.genus, self.punctures, self.boundary_circles
        )
    }
}

/// Parses `g,n,b`.
impl FromStr for SurfaceType {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AuditError::ParseSurface(s.to_string());
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [g, n, b] => Ok(Self::new(g, n, b)),
            _ => Err(err()),
        }
    }
}

pub fn euler_characteristic(s: &SurfaceType) -> i64 {
    s.euler_characteristic()
}

/// How punctures without a listed length are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnlistedPunctures {
    /// They map outside the distinguished cusp and contribute nothing.
    #[default]
    ContributeZero,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceAudit {
    pub surface: SurfaceType,
    /// Cusp lengths of the punctures that map into the distinguished cusp.
    pub cusp_slope_lengths: Vec<f64>,
    #[serde(default)]
    pub unlisted: UnlistedPunctures,
}

impl SurfaceAudit {
    pub fn new(surface: SurfaceType, cusp_slope_lengths: Vec<f64>) -> Self {
        Self {
            surface,
            cusp_slope_lengths,
            unlisted: UnlistedPunctures::default(),
        }
    }
}

/// Outcome of checking `lhs <= rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    /// `|slack| <= AUDIT_TOLERANCE`.
    pub sharp: bool,
}

impl Verdict {
    fn compare(lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            pass: slack >= -AUDIT_TOLERANCE,
            lhs,
            rhs,
            slack,
            sharp: slack.abs() <= AUDIT_TOLERANCE,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.pass, self.sharp) {
            (true, true) => "pass (sharp)",
            (true, false) => "pass",
            (false, _) => "fail",
        };
        write!(f, "{status}: {} ≤ {} (slack {:e})", self.lhs, self.rhs, self.slack)
    }
}

fn positive(what: &'static str, value: f64) -> Result<f64, AuditError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(AuditError::NonPositive { what, value })
    }
}

/// `sum of cusp lengths <= 6 |χ(S)|`.
pub fn check_cusp_length_inequality(audit: &SurfaceAudit) -> Result<Verdict, AuditError> {
    let chi = audit.surface.hyperbolic_chi()?;
    let lengths = audit.cusp_slope_lengths.len();
    let punctures = audit.surface.punctures;
    if lengths > punctures as usize {
        return Err(AuditError::TooManyLengths { lengths, punctures });
    }
    if audit.unlisted == UnlistedPunctures::Reject && lengths < punctures as usize {
        return Err(AuditError::MissingLengths { lengths, punctures });
    }
    let mut sum = 0.0;
    for &l in &audit.cusp_slope_lengths {
        sum += positive("cusp length", l)?;
    }
    Ok(Verdict::compare(sum, 6.0 * chi as f64))
}

/// `Area(H) <= (3 / pi) Area(S)`.
pub fn boroczky_check(horocusp_area: f64, surface_area: f64) -> Result<Verdict, AuditError> {
    let h = positive("horocusp area", horocusp_area)?;
    let s = positive("surface area", surface_area)?;
    Ok(Verdict::compare(h, BOROCZKY_RATIO * s))
}

/// Area `2 pi |χ|` of a complete hyperbolic surface of finite type.
pub fn gauss_bonnet_area(s: &SurfaceType) -> Result<f64, AuditError> {
    Ok(2.0 * PI * s.hyperbolic_chi()? as f64)
}

/// A horocusp region in a hyperbolic surface has area equal to the length
/// of its boundary horocycle.
pub fn horocusp_boundary_area_identity(boundary_length: f64) -> Result<f64, AuditError> {
    positive("boundary length", boundary_length)
}

/// `6 (n - 2) >= (n - 1) l`: whether an essential `n`-punctured sphere with
/// `n - 1` punctures on a slope of length `l` is consistent with the
/// cusp-length inequality. Evaluated exactly on the binary value of `l`.
pub fn punctured_sphere_feasible(n: u64, slope_length: f64) -> Result<bool, AuditError> {
    if n < 3 {
        return Err(AuditError::TooFewPunctures(n));
    }
    let l = positive("slope length", slope_length)?;
    Ok(scaled_at_most(n as u128 - 1, l, 6 * (n as u128 - 2)))
}

/// Exact `k * x <= bound` for finite `x > 0`, with `k < 2^64`.
fn scaled_at_most(k: u128, x: f64, bound: u128) -> bool {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    // k * mantissa < 2^117
    let lhs = k * mantissa as u128;
    if lhs == 0 {
        return true;
    }
    if exp >= 0 {
        let shift = exp as u32;
        if shift >= lhs.leading_zeros() {
            return false;
        }
        lhs << shift <= bound
    } else {
        let shift = exp.unsigned_abs();
        if bound == 0 {
            return false;
        }
        if shift >= bound.leading_zeros() {
            return true;
        }
        lhs <= bound << shift
    }
}

/// Ceiling on the number of punctures `n` implied by doubling a surface along
/// its geodesic boundary when `j` horocusps touch the boundary:
/// `2 eps n <= 2 j (6 + eps) - 12`.
pub fn doubled_surface_ceiling(j: u64, epsilon: f64) -> Result<f64, AuditError> {
    let eps = positive("epsilon", epsilon)?;
    Ok((2.0 * j as f64 * (6.0 + eps) - 12.0) / (2.0 * eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    pub ceiling: f64,
    /// The supplied `n` respects the ceiling.
    pub consistent: bool,
}

pub fn doubled_surface_chain(n: u64, j: u64, slope_length: f64, epsilon: f64) -> Result<ChainBound, AuditError> {
    let ceiling = doubled_surface_ceiling(j, epsilon)?;
    if j > n {
        return Err(AuditError::TooManyBoundaryCusps(j, n));
    }
    let length = positive("slope length", slope_length)?;
    if length < 6.0 + epsilon {
        return Err(AuditError::SlopeTooShort {
            length,
            floor: 6.0 + epsilon,
        });
    }
    Ok(ChainBound {
        ceiling,
        consistent: n as f64 <= ceiling + AUDIT_TOLERANCE,
    })
}
