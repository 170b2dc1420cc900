//! From a length threshold and a cusp-area floor to a bound on the number of
//! exceptional slopes.
//!
//! Two slopes of length at most `L` on a torus of area at least `A` satisfy
//! `Delta * A <= l1 * l2 * sin(theta) <= L^2`, so pairwise intersection
//! numbers are at most `R = floor(L^2 / A)`. Reducing slopes mod a prime
//! `p > R` onto the projective line over `F_p` is then injective, which caps
//! the collection at `p + 1` slopes.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cusp_geometry::Slope;

/// Lower bound on the maximal cusp area of a one-cusped hyperbolic 3-manifold.
pub const CAO_MEYERHOFF_AREA: f64 = 3.35;

/// Relative distance to an integer within which `L^2 / A` snaps to it.
pub const FLOOR_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("length threshold must be finite and positive, got {0}")]
    InvalidLength(f64),
    #[error("area floor must be finite and positive, got {0}")]
    InvalidArea(f64),
    #[error("no prime above {0} fits in 64 bits")]
    PrimeOverflow(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub length_threshold: f64,
    pub area_floor: f64,
}

impl BoundQuery {
    pub fn new(length_threshold: f64, area_floor: f64) -> Result<Self, BoundError> {
        let query = Self {
            length_threshold,
            area_floor,
        };
        query.validate()?;
        Ok(query)
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        if !(self.length_threshold.is_finite() && self.length_threshold > 0.0) {
            return Err(BoundError::InvalidLength(self.length_threshold));
        }
        if !(self.area_floor.is_finite() && self.area_floor > 0.0) {
            return Err(BoundError::InvalidArea(self.area_floor));
        }
        Ok(())
    }

    /// `L^2 / A`.
    pub fn ratio(&self) -> f64 {
        self.length_threshold * self.length_threshold / self.area_floor
    }
}

/// Floor of a nonnegative ratio, snapping values within [`FLOOR_GUARD`]
/// (relative) of an integer onto that integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuardedFloor {
    pub ratio: f64,
    pub value: u64,
    /// The ratio was not an integer but landed inside the guard band.
    pub snapped: bool,
}

impl GuardedFloor {
    pub fn of(ratio: f64) -> Self {
        let nearest = ratio.round();
        if nearest >= 1.0 && (ratio - nearest).abs() <= FLOOR_GUARD * nearest {
            Self {
                ratio,
                value: nearest as u64,
                snapped: ratio != nearest,
            }
        } else {
            Self {
                ratio,
                value: ratio.floor() as u64,
                snapped: false,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub query: BoundQuery,
    /// `L^2 / A` before flooring.
    pub ratio: f64,
    pub snapped: bool,
    /// Ceiling `R` on pairwise intersection numbers.
    pub delta_max: u64,
    /// Smallest prime strictly above `delta_max`.
    pub prime: u64,
    /// `prime + 1`, the size of the projective line over `F_prime`.
    pub count_bound: u64,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Δ ≤ {}, p = {}, slopes ≤ {}",
            self.delta_max, self.prime, self.count_bound
        )
    }
}

pub fn delta_bound_detail(query: &BoundQuery) -> Result<GuardedFloor, BoundError> {
    query.validate()?;
    Ok(GuardedFloor::of(query.ratio()))
}

/// `floor(L^2 / A)`, the largest intersection number two slopes of length
/// at most `L` can have on a torus of area at least `A`.
pub fn delta_bound(query: &BoundQuery) -> Result<u64, BoundError> {
    Ok(delta_bound_detail(query)?.value)
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn smallest_prime_greater(r: u64) -> Result<u64, BoundError> {
    let mut n = r.checked_add(1).ok_or(BoundError::PrimeOverflow(r))?;
    while !is_prime(n) {
        n = n.checked_add(1).ok_or(BoundError::PrimeOverflow(r))?;
    }
    Ok(n)
}

pub fn slope_count_bound(query: &BoundQuery) -> Result<BoundReport, BoundError> {
    let floor = delta_bound_detail(query)?;
    let prime = smallest_prime_greater(floor.value)?;
    Ok(BoundReport {
        query: *query,
        ratio: floor.ratio,
        snapped: floor.snapped,
        delta_max: floor.value,
        prime,
        count_bound: prime + 1,
    })
}

/// A point `[x : y]` of the projective line over `F_p`, normalized so the
/// first nonzero coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub modulus: u64,
    pub x: u64,
    pub y: u64,
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}] mod {}", self.x, self.y, self.modulus)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Reduces `a/b` to `[a mod p : b mod p]`.
///
/// Never hits `[0 : 0]`: that would need `p | gcd(a, b) = 1`.
pub fn project_to_fp(slope: Slope, p: u64) -> Result<ProjectivePoint, BoundError> {
    if !is_prime(p) {
        return Err(BoundError::NotPrime(p));
    }
    let x = (slope.a() as i128).rem_euclid(p as i128) as u64;
    let y = (slope.b() as i128).rem_euclid(p as i128) as u64;
    let (x, y) = if x != 0 {
        (1, mul_mod(y, inverse_mod(x, p), p))
    } else {
        debug_assert_ne!(y, 0);
        (0, 1)
    };
    Ok(ProjectivePoint { modulus: p, x, y })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LemmaVerdict {
    Injective,
    /// Two distinct slopes share a point; `p` then divides `delta > 0`.
    Collision {
        first: Slope,
        second: Slope,
        delta: u64,
        point: ProjectivePoint,
    },
}

impl LemmaVerdict {
    pub fn is_injective(&self) -> bool {
        matches!(self, LemmaVerdict::Injective)
    }
}

impl fmt::Display for LemmaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaVerdict::Injective => write!(f, "injective"),
            LemmaVerdict::Collision {
                first,
                second,
                delta,
                point,
            } => write!(f, "collision: {first} and {second} both map to {point} (Δ = {delta})"),
        }
    }
}

/// Checks whether reduction mod `p` is injective on a set of slopes.
/// Repeated slopes count once. The first collision in input order is reported.
pub fn verify_counting_lemma(slopes: &[Slope], p: u64) -> Result<LemmaVerdict, BoundError> {
    let mut seen: HashMap<ProjectivePoint, Slope> = HashMap::with_capacity(slopes.len());
    for &slope in slopes {
        let point = project_to_fp(slope, p)?;
        match seen.get(&point) {
            Some(&earlier) if earlier != slope => {
                return Ok(LemmaVerdict::Collision {
                    first: earlier,
                    second: slope,
                    delta: earlier.intersection_number(slope),
                    point,
                });
            }
            Some(_) => {}
            None => {
                seen.insert(point, slope);
            }
        }
    }
    Ok(LemmaVerdict::Injective)
}
