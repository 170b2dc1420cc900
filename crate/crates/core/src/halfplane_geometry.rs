//! Horodisks tangent to a geodesic in the upper half-plane.
//!
//! Normalization: the geodesic is the imaginary axis `(0, inf)`, and a
//! horodisk of Euclidean radius `rho` is based on the positive real axis,
//! centered at `(rho, rho)`, touching the geodesic at height `rho`.

use thiserror::Error;

/// Relative tolerance for the tangency condition `2(R - r)^2 = (R + r)^2`.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;

/// Length ratio between a shortest boundary arc of a cylinder and a diameter
/// it replaces, when the solid filling torus is re-metrized as a Euclidean
/// cylinder. Only recorded here; nothing in the crate depends on it.
pub const CYLINDER_ARC_RATIO: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HalfPlaneError {
    #[error("horodisk radii must be finite and positive, got r = {0}")]
    InvalidRadius(f64),
    #[error("larger radius {large} is below smaller radius {small}")]
    RadiiOutOfOrder { small: f64, large: f64 },
    #[error("epsilon must be finite and positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("loop length must be finite and nonnegative, got {0}")]
    InvalidLoopLength(f64),
}

/// Two horodisks tangent to the imaginary axis, radii `small <= large`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorodiskPair {
    small: f64,
    large: f64,
}

impl HorodiskPair {
    pub fn new(small: f64, large: f64) -> Result<Self, HalfPlaneError> {
        if !(small.is_finite() && small > 0.0) {
            return Err(HalfPlaneError::InvalidRadius(small));
        }
        if !large.is_finite() {
            return Err(HalfPlaneError::InvalidRadius(large));
        }
        if large < small {
            return Err(HalfPlaneError::RadiiOutOfOrder { small, large });
        }
        Ok(Self { small, large })
    }

    pub fn small(&self) -> f64 {
        self.small
    }

    pub fn large(&self) -> f64 {
        self.large
    }

    pub fn centers(&self) -> [(f64, f64); 2] {
        [(self.small, self.small), (self.large, self.large)]
    }
}

/// Hyperbolic distance along the geodesic between the two tangency points,
/// `ln(R / r)`.
pub fn tangency_separation(pair: &HorodiskPair) -> f64 {
    (pair.large / pair.small).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency {
    pub tangent: bool,
    /// `(R + r)^2 - 2 (R - r)^2`.
    pub residual: f64,
}

/// Whether the two horodisks touch each other: the centers `(r, r)` and
/// `(R, R)` are `sqrt(2) (R - r)` apart, which must equal `R + r`.
pub fn mutually_tangent(pair: &HorodiskPair) -> Tangency {
    let (r, big) = (pair.small, pair.large);
    let sum_sq = (big + r) * (big + r);
    let residual = sum_sq - 2.0 * (big - r) * (big - r);
    Tangency {
        tangent: residual.abs() <= TANGENCY_TOLERANCE * sum_sq,
        residual,
    }
}

/// Larger root of `a t^2 + b t + c`, using the cancellation-free form.
fn larger_root(a: f64, b: f64, c: f64) -> f64 {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q = -0.5 * (b - b.signum() * disc);
    let (t1, t2) = (q / a, c / q);
    t1.max(t2)
}

/// Ratio `R / r` of two mutually tangent horodisks tangent to a common
/// geodesic: the root above 1 of `2 (t - 1)^2 = (t + 1)^2`, i.e.
/// `t^2 - 6t + 1 = 0`, which is `(1 + sqrt 2)^2`.
pub fn extremal_ratio() -> f64 {
    // 2(t - 1)^2 - (t + 1)^2 = t^2 - 6t + 1
    larger_root(1.0, -6.0, 1.0)
}

/// Geodesic boundary length forced by `j` horocusps touching it.
pub fn boundary_length_lower_bound(j: u64) -> f64 {
    2.0 * j as f64 * std::f64::consts::SQRT_2.ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappingQuery {
    epsilon: f64,
    loop_length: f64,
}

impl WrappingQuery {
    pub fn new(epsilon: f64, loop_length: f64) -> Result<Self, HalfPlaneError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(HalfPlaneError::InvalidEpsilon(epsilon));
        }
        if !(loop_length.is_finite() && loop_length >= 0.0) {
            return Err(HalfPlaneError::InvalidLoopLength(loop_length));
        }
        Ok(Self { epsilon, loop_length })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn loop_length(&self) -> f64 {
        self.loop_length
    }
}

/// Upper bound `(6 + eps) l(c) / (2 eps ln(1 + sqrt 2))` on the wrapping
/// number of a loop of length `l(c)` around the filling core, when the
/// filling slope is longer than `6 + eps`.
pub fn wrapping_bound(q: &WrappingQuery) -> f64 {
    (6.0 + q.epsilon) * q.loop_length / (2.0 * q.epsilon * std::f64::consts::SQRT_2.ln_1p())
}
