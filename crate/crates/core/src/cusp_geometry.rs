//! Flat metric on a cusp torus and the basic slope measurements.
//!
//! A [`CuspShape`] is the translation lattice of the boundary torus of a
//! horocusp, given by a marked basis (meridian, longitude). A [`Slope`] is a
//! primitive integer pair `(a, b)` naming the class `a * meridian + b * longitude`.
//! Integer data (slopes, intersection numbers) is exact; lengths, angles and
//! areas are `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance below which a basis determinant counts as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Largest absolute value accepted for a slope coordinate.
///
/// Keeps `a * d - b * c` inside `u64` for every pair of slopes.
pub const MAX_SLOPE_COORDINATE: i64 = i32::MAX as i64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate cusp basis: |det| = {det:e} is below {DEGENERACY_TOLERANCE:e}")]
    DegenerateBasis { det: f64 },
    #[error("non-finite coordinate in cusp basis")]
    NonFiniteBasis,
    #[error("({a}, {b}) is not a slope: coordinates must be coprime")]
    NotPrimitive { a: i64, b: i64 },
    #[error("slope coordinate out of range: ({a}, {b})")]
    CoordinateOutOfRange { a: i64, b: i64 },
    #[error("angle between a slope and itself is undefined: {0}")]
    IdenticalSlopes(Slope),
    #[error("matrix [[{0}, {1}], [{2}, {3}]] is not unimodular")]
    NotUnimodular(i64, i64, i64, i64),
    #[error("cannot parse slope from {0:?}")]
    ParseSlope(String),
}

/// A vector in the Euclidean plane of the cusp cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(k * self.x, k * self.y)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;

    fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// Marked Euclidean torus: the translation lattice spanned by a meridian and
/// a longitude.
///
/// The basis is stored positively oriented. If the supplied pair has negative
/// determinant the two vectors are swapped, and [`CuspShape::swapped`] reports
/// it, since slope coordinates then refer to the swapped marking.
///
/// The torus is taken to be the boundary of an embedded horocusp; nothing
/// here checks that.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspShape {
    meridian: Vec2,
    longitude: Vec2,
    name: Option<String>,
    swapped: bool,
}

impl CuspShape {
    pub fn new(meridian: impl Into<Vec2>, longitude: impl Into<Vec2>) -> Result<Self, GeometryError> {
        let (meridian, longitude) = (meridian.into(), longitude.into());
        if !meridian.is_finite() || !longitude.is_finite() {
            return Err(GeometryError::NonFiniteBasis);
        }
        let det = meridian.cross(longitude);
        if !det.is_finite() {
            return Err(GeometryError::NonFiniteBasis);
        }
        if det.abs() <= DEGENERACY_TOLERANCE {
            return Err(GeometryError::DegenerateBasis { det });
        }
        let swapped = det < 0.0;
        let (meridian, longitude) = if swapped {
            (longitude, meridian)
        } else {
            (meridian, longitude)
        };
        Ok(Self {
            meridian,
            longitude,
            name: None,
            swapped,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The unit square lattice.
    pub fn square() -> Self {
        Self::new([1.0, 0.0], [0.0, 1.0]).expect("unit square basis is valid")
    }

    /// The regular (hexagonal) lattice with shortest translation `scale`.
    pub fn hexagonal(scale: f64) -> Result<Self, GeometryError> {
        Self::new([scale, 0.0], [scale / 2.0, scale * 3f64.sqrt() / 2.0])
    }

    pub fn meridian(&self) -> Vec2 {
        self.meridian
    }

    pub fn longitude(&self) -> Vec2 {
        self.longitude
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// Area of the torus, `|det[meridian, longitude]|`.
    pub fn area(&self) -> f64 {
        self.meridian.cross(self.longitude).abs()
    }

    /// The lattice vector `a * meridian + b * longitude`.
    pub fn translation(&self, a: i64, b: i64) -> Vec2 {
        self.meridian.scale(a as f64) + self.longitude.scale(b as f64)
    }

    /// Length of the Euclidean geodesic representing `slope`.
    pub fn slope_length(&self, slope: Slope) -> f64 {
        self.translation(slope.a, slope.b).norm()
    }

    /// Angle in `(0, pi)` between the geodesics of two distinct slopes.
    pub fn slope_angle(&self, s1: Slope, s2: Slope) -> Result<f64, GeometryError> {
        if s1 == s2 {
            return Err(GeometryError::IdenticalSlopes(s1));
        }
        let u = self.translation(s1.a, s1.b);
        let v = self.translation(s2.a, s2.b);
        Ok(u.cross(v).abs().atan2(u.dot(v)))
    }

    /// `l(s1) * l(s2) * sin(angle) - intersection_number * area`.
    pub fn area_identity_residual(&self, s1: Slope, s2: Slope) -> Result<f64, GeometryError> {
        let theta = self.slope_angle(s1, s2)?;
        let lhs = self.slope_length(s1) * self.slope_length(s2) * theta.sin();
        let rhs = s1.intersection_number(s2) as f64 * self.area();
        Ok(lhs - rhs)
    }

    /// Shape with basis `(m', l') = (p m + q l, r m + s l)` for the unimodular
    /// matrix `[[p, q], [r, s]]`. Name is kept.
    pub fn change_basis(&self, u: Unimodular) -> Result<Self, GeometryError> {
        let [[p, q], [r, s]] = u.entries();
        let shape = Self::new(self.translation(p, q), self.translation(r, s))?;
        Ok(Self {
            name: self.name.clone(),
            ..shape
        })
    }

    /// Lattice widths: distance between adjacent lattice lines parallel to
    /// the meridian, and parallel to the longitude.
    pub fn lattice_heights(&self) -> (f64, f64) {
        let area = self.area();
        (area / self.meridian.norm(), area / self.longitude.norm())
    }

    /// Lagrange-Gauss reduced basis, returned as the unimodular matrix whose
    /// rows express the reduced vectors in the current basis.
    pub fn reduced_basis(&self) -> Unimodular {
        let mut rows = [[1i64, 0], [0, 1]];
        let mut v = [self.meridian, self.longitude];
        // Gauss reduction converges in O(log) rounds; the cap only guards
        // against float cycling on near-degenerate input.
        for _ in 0..256 {
            if v[0].dot(v[0]) > v[1].dot(v[1]) {
                v.swap(0, 1);
                rows.swap(0, 1);
            }
            let mu = (v[0].dot(v[1]) / v[0].dot(v[0])).round();
            if mu == 0.0 || !mu.is_finite() {
                break;
            }
            let k = mu as i64;
            v[1] = v[1] + v[0].scale(-mu);
            rows[1] = [rows[1][0] - k * rows[0][0], rows[1][1] - k * rows[0][1]];
        }
        Unimodular::new(rows).expect("Gauss reduction preserves unimodularity")
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn systole(&self) -> f64 {
        let [[p, q], _] = self.reduced_basis().entries();
        self.translation(p, q).norm()
    }
}

/// A 2x2 integer matrix with determinant +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unimodular([[i64; 2]; 2]);

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular([[1, 0], [0, 1]]);

    /// Entries equal to `i64::MIN` are rejected so that negation never overflows.
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self, GeometryError> {
        let det = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
        if det.abs() != 1 || m.iter().flatten().any(|&x| x == i64::MIN) {
            return Err(GeometryError::NotUnimodular(m[0][0], m[0][1], m[1][0], m[1][1]));
        }
        Ok(Self(m))
    }

    pub fn entries(self) -> [[i64; 2]; 2] {
        self.0
    }

    pub fn det(self) -> i64 {
        let [[p, q], [r, s]] = self.0.map(|row| row.map(i128::from));
        (p * s - q * r) as i64
    }

    /// Row-vector action `(a, b) -> (a, b) * M`; `None` if the image leaves `i64`.
    pub fn apply(self, a: i64, b: i64) -> Option<(i64, i64)> {
        let [[p, q], [r, s]] = self.0.map(|row| row.map(i128::from));
        let (a, b) = (i128::from(a), i128::from(b));
        Some((i64::try_from(a * p + b * r).ok()?, i64::try_from(a * q + b * s).ok()?))
    }

    pub fn inverse(self) -> Unimodular {
        let [[p, q], [r, s]] = self.0;
        let d = self.det();
        Unimodular([[s * d, -q * d], [-r * d, p * d]])
    }
}

/// A slope on the cusp torus: a primitive integer pair up to sign.
///
/// Stored in canonical form: `b > 0`, or `b == 0` and `a == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSlope", into = "RawSlope")]
pub struct Slope {
    a: i64,
    b: i64,
}

#[derive(Serialize, Deserialize)]
struct RawSlope {
    a: i64,
    b: i64,
}

impl TryFrom<RawSlope> for Slope {
    type Error = GeometryError;

    fn try_from(raw: RawSlope) -> Result<Self, Self::Error> {
        Slope::new(raw.a, raw.b)
    }
}

impl From<Slope> for RawSlope {
    fn from(s: Slope) -> Self {
        RawSlope { a: s.a, b: s.b }
    }
}

impl Slope {
    pub const MERIDIAN: Slope = Slope { a: 1, b: 0 };
    pub const LONGITUDE: Slope = Slope { a: 0, b: 1 };

    /// Canonicalizes the sign of `(a, b)`; fails unless `gcd(a, b) == 1`.
    pub fn new(a: i64, b: i64) -> Result<Self, GeometryError> {
        if a.unsigned_abs() > MAX_SLOPE_COORDINATE as u64 || b.unsigned_abs() > MAX_SLOPE_COORDINATE as u64 {
            return Err(GeometryError::CoordinateOutOfRange { a, b });
        }
        if gcd(a, b) != 1 {
            return Err(GeometryError::NotPrimitive { a, b });
        }
        let (a, b) = if b < 0 || (b == 0 && a < 0) { (-a, -b) } else { (a, b) };
        Ok(Self { a, b })
    }

    pub fn a(self) -> i64 {
        self.a
    }

    pub fn b(self) -> i64 {
        self.b
    }

    /// `Delta(s1, s2) = |a d - b c|`.
    pub fn intersection_number(self, other: Slope) -> u64 {
        let det = self.a as i128 * other.b as i128 - self.b as i128 * other.a as i128;
        det.unsigned_abs() as u64
    }

    /// Image of the slope under a change of marking. Primitivity is preserved,
    /// so the only failure is an image outside the coordinate range.
    pub fn transform(self, u: Unimodular) -> Result<Slope, GeometryError> {
        let out_of_range = GeometryError::CoordinateOutOfRange { a: self.a, b: self.b };
        let (a, b) = u.apply(self.a, self.b).ok_or(out_of_range)?;
        Slope::new(a, b)
    }

    /// Orders by `(a, b)` lexicographically on the canonical pair.
    pub fn lex_cmp(&self, other: &Slope) -> Ordering {
        (self.a, self.b).cmp(&(other.a, other.b))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Accepts `a/b`, `a,b` or `(a,b)`, with optional whitespace.
impl FromStr for Slope {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GeometryError::ParseSlope(s.to_string());
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let (x, y) = t.split_once('/').or_else(|| t.split_once(',')).ok_or_else(err)?;
        let a = x.trim().parse::<i64>().map_err(|_| err())?;
        let b = y.trim().parse::<i64>().map_err(|_| err())?;
        Slope::new(a, b)
    }
}

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hex2() -> CuspShape {
        CuspShape::new([2.0, 0.0], [1.0, 3f64.sqrt()]).unwrap()
    }

    fn slope(a: i64, b: i64) -> Slope {
        Slope::new(a, b).unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(CuspShape::square().area(), 1.0);
        assert!((hex2().area() - 2.0 * 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            CuspShape::new([1.0, 0.0], [2.0, 0.0]),
            Err(GeometryError::DegenerateBasis { .. })
        ));
        assert!(CuspShape::new([f64::NAN, 0.0], [0.0, 1.0]).is_err());
        assert!(CuspShape::new([1.0, 0.0], [0.0, 1e-13]).is_err());
        // finite vectors whose area overflows
        assert!(matches!(
            CuspShape::new([1e200, 0.0], [0.0, 1e200]),
            Err(GeometryError::NonFiniteBasis)
        ));
    }

    #[test]
    fn orientation_is_normalized() {
        let s = CuspShape::new([0.0, 1.0], [1.0, 0.0]).unwrap();
        assert!(s.swapped());
        assert_eq!(s.meridian(), Vec2::new(1.0, 0.0));
        assert!(s.meridian().cross(s.longitude()) > 0.0);
        assert!(!CuspShape::square().swapped());
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(slope(-3, -4), slope(3, 4));
        assert_eq!((slope(-1, 0).a(), slope(-1, 0).b()), (1, 0));
        assert_eq!((slope(2, -1).a(), slope(2, -1).b()), (-2, 1));
        assert_eq!((slope(0, -1).a(), slope(0, -1).b()), (0, 1));
        assert!(matches!(Slope::new(2, 4), Err(GeometryError::NotPrimitive { .. })));
        assert!(Slope::new(0, 0).is_err());
        assert!(Slope::new(i64::MAX, 1).is_err());
    }

    #[test]
    fn slope_length_examples() {
        assert_eq!(CuspShape::square().slope_length(slope(3, 4)), 5.0);
        // direct vector sum 1*(2,0) + 1*(1, sqrt 3) = (3, sqrt 3)
        let oracle = (3.0f64 * 3.0 + 3.0).sqrt();
        assert!((hex2().slope_length(slope(1, 1)) - oracle).abs() < 1e-14);
        assert!((hex2().slope_length(slope(1, 1)) - 2.0 * 3f64.sqrt()).abs() < 1e-14);
        assert!((hex2().slope_length(slope(1, 0)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(slope(1, 0).intersection_number(slope(0, 1)), 1);
        assert_eq!(slope(1, 2).intersection_number(slope(3, 4)), 2);
        assert_eq!(slope(5, 3).intersection_number(slope(5, 3)), 0);
        let big = MAX_SLOPE_COORDINATE;
        assert_eq!(
            slope(big, 1).intersection_number(slope(-big, big - 1)),
            (big as u64) * (big as u64 - 1) + big as u64
        );
    }

    #[test]
    fn angle_examples() {
        let sq = CuspShape::square();
        assert!((sq.slope_angle(slope(1, 0), slope(0, 1)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((hex2().slope_angle(slope(1, 0), slope(0, 1)).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!(matches!(
            sq.slope_angle(slope(1, 0), slope(1, 0)),
            Err(GeometryError::IdenticalSlopes(_))
        ));
        let obtuse = sq.slope_angle(slope(1, 0), slope(-1, 1)).unwrap();
        assert!((obtuse - 3.0 * PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn area_identity_examples() {
        assert_eq!(
            CuspShape::square()
                .area_identity_residual(slope(1, 0), slope(0, 1))
                .unwrap(),
            0.0
        );
        let shape = hex2();
        let lhs = shape.slope_length(slope(1, 0))
            * shape.slope_length(slope(1, 1))
            * shape.slope_angle(slope(1, 0), slope(1, 1)).unwrap().sin();
        let rhs = shape.area();
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
        let r = shape.area_identity_residual(slope(1, 0), slope(1, 1)).unwrap();
        assert!(r.abs() < 1e-9 * rhs);
    }

    #[test]
    fn reduction_and_systole() {
        let skew = CuspShape::new([1.0, 0.0], [7.3, 0.5]).unwrap();
        let u = skew.reduced_basis();
        assert_eq!(u.det().abs(), 1);
        assert!((skew.systole() - 0.5f64.hypot(0.3)).abs() < 1e-12);
        assert!((hex2().systole() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn extreme_coordinates_do_not_overflow() {
        assert!(matches!(
            Slope::new(i64::MIN, 1),
            Err(GeometryError::CoordinateOutOfRange { .. })
        ));
        assert!(matches!(
            Slope::new(1, i64::MIN),
            Err(GeometryError::CoordinateOutOfRange { .. })
        ));
        assert!("-9223372036854775808,1".parse::<Slope>().is_err());
        assert!(Unimodular::new([[1, i64::MIN], [0, 1]]).is_err());

        let a = 1i64 << 40;
        let u = Unimodular::new([[a, a - 1], [a + 1, a]]).unwrap();
        assert_eq!(u.det(), 1);
        assert!(u.apply(1 << 30, 0).is_none());
        assert!(matches!(
            Slope::MERIDIAN.transform(u),
            Err(GeometryError::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn unimodular_inverse() {
        let u = Unimodular::new([[2, 1], [1, 1]]).unwrap();
        let (a, b) = u.apply(3, -5).unwrap();
        assert_eq!(u.inverse().apply(a, b), Some((3, -5)));
        assert!(Unimodular::new([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn parse_slopes() {
        assert_eq!("1/11".parse::<Slope>().unwrap(), slope(1, 11));
        assert_eq!(" (-2, -9) ".parse::<Slope>().unwrap(), slope(2, 9));
        assert_eq!("7,5".parse::<Slope>().unwrap(), slope(7, 5));
        assert!("2/4".parse::<Slope>().is_err());
        assert!("x/1".parse::<Slope>().is_err());
        assert!("".parse::<Slope>().is_err());
    }

    #[test]
    fn slope_serde_rejects_non_canonical_input() {
        let s: Slope = serde_json::from_str(r#"{"a":-1,"b":-2}"#).unwrap();
        assert_eq!(s, slope(1, 2));
        assert!(serde_json::from_str::<Slope>(r#"{"a":2,"b":4}"#).is_err());
    }
}
