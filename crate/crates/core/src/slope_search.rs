//! Enumeration of short primitive slopes on a cusp torus.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cusp_geometry::{gcd, CuspShape, Slope, Unimodular, MAX_SLOPE_COORDINATE};

/// Length threshold beyond which a filling is guaranteed hyperbolike.
pub const SIX_THEOREM_THRESHOLD: f64 = 6.0;

/// Lengths within this absolute distance of the threshold are included and
/// flagged as boundary cases.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Upper bound on lattice points examined by one enumeration.
pub const MAX_SEARCH_POINTS: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("threshold must be finite, got {0}")]
    NonFiniteThreshold(f64),
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(f64),
    #[error("search box of {points} lattice points exceeds the limit of {MAX_SEARCH_POINTS}")]
    SearchBoxTooLarge { points: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeEntry {
    pub slope: Slope,
    pub length: f64,
    /// Length is within [`BOUNDARY_TOLERANCE`] of the threshold.
    pub boundary: bool,
}

/// Every primitive slope of length at most `threshold`, with pairwise
/// intersection numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortSlopeReport {
    pub shape: CuspShape,
    pub threshold: f64,
    /// Sorted by length, then lexicographically by `(a, b)`.
    pub entries: Vec<SlopeEntry>,
    pub delta_matrix: Vec<Vec<u64>>,
    pub max_delta: u64,
}

impl ShortSlopeReport {
    pub fn slopes(&self) -> impl Iterator<Item = Slope> + '_ {
        self.entries.iter().map(|e| e.slope)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Pairwise intersection numbers and their maximum over distinct pairs.
pub fn delta_matrix(slopes: &[Slope]) -> (Vec<Vec<u64>>, u64) {
    let matrix: Vec<Vec<u64>> = slopes
        .iter()
        .map(|s| slopes.iter().map(|t| s.intersection_number(*t)).collect())
        .collect();
    let max = matrix
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().skip(i + 1).copied())
        .max()
        .unwrap_or(0);
    (matrix, max)
}

fn check_threshold(threshold: f64) -> Result<(), SearchError> {
    if !threshold.is_finite() {
        return Err(SearchError::NonFiniteThreshold(threshold));
    }
    if threshold <= 0.0 {
        return Err(SearchError::NonPositiveThreshold(threshold));
    }
    Ok(())
}

/// Coefficient box `(|a| max, |b| max)` in the shape's own basis that holds
/// every lattice vector of length at most `radius`.
///
/// The component of `a m + b l` orthogonal to `m` has length `|b|` times the
/// lattice height over `m`, so `|b| <= radius / h_mer`, and symmetrically for `a`.
pub fn search_box(shape: &CuspShape, radius: f64) -> (u64, u64) {
    let (h_mer, h_long) = shape.lattice_heights();
    ((radius / h_long).ceil() as u64, (radius / h_mer).ceil() as u64)
}

/// All canonical primitive slopes with `slope_length <= threshold`
/// (up to [`BOUNDARY_TOLERANCE`]).
///
/// The search runs over the dual-height box of a Gauss-reduced basis, so the
/// box stays small for skewed markings, and maps back to the original marking.
pub fn enumerate_short_slopes(shape: &CuspShape, threshold: f64) -> Result<ShortSlopeReport, SearchError> {
    check_threshold(threshold)?;
    let radius = threshold + BOUNDARY_TOLERANCE;
    let reduce = shape.reduced_basis();
    let [[p, q], [r, s]] = reduce.entries();
    let reduced =
        CuspShape::new(shape.translation(p, q), shape.translation(r, s)).expect("reduced basis spans the same lattice");
    // `CuspShape::new` may swap a negatively oriented pair; follow it.
    let reduce = if reduced.swapped() {
        Unimodular::new([[r, s], [p, q]]).expect("row swap is unimodular")
    } else {
        reduce
    };
    let (max_x, max_y) = search_box(&reduced, radius);
    let points = (2 * max_x + 1).saturating_mul(max_y + 1);
    if points > MAX_SEARCH_POINTS {
        return Err(SearchError::SearchBoxTooLarge { points });
    }
    let (max_x, max_y) = (max_x as i64, max_y as i64);

    let mut entries = Vec::new();
    for y in 0..=max_y {
        // one representative per sign pair: y > 0, or y == 0 and x == 1
        let xs = if y == 0 { 1..=1 } else { -max_x..=max_x };
        for x in xs {
            if gcd(x, y) != 1 {
                continue;
            }
            let Some((a, b)) = reduce.apply(x, y) else {
                continue;
            };
            if a.unsigned_abs() > MAX_SLOPE_COORDINATE as u64 || b.unsigned_abs() > MAX_SLOPE_COORDINATE as u64 {
                continue;
            }
            let slope = Slope::new(a, b).expect("primitive by construction");
            let length = shape.slope_length(slope);
            if length <= radius {
                entries.push(SlopeEntry {
                    slope,
                    length,
                    boundary: (length - threshold).abs() <= BOUNDARY_TOLERANCE,
                });
            }
        }
    }
    entries.sort_by(entry_order);

    let slopes: Vec<Slope> = entries.iter().map(|e| e.slope).collect();
    let (delta_matrix, max_delta) = delta_matrix(&slopes);
    Ok(ShortSlopeReport {
        shape: shape.clone(),
        threshold,
        entries,
        delta_matrix,
        max_delta,
    })
}

fn entry_order(x: &SlopeEntry, y: &SlopeEntry) -> Ordering {
    x.length.total_cmp(&y.length).then_with(|| x.slope.lex_cmp(&y.slope))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeClass {
    /// Short enough that the filling may be exceptional.
    CandidateExceptional,
    /// Longer than the threshold: the filling is hyperbolike.
    HyperbolikeGuaranteed,
}

/// Strict comparison: a slope of length exactly `threshold` stays a candidate.
pub fn classify_slope(shape: &CuspShape, slope: Slope, threshold: f64) -> SlopeClass {
    if shape.slope_length(slope) > threshold {
        SlopeClass::HyperbolikeGuaranteed
    } else {
        SlopeClass::CandidateExceptional
    }
}
