//! Cusp-shape files and analysis reports, both stored as JSON.
//!
//! Cusp file, schema `cusp-file/v1`:
//!
//! ```json
//! {
//!   "schema": "cusp-file/v1",
//!   "cusps": [
//!     { "name": "hex2", "meridian": [2.0, 0.0], "longitude": [1.0, 1.7320508075688772],
//!       "source": "free-text provenance" }
//!   ]
//! }
//! ```
//!
//! Records are validated one at a time. A malformed or degenerate record is
//! reported with its line number and the remaining records still load.
//! Analysis reports use schema `analysis-report/v1`; see [`AnalysisReport`].

use std::collections::HashSet;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::bound_calculus::{
    slope_count_bound, verify_counting_lemma, BoundError, BoundQuery, BoundReport, LemmaVerdict,
};
use crate::cusp_geometry::{CuspShape, GeometryError, Slope};
use crate::slope_search::{delta_matrix, enumerate_short_slopes, SearchError, SlopeEntry, BOUNDARY_TOLERANCE};

pub const CUSP_FILE_SCHEMA: &str = "cusp-file/v1";
pub const REPORT_SCHEMA: &str = "analysis-report/v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative tolerance when checking stored lengths and areas against the basis.
const RECOMPUTE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {found:?}, expected {expected:?}")]
    Incompatible { found: String, expected: &'static str },
    #[error("no cusp named {0:?}")]
    UnknownCusp(String),
    #[error("inconsistent report: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

impl ReportError {
    fn syntax(err: serde_json::Error, line_offset: usize) -> Self {
        ReportError::Syntax {
            line: err.line() + line_offset,
            column: err.column(),
            message: strip_position(&err),
        }
    }
}

fn strip_position(err: &serde_json::Error) -> String {
    let text = err.to_string();
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    }
}

/// One entry of a cusp file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspRecord {
    pub name: String,
    pub meridian: [f64; 2],
    pub longitude: [f64; 2],
    #[serde(default)]
    pub source: String,
}

impl CuspRecord {
    pub fn shape(&self) -> Result<CuspShape, GeometryError> {
        Ok(CuspShape::new(self.meridian, self.longitude)?.with_name(self.name.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspFile {
    pub schema: String,
    pub cusps: Vec<CuspRecord>,
}

impl CuspFile {
    pub fn new(cusps: Vec<CuspRecord>) -> Self {
        Self {
            schema: CUSP_FILE_SCHEMA.to_string(),
            cusps,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCusp {
    pub record: CuspRecord,
    pub shape: CuspShape,
    /// 1-based line where the record starts.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordProblem {
    #[error("{0}")]
    Malformed(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("duplicate cusp name {0:?}")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("record {index} (line {line}): {problem}")]
pub struct RecordError {
    pub index: usize,
    pub line: usize,
    pub name: Option<String>,
    pub problem: RecordProblem,
}

/// Result of reading a cusp file: valid shapes plus rejected records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CuspLoad {
    pub cusps: Vec<LoadedCusp>,
    pub rejected: Vec<RecordError>,
}

impl CuspLoad {
    pub fn shapes(&self) -> Vec<CuspShape> {
        self.cusps.iter().map(|c| c.shape.clone()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&CuspShape, ReportError> {
        self.cusps
            .iter()
            .find(|c| c.record.name == name)
            .map(|c| &c.shape)
            .ok_or_else(|| ReportError::UnknownCusp(name.to_string()))
    }
}

#[derive(Deserialize)]
struct CuspFileHeader<'a> {
    schema: String,
    #[serde(borrow)]
    cusps: Vec<&'a RawValue>,
}

/// Parses the text of a cusp file. Only a file-level problem (bad JSON, wrong
/// schema) is an `Err`; per-record problems land in [`CuspLoad::rejected`].
pub fn parse_cusp_str(text: &str) -> Result<CuspLoad, ReportError> {
    let header: CuspFileHeader<'_> = serde_json::from_str(text).map_err(|e| ReportError::syntax(e, 0))?;
    if header.schema != CUSP_FILE_SCHEMA {
        return Err(ReportError::Incompatible {
            found: header.schema,
            expected: CUSP_FILE_SCHEMA,
        });
    }
    let mut load = CuspLoad::default();
    let mut names = HashSet::new();
    for (index, raw) in header.cusps.into_iter().enumerate() {
        let line = line_of(text, raw.get());
        let reject = |name: Option<String>, problem: RecordProblem| RecordError {
            index,
            line,
            name,
            problem,
        };
        let record: CuspRecord = match serde_json::from_str(raw.get()) {
            Ok(r) => r,
            Err(e) => {
                let at = e.line() + line - 1;
                let message = format!("{} (line {at})", strip_position(&e));
                load.rejected.push(reject(None, RecordProblem::Malformed(message)));
                continue;
            }
        };
        let name = Some(record.name.clone());
        if !names.insert(record.name.clone()) {
            load.rejected
                .push(reject(name, RecordProblem::DuplicateName(record.name)));
            continue;
        }
        match record.shape() {
            Ok(shape) => load.cusps.push(LoadedCusp { record, shape, line }),
            Err(e) => load.rejected.push(reject(name, e.into())),
        }
    }
    Ok(load)
}

/// 1-based line of `slice` inside `text`; `slice` must borrow from `text`.
fn line_of(text: &str, slice: &str) -> usize {
    let offset = (slice.as_ptr() as usize)
        .saturating_sub(text.as_ptr() as usize)
        .min(text.len());
    text.as_bytes()[..offset].iter().filter(|&&b| b == b'\n').count() + 1
}

/// Reads a whole file, or standard input when `path` is `-`.
pub fn read_input(path: &Path) -> Result<String, ReportError> {
    let io_err = |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

pub fn load_cusp_file(path: &Path) -> Result<CuspLoad, ReportError> {
    parse_cusp_str(&read_input(path)?)
}

pub fn cusp_file_to_string(file: &CuspFile) -> String {
    serde_json::to_string_pretty(file).expect("cusp records serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeRecord {
    pub name: Option<String>,
    pub meridian: [f64; 2],
    pub longitude: [f64; 2],
    pub area: f64,
}

impl ShapeRecord {
    pub fn from_shape(shape: &CuspShape) -> Self {
        Self {
            name: shape.name().map(str::to_string),
            meridian: shape.meridian().into(),
            longitude: shape.longitude().into(),
            area: shape.area(),
        }
    }

    pub fn shape(&self) -> Result<CuspShape, GeometryError> {
        let shape = CuspShape::new(self.meridian, self.longitude)?;
        Ok(match &self.name {
            Some(n) => shape.with_name(n.clone()),
            None => shape,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaRecord {
    pub prime: u64,
    pub verdict: LemmaVerdict,
}

/// Short slopes of one cusp together with the bound pipeline and the
/// counting-lemma check, as written by `cuspkit report`.
///
/// Floats are written in shortest round-trip form, so `load(save(r)) == r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub shape: ShapeRecord,
    pub threshold: f64,
    pub slopes: Vec<SlopeEntry>,
    pub delta_matrix: Vec<Vec<u64>>,
    pub max_delta: u64,
    pub bound: BoundReport,
    pub lemma: LemmaRecord,
}

impl AnalysisReport {
    /// Runs the full analysis. `area_floor` defaults to the shape's own area.
    pub fn compute(shape: &CuspShape, threshold: f64, area_floor: Option<f64>) -> Result<Self, ReportError> {
        let short = enumerate_short_slopes(shape, threshold)?;
        let bound = slope_count_bound(&BoundQuery::new(threshold, area_floor.unwrap_or(shape.area()))?)?;
        let slopes: Vec<Slope> = short.slopes().collect();
        let verdict = verify_counting_lemma(&slopes, bound.prime)?;
        Ok(Self {
            schema: REPORT_SCHEMA.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            generated_at: None,
            shape: ShapeRecord::from_shape(shape),
            threshold,
            slopes: short.entries,
            delta_matrix: short.delta_matrix,
            max_delta: short.max_delta,
            bound,
            lemma: LemmaRecord {
                prime: bound.prime,
                verdict,
            },
        })
    }

    pub fn with_timestamp(mut self, stamp: impl Into<String>) -> Self {
        self.generated_at = Some(stamp.into());
        self
    }

    /// Recomputes the analysis from the stored shape, threshold and area floor.
    pub fn recompute(&self) -> Result<Self, ReportError> {
        let shape = self.shape.shape()?;
        let mut fresh = Self::compute(&shape, self.threshold, Some(self.bound.query.area_floor))?;
        fresh.tool_version.clone_from(&self.tool_version);
        fresh.generated_at.clone_from(&self.generated_at);
        Ok(fresh)
    }

    /// Internal consistency: every derived field agrees with the data it is
    /// derived from. Does not re-run the enumeration; see [`Self::recompute`].
    pub fn validate(&self) -> Result<(), ReportError> {
        let bad = |msg: String| Err(ReportError::Inconsistent(msg));
        if self.schema != REPORT_SCHEMA {
            return Err(ReportError::Incompatible {
                found: self.schema.clone(),
                expected: REPORT_SCHEMA,
            });
        }
        let shape = self.shape.shape()?;
        if !close(self.shape.area, shape.area()) {
            return bad(format!(
                "area {} does not match basis area {}",
                self.shape.area,
                shape.area()
            ));
        }
        if shape.swapped() {
            return bad("basis is negatively oriented".into());
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return bad(format!("threshold {} is not positive", self.threshold));
        }
        for (i, e) in self.slopes.iter().enumerate() {
            if !e.length.is_finite() || !close(e.length, shape.slope_length(e.slope)) {
                return bad(format!(
                    "length of slope {} is {}, basis gives {}",
                    e.slope,
                    e.length,
                    shape.slope_length(e.slope)
                ));
            }
            if e.length > self.threshold + BOUNDARY_TOLERANCE {
                return bad(format!("slope {} is longer than the threshold", e.slope));
            }
            if e.boundary != ((e.length - self.threshold).abs() <= BOUNDARY_TOLERANCE) {
                return bad(format!("boundary flag of slope {} is wrong", e.slope));
            }
            if i > 0 {
                let prev = &self.slopes[i - 1];
                let ordered =
                    prev.length < e.length || (prev.length == e.length && prev.slope.lex_cmp(&e.slope).is_lt());
                if !ordered {
                    return bad(format!("slopes {} and {} are out of order", prev.slope, e.slope));
                }
            }
        }
        let slopes: Vec<Slope> = self.slopes.iter().map(|e| e.slope).collect();
        let (matrix, max) = delta_matrix(&slopes);
        if matrix != self.delta_matrix {
            return bad("delta matrix does not match the slope list".into());
        }
        if max != self.max_delta {
            return bad(format!("max_delta {} but matrix maximum is {max}", self.max_delta));
        }
        if self.bound.query.length_threshold != self.threshold {
            return bad("bound query threshold differs from the report threshold".into());
        }
        let bound = slope_count_bound(&self.bound.query)?;
        if bound != self.bound {
            return bad(format!("bound pipeline gives {bound}, report says {}", self.bound));
        }
        if self.lemma.prime != bound.prime {
            return bad(format!(
                "lemma prime {} differs from bound prime {}",
                self.lemma.prime, bound.prime
            ));
        }
        if verify_counting_lemma(&slopes, self.lemma.prime)? != self.lemma.verdict {
            return bad("counting-lemma verdict does not match recomputation".into());
        }
        Ok(())
    }
}

fn close(stored: f64, computed: f64) -> bool {
    (stored - computed).abs() <= RECOMPUTE_TOLERANCE * computed.abs().max(1.0)
}

pub fn report_to_string(report: &AnalysisReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}

#[derive(Deserialize)]
struct SchemaProbe {
    schema: String,
}

/// Parses and validates a report. A different schema version is reported as
/// [`ReportError::Incompatible`] before any other field is looked at.
pub fn parse_report_str(text: &str) -> Result<AnalysisReport, ReportError> {
    let probe: SchemaProbe = serde_json::from_str(text).map_err(|e| ReportError::syntax(e, 0))?;
    if probe.schema != REPORT_SCHEMA {
        return Err(ReportError::Incompatible {
            found: probe.schema,
            expected: REPORT_SCHEMA,
        });
    }
    let report: AnalysisReport = serde_json::from_str(text).map_err(|e| ReportError::syntax(e, 0))?;
    report.validate()?;
    Ok(report)
}

pub fn save_report(report: &AnalysisReport, path: &Path) -> Result<(), ReportError> {
    fs::write(path, report_to_string(report)).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_report(path: &Path) -> Result<AnalysisReport, ReportError> {
    parse_report_str(&read_input(path)?)
}
