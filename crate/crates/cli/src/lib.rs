//! The `cuspkit` command line. [`run`] takes the arguments and two output
//! streams and returns the exit code, so the binary is a one-line wrapper.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

pub mod values;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cuspkit::bound_calculus::{slope_count_bound, verify_counting_lemma, BoundQuery};
use cuspkit::diagram::{emit_lattice_svg, DiagramSpec};
use cuspkit::halfplane_geometry::{
    extremal_ratio, mutually_tangent, tangency_separation, wrapping_bound, HorodiskPair, WrappingQuery,
};
use cuspkit::report_io::{load_cusp_file, load_report, report_to_string, AnalysisReport, ShapeRecord};
use cuspkit::slope_search::{enumerate_short_slopes, ShortSlopeReport};
use cuspkit::surface_audit::{check_cusp_length_inequality, SurfaceAudit, SurfaceType, UnlistedPunctures};
use cuspkit::{CuspShape, Slope};

use values::AreaFloor;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cuspkit",
    version,
    about = "Short slopes and slope-count bounds for hyperbolic cusps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the slopes of length at most the threshold on one cusp.
    Slopes(SlopesArgs),
    /// L²/A, its floor R, the smallest prime p > R and the count bound p + 1.
    Bound(BoundArgs),
    /// Check that the short slopes of a cusp reduce injectively mod p.
    LemmaVerify(LemmaArgs),
    /// Check sum of cusp lengths ≤ 6|χ| for a punctured surface.
    Audit(AuditArgs),
    /// Horodisk calculus in the upper half-plane.
    Horodisk(HorodiskArgs),
    /// Draw the cusp lattice with the short slopes highlighted, as SVG.
    Diagram(DiagramArgs),
    /// Write a full analysis report as JSON, or verify one.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct CuspArgs {
    /// Cusp file; `-` reads standard input.
    #[arg(long, value_name = "FILE")]
    pub cusp: PathBuf,
    /// Name of the cusp record to use.
    #[arg(long)]
    pub name: String,
    /// Length threshold L; accepts `2pi`.
    #[arg(long, default_value = "6", value_parser = values::parse_length, allow_hyphen_values = true)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct SlopesArgs {
    #[command(flatten)]
    pub cusp: CuspArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Length threshold L; accepts `2pi`.
    #[arg(long, alias = "threshold", default_value = "6", value_parser = values::parse_length, allow_hyphen_values = true)]
    pub length: f64,
    /// Cusp area floor A; accepts `adams` (√3) and `cao-meyerhoff` (3.35).
    #[arg(long, default_value = "3.35", value_parser = values::parse_area, allow_hyphen_values = true)]
    pub area: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub cusp: CuspArgs,
    /// Prime to reduce modulo; defaults to the smallest prime above R.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Area floor used for R; also accepts `shape` for the cusp's own area.
    #[arg(long, default_value = "3.35", value_parser = values::parse_cusp_area, allow_hyphen_values = true)]
    pub area: AreaFloor,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Surface type as `genus,punctures,boundary`.
    #[arg(long, value_parser = parse_surface)]
    pub surface: SurfaceType,
    /// Cusp lengths of the punctures that land in the cusp, comma separated;
    /// may be repeated.
    #[arg(long, required = true, value_delimiter = ',', value_parser = values::parse_length, allow_hyphen_values = true)]
    pub lengths: Vec<f64>,
    /// Require a length for every puncture.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct HorodiskArgs {
    #[command(flatten)]
    pub query: HorodiskQuery,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct HorodiskQuery {
    /// Ratio R/r of tangent horodisks on a common geodesic.
    #[arg(long)]
    pub ratio: bool,
    /// Separation ln(R/r) and tangency of horodisks of radii r ≤ R.
    #[arg(long, num_args = 2, value_names = ["r", "R"], allow_hyphen_values = true)]
    pub separation: Option<Vec<f64>>,
    /// Wrapping-number bound for a loop of length LEN, slopes longer than 6 + EPS.
    #[arg(long, num_args = 2, value_names = ["EPS", "LEN"], value_parser = values::parse_length, allow_hyphen_values = true)]
    pub wrapping: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[command(flatten)]
    pub cusp: CuspArgs,
    /// Output SVG file; `-` writes to standard output.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 600)]
    pub width: u32,
    #[arg(long, default_value_t = 600)]
    pub height: u32,
    /// Draw translates with |a|, |b| up to this; defaults to cover every short slope.
    #[arg(long)]
    pub extent: Option<u32>,
    #[arg(long)]
    pub no_circle: bool,
    #[arg(long)]
    pub no_labels: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Cusp file; `-` reads standard input.
    #[arg(long, value_name = "FILE", required_unless_present = "verify")]
    pub cusp: Option<PathBuf>,
    #[arg(long, required_unless_present = "verify")]
    pub name: Option<String>,
    /// Length threshold L; accepts `2pi`.
    #[arg(long, default_value = "6", value_parser = values::parse_length, allow_hyphen_values = true)]
    pub threshold: f64,
    /// Area floor; accepts `adams`, `cao-meyerhoff` and `shape`.
    #[arg(long, default_value = "3.35", value_parser = values::parse_cusp_area, allow_hyphen_values = true)]
    pub area: AreaFloor,
    /// Output file; standard output if absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Record the current UTC time in the report.
    #[arg(long)]
    pub stamp: bool,
    /// Check a saved report against a fresh computation instead.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["cusp", "name", "out", "stamp"])]
    pub verify: Option<PathBuf>,
}

fn parse_surface(s: &str) -> Result<SurfaceType, String> {
    s.parse().map_err(|e: cuspkit::surface_audit::AuditError| e.to_string())
}

/// A failure after argument parsing; always a domain error.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            // --help and --version also arrive as errors
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Slopes(a) => slopes(a, out, err),
        Command::Bound(a) => bound(a, out),
        Command::LemmaVerify(a) => lemma_verify(a, out, err),
        Command::Audit(a) => audit(a, out),
        Command::Horodisk(a) => horodisk(a, out),
        Command::Diagram(a) => diagram(a, out, err),
        Command::Report(a) => report(a, out, err),
    }
}

/// Loads one named cusp. Bad records only draw a warning unless the
/// requested name exists solely among them.
fn load_cusp(path: &Path, name: &str, err: &mut dyn Write) -> Result<CuspShape, Failure> {
    let load = load_cusp_file(path)?;
    if load.get(name).is_err() {
        if let Some(bad) = load.rejected.iter().find(|r| r.name.as_deref() == Some(name)) {
            return Err(Failure(format!("{}: {bad}", path.display())));
        }
    }
    for bad in &load.rejected {
        writeln!(err, "warning: {}: skipped {bad}", path.display())?;
    }
    Ok(load.get(name)?.clone())
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    // serializing a Value cannot fail
    let text = serde_json::to_string_pretty(value).unwrap_or_default();
    writeln!(out, "{text}")
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn cusp_label(shape: &CuspShape) -> &str {
    shape.name().unwrap_or("cusp")
}

pub fn slopes_json(report: &ShortSlopeReport) -> serde_json::Value {
    json!({
        "shape": to_value(&ShapeRecord::from_shape(&report.shape)),
        "threshold": report.threshold,
        "slopes": to_value(&report.entries),
        "delta_matrix": to_value(&report.delta_matrix),
        "max_delta": report.max_delta,
    })
}

fn slopes(a: &SlopesArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let shape = load_cusp(&a.cusp.cusp, &a.cusp.name, err)?;
    let report = enumerate_short_slopes(&shape, a.cusp.threshold)?;
    if a.json {
        write_json(out, &slopes_json(&report))?;
        return Ok(());
    }
    writeln!(
        out,
        "cusp {}: area {}, threshold {}",
        cusp_label(&shape),
        shape.area(),
        report.threshold
    )?;
    writeln!(out, "{:>8} {:>8}  length", "a", "b")?;
    for e in &report.entries {
        let mark = if e.boundary { "  (on threshold)" } else { "" };
        writeln!(out, "{:>8} {:>8}  {}{mark}", e.slope.a(), e.slope.b(), e.length)?;
    }
    writeln!(out, "{} slopes, max Δ = {}", report.len(), report.max_delta)?;
    Ok(())
}

fn bound(a: &BoundArgs, out: &mut dyn Write) -> Outcome {
    let report = slope_count_bound(&BoundQuery::new(a.length, a.area)?)?;
    if a.json {
        write_json(out, &to_value(&report))?;
        return Ok(());
    }
    let snapped = if report.snapped {
        format!(" (snapped to {})", report.delta_max)
    } else {
        String::new()
    };
    writeln!(
        out,
        "L = {}, A = {}, L²/A = {}{snapped}",
        a.length, a.area, report.ratio
    )?;
    writeln!(out, "{report}")?;
    Ok(())
}

fn lemma_verify(a: &LemmaArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let shape = load_cusp(&a.cusp.cusp, &a.cusp.name, err)?;
    let report = enumerate_short_slopes(&shape, a.cusp.threshold)?;
    let bound = slope_count_bound(&BoundQuery::new(a.cusp.threshold, a.area.resolve(shape.area()))?)?;
    let prime = a.prime.unwrap_or(bound.prime);
    let slopes: Vec<Slope> = report.slopes().collect();
    let verdict = verify_counting_lemma(&slopes, prime)?;
    if a.json {
        let value = json!({
            "shape": to_value(&ShapeRecord::from_shape(&shape)),
            "threshold": report.threshold,
            "slope_count": report.len(),
            "max_delta": report.max_delta,
            "bound": to_value(&bound),
            "prime": prime,
            "verdict": to_value(&verdict),
        });
        write_json(out, &value)?;
        return Ok(());
    }
    writeln!(
        out,
        "cusp {}: {} slopes of length ≤ {}, max Δ = {}",
        cusp_label(&shape),
        report.len(),
        report.threshold,
        report.max_delta
    )?;
    writeln!(out, "bound with A = {}: {bound}", bound.query.area_floor)?;
    writeln!(out, "reduction mod {prime}: {verdict}")?;
    Ok(())
}

fn audit(a: &AuditArgs, out: &mut dyn Write) -> Outcome {
    let mut audit = SurfaceAudit::new(a.surface, a.lengths.clone());
    if a.strict {
        audit.unlisted = UnlistedPunctures::Reject;
    }
    let verdict = check_cusp_length_inequality(&audit)?;
    if a.json {
        let value = json!({
            "surface": to_value(&a.surface),
            "euler_characteristic": a.surface.euler_characteristic(),
            "lengths": to_value(&a.lengths),
            "verdict": to_value(&verdict),
        });
        write_json(out, &value)?;
        return Ok(());
    }
    writeln!(out, "{} (χ = {})", a.surface, a.surface.euler_characteristic())?;
    writeln!(out, "sum of cusp lengths ≤ 6|χ|: {verdict}")?;
    Ok(())
}

fn horodisk(a: &HorodiskArgs, out: &mut dyn Write) -> Outcome {
    let q = &a.query;
    let value = if q.ratio {
        let ratio = extremal_ratio();
        let sep = tangency_separation(&HorodiskPair::new(1.0, ratio)?);
        json!({ "extremal_ratio": ratio, "separation": sep })
    } else if let Some(radii) = &q.separation {
        let pair = HorodiskPair::new(radii[0], radii[1])?;
        let tangency = mutually_tangent(&pair);
        json!({
            "small": pair.small(),
            "large": pair.large(),
            "separation": tangency_separation(&pair),
            "tangent": tangency.tangent,
            "residual": tangency.residual,
        })
    } else if let Some(w) = &q.wrapping {
        let query = WrappingQuery::new(w[0], w[1])?;
        json!({
            "epsilon": query.epsilon(),
            "loop_length": query.loop_length(),
            "wrapping_bound": wrapping_bound(&query),
        })
    } else {
        unreachable!("clap requires one horodisk query");
    };
    if a.json {
        write_json(out, &value)?;
        return Ok(());
    }
    let v = |k: &str| value[k].clone();
    if q.ratio {
        writeln!(
            out,
            "extremal ratio R/r = {} (root of t² − 6t + 1)",
            v("extremal_ratio")
        )?;
        writeln!(out, "separation at that ratio = {}", v("separation"))?;
    } else if q.separation.is_some() {
        writeln!(out, "separation ln(R/r) = {}", v("separation"))?;
        let tangent = if value["tangent"] == true { "yes" } else { "no" };
        writeln!(out, "mutually tangent: {tangent} (residual {})", v("residual"))?;
    } else {
        writeln!(out, "wrapping number ≤ {}", v("wrapping_bound"))?;
    }
    Ok(())
}

fn diagram(a: &DiagramArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let shape = load_cusp(&a.cusp.cusp, &a.cusp.name, err)?;
    let report = enumerate_short_slopes(&shape, a.cusp.threshold)?;
    let count = report.len();
    let mut spec = DiagramSpec::new(report);
    spec.width = a.width;
    spec.height = a.height;
    spec.radius_circle = !a.no_circle;
    spec.label_slopes = !a.no_labels;
    if let Some(extent) = a.extent {
        spec.lattice_extent = extent;
    }
    let svg = emit_lattice_svg(&spec)?;
    if a.out == Path::new("-") {
        out.write_all(svg.as_bytes())?;
    } else {
        write_file(&a.out, &svg)?;
        writeln!(out, "wrote {} ({count} slopes, {} markers)", a.out.display(), 2 * count)?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))
}

fn report(a: &ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if let Some(path) = &a.verify {
        return verify_report(path, out);
    }
    let (Some(cusp), Some(name)) = (&a.cusp, &a.name) else {
        unreachable!("clap requires --cusp and --name without --verify");
    };
    let shape = load_cusp(cusp, name, err)?;
    let mut report = AnalysisReport::compute(&shape, a.threshold, Some(a.area.resolve(shape.area())))?;
    if a.stamp {
        report = report.with_timestamp(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    }
    let text = report_to_string(&report);
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn verify_report(path: &Path, out: &mut dyn Write) -> Outcome {
    let stored = load_report(path)?;
    stored.validate()?;
    let fresh = stored.recompute()?;
    if fresh != stored {
        let (old, new) = (to_value(&stored), to_value(&fresh));
        let field = old
            .as_object()
            .and_then(|o| o.keys().find(|k| old[k.as_str()] != new[k.as_str()]).cloned())
            .unwrap_or_default();
        return Err(Failure(format!(
            "{}: field {field:?} differs from a fresh computation",
            path.display()
        )));
    }
    writeln!(
        out,
        "ok: {} slopes at threshold {} match a fresh computation",
        stored.slopes.len(),
        stored.threshold
    )?;
    Ok(())
}
