//! Command-line front end for the npspec boundary-integral toolkit.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure, 4 refusal of a
//! near-resonant contrast.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use npspec::Vector2;
use npspec::{
    assemble_adj_double_layer, build_mesh, flux_residual, fmt_float, make_ellipse, make_polygon,
    make_smooth_from_samples, np_spectrum, polygon_intervals, solve_transmission, verdict,
    GeometryClass, IncidentField, QuadratureMesh, Regularity,
};

#[derive(Parser)]
#[command(
    name = "npspec",
    version,
    about = "Neumann-Poincaré spectra, critical contrast intervals, and transmission solves \
             on closed planar curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AtlasFormat {
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the NP spectrum of a geometry and write the JSON report.
    Spectrum {
        /// Geometry as inline JSON or a path to a JSON file.
        #[arg(long)]
        geometry: String,
        /// Quadrature node budget.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Corner grading exponent for polygon meshes.
        #[arg(long, default_value_t = 3.0)]
        grading: f64,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the self-adjointness decision rules for one contrast.
    Verdict {
        /// Geometry class: sign-definite, smooth-vmo, polygon, or cone.
        #[arg(long)]
        class: String,
        /// Corner opening in radians (polygon class).
        #[arg(long)]
        omega: Option<f64>,
        /// Cone half-angle in radians (cone class).
        #[arg(long)]
        alpha: Option<f64>,
        /// Contrast value.
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        /// Regularity index: 1 or 1.5.
        #[arg(long)]
        s: f64,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the critical-interval endpoints over a grid of corner
    /// openings.
    Atlas {
        /// First corner opening of the grid, radians.
        #[arg(long, default_value_t = 0.05)]
        grid_start: f64,
        /// Last corner opening of the grid, radians (default π − 0.05).
        #[arg(long)]
        grid_end: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 500)]
        grid_steps: usize,
        /// csv for the data table, svg for the endpoint plot.
        #[arg(long, value_enum, default_value_t = AtlasFormat::Csv)]
        format: AtlasFormat,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the transmission problem for u_in = x and report residuals.
    Solve {
        /// Geometry as inline JSON or a path to a JSON file.
        #[arg(long)]
        geometry: String,
        /// Contrast value.
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        /// Quadrature node budget.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Corner grading exponent for polygon meshes.
        #[arg(long, default_value_t = 3.0)]
        grading: f64,
        /// Path for the density CSV (skipped when omitted; the residual
        /// report always goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum AppError {
    Input(String),
    Numerical(String),
    Resonance(String),
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 2,
            AppError::Numerical(_) => 3,
            AppError::Resonance(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Input(m) | AppError::Numerical(m) | AppError::Resonance(m) => m,
        }
    }
}

impl From<npspec::Error> for AppError {
    fn from(e: npspec::Error) -> Self {
        match &e {
            npspec::Error::InvalidGeometry(_)
            | npspec::Error::OutOfRange(_)
            | npspec::Error::ExcludedContrast(_)
            | npspec::Error::PointTooClose { .. } => AppError::Input(e.to_string()),
            npspec::Error::NearResonance { .. } => AppError::Resonance(e.to_string()),
            npspec::Error::MeshMismatch
            | npspec::Error::EigenFailure(_)
            | npspec::Error::IndefiniteSingleLayer(_)
            | npspec::Error::SingularSystem => AppError::Numerical(e.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Spectrum { geometry, n, grading, out } => {
            let mesh = load_mesh(&geometry, n, grading)?;
            let report = np_spectrum(&assemble_adj_double_layer(&mesh))?;
            emit(out.as_deref(), &(report.to_json() + "\n"))
        }
        Command::Verdict { class, omega, alpha, mu, s, out } => {
            let class = parse_class(&class, omega, alpha)?;
            let s = parse_regularity(s)?;
            let record = verdict(class, mu, s)?;
            emit(out.as_deref(), &(record.to_json() + "\n"))
        }
        Command::Atlas { grid_start, grid_end, grid_steps, format, out } => {
            let grid_end = grid_end.unwrap_or(PI - 0.05);
            let rows = atlas_rows(grid_start, grid_end, grid_steps)?;
            let text = match format {
                AtlasFormat::Csv => atlas_csv(&rows),
                AtlasFormat::Svg => atlas_svg(&rows),
            };
            emit(out.as_deref(), &text)
        }
        Command::Solve { geometry, mu, n, grading, out } => {
            let mesh = load_mesh(&geometry, n, grading)?;
            let solution = solve_transmission(&mesh, mu, IncidentField::Linear)?;
            let flux = flux_residual(&solution)?;
            println!(
                "{{\"mu\":{},\"lambda\":{},\"N\":{},\"solve_residual\":{},\"dist_to_spectrum\":{},\"flux_residual\":{}}}",
                fmt_float(solution.mu),
                fmt_float(solution.lambda),
                solution.mesh.len(),
                fmt_float(solution.solve_residual),
                fmt_float(solution.dist_to_spectrum),
                fmt_float(flux)
            );
            match out {
                Some(path) => write_file(&path, &solution.to_csv()),
                None => Ok(()),
            }
        }
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), AppError> {
    std::fs::write(path, text)
        .map_err(|e| AppError::Input(format!("cannot write {}: {e}", path.display())))
}

fn json_number(value: &serde_json::Value, field: &str) -> Result<f64, AppError> {
    value
        .get(field)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| AppError::Input(format!("geometry JSON needs a numeric \"{field}\" field")))
}

fn json_points(value: &serde_json::Value, field: &str) -> Result<Vec<Vector2<f64>>, AppError> {
    let raw = value
        .get(field)
        .and_then(|v| v.as_array())
        .ok_or_else(|| AppError::Input(format!("geometry JSON needs an array \"{field}\" field")))?;
    let mut points = Vec::with_capacity(raw.len());
    for entry in raw {
        let pair = entry.as_array().filter(|p| p.len() == 2);
        let (x, y) = match pair {
            Some(p) => (p[0].as_f64(), p[1].as_f64()),
            None => (None, None),
        };
        match (x, y) {
            (Some(x), Some(y)) => points.push(Vector2::new(x, y)),
            _ => {
                return Err(AppError::Input(format!(
                    "every \"{field}\" entry must be a [x, y] pair of numbers"
                )))
            }
        }
    }
    Ok(points)
}

fn load_mesh(spec: &str, n: usize, grading: f64) -> Result<QuadratureMesh, AppError> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| AppError::Input(format!("cannot read geometry file {spec}: {e}")))?
    };
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| AppError::Input(format!("geometry is not valid JSON: {e}")))?;
    let kind = value
        .get("kind")
        .and_then(|v| v.as_str())
        .ok_or_else(|| AppError::Input("geometry JSON needs a string \"kind\" field".to_string()))?;
    let curve = match kind {
        "ellipse" => {
            let a = json_number(&value, "a")?;
            let b = json_number(&value, "b")?;
            make_ellipse(a, b, n.max(16))?
        }
        "polygon" => {
            let vertices = json_points(&value, "vertices")?;
            make_polygon(&vertices, 8, grading)?.0
        }
        "samples" => {
            let points = json_points(&value, "points")?;
            make_smooth_from_samples(&points, n.max(16))?
        }
        other => {
            return Err(AppError::Input(format!(
                "unknown geometry kind \"{other}\" (expected ellipse, polygon, or samples)"
            )))
        }
    };
    Ok(build_mesh(&curve, n)?)
}

fn parse_class(
    class: &str,
    omega: Option<f64>,
    alpha: Option<f64>,
) -> Result<GeometryClass, AppError> {
    match class {
        "sign-definite" => Ok(GeometryClass::SignDefinite),
        "smooth-vmo" => Ok(GeometryClass::SmoothVmo),
        "polygon" => {
            let omega = omega
                .ok_or_else(|| AppError::Input("polygon class needs --omega".to_string()))?;
            Ok(GeometryClass::Polygon { omega })
        }
        "cone" => {
            let alpha =
                alpha.ok_or_else(|| AppError::Input("cone class needs --alpha".to_string()))?;
            Ok(GeometryClass::Cone { alpha })
        }
        other => Err(AppError::Input(format!(
            "unknown class \"{other}\" (expected sign-definite, smooth-vmo, polygon, or cone)"
        ))),
    }
}

fn parse_regularity(s: f64) -> Result<Regularity, AppError> {
    if s == 1.0 {
        Ok(Regularity::One)
    } else if s == 1.5 {
        Ok(Regularity::ThreeHalves)
    } else {
        Err(AppError::Input(format!("regularity must be 1 or 1.5, got {s}")))
    }
}

struct AtlasRow {
    omega: f64,
    s32: [f64; 2],
    s1: [f64; 2],
}

fn atlas_rows(start: f64, end: f64, steps: usize) -> Result<Vec<AtlasRow>, AppError> {
    if steps < 2 {
        return Err(AppError::Input(format!("grid needs at least 2 points, got {steps}")));
    }
    if !(start < end) {
        return Err(AppError::Input(format!(
            "grid start {start} must be below grid end {end}"
        )));
    }
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let omega = start + (end - start) * k as f64 / (steps - 1) as f64;
        let intervals = polygon_intervals(omega)?;
        rows.push(AtlasRow { omega, s32: intervals.s32, s1: intervals.s1 });
    }
    Ok(rows)
}

fn atlas_csv(rows: &[AtlasRow]) -> String {
    let mut out = String::from("omega,a,b,I32_lo,I32_hi,I1_lo,I1_hi\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_float(row.omega),
            fmt_float(-row.s32[1]),
            fmt_float(-row.s1[1]),
            fmt_float(row.s32[0]),
            fmt_float(row.s32[1]),
            fmt_float(row.s1[0]),
            fmt_float(row.s1[1]),
        ));
    }
    out
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 300.0;
const SVG_LEFT: f64 = 60.0;
const SVG_RIGHT: f64 = 780.0;
const SVG_TOP: f64 = 20.0;
const SVG_BOTTOM: f64 = 260.0;

fn atlas_svg(rows: &[AtlasRow]) -> String {
    let omega_min = rows.first().map_or(0.0, |r| r.omega);
    let omega_max = rows.last().map_or(1.0, |r| r.omega);
    let x = |omega: f64| {
        SVG_LEFT + (SVG_RIGHT - SVG_LEFT) * (omega - omega_min) / (omega_max - omega_min)
    };
    // Endpoint magnitudes a, b live in (0, 1].
    let y = |value: f64| SVG_BOTTOM - (SVG_BOTTOM - SVG_TOP) * value;
    let polyline = |values: Vec<(f64, f64)>| {
        values
            .iter()
            .map(|(px, py)| format!("{px:.2},{py:.2}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let a_points = polyline(rows.iter().map(|r| (x(r.omega), y(-r.s32[1]))).collect());
    let b_points = polyline(rows.iter().map(|r| (x(r.omega), y(-r.s1[1]))).collect());

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH:.0} {SVG_HEIGHT:.0}\" \
         width=\"{SVG_WIDTH:.0}\" height=\"{SVG_HEIGHT:.0}\">\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{SVG_LEFT:.2}\" y1=\"{SVG_BOTTOM:.2}\" x2=\"{SVG_RIGHT:.2}\" \
         y2=\"{SVG_BOTTOM:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{SVG_LEFT:.2}\" y1=\"{SVG_TOP:.2}\" x2=\"{SVG_LEFT:.2}\" \
         y2=\"{SVG_BOTTOM:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    for (value, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        let py = y(value);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{SVG_LEFT:.2}\" y2=\"{py:.2}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n",
            SVG_LEFT - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{label}</text>\n",
            SVG_LEFT - 8.0,
            py + 4.0
        ));
    }
    for row_omega in [omega_min, omega_max] {
        let px = x(row_omega);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{SVG_BOTTOM:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n",
            SVG_BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{row_omega:.3}</text>\n",
            SVG_BOTTOM + 18.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">omega</text>\n",
        0.5 * (SVG_LEFT + SVG_RIGHT),
        SVG_HEIGHT - 6.0
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {:.2})\">interval endpoint value</text>\n",
        0.5 * (SVG_TOP + SVG_BOTTOM),
        0.5 * (SVG_TOP + SVG_BOTTOM)
    ));
    svg.push_str(&format!(
        "<polyline points=\"{a_points}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
    ));
    svg.push_str(&format!(
        "<polyline points=\"{b_points}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" \
         stroke-dasharray=\"6 4\"/>\n"
    ));
    svg.push_str("</svg>\n");
    svg
}
