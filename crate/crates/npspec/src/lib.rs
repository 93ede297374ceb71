//! Boundary-integral spectral toolkit for the Neumann–Poincaré (NP) operator
//! on closed planar curves.
//!
//! The crate assembles Nyström discretizations of the single layer, double
//! layer, and adjoint double layer (NP) operators, computes their spectra in
//! the arclength L² sense, evaluates closed-form critical contrast intervals
//! for curvilinear polygons, issues self-adjointness verdicts for
//! sign-indefinite transmission operators, and solves the free-space
//! transmission problem through a single-layer ansatz.
//!
//! Modules mirror the pipeline: [`geometry`] builds curves and quadrature
//! meshes, [`npops`] assembles dense operator matrices, [`spectral`] extracts
//! spectra, [`contrast`] maps contrasts to verdicts, and [`transmission`]
//! solves and validates the transmission problem.

pub mod contrast;
pub mod geometry;
pub mod npops;
pub mod spectral;
pub mod transmission;

mod gauss;
mod trig;

pub use nalgebra::{Complex, Vector2};

pub use contrast::{
    critical_interval, lambda_to_mu, mu_to_lambda, polygon_intervals, verdict, ContrastVerdict,
    GeometryClass, PolygonIntervals, Regularity, Verdict,
};
pub use geometry::{
    build_mesh, make_ellipse, make_polygon, make_smooth_from_samples, sharpest_corner, CornerSpec,
    Curve, QuadratureMesh,
};
pub use npops::{
    assemble_adj_double_layer, assemble_double_layer, assemble_single_layer, dump_matrix,
    load_matrix, symmetrization_residual, BoundaryOperatorMatrix, OperatorKind,
};
pub use spectral::{
    ess_radius_polygon, fmt_float, np_spectrum, symmetrized_spectrum, SpectralSpace, SpectrumKind,
    SpectrumReport,
};
pub use transmission::{
    evaluate_field, field_csv, flux_residual, solve_transmission, FieldSample, IncidentField,
    TransmissionSolution,
};

/// Errors reported by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Geometry construction rejected its input (degenerate axes, short node
    /// counts, self-intersecting or collinear polygons, ...).
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// A scalar argument fell outside its admissible range.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// Operator matrices built on different meshes were combined.
    #[error("operator matrices do not share a mesh")]
    MeshMismatch,

    /// The contrast value makes the requested map or operator degenerate.
    #[error("excluded contrast value: {0}")]
    ExcludedContrast(String),

    /// The dense eigensolver did not converge.
    #[error("eigenvalue solver failed: {0}")]
    EigenFailure(String),

    /// The rescaled single layer matrix was not negative definite, so the
    /// symmetrized spectrum is not defined on this mesh.
    #[error("single layer matrix numerically indefinite (min eigenvalue of -S is {0:.3e})")]
    IndefiniteSingleLayer(f64),

    /// The spectral parameter λ(μ) is too close to the discrete NP spectrum
    /// for a trustworthy second-kind solve.
    #[error(
        "near-resonant contrast: lambda = {lambda:.6e} lies at relative distance {dist:.3e} \
         from the computed NP spectrum"
    )]
    NearResonance { lambda: f64, dist: f64 },

    /// The boundary linear system could not be solved.
    #[error("singular linear system in transmission solve")]
    SingularSystem,

    /// A field evaluation point violates the near-boundary exclusion zone.
    #[error("evaluation point ({x:.6e}, {y:.6e}) is closer than 3 mesh spacings to the boundary")]
    PointTooClose { x: f64, y: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
