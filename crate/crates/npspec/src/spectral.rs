//! Spectra of the discretized NP operator and closed-form essential radii.
//!
//! Spectra are computed for the L²(Σ, ds) realization: the nodal Nyström
//! matrix A = K2·W is conjugated to W^{1/2}·K2·W^{1/2}, which represents the
//! same operator in weighted coordinates where the arclength inner product is
//! Euclidean. The symmetrized variant additionally conjugates with the square
//! root of −S (positive definite after rescaling the curve to diameter 1/2),
//! which makes the spectrum manifestly real.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector};

use crate::npops::{BoundaryOperatorMatrix, OperatorKind};
use crate::{Error, Result};

/// How a spectrum was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Eigenvalues of the weighted Nyström matrix.
    Raw,
    /// Eigenvalues via conjugation with (−S)^{1/2}; real by construction.
    Symmetrized,
}

/// Eigenvalues of one NP discretization, sorted by descending modulus with
/// ties broken by descending real part.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex<f64>>,
    /// Max eigenvalue modulus.
    pub radius: f64,
    /// Node count of the underlying mesh.
    pub n: usize,
    pub kind: SpectrumKind,
}

impl SpectrumReport {
    fn from_eigenvalues(mut eigenvalues: Vec<Complex<f64>>, n: usize, kind: SpectrumKind) -> Self {
        eigenvalues.sort_by(|a, b| {
            (b.norm(), b.re, b.im)
                .partial_cmp(&(a.norm(), a.re, a.im))
                .expect("eigenvalues are finite")
        });
        let radius = eigenvalues.first().map_or(0.0, |v| v.norm());
        SpectrumReport { eigenvalues, radius, n, kind }
    }

    /// Eigenvalues with the equilibrium eigenvalue (the one closest to 1/2)
    /// removed; the nontrivial part of the spectrum.
    pub fn nontrivial(&self) -> Vec<Complex<f64>> {
        if self.eigenvalues.is_empty() {
            return Vec::new();
        }
        let mut closest = 0;
        let mut best = f64::INFINITY;
        for (i, ev) in self.eigenvalues.iter().enumerate() {
            let d = (ev - Complex::new(0.5, 0.0)).norm();
            if d < best {
                best = d;
                closest = i;
            }
        }
        let mut rest = self.eigenvalues.clone();
        rest.remove(closest);
        rest
    }

    /// Serializes as {"eigenvalues":[[re,im],...],"radius":r,"N":n,"kind":k}
    /// with 17-significant-digit floats.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\"eigenvalues\":[");
        for (i, ev) in self.eigenvalues.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{},{}]", fmt_float(ev.re), fmt_float(ev.im)));
        }
        out.push_str(&format!(
            "],\"radius\":{},\"N\":{},\"kind\":\"{}\"}}",
            fmt_float(self.radius),
            self.n,
            match self.kind {
                SpectrumKind::Raw => "raw",
                SpectrumKind::Symmetrized => "symmetrized",
            }
        ));
        out
    }
}

/// Fixed-width float formatting (17 significant digits) used by all reports.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// The weighted similarity W^{1/2}·K2·W^{1/2} of a Nyström matrix A = K2·W.
pub(crate) fn weighted_matrix(op: &BoundaryOperatorMatrix) -> DMatrix<f64> {
    let n = op.entries.nrows();
    let sqrt_w: Vec<f64> = op.mesh.weights.iter().map(|w| w.sqrt()).collect();
    DMatrix::from_fn(n, n, |i, j| sqrt_w[i] * op.entries[(i, j)] / op.mesh.weights[j] * sqrt_w[j])
}

/// All eigenvalues of the NP operator K' in the L²(Σ, ds) discretization.
pub fn np_spectrum(kp: &BoundaryOperatorMatrix) -> Result<SpectrumReport> {
    if kp.kind != OperatorKind::AdjDoubleLayer {
        return Err(Error::OutOfRange(
            "np_spectrum expects the adjoint double layer matrix".into(),
        ));
    }
    let weighted = weighted_matrix(kp);
    let n = weighted.nrows();
    let schur = nalgebra::Schur::try_new(weighted, 1e-12, 100_000)
        .ok_or_else(|| Error::EigenFailure("Schur iteration did not converge".into()))?;
    let eigenvalues = schur
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect::<Vec<Complex<f64>>>();
    Ok(SpectrumReport::from_eigenvalues(eigenvalues, n, SpectrumKind::Raw))
}

/// Real NP spectrum via the single-layer inner product.
///
/// The curve is implicitly rescaled to diameter 1/2 — a rank-one update of S
/// that leaves K' untouched — so that G = −S is positive definite. The
/// eigenproblem for K' is then conjugated with G^{1/2}, where the
/// symmetrization identity S K' = K S makes the matrix symmetric up to
/// discretization error, and solved with a symmetric eigensolver.
pub fn symmetrized_spectrum(
    s: &BoundaryOperatorMatrix,
    kp: &BoundaryOperatorMatrix,
) -> Result<SpectrumReport> {
    if s.kind != OperatorKind::SingleLayer || kp.kind != OperatorKind::AdjDoubleLayer {
        return Err(Error::OutOfRange(
            "symmetrized_spectrum expects the (S, K') matrices in that order".into(),
        ));
    }
    if !s.mesh.same_mesh(&kp.mesh) {
        return Err(Error::MeshMismatch);
    }
    let n = s.entries.nrows();
    let mesh = &s.mesh;

    let diameter = {
        let pts = &mesh.points;
        let mut d2 = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                d2 = d2.max((pts[i] - pts[j]).norm_squared());
            }
        }
        d2.sqrt()
    };
    let scale = 0.5 / diameter;

    let sqrt_w: Vec<f64> = mesh.weights.iter().map(|w| w.sqrt()).collect();
    let mut g = weighted_matrix(s);
    // Rescaling x ↦ scale·x shifts S by (ln scale / 2π)·𝟙⟨·,1⟩; in weighted
    // coordinates that is a rank-one term on u = W^{1/2}𝟙.
    let shift = scale.ln() / (2.0 * PI);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = -(g[(i, j)] + shift * sqrt_w[i] * sqrt_w[j]);
        }
    }
    // Exact symmetry keeps the eigensolver honest; polygon quadrature leaves
    // a tiny asymmetric remainder.
    g = (&g + g.transpose()) * 0.5;

    let eig = g.symmetric_eigen();
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::IndefiniteSingleLayer(min_eig));
    }

    let a = weighted_matrix(kp);
    // B = G^{1/2} A G^{-1/2} with G^{1/2} from the spectral factorization.
    let qt_a_q = eig.eigenvectors.transpose() * a * &eig.eigenvectors;
    let root: DVector<f64> = eig.eigenvalues.map(|v| v.sqrt());
    let mut b = qt_a_q;
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = root[i] * b[(i, j)] / root[j];
        }
    }
    let b = (&b + b.transpose()) * 0.5;
    let eigenvalues = b
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|v| Complex::new(*v, 0.0))
        .collect::<Vec<_>>();
    Ok(SpectrumReport::from_eigenvalues(eigenvalues, n, SpectrumKind::Symmetrized))
}

/// Function space for the closed-form polygon radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralSpace {
    /// L²(Σ).
    L2,
    /// H^{−1/2}(Σ), the energy space.
    Hminus12,
}

/// Essential spectral radius of K' on a curvilinear polygon whose sharpest
/// corner has interior angle ω ∈ (0, π].
///
/// r = (1/2)·sin(|π−ω|/2) in L², r = |π−ω|/(2π) in H^{−1/2}; ω = π (no
/// corner) gives 0 in both spaces.
pub fn ess_radius_polygon(omega: f64, space: SpectralSpace) -> Result<f64> {
    if !(omega > 0.0 && omega <= PI) {
        return Err(Error::OutOfRange(format!(
            "corner angle must lie in (0, pi], got {omega}"
        )));
    }
    let gap = (PI - omega).abs();
    Ok(match space {
        SpectralSpace::L2 => 0.5 * (0.5 * gap).sin(),
        SpectralSpace::Hminus12 => gap / (2.0 * PI),
    })
}
