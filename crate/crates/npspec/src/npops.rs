//! Dense Nyström assembly of the boundary operators S, K, and K'.
//!
//! All kernels are those of the planar Laplacian with fundamental solution
//! Φ(x) = (1/2π) log|x| (positive log):
//!
//! * single layer      S f(x) = ∫ Φ(x−y) f(y) ds(y)
//! * double layer      K f(x) = ∫ ⟨ν(y), y−x⟩ / (2π|x−y|²) f(y) ds(y)
//! * adjoint (NP)      K' f(x) = ∫ ⟨ν(x), x−y⟩ / (2π|x−y|²) f(y) ds(y)
//!
//! Matrices act on nodal density values and include the arclength quadrature
//! weights, i.e. entry (i,j) ≈ kernel(xᵢ,yⱼ)·wⱼ with singular blocks replaced
//! by dedicated rules: the Martensen–Kussmaul log-splitting rule on smooth
//! curves, and exact Legendre-moment integration of log|s−s'| on same-edge
//! polygon panels. On straight edges the K and K' kernels vanish identically
//! for same-edge pairs.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use nalgebra::{DMatrix, Vector2};

use crate::gauss::{gauss_legendre, legendre_all};
use crate::geometry::{QuadratureMesh, PANEL_ORDER};
use crate::{Error, Result};

/// Which boundary operator a matrix discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    SingleLayer,
    DoubleLayer,
    AdjDoubleLayer,
}

/// Dense N×N Nyström discretization of one boundary operator.
#[derive(Debug, Clone)]
pub struct BoundaryOperatorMatrix {
    pub kind: OperatorKind,
    pub entries: DMatrix<f64>,
    pub mesh: QuadratureMesh,
}

/// Assembles the single layer operator S on the given mesh.
pub fn assemble_single_layer(mesh: &QuadratureMesh) -> BoundaryOperatorMatrix {
    let entries = if mesh.is_smooth {
        single_layer_smooth(mesh)
    } else {
        single_layer_polygon(mesh)
    };
    BoundaryOperatorMatrix { kind: OperatorKind::SingleLayer, entries, mesh: mesh.clone() }
}

/// Assembles the double layer operator K on the given mesh.
pub fn assemble_double_layer(mesh: &QuadratureMesh) -> BoundaryOperatorMatrix {
    let entries = double_layer_entries(mesh, false);
    BoundaryOperatorMatrix { kind: OperatorKind::DoubleLayer, entries, mesh: mesh.clone() }
}

/// Assembles the adjoint double layer (Neumann–Poincaré) operator K'.
pub fn assemble_adj_double_layer(mesh: &QuadratureMesh) -> BoundaryOperatorMatrix {
    let entries = double_layer_entries(mesh, true);
    BoundaryOperatorMatrix { kind: OperatorKind::AdjDoubleLayer, entries, mesh: mesh.clone() }
}

/// Relative size of the symmetrization defect S·K' − K·S.
///
/// The commutator-style residual is the primary assembly diagnostic: the
/// identity S K' = K S holds exactly in the continuum, so everything left is
/// discretization error. Max-norm of the defect, scaled by the matrix
/// max-norms.
pub fn symmetrization_residual(
    s: &BoundaryOperatorMatrix,
    k: &BoundaryOperatorMatrix,
    kp: &BoundaryOperatorMatrix,
) -> Result<f64> {
    if s.kind != OperatorKind::SingleLayer
        || k.kind != OperatorKind::DoubleLayer
        || kp.kind != OperatorKind::AdjDoubleLayer
    {
        return Err(Error::OutOfRange(
            "symmetrization_residual expects the (S, K, K') matrices in that order".into(),
        ));
    }
    if !s.mesh.same_mesh(&k.mesh) || !s.mesh.same_mesh(&kp.mesh) {
        return Err(Error::MeshMismatch);
    }
    let defect = &s.entries * &kp.entries - &k.entries * &s.entries;
    let max_norm = |m: &DMatrix<f64>| m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let scale = max_norm(&s.entries) * (max_norm(&k.entries) + max_norm(&kp.entries));
    Ok(max_norm(&defect) / scale)
}

/// Writes a matrix as an 8-byte little-endian node count followed by
/// row-major little-endian f64 entries.
pub fn dump_matrix<W: Write>(matrix: &DMatrix<f64>, writer: &mut W) -> std::io::Result<()> {
    let n = matrix.nrows();
    writer.write_all(&(n as u64).to_le_bytes())?;
    for i in 0..n {
        for j in 0..matrix.ncols() {
            writer.write_all(&matrix[(i, j)].to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads a square matrix written by [`dump_matrix`].
pub fn load_matrix<R: Read>(reader: &mut R) -> std::io::Result<DMatrix<f64>> {
    let mut header = [0u8; 8];
    reader.read_exact(&mut header)?;
    let n = u64::from_le_bytes(header) as usize;
    let mut buf = [0u8; 8];
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        reader.read_exact(&mut buf)?;
        entries.push(f64::from_le_bytes(buf));
    }
    Ok(DMatrix::from_row_slice(n, n, &entries))
}

/// Martensen–Kussmaul weights R_k for ∫ ln(4 sin²((t−τ)/2)) f(τ) dτ on the
/// N-point periodic trapezoid grid (N even), indexed by k = (i−j) mod N.
fn kress_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let nf = n as f64;
    (0..n)
        .map(|k| {
            let mut sum = 0.0;
            for m in 1..half {
                sum += (TAU * (m * k) as f64 / nf).cos() / m as f64;
            }
            let alternating = if k % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * TAU / nf * sum - TAU * 2.0 / (nf * nf) * alternating
        })
        .collect()
}

fn single_layer_smooth(mesh: &QuadratureMesh) -> DMatrix<f64> {
    let n = mesh.len();
    let rk = kress_weights(n);
    let nf = n as f64;
    DMatrix::from_fn(n, n, |i, j| {
        // ln|x−y| = (1/2) ln(4 sin²((t−τ)/2)) + smooth remainder.
        let smooth = if i == j {
            mesh.speeds[i].ln()
        } else {
            let chord = (mesh.points[i] - mesh.points[j]).norm();
            let gap = 2.0 * (0.5 * (mesh.params[i] - mesh.params[j])).sin().abs();
            (chord / gap).ln()
        };
        let k = (i + n - j) % n;
        (rk[k] / (4.0 * PI) + smooth / nf) * mesh.speeds[j]
    })
}

/// Moments M_k(a) = ∫_{−1}^{1} ln|a−ξ| P_k(ξ) dξ for k = 0..=kmax.
///
/// Uses Legendre functions of the second kind: M_k = 2(Q_{k+1}−Q_{k−1})/(2k+1)
/// with the principal-value branch on the cut; the forward recurrence is
/// accurate for the |a| ≲ 1.5 range it is used on.
fn log_moments(a: f64, kmax: usize) -> Vec<f64> {
    // ln((1+a)/(1−a)) overflows at |a| = 1; the moments stay finite there.
    let a = if (a.abs() - 1.0).abs() < 1e-14 { a.signum() * (1.0 + 1e-14) } else { a };
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() };
    let mut m = Vec::with_capacity(kmax + 1);
    m.push(xlnx(1.0 - a) + xlnx(1.0 + a) - 2.0);
    if kmax == 0 {
        return m;
    }
    let mut q = Vec::with_capacity(kmax + 2);
    q.push(0.5 * ((1.0 + a) / (1.0 - a)).abs().ln());
    q.push(a * q[0] - 1.0);
    for k in 1..=kmax {
        let kf = k as f64;
        q.push(((2.0 * kf + 1.0) * a * q[k] - kf * q[k - 1]) / (kf + 1.0));
    }
    for k in 1..=kmax {
        m.push(2.0 * (q[k + 1] - q[k - 1]) / (2.0 * k as f64 + 1.0));
    }
    m
}

/// Barycentric weights of an interpolation grid.
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, xj)| {
            let prod: f64 =
                nodes.iter().enumerate().filter(|(m, _)| *m != j).map(|(_, xm)| xj - xm).product();
            1.0 / prod
        })
        .collect()
}

/// Values of all Lagrange cardinal functions of `nodes` at `x`.
fn lagrange_all(nodes: &[f64], bary: &[f64], x: f64, out: &mut [f64]) {
    for (j, xj) in nodes.iter().enumerate() {
        if (x - xj).abs() < 1e-300 {
            out.fill(0.0);
            out[j] = 1.0;
            return;
        }
    }
    let mut total = 0.0;
    for j in 0..nodes.len() {
        let term = bary[j] / (x - nodes[j]);
        out[j] = term;
        total += term;
    }
    for v in out.iter_mut() {
        *v /= total;
    }
}

struct PanelRule {
    gl_nodes: Vec<f64>,
    gl_weights: Vec<f64>,
    bary: Vec<f64>,
    /// c[k][j] = (2k+1)/2 · wⱼ · P_k(ξⱼ): Legendre coefficients of the
    /// Lagrange cardinal functions.
    legendre_coeff: Vec<Vec<f64>>,
}

impl PanelRule {
    fn new(q: usize) -> Self {
        let (gl_nodes, gl_weights) = gauss_legendre(q);
        let bary = barycentric_weights(&gl_nodes);
        let mut legendre_coeff = vec![vec![0.0; q]; q];
        for j in 0..q {
            let p = legendre_all(q - 1, gl_nodes[j]);
            for k in 0..q {
                legendre_coeff[k][j] = (2.0 * k as f64 + 1.0) / 2.0 * gl_weights[j] * p[k];
            }
        }
        PanelRule { gl_nodes, gl_weights, bary, legendre_coeff }
    }
}

/// Recursive panel subdivision for ∫ k(y(ξ)) ℓⱼ(ξ) dξ with the kernel peaked
/// near the panel (target on another edge close by). Splits any piece whose
/// length exceeds its distance to the target.
#[allow(clippy::too_many_arguments)]
fn refined_kernel_integrals(
    rule: &PanelRule,
    target: Vector2<f64>,
    point_at: &dyn Fn(f64) -> Vector2<f64>,
    kernel: &dyn Fn(Vector2<f64>) -> f64,
    lo: f64,
    hi: f64,
    depth: usize,
    scratch: &mut [f64],
    out: &mut [f64],
) {
    let closest = {
        // Distance from the target to this piece of the straight panel.
        let p_lo = point_at(lo);
        let p_hi = point_at(hi);
        let d = p_hi - p_lo;
        let len2 = d.norm_squared();
        let t = ((target - p_lo).dot(&d) / len2).clamp(0.0, 1.0);
        (p_lo + d * t - target).norm()
    };
    let piece_len = (point_at(hi) - point_at(lo)).norm();
    if depth < 48 && piece_len > closest.max(1e-15) {
        let mid = 0.5 * (lo + hi);
        refined_kernel_integrals(rule, target, point_at, kernel, lo, mid, depth + 1, scratch, out);
        refined_kernel_integrals(rule, target, point_at, kernel, mid, hi, depth + 1, scratch, out);
        return;
    }
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (lo + hi);
    for (xi, wi) in rule.gl_nodes.iter().zip(&rule.gl_weights) {
        let x = mid + half * xi;
        lagrange_all(&rule.gl_nodes, &rule.bary, x, scratch);
        let factor = half * wi * kernel(point_at(x));
        for (o, l) in out.iter_mut().zip(scratch.iter()) {
            *o += factor * l;
        }
    }
}

/// Gradient of the single-layer potential with density `phi` at a point off
/// the surface of a polygon mesh, with the near panels integrated by the same
/// refined interpolatory rule the matrix entries use.
pub(crate) fn polygon_layer_gradient(
    mesh: &QuadratureMesh,
    phi: &[f64],
    target: Vector2<f64>,
) -> Vector2<f64> {
    let q = PANEL_ORDER;
    let rule = PanelRule::new(q);
    let mut scratch = vec![0.0; q];
    let mut cell = vec![0.0; q];
    let mut grad = Vector2::zeros();

    for panel in &mesh.panels {
        let half = 0.5 * (panel.s1 - panel.s0);
        let center = 0.5 * (panel.s0 + panel.s1);
        let j0 = panel.first_node;
        let p_first = mesh.points[j0];
        let p_last = mesh.points[j0 + q - 1];
        let dir = (p_last - p_first) / (mesh.params[j0 + q - 1] - mesh.params[j0]);
        let origin = p_first - dir * (mesh.params[j0] - center);
        let point_at = |xi: f64| origin + dir * (half * xi);

        let seg = point_at(1.0) - point_at(-1.0);
        let t = ((target - point_at(-1.0)).dot(&seg) / seg.norm_squared()).clamp(0.0, 1.0);
        let dist = (point_at(-1.0) + seg * t - target).norm();
        if dist < 4.0 * half {
            for axis in 0..2 {
                let kernel = |y: Vector2<f64>| {
                    let d = target - y;
                    d[axis] / (TAU * d.norm_squared())
                };
                cell.fill(0.0);
                refined_kernel_integrals(
                    &rule, target, &point_at, &kernel, -1.0, 1.0, 0, &mut scratch, &mut cell,
                );
                for j in 0..q {
                    grad[axis] += half * cell[j] * phi[j0 + j];
                }
            }
        } else {
            for j in 0..q {
                let d = target - mesh.points[j0 + j];
                grad += d * (phi[j0 + j] * mesh.weights[j0 + j] / (TAU * d.norm_squared()));
            }
        }
    }
    grad
}

fn single_layer_polygon(mesh: &QuadratureMesh) -> DMatrix<f64> {
    let n = mesh.len();
    let q = PANEL_ORDER;
    let rule = PanelRule::new(q);
    let mut entries = DMatrix::zeros(n, n);
    let mut scratch = vec![0.0; q];
    let mut cell = vec![0.0; q];

    for panel in &mesh.panels {
        let half = 0.5 * (panel.s1 - panel.s0);
        let center = 0.5 * (panel.s0 + panel.s1);
        let j0 = panel.first_node;
        let p_first = mesh.points[j0];
        let p_last = mesh.points[j0 + q - 1];
        // Unit direction along the panel from its Gauss nodes.
        let dir = (p_last - p_first) / (mesh.params[j0 + q - 1] - mesh.params[j0]);
        let origin = p_first - dir * (mesh.params[j0] - center);
        let point_at = |xi: f64| origin + dir * (half * xi);

        for i in 0..n {
            if mesh.edge_of_node[i] == panel.edge {
                // Same straight edge: |xᵢ−y| is an arclength gap, integrated
                // exactly against the panel's Legendre moments.
                let a = (mesh.params[i] - center) / half;
                if a.abs() <= 1.5 {
                    let moments = log_moments(a, q - 1);
                    for j in 0..q {
                        let mut acc = rule.gl_weights[j] * half.ln();
                        for k in 0..q {
                            acc += rule.legendre_coeff[k][j] * moments[k];
                        }
                        entries[(i, j0 + j)] = half / TAU * acc;
                    }
                } else {
                    for j in 0..q {
                        let gap = (mesh.params[i] - mesh.params[j0 + j]).abs();
                        entries[(i, j0 + j)] = gap.ln() / TAU * mesh.weights[j0 + j];
                    }
                }
            } else {
                let target = mesh.points[i];
                // Distance from the target to the panel segment.
                let seg = point_at(1.0) - point_at(-1.0);
                let t = ((target - point_at(-1.0)).dot(&seg) / seg.norm_squared()).clamp(0.0, 1.0);
                let dist = (point_at(-1.0) + seg * t - target).norm();
                if dist < 4.0 * half {
                    cell.fill(0.0);
                    let kernel = |y: Vector2<f64>| (target - y).norm().max(1e-300).ln();
                    refined_kernel_integrals(
                        &rule, target, &point_at, &kernel, -1.0, 1.0, 0, &mut scratch, &mut cell,
                    );
                    for j in 0..q {
                        entries[(i, j0 + j)] = half / TAU * cell[j];
                    }
                } else {
                    for j in 0..q {
                        let r = (target - mesh.points[j0 + j]).norm();
                        entries[(i, j0 + j)] = r.ln() / TAU * mesh.weights[j0 + j];
                    }
                }
            }
        }
    }
    entries
}

fn double_layer_entries(mesh: &QuadratureMesh, adjoint: bool) -> DMatrix<f64> {
    let n = mesh.len();
    if mesh.is_smooth {
        return DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                // Continuous diagonal limit of both kernels.
                return mesh.curvatures[i] / (4.0 * PI) * mesh.weights[i];
            }
            let diff = mesh.points[i] - mesh.points[j];
            let r2 = diff.norm_squared();
            let numerator =
                if adjoint { mesh.normals[i].dot(&diff) } else { -mesh.normals[j].dot(&diff) };
            numerator / (TAU * r2) * mesh.weights[j]
        });
    }

    let q = PANEL_ORDER;
    let rule = PanelRule::new(q);
    let mut entries = DMatrix::zeros(n, n);
    let mut scratch = vec![0.0; q];
    let mut cell = vec![0.0; q];

    for panel in &mesh.panels {
        let half = 0.5 * (panel.s1 - panel.s0);
        let center = 0.5 * (panel.s0 + panel.s1);
        let j0 = panel.first_node;
        let p_first = mesh.points[j0];
        let p_last = mesh.points[j0 + q - 1];
        let dir = (p_last - p_first) / (mesh.params[j0 + q - 1] - mesh.params[j0]);
        let origin = p_first - dir * (mesh.params[j0] - center);
        let point_at = |xi: f64| origin + dir * (half * xi);
        let source_normal = mesh.normals[j0];

        for i in 0..n {
            if mesh.edge_of_node[i] == panel.edge {
                // ⟨ν, x−y⟩ = 0 for two points of one straight edge.
                continue;
            }
            let target = mesh.points[i];
            let target_normal = mesh.normals[i];
            let kernel = |y: Vector2<f64>| {
                let diff = target - y;
                let numerator =
                    if adjoint { target_normal.dot(&diff) } else { -source_normal.dot(&diff) };
                numerator / (TAU * diff.norm_squared())
            };
            let seg = point_at(1.0) - point_at(-1.0);
            let t = ((target - point_at(-1.0)).dot(&seg) / seg.norm_squared()).clamp(0.0, 1.0);
            let dist = (point_at(-1.0) + seg * t - target).norm();
            if dist < 4.0 * half {
                cell.fill(0.0);
                refined_kernel_integrals(
                    &rule, target, &point_at, &kernel, -1.0, 1.0, 0, &mut scratch, &mut cell,
                );
                for j in 0..q {
                    entries[(i, j0 + j)] = half * cell[j];
                }
            } else {
                for j in 0..q {
                    entries[(i, j0 + j)] = kernel(mesh.points[j0 + j]) * mesh.weights[j0 + j];
                }
            }
        }
    }
    entries
}
