//! Closed planar curves and quadrature meshes on them.
//!
//! Three curve families are supported: ellipses (analytic parametrization),
//! straight-edged polygons (arclength parametrization with corner data), and
//! smooth curves given by uniform point samples (trigonometric
//! interpolation). All curves are positively (counterclockwise) oriented and
//! carry the unit normal pointing outward from the enclosed region Ω₋.
//!
//! Meshes are periodic-trapezoid on smooth curves and composite
//! Gauss–Legendre panels with algebraic grading toward the corners on
//! polygons; corner points themselves never become quadrature nodes.

use std::f64::consts::TAU;

use nalgebra::Vector2;

use crate::gauss::gauss_legendre;
use crate::trig::TrigSeries;
use crate::{Error, Result};

/// Gauss–Legendre points per polygon panel.
pub(crate) const PANEL_ORDER: usize = 10;

/// Minimum admissible quadrature node count.
pub const MIN_MESH_NODES: usize = 32;

#[derive(Debug, Clone)]
enum Shape {
    Ellipse { a: f64, b: f64 },
    Polygon { vertices: Vec<Vector2<f64>>, grading: f64 },
    Sampled { x: TrigSeries, y: TrigSeries },
}

/// A sampled closed planar curve with per-node differential data.
#[derive(Debug, Clone)]
pub struct Curve {
    shape: Shape,
    /// Sample points on the curve.
    pub nodes: Vec<Vector2<f64>>,
    /// Unit normals at the sample points, outward from Ω₋.
    pub normals: Vec<Vector2<f64>>,
    /// |γ'(t)| at the sample points.
    pub speeds: Vec<f64>,
    /// Signed curvature at the sample points (positive for a convex
    /// counterclockwise curve).
    pub curvatures: Vec<f64>,
    /// True for curves without corners.
    pub is_smooth: bool,
    /// Parameter values of the corners; empty for smooth curves.
    pub corner_params: Vec<f64>,
}

/// Interior angles of a curvilinear polygon, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerSpec {
    /// Each angle lies in (0, 2π) and differs from π.
    pub angles: Vec<f64>,
}

/// One Gauss–Legendre panel of a polygon mesh, in arclength coordinates.
#[derive(Debug, Clone)]
pub(crate) struct Panel {
    pub edge: usize,
    pub s0: f64,
    pub s1: f64,
    pub first_node: usize,
}

/// Quadrature nodes and weights on a curve, with evaluated geometry.
///
/// Weights carry the arclength measure, so they sum to the perimeter.
#[derive(Debug, Clone)]
pub struct QuadratureMesh {
    /// The curve the mesh discretizes.
    pub curve: Curve,
    /// Parameter value of each node (angle for smooth curves, arclength for
    /// polygons).
    pub params: Vec<f64>,
    /// Positive quadrature weights for the arclength measure.
    pub weights: Vec<f64>,
    /// Node positions.
    pub points: Vec<Vector2<f64>>,
    /// Outward unit normals at the nodes.
    pub normals: Vec<Vector2<f64>>,
    /// |γ'| at the nodes.
    pub speeds: Vec<f64>,
    /// Signed curvature at the nodes.
    pub curvatures: Vec<f64>,
    /// Panel index of each node (all zero on smooth meshes).
    pub panel_of_node: Vec<usize>,
    /// Grading exponent used for corner clustering (1 on smooth meshes).
    pub grading_exponent: f64,
    pub(crate) panels: Vec<Panel>,
    pub(crate) edge_of_node: Vec<usize>,
    pub(crate) is_smooth: bool,
}

impl QuadratureMesh {
    /// Number of quadrature nodes.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of the quadrature weights (≈ perimeter).
    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Whether two meshes are the same discretization of the same curve.
    pub(crate) fn same_mesh(&self, other: &QuadratureMesh) -> bool {
        self.is_smooth == other.is_smooth
            && self.params == other.params
            && self.weights == other.weights
            && self.points == other.points
    }

    /// Arclength distance from node `i` to the nearest polygon corner; the
    /// perimeter (i.e. effectively infinite) on smooth meshes.
    pub(crate) fn corner_distance(&self, i: usize) -> f64 {
        if self.is_smooth {
            return self.perimeter();
        }
        let perimeter = self.perimeter();
        let s = self.params[i];
        self.curve
            .corner_params
            .iter()
            .map(|&c| {
                let d = (s - c).abs();
                d.min(perimeter - d)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn eval_ellipse(a: f64, b: f64, t: f64) -> (Vector2<f64>, Vector2<f64>, Vector2<f64>) {
    let (sin, cos) = t.sin_cos();
    (
        Vector2::new(a * cos, b * sin),
        Vector2::new(-a * sin, b * cos),
        Vector2::new(-a * cos, -b * sin),
    )
}

/// Differential data of a smooth parametrization: normal, speed, curvature.
fn frame(d1: Vector2<f64>, d2: Vector2<f64>) -> (Vector2<f64>, f64, f64) {
    let speed = d1.norm();
    let normal = Vector2::new(d1.y, -d1.x) / speed;
    let curvature = (d1.x * d2.y - d1.y * d2.x) / speed.powi(3);
    (normal, speed, curvature)
}

impl Curve {
    fn sample_smooth(&self, n: usize) -> (Vec<Vector2<f64>>, Vec<Vector2<f64>>, Vec<f64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut speeds = Vec::with_capacity(n);
        let mut curvatures = Vec::with_capacity(n);
        for i in 0..n {
            let t = TAU * i as f64 / n as f64;
            let (p, d1, d2) = match &self.shape {
                Shape::Ellipse { a, b } => eval_ellipse(*a, *b, t),
                Shape::Sampled { x, y } => {
                    let (px, dx, ddx) = x.eval2(t);
                    let (py, dy, ddy) = y.eval2(t);
                    (Vector2::new(px, py), Vector2::new(dx, dy), Vector2::new(ddx, ddy))
                }
                Shape::Polygon { .. } => unreachable!("polygons are not smooth"),
            };
            let (normal, speed, curvature) = frame(d1, d2);
            nodes.push(p);
            normals.push(normal);
            speeds.push(speed);
            curvatures.push(curvature);
        }
        (nodes, normals, speeds, curvatures)
    }
}

/// Builds an ellipse (a cos t, b sin t) sampled at N uniform parameters.
///
/// Requires a ≥ b > 0 and even N ≥ 16. Normals, speeds, and curvatures come
/// from the analytic parametrization.
pub fn make_ellipse(a: f64, b: f64, n: usize) -> Result<Curve> {
    if !(a.is_finite() && b.is_finite() && b > 0.0 && a >= b) {
        return Err(Error::InvalidGeometry(format!(
            "ellipse semi-axes must satisfy a >= b > 0, got a = {a}, b = {b}"
        )));
    }
    if n < 16 || n % 2 != 0 {
        return Err(Error::InvalidGeometry(format!(
            "ellipse node count must be even and at least 16, got {n}"
        )));
    }
    let mut curve = Curve {
        shape: Shape::Ellipse { a, b },
        nodes: Vec::new(),
        normals: Vec::new(),
        speeds: Vec::new(),
        curvatures: Vec::new(),
        is_smooth: true,
        corner_params: Vec::new(),
    };
    let (nodes, normals, speeds, curvatures) = curve.sample_smooth(n);
    curve.nodes = nodes;
    curve.normals = normals;
    curve.speeds = speeds;
    curve.curvatures = curvatures;
    Ok(curve)
}

/// Builds a smooth closed curve from uniform-in-parameter point samples by
/// trigonometric interpolation, resampled at `n` nodes.
///
/// The samples must list one period counterclockwise without repeating the
/// first point.
pub fn make_smooth_from_samples(points: &[Vector2<f64>], n: usize) -> Result<Curve> {
    if points.len() < 16 {
        return Err(Error::InvalidGeometry(format!(
            "need at least 16 curve samples, got {}",
            points.len()
        )));
    }
    if n < 16 || n % 2 != 0 {
        return Err(Error::InvalidGeometry(format!(
            "node count must be even and at least 16, got {n}"
        )));
    }
    if signed_area(points) <= 0.0 {
        return Err(Error::InvalidGeometry(
            "sampled curve must be positively (counterclockwise) oriented".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let mut curve = Curve {
        shape: Shape::Sampled { x: TrigSeries::from_samples(&xs), y: TrigSeries::from_samples(&ys) },
        nodes: Vec::new(),
        normals: Vec::new(),
        speeds: Vec::new(),
        curvatures: Vec::new(),
        is_smooth: true,
        corner_params: Vec::new(),
    };
    let (nodes, normals, speeds, curvatures) = curve.sample_smooth(n);
    let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
    if speeds.iter().any(|&s| !(s > 1e-8 * max_speed)) {
        return Err(Error::InvalidGeometry(
            "sampled curve parametrization degenerates (vanishing speed)".into(),
        ));
    }
    curve.nodes = nodes;
    curve.normals = normals;
    curve.speeds = speeds;
    curve.curvatures = curvatures;
    Ok(curve)
}

fn signed_area(points: &[Vector2<f64>]) -> f64 {
    let n = points.len();
    let mut twice_area = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        twice_area += p.x * q.y - q.x * p.y;
    }
    0.5 * twice_area
}

fn segments_intersect(
    p1: Vector2<f64>,
    p2: Vector2<f64>,
    q1: Vector2<f64>,
    q2: Vector2<f64>,
) -> bool {
    let orient = |a: Vector2<f64>, b: Vector2<f64>, c: Vector2<f64>| -> f64 {
        (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    };
    let on_segment = |a: Vector2<f64>, b: Vector2<f64>, c: Vector2<f64>| -> bool {
        c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    };
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Builds a straight-edged simple polygon from its vertices, listed
/// counterclockwise, together with its interior angles.
///
/// The curve is parametrized by arclength starting at the first vertex.
/// `nodes_per_edge` controls the curve's own sample nodes (placed strictly
/// inside the edges); `grading_exponent` ≥ 1 is recorded for mesh
/// construction. Collinear consecutive edges (interior angle π) and
/// self-intersections are rejected.
pub fn make_polygon(
    vertices: &[Vector2<f64>],
    nodes_per_edge: usize,
    grading_exponent: f64,
) -> Result<(Curve, CornerSpec)> {
    let nv = vertices.len();
    if nv < 3 {
        return Err(Error::InvalidGeometry(format!("polygon needs at least 3 vertices, got {nv}")));
    }
    if nodes_per_edge < 2 {
        return Err(Error::InvalidGeometry("need at least 2 nodes per edge".into()));
    }
    if !(grading_exponent >= 1.0 && grading_exponent.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "grading exponent must be a finite value >= 1, got {grading_exponent}"
        )));
    }
    let mut edge_dirs = Vec::with_capacity(nv);
    let mut edge_lens = Vec::with_capacity(nv);
    for i in 0..nv {
        let d = vertices[(i + 1) % nv] - vertices[i];
        let len = d.norm();
        if len == 0.0 {
            return Err(Error::InvalidGeometry(format!("zero-length edge at vertex {i}")));
        }
        edge_dirs.push(d / len);
        edge_lens.push(len);
    }
    if signed_area(vertices) <= 0.0 {
        return Err(Error::InvalidGeometry(
            "polygon must be positively (counterclockwise) oriented".into(),
        ));
    }
    for i in 0..nv {
        for j in (i + 1)..nv {
            // Skip edges sharing a vertex; they meet there by construction.
            if j == i || (j + 1) % nv == i || (i + 1) % nv == j {
                continue;
            }
            if segments_intersect(
                vertices[i],
                vertices[(i + 1) % nv],
                vertices[j],
                vertices[(j + 1) % nv],
            ) {
                return Err(Error::InvalidGeometry(format!(
                    "polygon is self-intersecting (edges {i} and {j} cross)"
                )));
            }
        }
    }

    // Interior angle at vertex k from the turn between adjacent edges.
    let mut angles = Vec::with_capacity(nv);
    for k in 0..nv {
        let prev = edge_dirs[(k + nv - 1) % nv];
        let next = edge_dirs[k];
        let turn = (prev.x * next.y - prev.y * next.x).atan2(prev.dot(&next));
        let omega = std::f64::consts::PI - turn;
        if (omega - std::f64::consts::PI).abs() < 1e-12 {
            return Err(Error::InvalidGeometry(format!(
                "collinear consecutive edges at vertex {k} (interior angle equals pi)"
            )));
        }
        if omega < 1e-12 || omega > TAU - 1e-12 {
            return Err(Error::InvalidGeometry(format!("degenerate cusp at vertex {k}")));
        }
        angles.push(omega);
    }

    let mut corner_params = Vec::with_capacity(nv);
    let mut acc = 0.0;
    for len in &edge_lens {
        corner_params.push(acc);
        acc += len;
    }

    let mut nodes = Vec::new();
    let mut normals = Vec::new();
    for e in 0..nv {
        let normal = Vector2::new(edge_dirs[e].y, -edge_dirs[e].x);
        for j in 0..nodes_per_edge {
            let s = (j as f64 + 0.5) / nodes_per_edge as f64 * edge_lens[e];
            nodes.push(vertices[e] + edge_dirs[e] * s);
            normals.push(normal);
        }
    }
    let n_nodes = nodes.len();

    let curve = Curve {
        shape: Shape::Polygon { vertices: vertices.to_vec(), grading: grading_exponent },
        nodes,
        normals,
        speeds: vec![1.0; n_nodes],
        curvatures: vec![0.0; n_nodes],
        is_smooth: false,
        corner_params,
    };
    Ok((curve, CornerSpec { angles }))
}

/// The interior angle maximizing |π−ω|, reflected into (0,π).
///
/// Reentrant angles ω > π are reflected via ω ↦ 2π−ω, which leaves |π−ω|
/// unchanged.
pub fn sharpest_corner(spec: &CornerSpec) -> Result<f64> {
    if spec.angles.is_empty() {
        return Err(Error::OutOfRange("corner list is empty".into()));
    }
    let mut best = spec.angles[0];
    for &omega in &spec.angles[1..] {
        if (std::f64::consts::PI - omega).abs() > (std::f64::consts::PI - best).abs() {
            best = omega;
        }
    }
    Ok(if best > std::f64::consts::PI { TAU - best } else { best })
}

/// Builds a quadrature mesh with (approximately, for polygons) N nodes.
///
/// Smooth curves get the periodic trapezoid rule at N uniform parameters
/// (N even); polygons get per-edge composite Gauss–Legendre panels whose
/// breakpoints are graded toward both corners of each edge with the curve's
/// grading exponent. The realized polygon node count is the closest multiple
/// of the panel layout to N.
pub fn build_mesh(curve: &Curve, n: usize) -> Result<QuadratureMesh> {
    if n < MIN_MESH_NODES {
        return Err(Error::InvalidGeometry(format!(
            "mesh needs at least {MIN_MESH_NODES} nodes, got {n}"
        )));
    }
    match &curve.shape {
        Shape::Ellipse { .. } | Shape::Sampled { .. } => {
            if n % 2 != 0 {
                return Err(Error::InvalidGeometry(format!(
                    "smooth-curve mesh size must be even, got {n}"
                )));
            }
            let (points, normals, speeds, curvatures) = curve.sample_smooth(n);
            let params: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
            let weights: Vec<f64> = speeds.iter().map(|s| s * TAU / n as f64).collect();
            Ok(QuadratureMesh {
                curve: curve.clone(),
                params,
                weights,
                points,
                normals,
                speeds,
                curvatures,
                panel_of_node: vec![0; n],
                grading_exponent: 1.0,
                panels: Vec::new(),
                edge_of_node: vec![0; n],
                is_smooth: true,
            })
        }
        Shape::Polygon { vertices, grading } => build_polygon_mesh(curve, vertices, *grading, n),
    }
}

fn build_polygon_mesh(
    curve: &Curve,
    vertices: &[Vector2<f64>],
    grading: f64,
    n: usize,
) -> Result<QuadratureMesh> {
    let nv = vertices.len();
    let q = PANEL_ORDER;
    let (gl_nodes, gl_weights) = gauss_legendre(q);

    let mut edge_lens = Vec::with_capacity(nv);
    for i in 0..nv {
        edge_lens.push((vertices[(i + 1) % nv] - vertices[i]).norm());
    }
    let total: f64 = edge_lens.iter().sum();

    let mut params = Vec::new();
    let mut weights = Vec::new();
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let mut panel_of_node = Vec::new();
    let mut edge_of_node = Vec::new();
    let mut panels = Vec::new();

    for e in 0..nv {
        let len = edge_lens[e];
        let dir = (vertices[(e + 1) % nv] - vertices[e]) / len;
        let normal = Vector2::new(dir.y, -dir.x);
        let edge_start = curve.corner_params[e];

        let target = n as f64 * len / total;
        let m = ((target / (2.0 * q as f64)).round() as usize).max(1);

        // Graded breakpoints from both corners meeting at the edge midpoint.
        let mut breaks = Vec::with_capacity(2 * m + 1);
        for k in 0..=m {
            breaks.push(0.5 * len * (k as f64 / m as f64).powf(grading));
        }
        for k in (0..m).rev() {
            breaks.push(len - 0.5 * len * (k as f64 / m as f64).powf(grading));
        }

        for w in breaks.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            let half = 0.5 * (s1 - s0);
            let mid = 0.5 * (s0 + s1);
            let panel_idx = panels.len();
            panels.push(Panel { edge: e, s0: edge_start + s0, s1: edge_start + s1, first_node: params.len() });
            for (xi, wi) in gl_nodes.iter().zip(&gl_weights) {
                let s = mid + half * xi;
                params.push(edge_start + s);
                weights.push(half * wi);
                points.push(vertices[e] + dir * s);
                normals.push(normal);
                panel_of_node.push(panel_idx);
                edge_of_node.push(e);
            }
        }
    }

    let n_nodes = params.len();
    Ok(QuadratureMesh {
        curve: curve.clone(),
        params,
        weights,
        points,
        normals,
        speeds: vec![1.0; n_nodes],
        curvatures: vec![0.0; n_nodes],
        panel_of_node,
        grading_exponent: grading,
        panels,
        edge_of_node,
        is_smooth: false,
    })
}
