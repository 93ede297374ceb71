//! Geometry fixtures shared by the pipeline benchmarks.

use npspec::{build_mesh, make_ellipse, make_polygon, QuadratureMesh, Vector2};

/// A 2:1 ellipse mesh with `n` quadrature nodes.
pub fn ellipse_mesh(n: usize) -> QuadratureMesh {
    let curve = make_ellipse(2.0, 1.0, n).expect("valid ellipse");
    build_mesh(&curve, n).expect("valid mesh")
}

/// The unit disk with `n` quadrature nodes.
pub fn disk_mesh(n: usize) -> QuadratureMesh {
    let curve = make_ellipse(1.0, 1.0, n).expect("valid disk");
    build_mesh(&curve, n).expect("valid mesh")
}

/// A graded mesh on the square [-1, 1]^2 with about `n` nodes.
pub fn square_mesh(n: usize) -> QuadratureMesh {
    let vertices = [
        Vector2::new(1.0, 1.0),
        Vector2::new(-1.0, 1.0),
        Vector2::new(-1.0, -1.0),
        Vector2::new(1.0, -1.0),
    ];
    let (curve, _) = make_polygon(&vertices, 8, 3.0).expect("valid square");
    build_mesh(&curve, n).expect("valid mesh")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build_at_the_benchmark_sizes() {
        assert_eq!(ellipse_mesh(256).len(), 256);
        assert_eq!(disk_mesh(128).len(), 128);
        assert!(square_mesh(240).len() >= 200);
    }
}
