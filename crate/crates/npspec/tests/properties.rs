//! Randomized invariants: the contrast Möbius map and its inverse, the
//! closed-form critical intervals, the verdict rules as a total function,
//! and the geometric integrity of quadrature meshes.

use std::f64::consts::PI;

use npspec::{
    build_mesh, critical_interval, lambda_to_mu, make_ellipse, make_polygon, mu_to_lambda,
    polygon_intervals, verdict, GeometryClass, QuadratureMesh, Regularity, Vector2, Verdict,
};
use proptest::prelude::*;

fn class_strategy() -> impl Strategy<Value = GeometryClass> {
    prop_oneof![
        Just(GeometryClass::SignDefinite),
        Just(GeometryClass::SmoothVmo),
        (0.01..PI - 0.01).prop_map(|omega| GeometryClass::Polygon { omega }),
        (0.01..PI - 0.01).prop_map(|alpha| GeometryClass::Cone { alpha }),
    ]
}

fn regularity_strategy() -> impl Strategy<Value = Regularity> {
    prop_oneof![Just(Regularity::One), Just(Regularity::ThreeHalves)]
}

proptest! {
    #[test]
    fn contrast_map_round_trips(mu in -50.0..50.0_f64) {
        prop_assume!((mu - 1.0).abs() > 1e-3);
        let lambda = mu_to_lambda(mu).unwrap();
        let back = lambda_to_mu(lambda).unwrap();
        prop_assert!((back - mu).abs() <= 1e-13 * mu.abs().max(1.0));
    }

    #[test]
    fn interval_membership_matches_the_lambda_bound(
        r in 0.01..0.49_f64,
        mu in -60.0..-0.01_f64,
    ) {
        let lambda = mu_to_lambda(mu).unwrap();
        prop_assume!((lambda.abs() - r).abs() > 1e-9);
        let [lo, hi] = critical_interval(r).unwrap();
        let inside = lo <= mu && mu <= hi;
        prop_assert_eq!(inside, lambda.abs() <= r);
    }

    #[test]
    fn critical_interval_endpoints_are_reciprocal(r in 0.0..0.4999_f64) {
        let [lo, hi] = critical_interval(r).unwrap();
        prop_assert!(lo <= -1.0 && -1.0 <= hi && hi < 0.0);
        prop_assert!((lo * hi - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn the_energy_interval_contains_the_regularity_one_interval(
        omega in 0.01..PI - 0.001,
    ) {
        let intervals = polygon_intervals(omega).unwrap();
        prop_assert!(intervals.s32[0] <= intervals.s1[0]);
        prop_assert!(intervals.s1[1] <= intervals.s32[1]);
        prop_assert!(intervals.s1[0] <= -1.0 && -1.0 <= intervals.s1[1]);
    }

    #[test]
    fn the_endpoint_obeys_the_half_angle_identity(omega in 0.01..PI - 0.01) {
        let a = -polygon_intervals(omega).unwrap().s32[1];
        // 1 - cos(x) written as 2 sin^2(x/2) to keep the reference
        // cancellation-free near omega = 0.
        let reference = 2.0 * (omega / 4.0).sin().powi(2) / (1.0 + (omega / 2.0).cos());
        prop_assert!((a - reference).abs() <= 1e-14 * reference.max(1e-30));
    }

    #[test]
    fn verdict_is_total_and_internally_consistent(
        class in class_strategy(),
        mu in -100.0..100.0_f64,
        s in regularity_strategy(),
    ) {
        prop_assume!(mu != 0.0);
        let record = verdict(class, mu, s).unwrap();
        prop_assert_eq!(record.mu, mu);

        match class {
            GeometryClass::Polygon { .. } => {
                let interval = record.interval.expect("polygon verdicts carry an interval");
                match record.verdict {
                    Verdict::InsideCriticalInterval => {
                        prop_assert!(interval[0] <= mu && mu <= interval[1]);
                    }
                    Verdict::SelfAdjoint => {
                        prop_assert!(mu < interval[0] || mu > interval[1]);
                    }
                    Verdict::ExcludedValue => prop_assert_eq!(mu, 1.0),
                    Verdict::Unknown => prop_assert!(false, "polygon verdicts are decisive"),
                }
            }
            _ => {
                prop_assert!(record.interval.is_none());
                if record.verdict == Verdict::ExcludedValue {
                    prop_assert!(mu == 1.0 || mu == -1.0);
                }
                prop_assert!(record.verdict != Verdict::InsideCriticalInterval);
            }
        }
    }
}

fn ellipse_mesh(a: f64, b: f64, n: usize) -> QuadratureMesh {
    build_mesh(&make_ellipse(a, b, n).unwrap(), n).unwrap()
}

fn rectangle_mesh(w: f64, h: f64, n: usize) -> QuadratureMesh {
    let v = [
        Vector2::new(w, h),
        Vector2::new(-w, h),
        Vector2::new(-w, -h),
        Vector2::new(w, -h),
    ];
    build_mesh(&make_polygon(&v, 8, 3.0).unwrap().0, n).unwrap()
}

/// ∮ 〈x, ν〉 ds = 2 |Ω| and ∮ ν ds = 0 on any closed curve; together they
/// exercise weights and normals against exact geometry.
fn check_divergence_identities(mesh: &QuadratureMesh, area: f64) -> Result<(), TestCaseError> {
    let perimeter = mesh.perimeter();
    let mut flux = 0.0;
    let mut net_normal = Vector2::new(0.0, 0.0);
    for i in 0..mesh.len() {
        prop_assert!((mesh.normals[i].norm() - 1.0).abs() <= 1e-12);
        flux += mesh.points[i].dot(&mesh.normals[i]) * mesh.weights[i];
        net_normal += mesh.normals[i] * mesh.weights[i];
    }
    prop_assert!((flux - 2.0 * area).abs() <= 1e-9 * area.max(1.0));
    prop_assert!(net_normal.norm() <= 1e-9 * perimeter);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ellipse_meshes_satisfy_the_divergence_identities(
        b in 0.5..2.0_f64,
        stretch in 1.0..2.5_f64,
        half_n in 24..80_usize,
    ) {
        let a = b * stretch;
        let mesh = ellipse_mesh(a, b, 2 * half_n);
        check_divergence_identities(&mesh, PI * a * b)?;

        for i in 0..mesh.len() {
            // The outward normal must align with the gradient of the level
            // function (x/a)^2 + (y/b)^2.
            let p = mesh.points[i];
            let gradient = Vector2::new(p.x / (a * a), p.y / (b * b));
            let cross = mesh.normals[i].x * gradient.y - mesh.normals[i].y * gradient.x;
            prop_assert!(cross.abs() <= 1e-12 * gradient.norm());
            prop_assert!(mesh.normals[i].dot(&gradient) > 0.0);
        }
    }

    #[test]
    fn ellipse_perimeters_are_stable_under_refinement(
        b in 0.5..2.0_f64,
        stretch in 1.0..2.5_f64,
        half_n in 24..64_usize,
    ) {
        let a = b * stretch;
        let coarse = ellipse_mesh(a, b, 2 * half_n).perimeter();
        let fine = ellipse_mesh(a, b, 4 * half_n).perimeter();
        prop_assert!((coarse - fine).abs() <= 1e-10 * fine);
    }

    #[test]
    fn rectangle_meshes_satisfy_the_divergence_identities(
        w in 0.4..2.0_f64,
        h in 0.4..2.0_f64,
        n in 160..320_usize,
    ) {
        let mesh = rectangle_mesh(w, h, n);
        check_divergence_identities(&mesh, 4.0 * w * h)?;
        prop_assert!((mesh.perimeter() - 4.0 * (w + h)).abs() <= 1e-10 * (w + h));
    }

    #[test]
    fn circle_perimeter_matches_the_closed_form(
        radius in 0.5..2.5_f64,
        half_n in 16..64_usize,
    ) {
        let mesh = ellipse_mesh(radius, radius, 2 * half_n);
        prop_assert!((mesh.perimeter() - 2.0 * PI * radius).abs() <= 1e-12 * radius);
    }
}
