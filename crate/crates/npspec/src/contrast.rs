//! Contrast dictionary and self-adjointness verdicts.
//!
//! The Möbius map λ = (μ+1)/(2(μ−1)) translates a transmission contrast μ
//! into the spectral parameter that solvability criteria are stated in. The
//! critical interval I_r collects the contrasts whose λ lies within radius r
//! of the essential spectrum; outside it the sign-indefinite transmission
//! operator is self-adjoint with compact resolvent.

use crate::spectral::fmt_float;
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Sobolev regularity index of the transmission operator realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    /// s = 1 (gradient-regularity realization).
    One,
    /// s = 3/2 (trace-regularity realization).
    ThreeHalves,
}

impl Regularity {
    pub fn value(self) -> f64 {
        match self {
            Regularity::One => 1.0,
            Regularity::ThreeHalves => 1.5,
        }
    }

    fn json_value(self) -> &'static str {
        match self {
            Regularity::One => "1",
            Regularity::ThreeHalves => "1.5",
        }
    }
}

/// Geometry classes the decision rules distinguish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometryClass {
    /// Contrast does not change sign across the interface.
    SignDefinite,
    /// Boundary without corners (C¹ with VMO normal).
    SmoothVmo,
    /// Curvilinear polygon whose sharpest corner has opening `omega`.
    Polygon { omega: f64 },
    /// Surface of revolution with one conical point of half-angle `alpha`.
    Cone { alpha: f64 },
}

impl GeometryClass {
    pub fn label(&self) -> &'static str {
        match self {
            GeometryClass::SignDefinite => "sign-definite",
            GeometryClass::SmoothVmo => "smooth-vmo",
            GeometryClass::Polygon { .. } => "polygon",
            GeometryClass::Cone { .. } => "cone",
        }
    }
}

/// Outcome of the decision rules for one (class, μ, s) query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    SelfAdjoint,
    InsideCriticalInterval,
    ExcludedValue,
    Unknown,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::SelfAdjoint => "self-adjoint",
            Verdict::InsideCriticalInterval => "inside-critical-interval",
            Verdict::ExcludedValue => "excluded-value",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Both critical intervals of a corner of opening ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolygonIntervals {
    /// Interval for the s = 3/2 realization: [−1/a(ω), −a(ω)], a = tan²(ω/4).
    pub s32: [f64; 2],
    /// Interval for the s = 1 realization: [−1/b(ω), −b(ω)],
    /// b = (π−|π−ω|)/(π+|π−ω|).
    pub s1: [f64; 2],
}

/// Verdict record for one contrast query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContrastVerdict {
    pub mu: f64,
    pub s: Regularity,
    pub class: GeometryClass,
    pub verdict: Verdict,
    pub interval: Option<[f64; 2]>,
    pub theorem: &'static str,
}

impl ContrastVerdict {
    pub fn to_json(&self) -> String {
        let interval = match self.interval {
            Some([lo, hi]) => format!("[{},{}]", fmt_float(lo), fmt_float(hi)),
            None => "null".to_string(),
        };
        format!(
            "{{\"mu\":{},\"s\":{},\"class\":\"{}\",\"verdict\":\"{}\",\"interval\":{},\"theorem\":\"{}\"}}",
            fmt_float(self.mu),
            self.s.json_value(),
            self.class.label(),
            self.verdict.label(),
            interval,
            self.theorem
        )
    }
}

/// λ = (μ+1)/(2(μ−1)). Rejects the trivial contrast μ = 1.
pub fn mu_to_lambda(mu: f64) -> Result<f64> {
    if !mu.is_finite() {
        return Err(Error::OutOfRange(format!("contrast must be finite, got {mu}")));
    }
    if mu == 1.0 {
        return Err(Error::ExcludedContrast(
            "mu = 1 is the trivial contrast with no interface".to_string(),
        ));
    }
    Ok((mu + 1.0) / (2.0 * (mu - 1.0)))
}

/// μ = (2λ+1)/(2λ−1). Rejects λ = 1/2 (infinite contrast).
pub fn lambda_to_mu(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::OutOfRange(format!("spectral parameter must be finite, got {lambda}")));
    }
    if lambda == 0.5 {
        return Err(Error::OutOfRange(
            "lambda = 1/2 corresponds to an infinite contrast".to_string(),
        ));
    }
    Ok((2.0 * lambda + 1.0) / (2.0 * lambda - 1.0))
}

/// The closed interval of contrasts whose spectral parameter satisfies
/// |λ(μ)| ≤ r: [−(1+2r)/(1−2r), −(1−2r)/(1+2r)].
pub fn critical_interval(r: f64) -> Result<[f64; 2]> {
    if !(0.0..0.5).contains(&r) {
        return Err(Error::OutOfRange(format!("radius must lie in [0, 1/2), got {r}")));
    }
    Ok([-(1.0 + 2.0 * r) / (1.0 - 2.0 * r), -(1.0 - 2.0 * r) / (1.0 + 2.0 * r)])
}

/// Critical intervals of a corner of opening ω ∈ (0, π) for both regularity
/// indices.
pub fn polygon_intervals(omega: f64) -> Result<PolygonIntervals> {
    if !(omega > 0.0 && omega < PI) {
        return Err(Error::OutOfRange(format!("corner opening must lie in (0, pi), got {omega}")));
    }
    let a = (omega / 4.0).tan().powi(2);
    let deviation = (PI - omega).abs();
    let b = (PI - deviation) / (PI + deviation);
    Ok(PolygonIntervals { s32: [-1.0 / a, -a], s1: [-1.0 / b, -b] })
}

/// Decision rules for self-adjointness of the transmission operator.
///
/// Only positive statements are issued: when no rule applies the verdict is
/// `Unknown`, and membership in a critical interval is reported as such
/// rather than as a disproof.
pub fn verdict(class: GeometryClass, mu: f64, s: Regularity) -> Result<ContrastVerdict> {
    if !mu.is_finite() {
        return Err(Error::OutOfRange(format!("contrast must be finite, got {mu}")));
    }
    if mu == 0.0 {
        return Err(Error::ExcludedContrast(
            "mu = 0 degenerates the transmission coefficient".to_string(),
        ));
    }
    if let GeometryClass::Cone { alpha } = class {
        if !(alpha > 0.0 && alpha < PI) {
            return Err(Error::OutOfRange(format!(
                "cone half-angle must lie in (0, pi), got {alpha}"
            )));
        }
    }

    let make = |verdict, interval, theorem| ContrastVerdict { mu, s, class, verdict, interval, theorem };

    if mu == 1.0 {
        return Ok(match class {
            GeometryClass::SignDefinite => make(Verdict::SelfAdjoint, None, "sign-definite"),
            _ => make(Verdict::ExcludedValue, None, "trivial-contrast"),
        });
    }

    Ok(match class {
        GeometryClass::SignDefinite => {
            if mu > 0.0 {
                make(Verdict::SelfAdjoint, None, "sign-definite")
            } else {
                make(Verdict::Unknown, None, "none")
            }
        }
        GeometryClass::SmoothVmo => {
            if mu == -1.0 {
                make(Verdict::ExcludedValue, None, "smooth-vmo")
            } else if s == Regularity::ThreeHalves {
                make(Verdict::SelfAdjoint, None, "smooth-vmo")
            } else {
                make(Verdict::Unknown, None, "none")
            }
        }
        GeometryClass::Polygon { omega } => {
            let intervals = polygon_intervals(omega)?;
            let interval = match s {
                Regularity::ThreeHalves => intervals.s32,
                Regularity::One => intervals.s1,
            };
            if interval[0] <= mu && mu <= interval[1] {
                make(Verdict::InsideCriticalInterval, Some(interval), "polygon-corner")
            } else {
                make(Verdict::SelfAdjoint, Some(interval), "polygon-corner")
            }
        }
        GeometryClass::Cone { alpha } => {
            if s != Regularity::One || alpha == FRAC_PI_2 || mu == -1.0 {
                make(Verdict::Unknown, None, "none")
            } else if (alpha < FRAC_PI_2 && mu > -1.0) || (alpha > FRAC_PI_2 && mu < -1.0) {
                make(Verdict::SelfAdjoint, None, "conical-point")
            } else {
                make(Verdict::Unknown, None, "none")
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{ess_radius_polygon, SpectralSpace};
    use approx::assert_abs_diff_eq;

    #[test]
    fn mu_to_lambda_matches_reference_values() {
        assert_abs_diff_eq!(mu_to_lambda(-1.0).unwrap(), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(mu_to_lambda(3.0).unwrap(), 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(mu_to_lambda(-3.0).unwrap(), 0.25, epsilon = 0.0);
        assert!(matches!(mu_to_lambda(1.0), Err(Error::ExcludedContrast(_))));
        assert!(mu_to_lambda(f64::NAN).is_err());
    }

    #[test]
    fn lambda_to_mu_inverts_the_map() {
        assert_abs_diff_eq!(lambda_to_mu(0.0).unwrap(), -1.0, epsilon = 0.0);
        assert_abs_diff_eq!(lambda_to_mu(1.0).unwrap(), 3.0, epsilon = 0.0);
        assert_abs_diff_eq!(lambda_to_mu(-0.5).unwrap(), 0.0, epsilon = 0.0);
        assert!(lambda_to_mu(0.5).is_err());

        for k in -200..=200 {
            let mu = k as f64 / 2.0;
            if mu == 1.0 {
                continue;
            }
            let back = lambda_to_mu(mu_to_lambda(mu).unwrap()).unwrap();
            assert_abs_diff_eq!(back, mu, epsilon = 1e-13 * mu.abs().max(1.0));
        }
    }

    #[test]
    fn critical_interval_matches_reference_values() {
        assert_eq!(critical_interval(0.0).unwrap(), [-1.0, -1.0]);
        let quarter = critical_interval(0.25).unwrap();
        assert_abs_diff_eq!(quarter[0], -3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(quarter[1], -1.0 / 3.0, epsilon = 1e-15);

        let square = critical_interval(2.0f64.sqrt() / 4.0).unwrap();
        let a = 3.0 - 2.0 * 2.0f64.sqrt();
        assert_abs_diff_eq!(square[0], -1.0 / a, epsilon = 1e-12);
        assert_abs_diff_eq!(square[1], -a, epsilon = 1e-14);

        assert!(critical_interval(0.5).is_err());
        assert!(critical_interval(-0.1).is_err());
        assert!(critical_interval(f64::NAN).is_err());
    }

    #[test]
    fn polygon_intervals_match_reference_values() {
        let iv = polygon_intervals(FRAC_PI_2).unwrap();
        let a = 3.0 - 2.0 * 2.0f64.sqrt();
        assert_abs_diff_eq!(iv.s32[0], -1.0 / a, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.s32[1], -a, epsilon = 1e-14);
        assert_abs_diff_eq!(iv.s1[0], -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.s1[1], -1.0 / 3.0, epsilon = 1e-14);

        // tan²(ω/4) agrees with (1−cos(ω/2))/(1+cos(ω/2)).
        for k in 1..100 {
            let omega = PI * k as f64 / 100.0;
            let iv = polygon_intervals(omega).unwrap();
            let half_tangent = (1.0 - (omega / 2.0).cos()) / (1.0 + (omega / 2.0).cos());
            assert_abs_diff_eq!(-iv.s32[1], half_tangent, epsilon = 1e-14);
        }

        let near_smooth = polygon_intervals(PI - 1e-9).unwrap();
        assert_abs_diff_eq!(near_smooth.s32[1], -1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(near_smooth.s1[1], -1.0, epsilon = 1e-8);

        assert!(polygon_intervals(0.0).is_err());
        assert!(polygon_intervals(PI).is_err());
        assert!(polygon_intervals(-1.0).is_err());
    }

    #[test]
    fn polygon_intervals_agree_with_ess_radius_composition() {
        // ω below ~0.05 loses digits to the 1−2r cancellation in the
        // composed route, so the grid matches the atlas range.
        for k in 0..1000 {
            let omega = 0.05 + (PI - 0.1) * k as f64 / 999.0;
            let iv = polygon_intervals(omega).unwrap();
            let via_l2 =
                critical_interval(ess_radius_polygon(omega, SpectralSpace::L2).unwrap()).unwrap();
            let via_h = critical_interval(
                ess_radius_polygon(omega, SpectralSpace::Hminus12).unwrap(),
            )
            .unwrap();
            for (have, want) in iv.s32.iter().zip(&via_l2).chain(iv.s1.iter().zip(&via_h)) {
                assert_abs_diff_eq!(have, want, epsilon = 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn interval_endpoints_are_negative_reciprocals_and_ordered() {
        for k in 1..=200 {
            let omega = PI * k as f64 / 201.0;
            let iv = polygon_intervals(omega).unwrap();
            for pair in [iv.s32, iv.s1] {
                assert!(pair[0] <= -1.0 && -1.0 <= pair[1] && pair[1] < 0.0);
                assert_abs_diff_eq!(pair[0] * pair[1], 1.0, epsilon = 1e-12);
            }
            // a ≤ b, so the s = 3/2 interval contains the s = 1 interval.
            assert!(-iv.s32[1] <= -iv.s1[1] + 1e-15);
            assert!(iv.s32[0] <= iv.s1[0] + 1e-15);
        }
    }

    #[test]
    fn verdict_covers_the_decision_rules() {
        use GeometryClass::*;
        use Regularity::*;
        use Verdict::*;

        let v = verdict(SignDefinite, 5.0, ThreeHalves).unwrap();
        assert_eq!((v.verdict, v.theorem), (SelfAdjoint, "sign-definite"));
        assert_eq!(verdict(SignDefinite, 5.0, One).unwrap().verdict, SelfAdjoint);
        assert_eq!(verdict(SignDefinite, -5.0, ThreeHalves).unwrap().verdict, Unknown);

        assert_eq!(verdict(SmoothVmo, 2.5, ThreeHalves).unwrap().verdict, SelfAdjoint);
        assert_eq!(verdict(SmoothVmo, -2.5, ThreeHalves).unwrap().verdict, SelfAdjoint);
        assert_eq!(verdict(SmoothVmo, -1.0, ThreeHalves).unwrap().verdict, ExcludedValue);
        assert_eq!(verdict(SmoothVmo, -1.0, One).unwrap().verdict, ExcludedValue);
        assert_eq!(verdict(SmoothVmo, -2.5, One).unwrap().verdict, Unknown);

        let sq = Polygon { omega: FRAC_PI_2 };
        let v = verdict(sq, -10.0, ThreeHalves).unwrap();
        assert_eq!(v.verdict, SelfAdjoint);
        assert_abs_diff_eq!(v.interval.unwrap()[0], -(3.0 + 2.0 * 2.0f64.sqrt()), epsilon = 1e-12);
        let v = verdict(sq, -2.0, One).unwrap();
        assert_eq!(v.verdict, InsideCriticalInterval);
        assert_eq!(v.interval.unwrap(), polygon_intervals(FRAC_PI_2).unwrap().s1);
        // Closed intervals: endpoints are in.
        let endpoint = polygon_intervals(FRAC_PI_2).unwrap().s1[0];
        assert_eq!(verdict(sq, endpoint, One).unwrap().verdict, InsideCriticalInterval);
        assert_eq!(verdict(sq, -1.0, ThreeHalves).unwrap().verdict, InsideCriticalInterval);

        let sharp = Cone { alpha: PI / 4.0 };
        let blunt = Cone { alpha: 3.0 * PI / 4.0 };
        assert_eq!(verdict(sharp, -0.5, One).unwrap().verdict, SelfAdjoint);
        assert_eq!(verdict(sharp, -2.0, One).unwrap().verdict, Unknown);
        assert_eq!(verdict(blunt, -2.0, One).unwrap().verdict, SelfAdjoint);
        assert_eq!(verdict(blunt, -0.5, One).unwrap().verdict, Unknown);
        assert_eq!(verdict(sharp, -0.5, ThreeHalves).unwrap().verdict, Unknown);
        assert_eq!(verdict(Cone { alpha: FRAC_PI_2 }, -0.5, One).unwrap().verdict, Unknown);
        assert_eq!(verdict(sharp, -1.0, One).unwrap().verdict, Unknown);

        assert_eq!(verdict(SmoothVmo, 1.0, ThreeHalves).unwrap().verdict, ExcludedValue);
        assert_eq!(verdict(sq, 1.0, One).unwrap().theorem, "trivial-contrast");
        assert_eq!(verdict(SignDefinite, 1.0, One).unwrap().verdict, SelfAdjoint);

        assert!(matches!(verdict(SmoothVmo, 0.0, One), Err(Error::ExcludedContrast(_))));
        assert!(verdict(Cone { alpha: PI }, -0.5, One).is_err());
        assert!(verdict(Polygon { omega: PI }, -0.5, One).is_err());
    }

    #[test]
    fn verdict_json_has_the_fixed_schema() {
        let v = verdict(GeometryClass::Polygon { omega: FRAC_PI_2 }, -2.0, Regularity::One)
            .unwrap();
        let json = v.to_json();
        assert!(json.starts_with("{\"mu\":-2.0000000000000000e0,\"s\":1,\"class\":\"polygon\""));
        assert!(json.contains("\"verdict\":\"inside-critical-interval\""));
        assert!(json.contains("\"interval\":[-3.0000000000000"));
        assert!(json.ends_with("\"theorem\":\"polygon-corner\"}"));

        let v = verdict(GeometryClass::SignDefinite, 7.0, Regularity::ThreeHalves).unwrap();
        assert!(v.to_json().contains("\"s\":1.5"));
        assert!(v.to_json().contains("\"interval\":null"));
    }
}
