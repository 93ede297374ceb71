//! Real trigonometric interpolation of 2π-periodic samples.
//!
//! Closed curves supplied as uniform point samples are resampled and
//! differentiated through this series, which is spectrally accurate for
//! smooth curves.

/// Trigonometric interpolant of M uniform samples f(2πj/M), j = 0..M-1.
#[derive(Debug, Clone)]
pub struct TrigSeries {
    mean: f64,
    cos_coeff: Vec<f64>,
    sin_coeff: Vec<f64>,
    /// cos(Mt/2) coefficient, present only for even M.
    nyquist: Option<f64>,
}

impl TrigSeries {
    pub fn from_samples(samples: &[f64]) -> Self {
        let m = samples.len();
        assert!(m >= 4, "trigonometric interpolation needs at least 4 samples");
        let mf = m as f64;
        let kmax = if m % 2 == 0 { m / 2 - 1 } else { (m - 1) / 2 };
        let step = std::f64::consts::TAU / mf;

        let mean = samples.iter().sum::<f64>() / mf;
        let mut cos_coeff = vec![0.0; kmax];
        let mut sin_coeff = vec![0.0; kmax];
        for (k, (ck, sk)) in cos_coeff.iter_mut().zip(sin_coeff.iter_mut()).enumerate() {
            let kf = (k + 1) as f64;
            let (mut c, mut s) = (0.0, 0.0);
            for (j, f) in samples.iter().enumerate() {
                let (sin, cos) = (kf * step * j as f64).sin_cos();
                c += f * cos;
                s += f * sin;
            }
            *ck = 2.0 * c / mf;
            *sk = 2.0 * s / mf;
        }
        let nyquist = (m % 2 == 0).then(|| {
            samples
                .iter()
                .enumerate()
                .map(|(j, f)| if j % 2 == 0 { *f } else { -f })
                .sum::<f64>()
                / mf
        });

        TrigSeries { mean, cos_coeff, sin_coeff, nyquist }
    }

    /// Value and first two derivatives at parameter t.
    pub fn eval2(&self, t: f64) -> (f64, f64, f64) {
        let mut f = self.mean;
        let mut df = 0.0;
        let mut ddf = 0.0;
        for (k, (c, s)) in self.cos_coeff.iter().zip(&self.sin_coeff).enumerate() {
            let kf = (k + 1) as f64;
            let (sin, cos) = (kf * t).sin_cos();
            f += c * cos + s * sin;
            df += kf * (s * cos - c * sin);
            ddf += kf * kf * (-c * cos - s * sin);
        }
        if let Some(a) = self.nyquist {
            let half_m = (self.cos_coeff.len() + 1) as f64;
            let (sin, cos) = (half_m * t).sin_cos();
            f += a * cos;
            df -= a * half_m * sin;
            ddf -= a * half_m * half_m * cos;
        }
        (f, df, ddf)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval2(t).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    #[test]
    fn interpolates_samples_exactly() {
        let m = 16;
        let samples: Vec<f64> =
            (0..m).map(|j| (TAU * j as f64 / m as f64).sin() + 0.3).collect();
        let series = TrigSeries::from_samples(&samples);
        for (j, s) in samples.iter().enumerate() {
            assert_abs_diff_eq!(series.eval(TAU * j as f64 / m as f64), *s, epsilon = 1e-13);
        }
    }

    #[test]
    fn differentiates_band_limited_signals_exactly() {
        let m = 32;
        let f = |t: f64| (3.0 * t).cos() - 2.0 * (5.0 * t).sin();
        let df = |t: f64| -3.0 * (3.0 * t).sin() - 10.0 * (5.0 * t).cos();
        let ddf = |t: f64| -9.0 * (3.0 * t).cos() + 50.0 * (5.0 * t).sin();
        let samples: Vec<f64> = (0..m).map(|j| f(TAU * j as f64 / m as f64)).collect();
        let series = TrigSeries::from_samples(&samples);
        for t in [0.1, 1.7, 4.4] {
            let (v, dv, ddv) = series.eval2(t);
            assert_abs_diff_eq!(v, f(t), epsilon = 1e-12);
            assert_abs_diff_eq!(dv, df(t), epsilon = 1e-11);
            assert_abs_diff_eq!(ddv, ddf(t), epsilon = 1e-10);
        }
    }

    #[test]
    fn odd_sample_counts_are_supported() {
        let m = 15;
        let samples: Vec<f64> = (0..m).map(|j| (TAU * j as f64 / m as f64).cos()).collect();
        let series = TrigSeries::from_samples(&samples);
        assert_abs_diff_eq!(series.eval(0.5), (0.5f64).cos(), epsilon = 1e-12);
    }
}
