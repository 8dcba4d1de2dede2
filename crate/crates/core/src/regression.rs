//! Ordinary least squares on a line, used for log-log exponent fits.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for two points).
    pub slope_stderr: f64,
    /// Root mean square of the residuals.
    pub residual_rms: f64,
    pub points: usize,
}

impl LineFit {
    /// Two-sided confidence interval for the slope at `level` (e.g. 0.95).
    pub fn slope_interval(&self, level: f64) -> (f64, f64) {
        if self.points <= 2 || self.slope_stderr == 0.0 {
            return (self.slope, self.slope);
        }
        let dof = (self.points - 2) as f64;
        let q = StudentsT::new(0.0, 1.0, dof)
            .map(|d| d.inverse_cdf(0.5 + 0.5 * level))
            .unwrap_or(f64::INFINITY);
        let half = q * self.slope_stderr;
        (self.slope - half, self.slope + half)
    }
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(LabError::InvalidInput("x and y lengths differ".into()));
    }
    let n = xs.len();
    if n < 2 {
        return Err(LabError::InvalidInput("a line fit needs two points".into()));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(LabError::InvalidInput("non-finite fit data".into()));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LabError::InvalidInput("degenerate abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = if n > 2 {
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
        residual_rms: (sse / nf).sqrt(),
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert_relative_eq!(f.slope, 2.0, epsilon = 1e-14);
        assert_relative_eq!(f.intercept, -1.0, epsilon = 1e-14);
        assert!(f.residual_rms < 1e-14);
        let (lo, hi) = f.slope_interval(0.95);
        assert!(lo <= 2.0 && hi >= 2.0);
    }

    #[test]
    fn noisy_interval_brackets_slope() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 0.5 * x + if i % 2 == 0 { 0.1 } else { -0.1 })
            .collect();
        let f = fit_line(&xs, &ys).unwrap();
        let (lo, hi) = f.slope_interval(0.95);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(hi - lo < 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[0.0, 2.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[0.0]).is_err());
    }
}
