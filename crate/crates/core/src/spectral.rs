//! Band-limited functions on a periodic grid.
//!
//! Conventions used throughout the crate:
//!
//! * the torus `[0, L)` carries `N` samples `x_j = j·L/N`;
//! * coefficient `c_m` approximates the continuum transform `f̂(ξ_m)` at
//!   `ξ_m = m·Δξ`, `Δξ = 2π/L`, `m ∈ [-N/2, N/2)`, stored in FFT order;
//! * synthesis is the Riemann sum of `f(x) = ∫ e^{ixξ} f̂(ξ) dξ/2π`, so
//!   `f(x_j) = (1/L) Σ_m c_m e^{2πi jm/N}`;
//! * frequency-side norms carry the measure `dξ/2π`, which makes the
//!   `L²` norm agree with the physical one (Plancherel) and `H^0 = L²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, LabError, Result};

/// Uniform periodic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    period: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, period: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!(
                "n_points = {n_points} is not a power of two >= 8"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(LabError::InvalidGrid(format!(
                "period = {period} must be positive and finite"
            )));
        }
        Ok(Self { n_points, period })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `Δξ = 2π/L`.
    pub fn freq_step(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Spatial spacing `L/N`.
    pub fn dx(&self) -> f64 {
        self.period / self.n_points as f64
    }

    /// Integer multiplier `m` of the coefficient stored at `index`.
    pub fn multiplier(&self, index: usize) -> i64 {
        let n = self.n_points as i64;
        let k = index as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Storage index of multiplier `m`, if representable.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let n = self.n_points as i64;
        if m < -n / 2 || m >= n / 2 {
            return None;
        }
        Some(if m >= 0 { m as usize } else { (m + n) as usize })
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.multiplier(index) as f64 * self.freq_step()
    }

    /// Frequencies in storage order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.frequency(i)).collect()
    }

    /// Largest representable `|ξ|`.
    pub fn max_frequency(&self) -> f64 {
        self.n_points as f64 / 2.0 * self.freq_step()
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Sample positions `x_j`.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Position of sample `j` in the centred window `[-L/2, L/2)`.
    pub fn centred_x(&self, j: usize) -> f64 {
        let x = self.x(j);
        if j >= self.n_points / 2 {
            x - self.period
        } else {
            x
        }
    }
}

/// Builds and validates a grid.
pub fn build_grid(n_points: usize, period: f64) -> Result<GridSpec> {
    GridSpec::new(n_points, period)
}

/// Cached FFT plans for one grid size.
pub struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// In-place `Σ_k X_k e^{+2πi jk/n}` (unnormalised).
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// [`FftPair::inverse`] reusing a caller-owned scratch buffer.
    pub fn inverse_with_scratch(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let need = self.inverse.get_inplace_scratch_len();
        if scratch.len() < need {
            scratch.resize(need, Complex64::new(0.0, 0.0));
        }
        self.inverse.process_with_scratch(buf, &mut scratch[..need]);
    }

    /// In-place `Σ_j x_j e^{-2πi jk/n}` (unnormalised).
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }
}

/// A band-limited function represented by its transform samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_points() {
            return Err(LabError::InvalidInput(format!(
                "{} coefficients for a grid of {} points",
                coeffs.len(),
                grid.n_points()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(LabError::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    /// Samples `spectrum(ξ_m)` at every grid frequency.
    pub fn from_spectrum<F: Fn(f64) -> Complex64>(grid: GridSpec, spectrum: F) -> Result<Self> {
        let coeffs = (0..grid.n_points())
            .map(|i| spectrum(grid.frequency(i)))
            .collect();
        Self::new(grid, coeffs)
    }

    /// Single mode `c·δ(m)`.
    pub fn single_mode(grid: GridSpec, m: i64, value: Complex64) -> Result<Self> {
        let idx = grid
            .index_of(m)
            .ok_or_else(|| LabError::InvalidInput(format!("multiplier {m} not representable")))?;
        let mut f = Self::zeros(grid);
        f.coeffs[idx] = value;
        Ok(f)
    }

    /// Random coefficients: complex Gaussians damped by `(1+ξ²)^{-decay/2}`
    /// on `|ξ| ≤ max_freq`, zero beyond.
    pub fn random<R: Rng + ?Sized>(grid: GridSpec, max_freq: f64, decay: f64, rng: &mut R) -> Self {
        let coeffs = (0..grid.n_points())
            .map(|i| {
                let xi = grid.frequency(i);
                let (re, im) = gaussian_pair(rng);
                if xi.abs() <= max_freq {
                    Complex64::new(re, im) * (1.0 + xi * xi).powf(-0.5 * decay)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub(crate) fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), self.coeffs.len());
        Self {
            grid: self.grid,
            coeffs,
        }
    }

    /// Physical samples `f(x_j)`.
    pub fn synthesize(&self) -> Vec<Complex64> {
        self.synthesize_with(&FftPair::new(self.grid.n_points()))
    }

    pub fn synthesize_with(&self, fft: &FftPair) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        fft.inverse(&mut buf);
        let scale = 1.0 / self.grid.period();
        buf.iter_mut().for_each(|v| *v *= scale);
        buf
    }

    /// Inverse of [`SpectralFunction::synthesize`].
    pub fn analyze(grid: GridSpec, samples: &[Complex64]) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(LabError::InvalidInput(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n_points()
            )));
        }
        let mut buf = samples.to_vec();
        FftPair::new(grid.n_points()).forward(&mut buf);
        let scale = grid.dx();
        buf.iter_mut().for_each(|v| *v *= scale);
        Self::new(grid, buf)
    }

    /// Direct evaluation of the trigonometric sum at an arbitrary `x`.
    pub fn eval_at(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != Complex64::new(0.0, 0.0) {
                acc += c * Complex64::from_polar(1.0, x * self.grid.frequency(i));
            }
        }
        acc / self.grid.period()
    }

    /// `L²` norm on the frequency side, `(Σ |c_m|² Δξ/2π)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (s / self.grid.period()).sqrt()
    }

    /// `(Σ_m (1+ξ_m²)^s |c_m|² Δξ/2π)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let xi = self.grid.frequency(i);
            acc += (1.0 + xi * xi).powf(s) * c.norm_sqr();
        }
        (acc / self.grid.period()).sqrt()
    }

    /// `‖P_k f‖₂` for every band up to the grid's top band.
    pub fn band_norms(&self) -> Vec<f64> {
        let top = band_index(self.grid.max_frequency());
        let mut energy = vec![0.0; top + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = band_index(self.grid.frequency(i));
            energy[k] += c.norm_sqr();
        }
        energy
            .into_iter()
            .map(|e| (e / self.grid.period()).sqrt())
            .collect()
    }

    /// `Σ_k 2^{ks} ‖P_k f‖₂`.
    pub fn besov_norm_21(&self, s: f64) -> f64 {
        self.band_norms()
            .iter()
            .enumerate()
            .map(|(k, n)| (k as f64 * s).exp2() * n)
            .sum()
    }

    /// Sharp projection onto band `k`.
    pub fn band_project(&self, k: usize) -> Self {
        self.band_range_project(k, k + 1)
    }

    /// Projection onto bands `k_lo <= k < k_hi`.
    pub fn band_range_project(&self, k_lo: usize, k_hi: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = band_index(self.grid.frequency(i));
                if k >= k_lo && k < k_hi {
                    *c
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    /// Largest `|ξ|` carrying a nonzero coefficient.
    pub fn top_frequency(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(i, _)| self.grid.frequency(i).abs())
            .fold(0.0, f64::max)
    }
}

/// Dyadic band of a frequency: band 0 is `|ξ| ≤ 1`, band `k ≥ 1` is
/// `2^{k-1} < |ξ| ≤ 2^k`. Every frequency lies in exactly one band, and a
/// function supported in `[-2^K, 2^K]` is the sum of bands `0..=K`.
pub fn band_index(xi: f64) -> usize {
    let a = xi.abs();
    if a <= 1.0 {
        return 0;
    }
    let mut k = a.log2().ceil().max(1.0) as i32;
    while k > 1 && a <= f64::powi(2.0, k - 1) {
        k -= 1;
    }
    while a > f64::powi(2.0, k) {
        k += 1;
    }
    k as usize
}

/// Smoothness and dispersion exponents for counterexample use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex {
    pub s: f64,
    pub a: f64,
}

impl SobolevIndex {
    /// Requires `a > 0` and `0 < s < a/4`.
    pub fn new(s: f64, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(domain("a", format!("a = {a} must be positive")));
        }
        if !(s > 0.0 && s < a / 4.0) {
            return Err(domain("s", format!("s = {s} must satisfy 0 < s < a/4 = {}", a / 4.0)));
        }
        Ok(Self { s, a })
    }

    /// The translation-like case `a = 1` follows its own exponent maps.
    pub fn is_wave_case(&self) -> bool {
        (self.a - 1.0).abs() < 1e-12
    }
}

/// `‖f‖₂` of physical samples, `(Σ |f_j|² L/N)^{1/2}`.
pub fn l2_norm_samples(grid: &GridSpec, samples: &[Complex64]) -> f64 {
    let s: f64 = samples.iter().map(|v| v.norm_sqr()).sum();
    (s * grid.dx()).sqrt()
}

pub(crate) fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // Box–Muller.
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * PI * u2;
    (r * th.cos(), r * th.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn build_grid_examples() {
        let g = build_grid(1024, 2.0 * PI).unwrap();
        assert_relative_eq!(g.freq_step(), 1.0, epsilon = 1e-15);
        let g = build_grid(4096, 64.0 * PI).unwrap();
        assert_relative_eq!(g.freq_step(), 1.0 / 32.0, epsilon = 1e-15);
        assert!(matches!(build_grid(1000, 1.0), Err(LabError::InvalidGrid(_))));
        assert!(build_grid(4, 1.0).is_err());
        assert!(build_grid(16, 0.0).is_err());
        assert!(build_grid(16, -1.0).is_err());
    }

    #[test]
    fn multiplier_range_and_round_trip() {
        let g = build_grid(8, 1.0).unwrap();
        let ms: Vec<i64> = (0..8).map(|i| g.multiplier(i)).collect();
        assert_eq!(ms, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for i in 0..8 {
            assert_eq!(g.index_of(g.multiplier(i)), Some(i));
        }
        assert_eq!(g.index_of(4), None);
    }

    #[test]
    fn synthesis_examples() {
        let g = build_grid(64, 3.0).unwrap();
        let zero = SpectralFunction::zeros(g);
        assert!(zero.synthesize().iter().all(|v| v.norm() == 0.0));

        let one = SpectralFunction::single_mode(g, 0, Complex64::new(1.0, 0.0)).unwrap();
        for v in one.synthesize() {
            assert_relative_eq!(v.re, 1.0 / 3.0, epsilon = 1e-15);
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn random_round_trip_and_parseval() {
        let g = build_grid(256, 17.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = SpectralFunction::random(g, g.max_frequency(), 0.0, &mut rng);
        let samples = f.synthesize();
        let back = SpectralFunction::analyze(g, &samples).unwrap();
        let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let err = f
            .coeffs()
            .iter()
            .zip(back.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12 * scale, "round trip error {err}");
        let phys = l2_norm_samples(&g, &samples);
        assert_relative_eq!(phys, f.l2_norm(), max_relative = 1e-12);
    }

    #[test]
    fn eval_at_matches_synthesis() {
        let g = build_grid(32, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = SpectralFunction::random(g, 4.0, 0.5, &mut rng);
        let s = f.synthesize();
        for j in [0, 5, 17, 31] {
            assert!((f.eval_at(g.x(j)) - s[j]).norm() < 1e-13);
        }
    }

    #[test]
    fn sobolev_examples() {
        let g = build_grid(64, 2.0 * PI).unwrap();
        assert_eq!(SpectralFunction::zeros(g).sobolev_norm(0.3), 0.0);
        let f = SpectralFunction::single_mode(g, 0, Complex64::new(2.0, -1.0)).unwrap();
        for s in [-1.0, 0.0, 0.25, 3.0] {
            assert_relative_eq!(f.sobolev_norm(s), f.l2_norm(), max_relative = 1e-15);
        }
    }

    #[test]
    fn band_index_boundaries() {
        assert_eq!(band_index(0.0), 0);
        assert_eq!(band_index(0.5), 0);
        assert_eq!(band_index(1.0), 0);
        assert_eq!(band_index(1.0001), 1);
        assert_eq!(band_index(2.0), 1);
        assert_eq!(band_index(-3.0), 2);
        assert_eq!(band_index(4.0), 2);
        assert_eq!(band_index(4.0 + 1e-12), 3);
        assert_eq!(band_index(1024.0), 10);
    }

    #[test]
    fn band_projection_examples() {
        let g = build_grid(64, 2.0 * PI).unwrap();
        let f = SpectralFunction::single_mode(g, 3, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(f.band_project(2), f);
        assert_eq!(f.band_project(1), SpectralFunction::zeros(g));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = SpectralFunction::random(g, 32.0, 0.0, &mut rng);
        let mut sum = vec![Complex64::new(0.0, 0.0); 64];
        for k in 0..=5 {
            for (acc, c) in sum.iter_mut().zip(f.band_project(k).coeffs()) {
                *acc += c;
            }
        }
        let err = sum
            .iter()
            .zip(f.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-14);
    }

    #[test]
    fn besov_examples() {
        let g = build_grid(128, 2.0 * PI).unwrap();
        assert_eq!(SpectralFunction::zeros(g).besov_norm_21(0.5), 0.0);

        // single band k0 = 3 (frequencies 5..=8)
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = SpectralFunction::random(g, 64.0, 0.0, &mut rng).band_project(3);
        assert_relative_eq!(f.besov_norm_21(0.7), 0.7f64.mul_add(3.0, 0.0).exp2() * f.l2_norm(), max_relative = 1e-14);

        // two bands: brute force over bands
        let two = SpectralFunction::random(g, 64.0, 0.0, &mut rng).band_range_project(2, 3);
        let other = SpectralFunction::random(g, 64.0, 0.0, &mut rng).band_project(5);
        let coeffs: Vec<_> = two.coeffs().iter().zip(other.coeffs()).map(|(a, b)| a + b).collect();
        let h = SpectralFunction::new(g, coeffs).unwrap();
        let s = 0.4;
        let brute: f64 = (0..=6)
            .map(|k| (k as f64 * s).exp2() * h.band_project(k).l2_norm())
            .sum();
        let expected = (2.0 * s).exp2() * two.l2_norm() + (5.0 * s).exp2() * other.l2_norm();
        assert_relative_eq!(h.besov_norm_21(s), brute, max_relative = 1e-14);
        assert_relative_eq!(h.besov_norm_21(s), expected, max_relative = 1e-14);
    }

    #[test]
    fn sobolev_index_validation() {
        assert!(SobolevIndex::new(0.2, 2.0).is_ok());
        assert!(SobolevIndex::new(0.5, 2.0).is_err());
        assert!(SobolevIndex::new(0.0, 2.0).is_err());
        assert!(SobolevIndex::new(0.1, 1.0).unwrap().is_wave_case());
    }
}
