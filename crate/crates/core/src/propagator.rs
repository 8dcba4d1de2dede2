//! The multiplier `S^a: f̂(ξ) ↦ e^{it|ξ|^a} f̂(ξ)`, its frequency-localised
//! version, a quadrature oracle and the `TT*` kernel probe.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, LabError, Result};
use crate::quadrature::{
    integrate_oscillatory, nodes_for_phase, phase_variation, QuadratureResult, QuadratureSettings,
};
use crate::spectral::SpectralFunction;

/// Smooth even cutoff supported in `1/2 ≤ |ξ| ≤ 1`, equal to one on
/// `[0.55, 0.95]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandCutoff {
    inner: f64,
    outer: f64,
    ramp: f64,
    tag: String,
}

impl Default for BandCutoff {
    fn default() -> Self {
        Self::standard()
    }
}

impl BandCutoff {
    pub fn standard() -> Self {
        Self {
            inner: 0.5,
            outer: 1.0,
            ramp: 0.05,
            tag: "smooth-step exp(-1/(1-u^2)), flat on [0.55, 0.95]".into(),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Support `[inner, outer]` of `|ξ|`.
    pub fn support(&self) -> (f64, f64) {
        (self.inner, self.outer)
    }

    /// Interval of `|ξ|` on which the cutoff is identically one.
    pub fn flat_region(&self) -> (f64, f64) {
        (self.inner + self.ramp, self.outer - self.ramp)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= self.inner || a >= self.outer {
            return 0.0;
        }
        if a < self.inner + self.ramp {
            smooth_step((a - self.inner) / self.ramp)
        } else if a > self.outer - self.ramp {
            smooth_step((self.outer - a) / self.ramp)
        } else {
            1.0
        }
    }
}

fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// `C^∞` step from 0 at `v = 0` to 1 at `v = 1`.
pub(crate) fn smooth_step(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    if v >= 1.0 {
        return 1.0;
    }
    let up = bump(1.0 - v);
    up / (up + bump(v))
}

/// `(1 - u)^a - 1` without cancellation for small `u`.
pub fn stable_power_difference(u: f64, a: f64) -> f64 {
    (a * (-u).ln_1p()).exp_m1()
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(domain("t", format!("t = {t} must be finite and nonnegative")));
    }
    Ok(())
}

fn check_a(a: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(domain("a", format!("a = {a} must be positive")));
    }
    Ok(())
}

/// `|ξ_m|^a` in storage order.
pub fn dispersion(f: &SpectralFunction, a: f64) -> Vec<f64> {
    f.grid()
        .frequencies()
        .into_iter()
        .map(|xi| xi.abs().powf(a))
        .collect()
}

/// `e^{it|ξ|^a}` applied coefficient-wise.
pub fn evolve(f: &SpectralFunction, t: f64, a: f64) -> Result<SpectralFunction> {
    check_time(t)?;
    check_a(a)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(evolve_with(f, &dispersion(f, a), t))
}

/// [`evolve`] with a precomputed dispersion table.
pub fn evolve_with(f: &SpectralFunction, disp: &[f64], t: f64) -> SpectralFunction {
    let coeffs = f
        .coeffs()
        .iter()
        .zip(disp)
        .map(|(c, w)| c * Complex64::from_polar(1.0, t * w))
        .collect();
    f.with_coeffs(coeffs)
}

/// `χ(ξ/λ) e^{it|ξ|^a}` applied coefficient-wise.
pub fn evolve_band(
    f: &SpectralFunction,
    t: f64,
    a: f64,
    lambda: f64,
    chi: &BandCutoff,
) -> Result<SpectralFunction> {
    check_time(t)?;
    check_a(a)?;
    if !(lambda.is_finite() && lambda >= 1.0) {
        return Err(domain("lambda", format!("lambda = {lambda} must be >= 1")));
    }
    let grid = *f.grid();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let xi = grid.frequency(i);
            let w = chi.eval(xi / lambda);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::from_polar(w, t * xi.abs().powf(a))
            }
        })
        .collect();
    Ok(f.with_coeffs(coeffs))
}

/// `S^1 f(x, t)` for one-sided spectra: a translation by `t` (spectrum on
/// `ξ ≤ 0`, giving `f(x - t)`) or by `-t` (spectrum on `ξ ≥ 0`).
pub fn translate_a1(f: &SpectralFunction, t: f64) -> Result<SpectralFunction> {
    check_time(t)?;
    let grid = *f.grid();
    let mut neg = false;
    let mut pos = false;
    for (i, c) in f.coeffs().iter().enumerate() {
        if c.norm_sqr() > 0.0 {
            let m = grid.multiplier(i);
            neg |= m < 0;
            pos |= m > 0;
        }
    }
    if neg && pos {
        return Err(LabError::Precondition(
            "translate_a1 needs a one-sided spectrum".into(),
        ));
    }
    let shift = if pos { -t } else { t };
    let step = grid.freq_step();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = grid.multiplier(i) as f64;
            c * Complex64::from_polar(1.0, -shift * m * step)
        })
        .collect();
    Ok(f.with_coeffs(coeffs))
}

fn merge_pieces(support: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = support.iter().copied().filter(|(a, b)| b > a).collect();
    v.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    // |ξ|^a is not smooth at the origin
    let mut split = Vec::with_capacity(out.len() + 1);
    for (a, b) in out {
        if a < 0.0 && b > 0.0 {
            split.push((a, 0.0));
            split.push((0.0, b));
        } else {
            split.push((a, b));
        }
    }
    split
}

/// `∫ e^{i(xξ + t|ξ|^a)} f̂(ξ) dξ/2π` by adaptive Gauss–Legendre over the
/// given support intervals (merged, and split at `ξ = 0`).
pub fn evaluate_direct<F: Fn(f64) -> Complex64>(
    spectrum: F,
    support: &[(f64, f64)],
    x: f64,
    t: f64,
    a: f64,
    nodes: usize,
) -> Result<QuadratureResult> {
    check_time(t)?;
    check_a(a)?;
    if nodes < 16 {
        return Err(LabError::InvalidInput(format!("nodes = {nodes} < 16")));
    }
    let pieces = merge_pieces(support);
    let phase = |xi: f64| x * xi + t * xi.abs().powf(a);
    let variation: f64 = pieces
        .iter()
        .map(|&(lo, hi)| phase_variation(phase, lo, hi, 257))
        .sum();
    let start = nodes.max(nodes_for_phase(variation));
    let mut res = integrate_oscillatory(&pieces, start, &QuadratureSettings::default(), |xi| {
        spectrum(xi) * Complex64::from_polar(1.0, phase(xi))
    })?;
    res.value /= 2.0 * PI;
    res.error_estimate /= 2.0 * PI;
    Ok(res)
}

/// Point pair for the kernel of `T_λ T_λ*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelProbe {
    pub lambda: f64,
    pub a: f64,
    pub t_of_x: f64,
    pub t_of_y: f64,
    pub x: f64,
    pub y: f64,
}

impl KernelProbe {
    pub fn new(lambda: f64, a: f64, t_of_x: f64, t_of_y: f64, x: f64, y: f64) -> Result<Self> {
        check_a(a)?;
        if !(lambda.is_finite() && lambda >= 1.0) {
            return Err(domain("lambda", format!("lambda = {lambda} must be >= 1")));
        }
        for (name, t) in [("t_of_x", t_of_x), ("t_of_y", t_of_y)] {
            if !(0.0..=1.0).contains(&t) {
                return Err(domain(name, format!("{t} not in [0, 1]")));
            }
        }
        if !(x.is_finite() && y.is_finite()) {
            return Err(LabError::InvalidInput("non-finite x or y".into()));
        }
        Ok(Self {
            lambda,
            a,
            t_of_x,
            t_of_y,
            x,
            y,
        })
    }
}

/// `∫ e^{i[λ(x-y)ξ + λ^a(t(x)-t(y))|ξ|^a]} χ(ξ)² dξ/2π`.
pub fn ttstar_kernel(
    probe: &KernelProbe,
    chi: &BandCutoff,
    nodes: usize,
) -> Result<QuadratureResult> {
    let (lo, hi) = chi.support();
    let p = *probe;
    let dx = p.lambda * (p.x - p.y);
    let dt = p.lambda.powf(p.a) * (p.t_of_x - p.t_of_y);
    let spectrum = |xi: f64| {
        let w = chi.eval(xi);
        Complex64::new(w * w, 0.0)
    };
    let phase = |xi: f64| dx * xi + dt * xi.abs().powf(p.a);
    // the cutoff ramps are narrow; give them their own pieces
    let (f0, f1) = chi.flat_region();
    let mut pieces = Vec::new();
    for (u, v) in [(lo, f0), (f0, f1), (f1, hi)] {
        pieces.push((u, v));
        pieces.push((-v, -u));
    }
    pieces.sort_by(|p, q| p.0.total_cmp(&q.0));
    let variation: f64 = pieces
        .iter()
        .map(|&(u, v)| phase_variation(phase, u, v, 129))
        .sum();
    // far-apart pairs carry millions of turns; refinement checks accuracy
    let start = nodes.max(16).max((4.0 * (1.0 + variation / (2.0 * PI))).ceil() as usize);
    let settings = QuadratureSettings {
        max_nodes: 1 << 28,
        ..QuadratureSettings::default()
    };
    let mut res = integrate_oscillatory(&pieces, start, &settings, |xi| {
        spectrum(xi) * Complex64::from_polar(1.0, phase(xi))
    })?;
    res.value /= 2.0 * PI;
    res.error_estimate /= 2.0 * PI;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cutoff_support_and_bounds() {
        let chi = BandCutoff::standard();
        for xi in [0.0, 0.3, 0.5 - 1e-12, 1.0 + 1e-12, 1.7, -0.2, -1.5] {
            assert_eq!(chi.eval(xi), 0.0);
        }
        for xi in [0.55, 0.75, 0.95, -0.6, -0.9] {
            assert_eq!(chi.eval(xi), 1.0);
        }
        for i in 0..=1000 {
            let xi = -1.2 + 2.4 * i as f64 / 1000.0;
            let v = chi.eval(xi);
            assert!((0.0..=1.0).contains(&v));
            assert_eq!(v, chi.eval(-xi));
        }
        assert!(chi.eval(0.525) > 0.0 && chi.eval(0.525) < 1.0);
    }

    #[test]
    fn stable_power_difference_matches_naive() {
        for (u, a) in [(0.3, 2.0), (1e-3, 1.5), (0.1, 0.5)] {
            let naive: f64 = (1.0_f64 - u).powf(a) - 1.0;
            assert_relative_eq!(stable_power_difference(u, a), naive, max_relative = 1e-12);
        }
        // tiny u: first-order term -a u
        let v = stable_power_difference(1e-12, 2.0);
        assert_relative_eq!(v, -2e-12, max_relative = 1e-9);
    }

    #[test]
    fn evolve_identity_and_unitarity() {
        let g = build_grid(256, 20.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = SpectralFunction::random(g, 30.0, 0.0, &mut rng);
        assert_eq!(evolve(&f, 0.0, 2.0).unwrap(), f);
        let u = evolve(&f, 0.3, 2.0).unwrap();
        assert_relative_eq!(u.l2_norm(), f.l2_norm(), max_relative = 1e-12);
        assert!(evolve(&f, -0.1, 2.0).is_err());
        assert!(evolve(&f, 0.1, 0.0).is_err());
    }

    #[test]
    fn evolve_matches_quadrature_for_band_limited_input() {
        // smooth compact bump spectrum sampled on a fine grid
        let g = build_grid(2048, 200.0).unwrap();
        let spec = |xi: f64| {
            let u = (xi - 3.0) / 1.5;
            Complex64::new(bump(u), 0.0)
        };
        let f = SpectralFunction::from_spectrum(g, spec).unwrap();
        let u = evolve(&f, 0.1, 1.5).unwrap();
        let samples = u.synthesize();
        for j in (0..2048).step_by(64) {
            let x = g.centred_x(j);
            let direct = evaluate_direct(spec, &[(1.5, 4.5)], x, 0.1, 1.5, 64).unwrap().value;
            assert!((direct - samples[j]).norm() < 1e-6, "j = {j}");
        }
    }

    #[test]
    fn evaluate_direct_without_dispersion() {
        let spec = |xi: f64| Complex64::new(bump(xi), 0.0);
        let x = 1.3;
        let v = evaluate_direct(spec, &[(-1.0, 1.0)], x, 0.0, 2.0, 16).unwrap().value;
        let rule = crate::quadrature::GaussLegendre::new(200);
        let re = rule.integrate(-1.0, 1.0, |xi| bump(xi) * (x * xi).cos()) / (2.0 * PI);
        let im = rule.integrate(-1.0, 1.0, |xi| bump(xi) * (x * xi).sin()) / (2.0 * PI);
        assert!((v - Complex64::new(re, im)).norm() < 1e-10);
        assert!(evaluate_direct(spec, &[(-1.0, 1.0)], x, 0.0, 2.0, 8).is_err());
    }

    #[test]
    fn evolve_band_examples() {
        let g = build_grid(256, 2.0 * PI).unwrap();
        let chi = BandCutoff::standard();
        let low = SpectralFunction::single_mode(g, 3, Complex64::new(1.0, 0.0)).unwrap();
        let out = evolve_band(&low, 0.4, 2.0, 32.0, &chi).unwrap();
        assert!(out.coeffs().iter().all(|c| c.norm() == 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = SpectralFunction::random(g, 120.0, 0.0, &mut rng);
        let cut = evolve_band(&f, 0.0, 2.0, 64.0, &chi).unwrap();
        for (i, (c, o)) in f.coeffs().iter().zip(cut.coeffs()).enumerate() {
            let w = chi.eval(g.frequency(i) / 64.0);
            assert!((c * w - o).norm() <= 1e-15 * c.norm().max(1.0));
        }
        let ev = evolve_band(&f, 0.7, 2.0, 64.0, &chi).unwrap();
        assert!(ev.l2_norm() <= f.l2_norm());
        assert!(evolve_band(&f, 0.7, 2.0, 0.5, &chi).is_err());
    }

    #[test]
    fn translate_examples() {
        let g = build_grid(64, 2.0 * PI).unwrap();
        let f = SpectralFunction::single_mode(g, -5, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(translate_a1(&f, 0.0).unwrap().coeffs(), f.coeffs());
        let moved = translate_a1(&f, 0.2).unwrap();
        let idx = g.index_of(-5).unwrap();
        assert!((moved.coeffs()[idx] - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);
        let s = moved.synthesize();
        for (j, v) in s.iter().enumerate() {
            let x = g.x(j);
            let expected = Complex64::from_polar(1.0, -5.0 * (x - 0.2)) / g.period();
            assert!((v - expected).norm() < 1e-14);
        }
        let two = SpectralFunction::new(
            g,
            (0..64)
                .map(|i| Complex64::new(if i == 1 || i == 63 { 1.0 } else { 0.0 }, 0.0))
                .collect(),
        )
        .unwrap();
        assert!(matches!(translate_a1(&two, 0.1), Err(LabError::Precondition(_))));
    }

    #[test]
    fn kernel_at_coincident_points() {
        let chi = BandCutoff::standard();
        let p = KernelProbe::new(64.0, 2.0, 0.3, 0.3, 0.1, 0.1).unwrap();
        let k = ttstar_kernel(&p, &chi, 16).unwrap().value;
        let rule = crate::quadrature::GaussLegendre::new(200);
        let ramps = rule.integrate(0.5, 0.55, |xi| chi.eval(xi).powi(2))
            + rule.integrate(0.95, 1.0, |xi| chi.eval(xi).powi(2));
        let mass = 2.0 * (ramps + 0.4) / (2.0 * PI);
        assert!(k.im.abs() < 1e-12);
        assert_relative_eq!(k.re, mass, max_relative = 1e-8);
        assert!(KernelProbe::new(0.5, 2.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }
}
