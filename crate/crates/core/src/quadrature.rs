//! Composite Gauss–Legendre quadrature for smooth, possibly highly
//! oscillatory integrands on bounded intervals.
//!
//! The integrand is split into panels carrying a fixed 16-point rule. The
//! panel count starts from a phase-variation estimate and is doubled until
//! successive composite sums agree.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Points per panel in the composite rule.
pub const PANEL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the Legendre
    /// three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates a real function over `[lo, hi]` with this rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = NeumaierSum::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(mid + half * x));
        }
        acc.total() * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// The shared 16-point panel rule.
pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
}

/// Compensated (Neumaier) summation; order-dependent but reproducible.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Difference between the last two refinements.
    pub error_estimate: f64,
    /// Node count of the accepted refinement.
    pub nodes: usize,
}

/// Settings for [`integrate_oscillatory`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSettings {
    /// Lower bound on the starting node count.
    pub min_nodes: usize,
    /// Successive refinements must agree to `tolerance` times the L¹ mass
    /// of the integrand (or absolutely, when the mass is below one).
    pub tolerance: f64,
    pub max_nodes: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            min_nodes: 16,
            tolerance: 1e-8,
            max_nodes: 1 << 25,
        }
    }
}

/// Node count needed to resolve a phase with the given total variation:
/// at least 20 nodes per `2π` of phase.
pub fn nodes_for_phase(variation: f64) -> usize {
    let v = if variation.is_finite() { variation.max(0.0) } else { 0.0 };
    (20.0 * (1.0 + v / (2.0 * PI))).ceil() as usize
}

/// Total variation of `phase` over `[lo, hi]`, estimated from `samples`
/// equispaced evaluations.
pub fn phase_variation<P: Fn(f64) -> f64>(phase: P, lo: f64, hi: f64, samples: usize) -> f64 {
    let samples = samples.max(2);
    let h = (hi - lo) / (samples - 1) as f64;
    let mut prev = phase(lo);
    let mut total = 0.0;
    for i in 1..samples {
        let cur = phase(lo + h * i as f64);
        total += (cur - prev).abs();
        prev = cur;
    }
    total
}

fn composite<F: Fn(f64) -> Complex64>(
    pieces: &[(f64, f64)],
    total_nodes: usize,
    f: &F,
) -> (Complex64, f64, usize) {
    let rule = panel_rule();
    let total_len: f64 = pieces.iter().map(|(a, b)| b - a).sum();
    let mut acc = ComplexSum::default();
    let mut mass = NeumaierSum::default();
    let mut used = 0;
    for &(lo, hi) in pieces {
        let share = ((hi - lo) / total_len * total_nodes as f64 / PANEL_ORDER as f64).ceil();
        let panels = (share as usize).max(1);
        let width = (hi - lo) / panels as f64;
        let half = 0.5 * width;
        for p in 0..panels {
            let mid = lo + width * (p as f64 + 0.5);
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                let v = f(mid + half * x) * (w * half);
                mass.add(v.norm());
                acc.add(v);
            }
        }
        used += panels * PANEL_ORDER;
    }
    (acc.total(), mass.total(), used)
}

/// Adaptive composite Gauss–Legendre quadrature of a complex integrand over
/// a union of intervals (`pieces`, typically split at non-smooth points).
///
/// Starts from `max(initial_nodes, settings.min_nodes)` nodes and doubles
/// until two consecutive refinements each agree with their predecessor;
/// reports [`LabError::NonConvergence`] once `settings.max_nodes` would be exceeded.
pub fn integrate_oscillatory<F: Fn(f64) -> Complex64>(
    pieces: &[(f64, f64)],
    initial_nodes: usize,
    settings: &QuadratureSettings,
    f: F,
) -> Result<QuadratureResult> {
    let pieces: Vec<(f64, f64)> = pieces.iter().copied().filter(|(a, b)| b > a).collect();
    if pieces.is_empty() {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            nodes: 0,
        });
    }
    let mut nodes = initial_nodes.max(settings.min_nodes).max(PANEL_ORDER);
    let (mut prev, _, mut used) = composite(&pieces, nodes, &f);
    let mut settled = 0;
    loop {
        nodes = used * 2;
        if nodes > settings.max_nodes {
            return Err(LabError::NonConvergence {
                nodes: used,
                last_change: f64::NAN,
            });
        }
        let (cur, mass, now_used) = composite(&pieces, nodes, &f);
        let change = (cur - prev).norm();
        // two agreeing refinements in a row guard against lucky coincidences
        if change <= settings.tolerance * mass.max(1.0) {
            settled += 1;
        } else {
            settled = 0;
        }
        if settled == 2 {
            return Ok(QuadratureResult {
                value: cur,
                error_estimate: change,
                nodes: now_used,
            });
        }
        if now_used * 2 > settings.max_nodes {
            return Err(LabError::NonConvergence {
                nodes: now_used,
                last_change: change,
            });
        }
        prev = cur;
        used = now_used;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        for k in 0..=9 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_relative_eq!(rule.integrate(-1.0, 1.0, |x| x.powi(k)), exact, epsilon = 1e-14);
        }
        let w: f64 = panel_rule().weights().iter().sum();
        assert_relative_eq!(w, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn oscillatory_integral_matches_closed_form() {
        // ∫_0^1 e^{iωx} dx = (e^{iω} - 1)/(iω)
        let omega = 2000.0;
        let exact = (Complex64::new(0.0, omega).exp() - 1.0) / Complex64::new(0.0, omega);
        let n = nodes_for_phase(omega);
        let res = integrate_oscillatory(&[(0.0, 1.0)], n, &QuadratureSettings::default(), |x| {
            Complex64::new(0.0, omega * x).exp()
        })
        .unwrap();
        assert!((res.value - exact).norm() < 1e-12, "{:?} vs {exact}", res.value);
    }

    #[test]
    fn budget_is_reported() {
        let settings = QuadratureSettings {
            min_nodes: 16,
            tolerance: 1e-14,
            max_nodes: 64,
        };
        let err = integrate_oscillatory(&[(0.0, 1.0)], 16, &settings, |x| {
            Complex64::new(0.0, 1e5 * x * x).exp()
        })
        .unwrap_err();
        assert!(matches!(err, LabError::NonConvergence { .. }));
    }

    #[test]
    fn phase_variation_of_linear_phase() {
        assert_relative_eq!(phase_variation(|x| 3.0 * x, -1.0, 1.0, 33), 6.0, epsilon = 1e-12);
    }
}
