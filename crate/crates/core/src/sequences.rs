//! Decreasing time sequences, their weak Lorentz quasinorms, dyadic
//! buckets and the exponent maps between `s`, `r` and `a`.
//!
//! Indices are 0-based: `values()[i]` is the time the mathematical
//! literature calls `t_{i+1}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{domain, LabError, Result};
use crate::regression::fit_line;

/// How a sequence was produced. Generated kinds know their closed form and
/// can be evaluated past the stored truncation.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceKind {
    /// `t_n = n^{-γ}`.
    Power { gamma: f64 },
    /// `n^{-γ} log(n+1)` from its maximum on, divided by that maximum.
    PowerLog { gamma: f64, offset: u64, scale: f64 },
    /// `t_n = q^n`.
    Geometric { q: f64 },
    Custom,
}

impl SequenceKind {
    /// Closed-form time at 0-based index `i`.
    pub fn closed_term(&self, i: u64) -> Option<f64> {
        let n = i as f64 + 1.0;
        match *self {
            SequenceKind::Power { gamma } => Some(n.powf(-gamma)),
            SequenceKind::PowerLog {
                gamma,
                offset,
                scale,
            } => {
                let m = n + offset as f64;
                Some(m.powf(-gamma) * m.ln_1p() / scale)
            }
            SequenceKind::Geometric { q } => Some(q.powf(n)),
            SequenceKind::Custom => None,
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            SequenceKind::Power { gamma } => format!("power gamma={gamma}"),
            SequenceKind::PowerLog { gamma, .. } => format!("power_log gamma={gamma}"),
            SequenceKind::Geometric { q } => format!("geometric q={q}"),
            SequenceKind::Custom => "custom".into(),
        }
    }
}

/// Generator selector for [`generate_sequence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Power { gamma: f64 },
    PowerLog { gamma: f64 },
    Geometric { q: f64 },
}

/// Finite nonincreasing list of times in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSequence {
    values: Vec<f64>,
    kind: SequenceKind,
}

impl TimeSequence {
    /// A custom sequence; needs at least one value.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_kind(values, SequenceKind::Custom)
    }

    fn with_kind(values: Vec<f64>, kind: SequenceKind) -> Result<Self> {
        if values.is_empty() {
            return Err(LabError::InvalidSequence("empty sequence".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if !(*v > 0.0 && *v <= 1.0) {
                return Err(LabError::InvalidSequence(format!(
                    "value {v} at index {i} is outside (0, 1]"
                )));
            }
            if i > 0 && *v > values[i - 1] {
                return Err(LabError::InvalidSequence(format!(
                    "value {v} at index {i} exceeds its predecessor {}",
                    values[i - 1]
                )));
            }
        }
        Ok(Self { values, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn tag(&self) -> String {
        self.kind.tag()
    }

    pub fn is_generated(&self) -> bool {
        self.kind != SequenceKind::Custom
    }

    /// Time at index `i`: stored, or closed form past the truncation.
    pub fn term(&self, i: u64) -> Option<f64> {
        if (i as usize) < self.values.len() {
            Some(self.values[i as usize])
        } else {
            self.kind.closed_term(i)
        }
    }

    /// Whether counts at level `v` are exact for the untruncated sequence.
    pub fn covers(&self, v: f64) -> bool {
        self.is_generated() || v >= *self.values.last().unwrap_or(&1.0)
    }

    /// Copy scaled by `c ∈ (0, 1]`; the result is a custom sequence.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(domain("c", format!("scale {c} not in (0, 1]")));
        }
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// First `n` terms (`1 <= n <= len`).
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.values.len() {
            return Err(LabError::InvalidSequence(format!(
                "cannot truncate {} terms to {n}",
                self.values.len()
            )));
        }
        Ok(Self {
            values: self.values[..n].to_vec(),
            kind: self.kind.clone(),
        })
    }

    /// Generated sequence re-truncated at `n` terms.
    pub fn extended(&self, n: usize) -> Result<Self> {
        if !self.is_generated() {
            return Err(LabError::InvalidSequence(
                "custom sequences cannot be extended".into(),
            ));
        }
        let values = (0..n as u64).map(|i| self.term(i).unwrap()).collect();
        Self::with_kind(values, self.kind.clone())
    }

    /// `#{i : t_i > v}` over the whole sequence (generated kinds) or the
    /// stored truncation (custom).
    pub fn count_greater(&self, v: f64) -> u64 {
        if v >= self.values[0] {
            return 0;
        }
        if !self.is_generated() || v >= *self.values.last().unwrap() {
            return self.values.partition_point(|t| *t > v) as u64;
        }
        let t = |i: u64| self.kind.closed_term(i).unwrap();
        let mut guess = match self.kind {
            SequenceKind::Power { gamma } => v.powf(-1.0 / gamma).floor() as u64,
            SequenceKind::Geometric { q } => (v.ln() / q.ln()).floor().max(0.0) as u64,
            _ => {
                // exponential then binary search on the monotone tail
                let mut hi = self.values.len() as u64;
                while t(hi) > v {
                    hi *= 2;
                }
                let mut lo = hi / 2;
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if t(mid) > v {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        };
        while guess > 0 && t(guess - 1) <= v {
            guess -= 1;
        }
        while t(guess) > v {
            guess += 1;
        }
        guess
    }

    /// `#{i : lo < t_i <= hi}`.
    pub fn count_between(&self, lo: f64, hi: f64) -> u64 {
        self.count_greater(lo).saturating_sub(self.count_greater(hi))
    }

    /// Largest index `i` with `t_i >= v`, i.e. `t_{i+1} < v <= t_i`.
    /// `None` if `v > t_0` or the answer lies past a custom truncation.
    pub fn last_at_least(&self, v: f64) -> Option<u64> {
        if v > self.values[0] {
            return None;
        }
        // count of t > v' for v' just below v equals #{t >= v}
        let below = f64::from_bits(v.to_bits() - 1);
        if !self.covers(below) {
            return None;
        }
        let n = self.count_greater(below);
        if !self.is_generated() && n as usize == self.values.len() {
            return None;
        }
        Some(n - 1)
    }
}

/// Builds `t_n` for `n = 1..=n_terms` (`n_terms >= 2`).
pub fn generate_sequence(generator: Generator, n_terms: usize) -> Result<TimeSequence> {
    if n_terms < 2 {
        return Err(LabError::InvalidSequence(format!(
            "n_terms = {n_terms} must be at least 2"
        )));
    }
    let kind = match generator {
        Generator::Power { gamma } => {
            if !(gamma.is_finite() && gamma > 0.0) {
                return Err(domain("gamma", format!("gamma = {gamma} must be positive")));
            }
            SequenceKind::Power { gamma }
        }
        Generator::Geometric { q } => {
            if !(q > 0.0 && q < 1.0) {
                return Err(domain("q", format!("q = {q} must lie in (0, 1)")));
            }
            SequenceKind::Geometric { q }
        }
        Generator::PowerLog { gamma } => {
            if !(gamma.is_finite() && gamma > 0.0) {
                return Err(domain("gamma", format!("gamma = {gamma} must be positive")));
            }
            // n^{-γ} log(n+1) increases then decreases; start at the peak
            let f = |n: f64| n.powf(-gamma) * n.ln_1p();
            let mut n = 1u64;
            while f((n + 1) as f64) > f(n as f64) {
                n += 1;
            }
            SequenceKind::PowerLog {
                gamma,
                offset: n - 1,
                scale: f(n as f64),
            }
        }
    };
    let values = (0..n_terms as u64)
        .map(|i| kind.closed_term(i).unwrap().min(1.0))
        .collect();
    TimeSequence::with_kind(values, kind)
}

/// `sup_k t_k^r · #{n : t_n >= t_k}` over the truncation.
pub fn lorentz_quasinorm(seq: &TimeSequence, r: f64) -> f64 {
    let v = seq.values();
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        best = best.max(v[i].powf(r) * (j + 1) as f64);
        i = j + 1;
    }
    best
}

/// `sup_b b^r · #{n : b < t_n <= 2b}` over the truncation.
///
/// The counting function only changes at `b = t_n` and `b = t_n/2`, and
/// `b^r` increases between them, so the supremum is attained as `b`
/// approaches one of those points from either side.
pub fn doubling_bound(seq: &TimeSequence, r: f64) -> f64 {
    let mut asc: Vec<f64> = seq.values().to_vec();
    asc.reverse();
    let ge = |c: f64| asc.len() - asc.partition_point(|t| *t < c);
    let gt = |c: f64| asc.len() - asc.partition_point(|t| *t <= c);
    let mut best: f64 = 0.0;
    for &t in seq.values() {
        for c in [t, 0.5 * t] {
            let left = ge(c) - ge(2.0 * c); // c <= t < 2c
            let at = gt(c) - gt(2.0 * c); // c < t <= 2c
            best = best.max(c.powf(r) * left.max(at) as f64);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalExponent {
    pub estimate: f64,
    pub residual_rms: f64,
    pub points: usize,
    pub low_confidence: bool,
}

/// Residual threshold (natural-log units) above which a fit is flagged.
pub const CRITICAL_FIT_RESIDUAL: f64 = 0.05;

/// Slope of `log #{t_n > b}` against `log(1/b)` over dyadic `b` in the
/// middle half of the sequence's logarithmic range.
pub fn critical_exponent(seq: &TimeSequence) -> Result<CriticalExponent> {
    if seq.len() < 100 {
        return Err(LabError::InvalidSequence(format!(
            "critical_exponent needs at least 100 terms, got {}",
            seq.len()
        )));
    }
    let v = seq.values();
    let hi = v[0].log2();
    let lo = v[v.len() - 1].log2();
    let span = hi - lo;
    let j_min = (-(hi - 0.25 * span)).ceil() as i64;
    let j_max = (-(lo + 0.25 * span)).floor() as i64;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in j_min..=j_max {
        let b = (-(j as f64)).exp2();
        let c = v.partition_point(|t| *t > b);
        if c > 0 {
            xs.push(-b.ln());
            ys.push((c as f64).ln());
        }
    }
    if xs.len() < 2 {
        return Err(LabError::InvalidSequence(
            "sequence spans too few dyadic scales".into(),
        ));
    }
    let fit = fit_line(&xs, &ys)?;
    Ok(CriticalExponent {
        estimate: fit.slope.max(0.0),
        residual_rms: fit.residual_rms,
        points: fit.points,
        low_confidence: fit.residual_rms > CRITICAL_FIT_RESIDUAL || fit.points < 3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityCheck {
    pub convex: bool,
    /// First index `i` with `t_{i+1} - t_{i+2} > t_i - t_{i+1}`.
    pub violation: Option<usize>,
}

/// Whether both `t_n` and `t_n - t_{n+1}` are nonincreasing.
pub fn is_decreasing_convex(seq: &TimeSequence) -> ConvexityCheck {
    let v = seq.values();
    for i in 0..v.len().saturating_sub(2) {
        let d0 = v[i] - v[i + 1];
        let d1 = v[i + 1] - v[i + 2];
        // rounding in the differences is of order ε·t_i
        if d1 > d0 + 4.0 * f64::EPSILON * v[i] {
            return ConvexityCheck {
                convex: false,
                violation: Some(i),
            };
        }
    }
    ConvexityCheck {
        convex: true,
        violation: None,
    }
}

/// Which bucket exponent applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BucketRegime {
    /// `e = a/(1+2r)`.
    General,
    /// `e = 1/(1+r)`.
    Wave,
}

/// Partition of indices by `2^{-(l+1)e} < t_n <= 2^{-le}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketFamily {
    pub a: f64,
    pub r: f64,
    pub exponent: f64,
    pub regime: BucketRegime,
    pub buckets: BTreeMap<u32, Vec<usize>>,
}

impl BucketFamily {
    /// `(2^{-(l+1)e}, 2^{-le}]`.
    pub fn threshold(&self, l: u32) -> (f64, f64) {
        (
            (-(l as f64 + 1.0) * self.exponent).exp2(),
            (-(l as f64) * self.exponent).exp2(),
        )
    }

    /// Bucket holding index `i`, if any.
    pub fn bucket_of(&self, i: usize) -> Option<u32> {
        self.buckets
            .iter()
            .find(|(_, idx)| idx.binary_search(&i).is_ok())
            .map(|(l, _)| *l)
    }

    pub fn max_level(&self) -> Option<u32> {
        self.buckets.keys().next_back().copied()
    }
}

fn is_wave(a: f64) -> bool {
    (a - 1.0).abs() < 1e-12
}

/// Bucket exponent `a/(1+2r)` (or `1/(1+r)` when `a = 1`).
pub fn bucket_exponent(a: f64, r: f64) -> f64 {
    if is_wave(a) {
        1.0 / (1.0 + r)
    } else {
        a / (1.0 + 2.0 * r)
    }
}

fn bucket_level(t: f64, e: f64) -> u32 {
    let mut l = (-t.log2() / e).floor().max(0.0) as u32;
    while l > 0 && t > (-(l as f64) * e).exp2() {
        l -= 1;
    }
    while t <= (-(l as f64 + 1.0) * e).exp2() {
        l += 1;
    }
    l
}

pub fn dyadic_buckets(seq: &TimeSequence, a: f64, r: f64) -> Result<BucketFamily> {
    if !(a > 0.0 && r > 0.0) {
        return Err(domain("a, r", format!("a = {a}, r = {r} must be positive")));
    }
    let e = bucket_exponent(a, r);
    let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &t) in seq.values().iter().enumerate() {
        buckets.entry(bucket_level(t, e)).or_default().push(i);
    }
    Ok(BucketFamily {
        a,
        r,
        exponent: e,
        regime: if is_wave(a) {
            BucketRegime::Wave
        } else {
            BucketRegime::General
        },
        buckets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentMap {
    /// `2s/(a-4s)`.
    pub r: f64,
    /// `2s/(1-2s)`, defined for `s < 1/2`.
    pub rho: Option<f64>,
    /// `a r/(2+4r)` evaluated at `r`; reproduces `s`.
    pub s_back: f64,
}

pub fn r_of_s(s: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain("a", format!("a = {a} must be positive")));
    }
    if !(s > 0.0 && s < a / 4.0) {
        return Err(domain("s", format!("s = {s} must satisfy 0 < s < a/4")));
    }
    Ok(2.0 * s / (a - 4.0 * s))
}

pub fn rho_of_s(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 0.5) {
        return Err(domain("s", format!("s = {s} must satisfy 0 < s < 1/2")));
    }
    Ok(2.0 * s / (1.0 - 2.0 * s))
}

/// `a r/(2+4r)`.
pub fn s_of_r(r: f64, a: f64) -> f64 {
    a * r / (2.0 + 4.0 * r)
}

pub fn exponent_map(s: f64, a: f64) -> Result<ExponentMap> {
    let r = r_of_s(s, a)?;
    Ok(ExponentMap {
        r,
        rho: rho_of_s(s).ok(),
        s_back: s_of_r(r, a),
    })
}

/// Smoothness index paired with `r`: `a r/(2+4r)`, or `r/(2+2r)` when
/// `a = 1`.
pub fn target_exponent(a: f64, r: f64) -> f64 {
    if is_wave(a) {
        r / (2.0 + 2.0 * r)
    } else {
        s_of_r(r, a)
    }
}

/// Writes one value per line after `#` header lines.
pub fn write_sequence<W: Write>(seq: &TimeSequence, mut out: W) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "# kind: {}", seq.tag());
    let _ = writeln!(s, "# n_terms: {}", seq.len());
    for v in seq.values() {
        let _ = writeln!(s, "{v:e}");
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Reads the format of [`write_sequence`]; `#` lines and blank lines are
/// skipped. The result is a custom sequence.
pub fn read_sequence<R: BufRead>(input: R) -> Result<TimeSequence> {
    let mut values = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let v: f64 = body.parse().map_err(|_| LabError::Parse {
            line: no + 1,
            reason: format!("not a number: {body:?}"),
        })?;
        values.push(v);
    }
    TimeSequence::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn power(gamma: f64, n: usize) -> TimeSequence {
        generate_sequence(Generator::Power { gamma }, n).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(power(1.0, 4).values(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
        let g = generate_sequence(Generator::Geometric { q: 0.5 }, 3).unwrap();
        assert_eq!(g.values(), &[0.5, 0.25, 0.125]);
        for gamma in [0.25, 0.5, 2.0] {
            let p = generate_sequence(Generator::PowerLog { gamma }, 10).unwrap();
            assert_eq!(p.values()[0], 1.0);
            assert!(p.values().windows(2).all(|w| w[1] <= w[0] && w[1] > 0.0));
        }
        assert!(generate_sequence(Generator::Power { gamma: 1.0 }, 1).is_err());
        assert!(generate_sequence(Generator::Geometric { q: 1.0 }, 5).is_err());
        assert!(generate_sequence(Generator::Power { gamma: -1.0 }, 5).is_err());
    }

    #[test]
    fn custom_validation() {
        assert!(TimeSequence::new(vec![0.5]).is_ok());
        assert!(TimeSequence::new(vec![]).is_err());
        assert!(TimeSequence::new(vec![0.5, 0.6]).is_err());
        assert!(TimeSequence::new(vec![1.5]).is_err());
        assert!(TimeSequence::new(vec![0.5, 0.0]).is_err());
    }

    #[test]
    fn lorentz_examples() {
        for n in [1, 10, 1000] {
            let seq = if n == 1 {
                TimeSequence::new(vec![1.0]).unwrap()
            } else {
                power(1.0, n)
            };
            assert_relative_eq!(lorentz_quasinorm(&seq, 1.0), 1.0, epsilon = 1e-15);
        }
        let geo = generate_sequence(Generator::Geometric { q: 0.5 }, 20).unwrap();
        let oracle = (1..=20).map(|k| k as f64 * 0.5f64.powi(k)).fold(0.0, f64::max);
        assert_relative_eq!(lorentz_quasinorm(&geo, 1.0), oracle, epsilon = 1e-15);
        assert_relative_eq!(oracle, 0.5, epsilon = 1e-15);
        assert_relative_eq!(lorentz_quasinorm(&power(2.0, 1000), 0.5), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lorentz_counts_ties() {
        let seq = TimeSequence::new(vec![0.5, 0.5, 0.25]).unwrap();
        assert_relative_eq!(lorentz_quasinorm(&seq, 1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn critical_exponent_examples() {
        let c = critical_exponent(&power(1.0, 100_000)).unwrap();
        assert!((0.95..=1.05).contains(&c.estimate), "{c:?}");
        let c = critical_exponent(&power(2.0, 100_000)).unwrap();
        assert!((0.45..=0.55).contains(&c.estimate), "{c:?}");
        let geo = generate_sequence(Generator::Geometric { q: 0.5 }, 200).unwrap();
        let c = critical_exponent(&geo).unwrap();
        assert!(c.estimate <= 0.1, "{c:?}");
        assert!(critical_exponent(&power(1.0, 50)).is_err());
    }

    #[test]
    fn convexity_examples() {
        assert!(is_decreasing_convex(&power(1.5, 10_000)).convex);
        let geo = generate_sequence(Generator::Geometric { q: 0.5 }, 50).unwrap();
        assert!(is_decreasing_convex(&geo).convex);
        let bad = TimeSequence::new(vec![0.9, 0.5, 0.4, 0.05]).unwrap();
        let c = is_decreasing_convex(&bad);
        assert!(!c.convex);
        // gaps 0.4, 0.1, 0.35: the second gap (index 1) is followed by a larger one
        assert_eq!(c.violation, Some(1));
    }

    #[test]
    fn bucket_examples() {
        let single = TimeSequence::new(vec![0.5]).unwrap();
        let b = dyadic_buckets(&single, 2.0, 1.0).unwrap();
        assert_relative_eq!(b.exponent, 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(b.bucket_of(0), Some(1));
        let (lo, hi) = b.threshold(1);
        assert!(lo < 0.5 && 0.5 <= hi);
        assert_relative_eq!(hi, 0.6300, epsilon = 1e-4);
        assert_relative_eq!(lo, 0.3969, epsilon = 1e-4);

        let seq = power(1.0, 1000);
        let fam = dyadic_buckets(&seq, 2.0, 1.0).unwrap();
        let mut seen = vec![0usize; 1000];
        for (l, idx) in &fam.buckets {
            let (lo, hi) = fam.threshold(*l);
            for &i in idx {
                seen[i] += 1;
                let t = seq.values()[i];
                assert!(lo < t && t <= hi);
            }
        }
        assert!(seen.iter().all(|&c| c == 1));

        let wave = dyadic_buckets(&seq, 1.0, 1.0).unwrap();
        assert_eq!(wave.regime, BucketRegime::Wave);
        assert_relative_eq!(wave.exponent, 0.5);
    }

    #[test]
    fn bucket_cardinality_growth() {
        // t_n = 1/n lies in l^{1,∞}; #N_l / 2^{2ls} stays bounded
        let seq = power(1.0, 200_000);
        let (a, r) = (2.0, 1.0);
        let s = s_of_r(r, a);
        let fam = dyadic_buckets(&seq, a, r).unwrap();
        let top = fam.max_level().unwrap();
        let ratios: Vec<f64> = fam
            .buckets
            .iter()
            .filter(|(l, _)| **l < top)
            .map(|(l, idx)| idx.len() as f64 / (2.0 * *l as f64 * s).exp2())
            .collect();
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(max < 2.0, "{ratios:?}");
    }

    #[test]
    fn doubling_examples() {
        let geo = generate_sequence(Generator::Geometric { q: 0.5 }, 30).unwrap();
        assert_relative_eq!(doubling_bound(&geo, 1.0), 0.5, epsilon = 1e-15);
        let h = power(1.0, 10_000);
        let a = doubling_bound(&h, 1.0);
        assert!((0.25..=1.0).contains(&a), "{a}");
        // brute force over a fine b grid never exceeds the candidate sup
        let mut brute: f64 = 0.0;
        for k in 0..20_000 {
            let b = (-(k as f64) / 1000.0).exp2();
            let c = h.values().iter().filter(|t| b < **t && **t <= 2.0 * b).count();
            brute = brute.max(b * c as f64);
        }
        assert!(brute <= a * (1.0 + 1e-12));
        assert!(brute >= 0.99 * a);
    }

    #[test]
    fn exponent_examples() {
        let m = exponent_map(0.2, 2.0).unwrap();
        assert_relative_eq!(m.r, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(m.s_back, 0.2, epsilon = 1e-15);
        assert_relative_eq!(rho_of_s(0.25).unwrap(), 1.0);
        assert_relative_eq!(s_of_r(1.0, 2.0), 1.0 / 3.0);
        assert_relative_eq!(r_of_s(1.0 / 3.0, 2.0).unwrap(), 1.0, epsilon = 1e-14);
        assert!(exponent_map(0.5, 2.0).is_err());
        assert!(rho_of_s(0.5).is_err());
        assert_eq!(exponent_map(0.6, 3.0).unwrap().rho, None);
        assert_relative_eq!(target_exponent(2.0, 1.0), 1.0 / 3.0);
        assert_relative_eq!(target_exponent(0.5, 1.0), 1.0 / 12.0);
        assert_relative_eq!(target_exponent(1.0, 1.0), 0.25);
    }

    #[test]
    fn closed_form_counts_match_enumeration() {
        for seq in [
            power(2.0, 10),
            power(1.3, 10),
            generate_sequence(Generator::Geometric { q: 0.3 }, 5).unwrap(),
            generate_sequence(Generator::PowerLog { gamma: 1.0 }, 10).unwrap(),
        ] {
            let long = seq.extended(500).unwrap();
            for v in [0.5, 0.1, 0.013, 1e-3, 4e-4] {
                if long.values().last().unwrap() < &v {
                    let brute = long.values().iter().filter(|t| **t > v).count() as u64;
                    assert_eq!(seq.count_greater(v), brute, "{} at {v}", seq.tag());
                }
            }
        }
    }

    #[test]
    fn last_at_least_examples() {
        let seq = power(1.0, 3);
        assert_eq!(seq.last_at_least(0.75), Some(0));
        assert_eq!(seq.last_at_least(0.4), Some(1));
        assert_eq!(seq.last_at_least(0.5), Some(1));
        assert_eq!(seq.last_at_least(1e-3), Some(999));
        let custom = TimeSequence::new(vec![1.0, 0.5, 1.0 / 3.0]).unwrap();
        assert_eq!(custom.last_at_least(0.4), Some(1));
        assert_eq!(custom.last_at_least(0.1), None);
    }

    #[test]
    fn text_round_trip() {
        let seq = generate_sequence(Generator::PowerLog { gamma: 1.5 }, 50).unwrap();
        let mut buf = Vec::new();
        write_sequence(&seq, &mut buf).unwrap();
        let back = read_sequence(buf.as_slice()).unwrap();
        assert_eq!(back.values(), seq.values());
        let err = read_sequence("# c\n0.5\nxyz\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LabError::Parse { line: 3, .. }));
    }
}
