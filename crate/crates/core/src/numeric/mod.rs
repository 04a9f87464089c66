//! Sampling engine and floating-point kernels.
//!
//! Sample points live in span coordinates. Every numeric check evaluates a
//! residual kernel at the working precision; when the worst residual lands
//! within a factor of ten of the tolerance, the kernel is re-run with a
//! wider software float and disagreement between the two verdicts is
//! reported as inconclusive.

pub mod real;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::configuration::{Configuration, SpanFrame};
use crate::error::{Error, Result};
use crate::field::matrix;
use crate::field::{q_to_real, QElem};
use crate::report::{CheckReport, NumericSummary, Sci, Verdict, Witness};
use real::{Real, SoftFloat};

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_PRECISION: usize = 53;
pub const DEFAULT_ATTEMPT_BUDGET: usize = 1000;
/// Half-width of the sampling box per span coordinate.
pub const SAMPLE_HALF_WIDTH: f64 = 2.0 * std::f64::consts::PI;
/// Precision used to re-audit margins.
pub const AUDIT_BITS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Keep every `(a, x)` away from `pi * Z`.
    Trig,
    /// Keep every `(a, x)` away from zero.
    Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
    /// Lower bound on the distance of every `(a, x)` to the singular set.
    pub margin: f64,
}

/// Options shared by all sampled checks.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// Working precision in bits; 53 selects hardware doubles.
    pub precision: usize,
    pub attempt_budget: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            seed: 0,
            precision: DEFAULT_PRECISION,
            attempt_budget: DEFAULT_ATTEMPT_BUDGET,
        }
    }
}

impl NumericOptions {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_precision(mut self, bits: usize) -> Self {
        self.precision = bits;
        self
    }

    /// Precision of the confirmation run.
    pub fn escalated_precision(&self) -> usize {
        (2 * self.precision).max(AUDIT_BITS)
    }
}

/// Dense square matrix over a [`Real`] scalar, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<R> {
    pub n: usize,
    pub data: Vec<R>,
}

impl<R: Real> Mat<R> {
    pub fn zeros(n: usize, bits: usize) -> Self {
        Mat { n, data: vec![R::zero(bits); n * n] }
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Self {
        let n = rows.len();
        Mat { n, data: rows.iter().flat_map(|r| r.iter().cloned()).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &Mat<R>) -> Mat<R> {
        let n = self.n;
        let bits = self.data.first().map_or(53, Real::bits);
        let mut out = Mat::zeros(n, bits);
        for i in 0..n {
            for j in 0..n {
                let mut acc = R::zero(bits);
                for k in 0..n {
                    acc = acc + self.get(i, k).clone() * o.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, o: &Mat<R>) -> Mat<R> {
        Mat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn frobenius(&self) -> R {
        let bits = self.data.first().map_or(53, Real::bits);
        self.data.iter().fold(R::zero(bits), |acc, x| acc + x.clone() * x.clone()).sqrt()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_f64()).collect()).collect()
    }
}

/// `||PQ - QP||_F / max(1, ||P||_F ||Q||_F)`.
pub fn commutator_residual_real<R: Real>(p: &Mat<R>, q: &Mat<R>) -> R {
    let c = p.mul(q).sub(&q.mul(p));
    let bits = p.data.first().map_or(53, Real::bits);
    let scale = (p.frobenius() * q.frobenius()).max(R::one(bits));
    c.frobenius() / scale
}

pub fn commutator_residual(p: &[Vec<f64>], q: &[Vec<f64>]) -> Result<f64> {
    let n = p.len();
    for row in p.iter().chain(q) {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
    }
    if q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: q.len() });
    }
    Ok(commutator_residual_real(&Mat::from_rows(p), &Mat::from_rows(q)))
}

/// Solve a small dense system in `f64` by partial pivoting.
pub fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> =
        a.iter().zip(b).map(|(r, &bi)| r.iter().copied().chain([bi]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c] == 0.0 {
            return None;
        }
        m.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..=n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Real embedding of a configuration's span frame at a given precision.
#[derive(Clone, Debug)]
pub struct RealFrame<R> {
    pub bits: usize,
    pub dim: usize,
    pub mult: Vec<R>,
    pub cov: Vec<Vec<R>>,
    pub coef: Vec<Vec<R>>,
    pub inner: Vec<Vec<R>>,
    pub gram: Mat<R>,
    pub g: Mat<R>,
    /// `None` when the mass form is degenerate on the span.
    pub g_inv: Option<Mat<R>>,
}

fn embed_rows<R: Real>(rows: &[Vec<QElem>], bits: usize) -> Vec<Vec<R>> {
    rows.iter().map(|r| r.iter().map(|x| q_to_real(x, bits)).collect()).collect()
}

impl<R: Real> RealFrame<R> {
    pub fn new(config: &Configuration, frame: &SpanFrame, bits: usize) -> Self {
        let mult_q: Vec<QElem> = config.multiplicities().into_iter().map(QElem::from_rat).collect();
        let g_exact = frame.mass_matrix(&config.multiplicities());
        let g_inv = matrix::inverse(&g_exact).map(|m| Mat::from_rows(&embed_rows(&m, bits)));
        RealFrame {
            bits,
            dim: frame.dim(),
            mult: mult_q.iter().map(|m| q_to_real(m, bits)).collect(),
            cov: embed_rows(&frame.cov, bits),
            coef: embed_rows(&frame.coef, bits),
            inner: embed_rows(config.inner_products(), bits),
            gram: Mat::from_rows(&embed_rows(&frame.gram, bits)),
            g: Mat::from_rows(&embed_rows(&g_exact, bits)),
            g_inv,
        }
    }

    pub fn members(&self) -> usize {
        self.mult.len()
    }

    /// `(a_k, x)` for a point in span coordinates.
    pub fn pairing(&self, k: usize, x: &[R]) -> R {
        self.cov[k].iter().zip(x).fold(R::zero(self.bits), |acc, (c, xi)| acc + c.clone() * xi.clone())
    }

    pub fn lift(&self, x: &[f64]) -> Vec<R> {
        x.iter().map(|&v| R::from_f64(v, self.bits)).collect()
    }
}

/// Generic-point generator with one RNG stream per sample index.
pub struct Sampler {
    mode: SampleMode,
    seed: u64,
    budget: usize,
    cov: Vec<Vec<f64>>,
    norms: Vec<f64>,
    gram: Vec<Vec<f64>>,
}

fn required_margin(norm_a: f64, norm_x: f64) -> f64 {
    1e-3 * (1.0 + norm_a * norm_x)
}

fn dist_to_singular(t: f64, mode: SampleMode) -> f64 {
    match mode {
        SampleMode::Rational => t.abs(),
        SampleMode::Trig => {
            let pi = std::f64::consts::PI;
            (t - pi * (t / pi).round_ties_even()).abs()
        }
    }
}

impl Sampler {
    pub fn new(config: &Configuration, frame: &SpanFrame, mode: SampleMode, seed: u64, budget: usize) -> Self {
        let f: RealFrame<f64> = RealFrame::new(config, frame, 53);
        let norms = (0..f.members()).map(|k| f.inner[k][k].sqrt()).collect();
        Sampler { mode, seed, budget, cov: f.cov, norms, gram: f.gram.to_f64_rows() }
    }

    pub fn for_config(config: &Configuration, mode: SampleMode, seed: u64, budget: usize) -> Self {
        Self::new(config, config.frame(), mode, seed, budget)
    }

    fn norm(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, xi) in x.iter().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                s += xi * self.gram[i][j] * xj;
            }
        }
        s.max(0.0).sqrt()
    }

    /// Check `x` against the margin rule; returns the declared margin.
    pub fn margin_of(&self, x: &[f64]) -> Option<f64> {
        let nx = self.norm(x);
        let mut margin = f64::INFINITY;
        for (c, &na) in self.cov.iter().zip(&self.norms) {
            let t: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
            let need = required_margin(na, nx);
            if !(dist_to_singular(t, self.mode) >= need * (1.0 + 1e-9)) {
                return None;
            }
            margin = margin.min(need);
        }
        Some(margin)
    }

    pub fn point(&self, index: u64) -> Result<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let dim = self.gram.len();
        for _ in 0..self.budget {
            let coords: Vec<f64> =
                (0..dim).map(|_| rng.gen_range(-SAMPLE_HALF_WIDTH..SAMPLE_HALF_WIDTH)).collect();
            if let Some(margin) = self.margin_of(&coords) {
                return Ok(Point { coords, margin });
            }
        }
        Err(Error::SamplingExhausted(self.budget))
    }

    pub fn points(&self, count: usize) -> Result<Vec<Point>> {
        (0..count as u64).into_par_iter().map(|i| self.point(i)).collect()
    }

    /// Re-check a point's declared margin at 128 bits.
    pub fn audit(&self, config: &Configuration, frame: &SpanFrame, p: &Point) -> bool {
        let f: RealFrame<SoftFloat> = RealFrame::new(config, frame, AUDIT_BITS);
        let x = f.lift(&p.coords);
        let pi = SoftFloat::pi(AUDIT_BITS);
        let margin = SoftFloat::from_f64(p.margin, AUDIT_BITS);
        (0..f.members()).all(|k| {
            let t = f.pairing(k, &x);
            let d = match self.mode {
                SampleMode::Rational => t.abs(),
                SampleMode::Trig => (t.clone() - pi.clone() * (t / pi.clone()).round()).abs(),
            };
            d >= margin
        })
    }
}

pub fn sample_point(config: &Configuration, mode: SampleMode, seed: u64, attempt_budget: usize) -> Result<Point> {
    Sampler::for_config(config, mode, seed, attempt_budget).point(0)
}

/// A per-point residual, evaluated at any precision.
pub trait Kernel: Sync {
    fn residual<R: Real>(&self, frame: &RealFrame<R>, x: &[R]) -> f64;
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericOutcome {
    pub verdict: Verdict,
    pub max_residual: f64,
    /// Sample index attaining the maximum.
    pub worst: usize,
    pub min_margin: f64,
    /// Worst residual of the escalated run, when one happened.
    pub escalated: Option<f64>,
}

fn max_residual<K: Kernel, R: Real>(kernel: &K, frame: &RealFrame<R>, points: &[Point]) -> (f64, usize) {
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let r = kernel.residual(frame, &frame.lift(&p.coords));
            (if r.is_nan() { f64::INFINITY } else { r }, i)
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), |a, b| {
            // ties resolve to the lower index so the result is schedule-independent
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
}

fn run_at<K: Kernel>(kernel: &K, config: &Configuration, frame: &SpanFrame, points: &[Point], bits: usize) -> (f64, usize) {
    if bits == 53 {
        max_residual(kernel, &RealFrame::<f64>::new(config, frame, 53), points)
    } else {
        max_residual(kernel, &RealFrame::<SoftFloat>::new(config, frame, bits), points)
    }
}

/// Evaluate `kernel` over the given points and decide a verdict.
pub fn evaluate<K: Kernel>(
    kernel: &K,
    config: &Configuration,
    frame: &SpanFrame,
    points: &[Point],
    opts: &NumericOptions,
) -> NumericOutcome {
    let min_margin = points.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    if points.is_empty() {
        return NumericOutcome { verdict: Verdict::Pass, max_residual: 0.0, worst: 0, min_margin, escalated: None };
    }
    let (r, worst) = run_at(kernel, config, frame, points, opts.precision);
    let verdict = Verdict::from_pass(r < opts.tol);
    let near = r >= opts.tol / 10.0 && r <= opts.tol * 10.0;
    if !near {
        return NumericOutcome { verdict, max_residual: r, worst, min_margin, escalated: None };
    }
    let (hi, _) = run_at(kernel, config, frame, points, opts.escalated_precision());
    let confirmed = Verdict::from_pass(hi < opts.tol);
    let verdict = if confirmed == verdict { verdict } else { Verdict::Inconclusive };
    NumericOutcome { verdict, max_residual: r, worst, min_margin, escalated: Some(hi) }
}

/// Package a sampled outcome. Without an explicit witness, failing and
/// inconclusive verdicts get the worst sample as witness.
pub fn sampled_report(
    name: &str,
    outcome: &NumericOutcome,
    points: &[Point],
    opts: &NumericOptions,
    witness: Option<Witness>,
) -> CheckReport {
    let witness = witness.or_else(|| {
        (!outcome.verdict.is_pass() && !points.is_empty()).then(|| Witness::Sample {
            sample: outcome.worst,
            point: points[outcome.worst].coords.iter().copied().map(Sci).collect(),
            pair: None,
            matrices: None,
        })
    });
    CheckReport {
        check: name.to_string(),
        verdict: outcome.verdict,
        witness,
        numeric: Some(NumericSummary {
            samples: points.len(),
            max_residual: Sci(outcome.max_residual),
            tol: Sci(opts.tol),
            seed: opts.seed,
            precision: opts.precision,
            min_margin: Sci(if outcome.min_margin.is_finite() { outcome.min_margin } else { 0.0 }),
            escalated_residual: outcome.escalated.map(Sci),
        }),
    }
}
