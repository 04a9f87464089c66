//! Generalised WDVV checks for `F(x) = sum m_a (a, x)^2 log (a, x)^2`.
//!
//! The third-derivative matrices are `F_a = sum m_k (k, a)/(k, x) k (x) k`
//! (the constant 4 is dropped everywhere except in [`fd_cross_check`]) and
//! the reference form is `G = F_x = sum m_k k (x) k`, constant in `x`.
//! Multiplicities enter only as `m_k`, never as `sqrt(m_k)`, so all exact
//! work stays inside the configuration's coefficient field.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::configuration::{enumerate_planes, Configuration, Plane, SpanFrame};
use crate::error::{Error, Result};
use crate::field::matrix::{self, dot, QMatrix};
use crate::field::QElem;
use crate::identity::plane_ref;
use crate::json::{qmatrix_json, QElemJson};
use crate::numeric::real::Real;
use crate::numeric::{
    commutator_residual_real, evaluate, sampled_report, Kernel, Mat, NumericOptions, RealFrame, SampleMode,
    Sampler,
};
use crate::report::{sci_rows, CheckReport, Sci, Witness};

pub const VEE: &str = "vee";
pub const WDVV: &str = "wdvv";
pub const FLAT: &str = "flat";

/// Exact mass form on the span basis and its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct GramG {
    pub entries: QMatrix,
    pub inverse: QMatrix,
}

pub fn gram_g(config: &Configuration) -> Result<GramG> {
    gram_g_in(config, config.frame())
}

pub fn gram_g_in(config: &Configuration, frame: &SpanFrame) -> Result<GramG> {
    let entries = frame.mass_matrix(&config.multiplicities());
    let inverse = matrix::inverse(&entries).ok_or(Error::SingularGram)?;
    Ok(GramG { entries, inverse })
}

impl GramG {
    /// `G_A(a, b)`: the pairing of two covectors through `G^{-1}`.
    pub fn dual_pairing(&self, a: &[QElem], b: &[QElem]) -> QElem {
        dot(&matrix::mat_vec(&self.inverse, a), b)
    }
}

/// Exact vee-conditions: for every pivot `a` with `m_a != 0` and every
/// plane through it, `sum_{b != a} m_b G_A(a, b) det(a, b) = 0`.
pub fn vee_condition_exact(config: &Configuration, emit_matrices: bool) -> Result<CheckReport> {
    let g = gram_g(config)?;
    let cov = &config.frame().cov;
    let decomposition = enumerate_planes(config);
    for pivot in 0..config.len() {
        if config.members()[pivot].multiplicity.is_zero() {
            continue;
        }
        let dual = matrix::mat_vec(&g.inverse, &cov[pivot]);
        for plane in decomposition.planes.iter().filter(|p| p.contains(pivot)) {
            let pc = plane.coordinates(config);
            let ia = plane.members.binary_search(&pivot).expect("pivot in plane");
            let residual: QElem = plane
                .members
                .iter()
                .enumerate()
                .filter(|&(_, &b)| b != pivot)
                .map(|(ib, &b)| {
                    let m = QElem::from_rat(config.members()[b].multiplicity.clone());
                    &(&m * &dot(&dual, &cov[b])) * &Plane::det(&pc, ia, ib)
                })
                .sum();
            if !residual.is_zero() {
                let matrices = emit_matrices.then(|| {
                    BTreeMap::from([
                        ("G".to_string(), qmatrix_json(&g.entries)),
                        ("G_inv".to_string(), qmatrix_json(&g.inverse)),
                    ])
                });
                return Ok(CheckReport::exact(
                    VEE,
                    Some(Witness::Plane {
                        pivot,
                        plane: plane_ref(plane),
                        residual: QElemJson::from(&residual),
                        matrices,
                    }),
                ));
            }
        }
    }
    Ok(CheckReport::exact(VEE, None))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix {
    pub entries: Vec<Vec<f64>>,
    pub base_point: Vec<f64>,
    pub direction_vector: Vec<f64>,
}

fn f_matrix_real<R: Real>(f: &RealFrame<R>, a: &[R], x: &[R]) -> Mat<R> {
    let mut out: Mat<R> = Mat::zeros(f.dim, f.bits);
    for k in 0..f.members() {
        let w = f.mult[k].clone() * f.pairing(k, a) / f.pairing(k, x);
        for i in 0..f.dim {
            let wi = w.clone() * f.cov[k][i].clone();
            for j in 0..f.dim {
                let v = out.get(i, j).clone() + wi.clone() * f.cov[k][j].clone();
                out.set(i, j, v);
            }
        }
    }
    out
}

fn check_rational_margin(config: &Configuration, x: &[f64]) -> Result<()> {
    if x.len() != config.span_dim() {
        return Err(Error::DimensionMismatch { expected: config.span_dim(), found: x.len() });
    }
    let sampler = Sampler::for_config(config, SampleMode::Rational, 0, 1);
    if sampler.margin_of(x).is_none() {
        return Err(Error::NonGenericPoint(crate::identity::first_close_member(config, x, SampleMode::Rational)));
    }
    Ok(())
}

/// `F_a` at `x`, both in span coordinates.
pub fn f_matrix(config: &Configuration, a: &[f64], x: &[f64]) -> Result<FMatrix> {
    check_rational_margin(config, x)?;
    if a.len() != config.span_dim() {
        return Err(Error::DimensionMismatch { expected: config.span_dim(), found: a.len() });
    }
    let f: RealFrame<f64> = RealFrame::new(config, config.frame(), 53);
    Ok(FMatrix {
        entries: f_matrix_real(&f, a, x).to_f64_rows(),
        base_point: x.to_vec(),
        direction_vector: a.to_vec(),
    })
}

fn basis_vector<R: Real>(dim: usize, i: usize, bits: usize) -> Vec<R> {
    (0..dim).map(|j| R::from_f64(if i == j { 1.0 } else { 0.0 }, bits)).collect()
}

/// `G^{-1} F_i` for every basis direction.
fn gauged_matrices<R: Real>(f: &RealFrame<R>, x: &[R]) -> Vec<Mat<R>> {
    let g_inv = f.g_inv.as_ref().expect("checked before sampling");
    (0..f.dim).map(|i| g_inv.mul(&f_matrix_real(f, &basis_vector(f.dim, i, f.bits), x))).collect()
}

/// Connection matrices `A_i = sum m_k (k, e_i)/(k, x) coef_k cov_k^T`.
fn connection_matrices<R: Real>(f: &RealFrame<R>, x: &[R]) -> Vec<Mat<R>> {
    let mut out = vec![Mat::<R>::zeros(f.dim, f.bits); f.dim];
    for k in 0..f.members() {
        let w = f.mult[k].clone() / f.pairing(k, x);
        for (i, a) in out.iter_mut().enumerate() {
            let wi = w.clone() * f.cov[k][i].clone();
            for r in 0..f.dim {
                let wr = wi.clone() * f.coef[k][r].clone();
                for c in 0..f.dim {
                    let v = a.get(r, c).clone() + wr.clone() * f.cov[k][c].clone();
                    a.set(r, c, v);
                }
            }
        }
    }
    out
}

/// Largest pairwise commutator residual and the pair attaining it.
fn worst_pair<R: Real>(mats: &[Mat<R>]) -> (f64, [usize; 2]) {
    let mut best = (0.0, [0, 0]);
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let r = commutator_residual_real(&mats[i], &mats[j]).to_f64();
            let r = if r.is_nan() { f64::INFINITY } else { r };
            if r > best.0 {
                best = (r, [i, j]);
            }
        }
    }
    best
}

#[derive(Clone, Copy)]
enum Family {
    Wdvv,
    Flat,
}

struct CommutatorKernel(Family);

impl CommutatorKernel {
    fn matrices<R: Real>(&self, f: &RealFrame<R>, x: &[R]) -> Vec<Mat<R>> {
        match self.0 {
            Family::Wdvv => gauged_matrices(f, x),
            Family::Flat => connection_matrices(f, x),
        }
    }
}

impl Kernel for CommutatorKernel {
    fn residual<R: Real>(&self, f: &RealFrame<R>, x: &[R]) -> f64 {
        worst_pair(&self.matrices(f, x)).0
    }
}

fn commutator_check(
    name: &str,
    family: Family,
    config: &Configuration,
    frame: &SpanFrame,
    opts: &NumericOptions,
    emit_matrices: bool,
) -> Result<CheckReport> {
    if matches!(family, Family::Wdvv) {
        gram_g_in(config, frame)?;
    }
    let kernel = CommutatorKernel(family);
    let sampler = Sampler::new(config, frame, SampleMode::Rational, opts.seed, opts.attempt_budget);
    let points = sampler.points(opts.samples)?;
    let outcome = evaluate(&kernel, config, frame, &points, opts);
    let witness = (!points.is_empty() && (emit_matrices || !outcome.verdict.is_pass())).then(|| {
        let f: RealFrame<f64> = RealFrame::new(config, frame, 53);
        let p = &points[outcome.worst];
        let mats = kernel.matrices(&f, &p.coords);
        let (_, pair) = worst_pair(&mats);
        let matrices = emit_matrices.then(|| {
            let (a, b) = (&mats[pair[0]], &mats[pair[1]]);
            let comm = a.mul(b).sub(&b.mul(a));
            BTreeMap::from([
                ("P".to_string(), sci_rows(&a.to_f64_rows())),
                ("Q".to_string(), sci_rows(&b.to_f64_rows())),
                ("commutator".to_string(), sci_rows(&comm.to_f64_rows())),
            ])
        });
        Witness::Sample {
            sample: outcome.worst,
            point: p.coords.iter().copied().map(Sci).collect(),
            pair: (mats.len() > 1).then_some(pair),
            matrices,
        }
    });
    Ok(sampled_report(name, &outcome, &points, opts, witness))
}

/// Sampled commutativity of `G^{-1} F_i` over all basis pairs.
pub fn wdvv_numeric(config: &Configuration, opts: &NumericOptions) -> Result<CheckReport> {
    commutator_check(WDVV, Family::Wdvv, config, config.frame(), opts, false)
}

/// [`wdvv_numeric`] in an explicit span frame, optionally attaching the
/// worst commutator's matrices to the report.
pub fn wdvv_numeric_in(
    config: &Configuration,
    frame: &SpanFrame,
    opts: &NumericOptions,
    emit_matrices: bool,
) -> Result<CheckReport> {
    commutator_check(WDVV, Family::Wdvv, config, frame, opts, emit_matrices)
}

/// Sampled flatness of `d - sum m_a (a, .)/(a, x) a (x) a`.
pub fn flat_connection_numeric(config: &Configuration, opts: &NumericOptions) -> Result<CheckReport> {
    commutator_check(FLAT, Family::Flat, config, config.frame(), opts, false)
}

pub fn flat_connection_numeric_in(
    config: &Configuration,
    frame: &SpanFrame,
    opts: &NumericOptions,
    emit_matrices: bool,
) -> Result<CheckReport> {
    commutator_check(FLAT, Family::Flat, config, frame, opts, emit_matrices)
}

/// WDVV and flatness residuals at a single point, for per-sample comparisons.
pub fn commutator_residuals_at(config: &Configuration, x: &[f64]) -> Result<(f64, f64)> {
    gram_g(config)?;
    let f: RealFrame<f64> = RealFrame::new(config, config.frame(), 53);
    Ok((worst_pair(&gauged_matrices(&f, x)).0, worst_pair(&connection_matrices(&f, x)).0))
}

fn prepotential(terms: &[(f64, Vec<f64>)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(m, c)| {
            let t: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
            m * t * t * (t * t).ln()
        })
        .sum()
}

fn third_difference(terms: &[(f64, Vec<f64>)], x: &[f64], h: f64, i: usize, j: usize, k: usize) -> f64 {
    let mut acc = 0.0;
    let mut y = x.to_vec();
    for s in 0..8u32 {
        let signs = [1.0 - 2.0 * (s & 1) as f64, 1.0 - 2.0 * ((s >> 1) & 1) as f64, 1.0 - 2.0 * ((s >> 2) & 1) as f64];
        y.copy_from_slice(x);
        y[i] += signs[0] * h;
        y[j] += signs[1] * h;
        y[k] += signs[2] * h;
        acc += signs[0] * signs[1] * signs[2] * prepotential(terms, &y);
    }
    acc / (8.0 * h * h * h)
}

/// Largest deviation between `4 * F_a` (all third derivatives) and
/// Richardson-extrapolated central differences of the prepotential, relative
/// to the largest analytic entry. Requires every `|(a, x)|` to exceed
/// `4 h max_i |(a, u_i)|`, so that the stencil never crosses a hyperplane.
pub fn fd_cross_check(config: &Configuration, x: &[f64], h: f64) -> Result<f64> {
    if x.len() != config.span_dim() {
        return Err(Error::DimensionMismatch { expected: config.span_dim(), found: x.len() });
    }
    let f: RealFrame<f64> = RealFrame::new(config, config.frame(), 53);
    let mut terms = Vec::new();
    for k in 0..f.members() {
        if f.mult[k] == 0.0 {
            continue;
        }
        let reach = f.cov[k].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if !(f.pairing(k, x).abs() > 4.0 * h * reach) {
            return Err(Error::NonGenericPoint(k));
        }
        terms.push((f.mult[k], f.cov[k].clone()));
    }
    let n = f.dim;
    let mut worst_diff = 0.0f64;
    let mut largest = 0.0f64;
    for i in 0..n {
        let analytic = f_matrix_real(&f, &basis_vector(n, i, 53), x);
        for j in 0..n {
            for k in 0..n {
                let exact = 4.0 * analytic.get(j, k);
                let coarse = third_difference(&terms, x, h, i, j, k);
                let fine = third_difference(&terms, x, h / 2.0, i, j, k);
                let fd = (4.0 * fine - coarse) / 3.0;
                worst_diff = worst_diff.max((fd - exact).abs());
                largest = largest.max(exact.abs());
            }
        }
    }
    Ok(if largest > 0.0 { worst_diff / largest } else { worst_diff })
}
