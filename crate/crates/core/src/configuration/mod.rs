//! Configuration data model.
//!
//! A [`Configuration`] stores the positive half of a centrally symmetric
//! vector set together with rational multiplicities. Vectors need not span
//! the ambient space: an exact basis of their span is chosen among the
//! members themselves and every check works in those span coordinates,
//! carrying the Gram matrix of the basis along.

mod planes;

pub use planes::{enumerate_planes, equiv_classes, ClassPartition, Plane, PlaneDecomposition};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::matrix::{self, dot, QMatrix};
use crate::field::{rat_sqrt, QElem, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub vector: Vec<QElem>,
    pub multiplicity: Rat,
}

/// Span coordinates of a configuration.
///
/// `cov[k][i]` is the pairing of member `k` with basis vector `u_i`,
/// `coef[k]` expresses member `k` in the basis, and `gram` is the Gram matrix
/// of the basis, so `cov[k] = gram * coef[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanFrame {
    pub gram: QMatrix,
    pub cov: QMatrix,
    pub coef: QMatrix,
}

impl SpanFrame {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// Change to the basis whose vectors are the columns of `t`, given in the
    /// current span coordinates.
    pub fn rebased(&self, t: &QMatrix) -> Result<SpanFrame> {
        let n = self.dim();
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: t.len() });
        }
        let tt = matrix::transpose(t);
        let t_inv = matrix::inverse(t)
            .ok_or_else(|| Error::InvalidParameter("singular change of basis".into()))?;
        Ok(SpanFrame {
            gram: matrix::mat_mul(&matrix::mat_mul(&tt, &self.gram), t),
            cov: self.cov.iter().map(|c| matrix::mat_vec(&tt, c)).collect(),
            coef: self.coef.iter().map(|c| matrix::mat_vec(&t_inv, c)).collect(),
        })
    }

    /// Exact `sum_k m_k cov_k cov_k^T`.
    pub fn mass_matrix(&self, mult: &[Rat]) -> QMatrix {
        let n = self.dim();
        let mut m = vec![vec![QElem::zero(); n]; n];
        for (c, mk) in self.cov.iter().zip(mult) {
            if mk.is_zero() {
                continue;
            }
            let mk = QElem::from_rat(mk.clone());
            for i in 0..n {
                let ci = &mk * &c[i];
                for j in 0..n {
                    m[i][j] = &m[i][j] + &(&ci * &c[j]);
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct Configuration {
    name: String,
    ambient_dim: usize,
    radicand: Rat,
    members: Vec<Member>,
    direction: Vec<Rat>,
    span_basis: Vec<usize>,
    inner: QMatrix,
    frame: SpanFrame,
}

/// Connected component of the non-orthogonality graph, with the original
/// member indices it was built from.
#[derive(Clone, Debug)]
pub struct Component {
    pub members: Vec<usize>,
    pub config: Configuration,
}

fn pairing_with_direction(v: &[QElem], dir: &[Rat]) -> QElem {
    v.iter().zip(dir).map(|(x, d)| x * &QElem::from_rat(d.clone())).sum()
}

/// Validate and package a configuration. Members whose pairing with
/// `direction` is negative are negated so that the stored set is the
/// positive half.
pub fn build_config(
    ambient_dim: usize,
    radicand: Rat,
    members: Vec<(Vec<QElem>, Rat)>,
    direction: Vec<Rat>,
) -> Result<Configuration> {
    if members.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    if radicand.is_negative() {
        return Err(Error::NegativeRadicand(radicand.to_string()));
    }
    let radicand = if rat_sqrt(&radicand).is_some() { Rat::zero() } else { radicand };
    if direction.len() != ambient_dim {
        return Err(Error::DimensionMismatch { expected: ambient_dim, found: direction.len() });
    }
    if direction.iter().all(Zero::is_zero) {
        return Err(Error::ZeroDirection);
    }

    let mut stored = Vec::with_capacity(members.len());
    for (i, (coords, multiplicity)) in members.into_iter().enumerate() {
        if coords.len() != ambient_dim {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: coords.len() });
        }
        let mut vector = Vec::with_capacity(ambient_dim);
        for x in &coords {
            let y = x.with_radicand(&radicand).ok_or_else(|| Error::MixedRadicals {
                expected: radicand.to_string(),
                found: x.radicand().to_string(),
            })?;
            vector.push(y);
        }
        if vector.iter().all(QElem::is_zero) {
            return Err(Error::ZeroVector(i));
        }
        let s = pairing_with_direction(&vector, &direction).signum();
        if s == 0 {
            return Err(Error::NonGenericDirection(i));
        }
        if s < 0 {
            vector = vector.iter().map(|x| -x).collect();
        }
        stored.push(Member { vector, multiplicity });
    }

    let n = stored.len();
    let mut inner = vec![vec![QElem::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = dot(&stored[i].vector, &stored[j].vector);
            inner[j][i] = p.clone();
            inner[i][j] = p;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let gram_det = &(&inner[i][i] * &inner[j][j]) - &(&inner[i][j] * &inner[i][j]);
            if gram_det.is_zero() {
                return Err(Error::CollinearPair(i, j));
            }
        }
    }

    let mut span_basis = Vec::new();
    let mut echelon: QMatrix = Vec::new();
    let mut pivots = Vec::new();
    for (k, m) in stored.iter().enumerate() {
        let rest = matrix::reduce_against(&echelon, &pivots, &m.vector);
        if rest.iter().any(|x| !x.is_zero()) {
            span_basis.push(k);
            let rows: QMatrix = span_basis.iter().map(|&b| stored[b].vector.clone()).collect();
            let (e, p) = matrix::rref(&rows);
            echelon = e;
            pivots = p;
        }
    }

    let gram: QMatrix =
        span_basis.iter().map(|&i| span_basis.iter().map(|&j| inner[i][j].clone()).collect()).collect();
    let cov: QMatrix =
        (0..n).map(|k| span_basis.iter().map(|&b| inner[k][b].clone()).collect()).collect();
    let coef = cov
        .iter()
        .map(|c| matrix::solve(&gram, c).expect("span Gram matrix is positive definite"))
        .collect();

    Ok(Configuration {
        name: String::new(),
        ambient_dim,
        radicand,
        members: stored,
        direction,
        span_basis,
        inner,
        frame: SpanFrame { gram, cov, coef },
    })
}

impl Configuration {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Radicand of the coefficient field; zero when every coordinate is
    /// rational.
    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn direction(&self) -> &[Rat] {
        &self.direction
    }

    pub fn multiplicities(&self) -> Vec<Rat> {
        self.members.iter().map(|m| m.multiplicity.clone()).collect()
    }

    pub fn span_basis(&self) -> &[usize] {
        &self.span_basis
    }

    pub fn span_dim(&self) -> usize {
        self.span_basis.len()
    }

    pub fn span_gram(&self) -> &QMatrix {
        &self.frame.gram
    }

    pub fn frame(&self) -> &SpanFrame {
        &self.frame
    }

    /// Exact Euclidean inner product of members `i` and `j`.
    pub fn inner(&self, i: usize, j: usize) -> &QElem {
        &self.inner[i][j]
    }

    pub fn inner_products(&self) -> &QMatrix {
        &self.inner
    }

    /// Rebuild with another direction; the positive half may change.
    pub fn redirected(&self, direction: Vec<Rat>) -> Result<Configuration> {
        let members =
            self.members.iter().map(|m| (m.vector.clone(), m.multiplicity.clone())).collect();
        Ok(build_config(self.ambient_dim, self.radicand.clone(), members, direction)?
            .with_name(self.name.clone()))
    }

    /// `rho = sum m_a a` over the positive half, in ambient coordinates.
    pub fn rho(&self) -> Vec<QElem> {
        let mut rho = vec![QElem::zero(); self.ambient_dim];
        for m in &self.members {
            let w = QElem::from_rat(m.multiplicity.clone());
            for (r, x) in rho.iter_mut().zip(&m.vector) {
                *r = &*r + &(&w * x);
            }
        }
        rho
    }

    /// Ground-state eigenvalue `(rho, rho)`.
    pub fn lambda_eig(&self) -> QElem {
        let rho = self.rho();
        dot(&rho, &rho)
    }

    /// Matrix of `M(x, y) = sum m_a (a, x)(a, y)` on the span basis.
    pub fn mass_operator(&self) -> QMatrix {
        self.frame.mass_matrix(&self.multiplicities())
    }

    /// `Some(mu)` when the mass operator is `mu` times the identity on the
    /// span, i.e. `M = mu * span_gram` entrywise.
    pub fn is_scalar(&self) -> Option<QElem> {
        let m = self.mass_operator();
        let gram = &self.frame.gram;
        let mu = &m[0][0] / &gram[0][0];
        let scalar = m
            .iter()
            .zip(gram)
            .all(|(mr, gr)| mr.iter().zip(gr).all(|(x, g)| *x == &mu * g));
        scalar.then_some(mu)
    }

    /// Split into mutually orthogonal parts; each part is rebuilt as its own
    /// configuration over its own span.
    pub fn irreducible_components(&self) -> Vec<Component> {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut stack = vec![start];
            let mut group = Vec::new();
            label[start] = id;
            while let Some(i) = stack.pop() {
                group.push(i);
                for j in 0..n {
                    if label[j] == usize::MAX && !self.inner[i][j].is_zero() {
                        label[j] = id;
                        stack.push(j);
                    }
                }
            }
            group.sort_unstable();
            groups.push(group);
        }
        groups
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                let input = members
                    .iter()
                    .map(|&i| (self.members[i].vector.clone(), self.members[i].multiplicity.clone()))
                    .collect();
                let config = build_config(
                    self.ambient_dim,
                    self.radicand.clone(),
                    input,
                    self.direction.clone(),
                )
                .expect("a subset of a valid configuration is valid")
                .with_name(format!("{}[{c}]", self.name));
                Component { members, config }
            })
            .collect()
    }

    /// Span coordinates of the orthogonal projection of an ambient point.
    pub fn span_coords(&self, ambient: &[f64]) -> Vec<f64> {
        let n = self.span_dim();
        let gram: Vec<Vec<f64>> =
            self.frame.gram.iter().map(|r| r.iter().map(QElem::to_f64).collect()).collect();
        let rhs: Vec<f64> = self
            .span_basis
            .iter()
            .map(|&b| self.members[b].vector.iter().zip(ambient).map(|(u, x)| u.to_f64() * x).sum())
            .collect();
        crate::numeric::solve_f64(&gram, &rhs).unwrap_or_else(|| vec![0.0; n])
    }
}
