//! Dense exact linear algebra over [`QElem`].

use super::QElem;

pub type QMatrix = Vec<Vec<QElem>>;

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { QElem::one() } else { QElem::zero() }).collect())
        .collect()
}

pub fn dot(u: &[QElem], v: &[QElem]) -> QElem {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &QMatrix, v: &[QElem]) -> Vec<QElem> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose(a: &QMatrix) -> QMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Reduced row echelon form. Returns the reduced matrix (zero rows dropped)
/// and the pivot column of each remaining row.
pub fn rref(rows: &[Vec<QElem>]) -> (QMatrix, Vec<usize>) {
    let mut m: QMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<QElem>]) -> usize {
    rref(rows).1.len()
}

/// Reduce `v` against an already reduced echelon basis; zero result means
/// `v` lies in the row space.
pub fn reduce_against(basis: &QMatrix, pivots: &[usize], v: &[QElem]) -> Vec<QElem> {
    let mut out = v.to_vec();
    for (row, &c) in basis.iter().zip(pivots) {
        if !out[c].is_zero() {
            let f = out[c].clone();
            for (o, b) in out.iter_mut().zip(row) {
                *o = &*o - &(&f * b);
            }
        }
    }
    out
}

/// Solve `a x = b` for square nonsingular `a`.
pub fn solve(a: &QMatrix, b: &[QElem]) -> Option<Vec<QElem>> {
    let n = a.len();
    let aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let aug: QMatrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}
