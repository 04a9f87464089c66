use super::Configuration;
use crate::field::matrix::{self, QMatrix};
use crate::field::QElem;

/// A two-dimensional plane spanned by configuration members.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    /// The first member pair (in input order) found to span the plane; it is
    /// also the reference basis for plane coordinates.
    pub basis_pair: (usize, usize),
    /// All members lying in the plane, ascending.
    pub members: Vec<usize>,
    /// Reduced row echelon form of the basis pair: a canonical key.
    pub key: QMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneDecomposition {
    pub planes: Vec<Plane>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassPartition {
    pub pivot: usize,
    pub classes: Vec<Vec<usize>>,
}

/// Coordinates of `v` in the basis `(p, q)` of a plane, given exact inner
/// products. Solves the 2x2 Gram system.
fn coords_in_pair(config: &Configuration, p: usize, q: usize, v: usize) -> [QElem; 2] {
    let gram = vec![
        vec![config.inner(p, p).clone(), config.inner(p, q).clone()],
        vec![config.inner(q, p).clone(), config.inner(q, q).clone()],
    ];
    let rhs = [config.inner(p, v).clone(), config.inner(q, v).clone()];
    let x = matrix::solve(&gram, &rhs).expect("plane basis pair is independent");
    [x[0].clone(), x[1].clone()]
}

impl Plane {
    pub fn contains(&self, member: usize) -> bool {
        self.members.binary_search(&member).is_ok()
    }

    /// Coordinates of every plane member in the reference basis, aligned with
    /// `self.members`.
    pub fn coordinates(&self, config: &Configuration) -> Vec<[QElem; 2]> {
        let (p, q) = self.basis_pair;
        self.members.iter().map(|&v| coords_in_pair(config, p, q, v)).collect()
    }

    /// `det` of two members' plane coordinates in the reference basis.
    pub fn det(coords: &[[QElem; 2]], i: usize, j: usize) -> QElem {
        let (a, b) = (&coords[i], &coords[j]);
        &(&a[0] * &b[1]) - &(&a[1] * &b[0])
    }
}

pub fn enumerate_planes(config: &Configuration) -> PlaneDecomposition {
    let n = config.len();
    let vectors: Vec<&Vec<QElem>> = config.members().iter().map(|m| &m.vector).collect();
    let mut planes: Vec<Plane> = Vec::new();
    let mut covered = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if covered[i][j] {
                continue;
            }
            let (key, pivots) = matrix::rref(&[vectors[i].clone(), vectors[j].clone()]);
            debug_assert_eq!(pivots.len(), 2);
            let members: Vec<usize> = (0..n)
                .filter(|&k| {
                    k == i
                        || k == j
                        || matrix::reduce_against(&key, &pivots, vectors[k]).iter().all(QElem::is_zero)
                })
                .collect();
            for &a in &members {
                for &b in &members {
                    covered[a][b] = true;
                }
            }
            planes.push(Plane { basis_pair: (i, j), members, key });
        }
    }
    PlaneDecomposition { planes }
}

/// Partition the plane members other than `pivot` by the relation
/// `g' = +-g + mu * pivot`.
pub fn equiv_classes(config: &Configuration, plane: &Plane, pivot: usize) -> ClassPartition {
    assert!(plane.contains(pivot), "pivot {pivot} is not in the plane");
    let others: Vec<usize> = plane.members.iter().copied().filter(|&k| k != pivot).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<QElem> = Vec::new();
    if let Some(&w) = others.first() {
        for &g in &others {
            let t = coords_in_pair(config, pivot, w, g)[1].clone();
            let neg = -&t;
            match reps.iter().position(|r| *r == t || *r == neg) {
                Some(c) => classes[c].push(g),
                None => {
                    reps.push(t);
                    classes.push(vec![g]);
                }
            }
        }
    }
    ClassPartition { pivot, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::build_config;
    use crate::configuration::tests::{a2_plane, qi};
    use crate::field::rat;

    fn b2() -> Configuration {
        let members = vec![
            (vec![qi(1), qi(0)], rat(1, 1)),
            (vec![qi(0), qi(1)], rat(1, 1)),
            (vec![qi(1), qi(1)], rat(1, 1)),
            (vec![qi(1), qi(-1)], rat(1, 1)),
        ];
        build_config(2, rat(0, 1), members, vec![rat(1, 1), rat(1, 2)]).unwrap()
    }

    #[test]
    fn a2_has_one_plane() {
        let d = enumerate_planes(&a2_plane([1, 1, 1]));
        assert_eq!(d.planes.len(), 1);
        assert_eq!(d.planes[0].members, vec![0, 1, 2]);
    }

    #[test]
    fn b2_has_one_plane() {
        let d = enumerate_planes(&b2());
        assert_eq!(d.planes.len(), 1);
        assert_eq!(d.planes[0].members.len(), 4);
    }

    #[test]
    fn a2_classes() {
        let c = a2_plane([1, 1, 1]);
        let d = enumerate_planes(&c);
        let p = equiv_classes(&c, &d.planes[0], 0);
        assert_eq!(p.classes, vec![vec![1, 2]]);
    }

    #[test]
    fn b2_classes_for_e1_minus_e2() {
        let c = b2();
        let d = enumerate_planes(&c);
        let p = equiv_classes(&c, &d.planes[0], 3);
        assert_eq!(p.classes, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn two_member_plane_gives_singleton() {
        let members = vec![(vec![qi(1), qi(0)], rat(1, 1)), (vec![qi(1), qi(1)], rat(1, 1))];
        let c = build_config(2, rat(0, 1), members, vec![rat(1, 1), rat(1, 2)]).unwrap();
        let d = enumerate_planes(&c);
        assert_eq!(equiv_classes(&c, &d.planes[0], 0).classes, vec![vec![1]]);
    }
}
