#![allow(dead_code)]

use std::collections::BTreeMap;

use veeverify_core::families::{coxeter, deformed_a, deformed_c, Family};
use veeverify_core::field::{rat, QElem, Rat};
use veeverify_core::{build_config, Configuration};

pub fn mults(pairs: &[(&str, Rat)]) -> BTreeMap<String, Rat> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Root systems with invariant multiplicities and both deformed families.
pub fn suite() -> Vec<Configuration> {
    let mut out = vec![
        coxeter(Family::A, 2, &mults(&[("all", rat(1, 1))])).unwrap(),
        coxeter(Family::A, 3, &mults(&[("all", rat(2, 1))])).unwrap(),
        coxeter(Family::B, 2, &mults(&[("short", rat(1, 1)), ("long", rat(2, 1))])).unwrap(),
        coxeter(Family::B, 3, &mults(&[("short", rat(3, 1)), ("long", rat(1, 2))])).unwrap(),
        coxeter(Family::D, 4, &mults(&[("all", rat(1, 1))])).unwrap(),
        coxeter(Family::G2, 2, &mults(&[("short", rat(1, 1)), ("long", rat(3, 1))])).unwrap(),
    ];
    for n in [2, 3] {
        for m in [rat(2, 1), rat(3, 1), rat(1, 2)] {
            out.push(deformed_a(n, m).unwrap());
        }
    }
    for (n, m, l) in [(1, 1, 1), (1, 3, 1), (2, 2, 1), (2, 3, 0)] {
        out.push(deformed_c(n, rat(m, 1), rat(l, 1)).unwrap());
    }
    out
}

pub fn qi(i: i64) -> QElem {
    QElem::from_int(i)
}

/// A_2 in the plane: (1,0), (1/2, sqrt3/2), (-1/2, sqrt3/2).
pub fn a2_plane(m: [i64; 3]) -> Configuration {
    let h = QElem::new(rat(0, 1), rat(1, 2), rat(3, 1)).unwrap();
    let half = QElem::from_rat(rat(1, 2));
    let members = vec![
        (vec![qi(1), qi(0)], rat(m[0], 1)),
        (vec![half.clone(), h.clone()], rat(m[1], 1)),
        (vec![-&half, h], rat(m[2], 1)),
    ];
    build_config(2, rat(3, 1), members, vec![rat(1, 1), rat(1, 10)]).unwrap()
}

/// Input triples of a configuration, for rebuilding variants.
pub fn raw_members(c: &Configuration) -> Vec<(Vec<QElem>, Rat)> {
    c.members().iter().map(|m| (m.vector.clone(), m.multiplicity.clone())).collect()
}

/// Ambient f64 coordinates of every member.
pub fn ambient_f64(c: &Configuration) -> Vec<Vec<f64>> {
    c.members().iter().map(|m| m.vector.iter().map(QElem::to_f64).collect()).collect()
}

/// Ambient point whose orthogonal projection has the given span coordinates.
pub fn ambient_point(c: &Configuration, span: &[f64]) -> Vec<f64> {
    let vs = ambient_f64(c);
    let mut x = vec![0.0; c.ambient_dim()];
    for (coord, &b) in span.iter().zip(c.span_basis()) {
        for (xi, vi) in x.iter_mut().zip(&vs[b]) {
            *xi += coord * vi;
        }
    }
    x
}
