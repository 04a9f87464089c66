//! Built-in configurations: classical root systems with invariant
//! multiplicities, and the two deformed families with square-root scaled
//! vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::configuration::{build_config, Configuration};
use crate::error::{Error, Result};
use crate::field::{rat, QElem, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
    G2,
    ADeformed,
    CDeformed,
}

impl Family {
    pub const ALL: [Family; 8] =
        [Family::A, Family::B, Family::C, Family::D, Family::BC, Family::G2, Family::ADeformed, Family::CDeformed];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::G2 => "G2",
            Family::ADeformed => "A_deformed",
            Family::CDeformed => "C_deformed",
        }
    }

    /// Orbit names accepted as multiplicity keys.
    pub fn orbits(self) -> &'static [&'static str] {
        match self {
            Family::A | Family::D => &["all"],
            Family::B | Family::C | Family::BC | Family::G2 => &["short", "long"],
            Family::ADeformed => &["m"],
            Family::CDeformed => &["m", "l"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnsupportedFamily(s.to_string()))
    }
}

/// A family name, its rank and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub rank: usize,
    pub params: BTreeMap<String, Rat>,
}

impl FamilySpec {
    pub fn new(family: Family, rank: usize) -> Self {
        FamilySpec { family, rank, params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: Rat) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn build(&self) -> Result<Configuration> {
        match self.family {
            Family::ADeformed => {
                expect_keys(self.family, &self.params)?;
                deformed_a(self.rank, self.params["m"].clone())
            }
            Family::CDeformed => {
                expect_keys(self.family, &self.params)?;
                deformed_c(self.rank, self.params["m"].clone(), self.params["l"].clone())
            }
            family => coxeter(family, self.rank, &self.params),
        }
    }
}

fn expect_keys(family: Family, params: &BTreeMap<String, Rat>) -> Result<()> {
    let expected = family.orbits();
    if params.len() != expected.len() || expected.iter().any(|k| !params.contains_key(*k)) {
        return Err(Error::WrongParameterCount { family: family.name().to_string(), expected: expected.join(", ") });
    }
    Ok(())
}

fn unit(dim: usize, i: usize, scale: i64) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = rat(scale, 1);
    v
}

fn combine(dim: usize, terms: &[(usize, i64)]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    for &(i, c) in terms {
        v[i] += rat(c, 1);
    }
    v
}

fn lift(v: Vec<Rat>) -> Vec<QElem> {
    v.into_iter().map(QElem::from_rat).collect()
}

/// `(1, 1/2, 1/4, ...)`.
pub fn default_direction(dim: usize) -> Vec<Rat> {
    (0..dim).map(|i| Rat::new(1.into(), num_bigint::BigInt::from(2).pow(i as u32))).collect()
}

/// Build with the default direction, nudging its last coordinate until no
/// member is orthogonal to it.
fn assemble(dim: usize, radicand: Rat, members: Vec<(Vec<QElem>, Rat)>, name: String) -> Result<Configuration> {
    let mut direction = default_direction(dim);
    for attempt in 0..64 {
        match build_config(dim, radicand.clone(), members.clone(), direction.clone()) {
            Err(Error::NonGenericDirection(_)) => {
                let last = direction.last_mut().expect("dimension is positive");
                *last = &*last * rat(attempt + 3, attempt + 4);
            }
            other => return other.map(|c| c.with_name(name)),
        }
    }
    Err(Error::InvalidParameter(format!("no generic direction found for {name}")))
}

fn rank_range(family: Family) -> Option<(usize, usize)> {
    match family {
        Family::A => Some((1, 8)),
        Family::B | Family::C | Family::D => Some((2, 8)),
        Family::G2 => Some((2, 2)),
        _ => None,
    }
}

/// Positive roots of a classical root system with one multiplicity per
/// root-length orbit. `A_n` lives in `R^{n+1}` and `G2` in `R^3`; both
/// span only the sum-zero hyperplane.
pub fn coxeter(family: Family, rank: usize, multiplicities: &BTreeMap<String, Rat>) -> Result<Configuration> {
    if family == Family::BC {
        // the non-reduced system contains e_i and 2e_i, which are collinear
        return Err(Error::UnsupportedFamily("BC (non-reduced; contains collinear roots)".into()));
    }
    let (lo, hi) = rank_range(family).ok_or_else(|| Error::UnsupportedFamily(format!("{family} is not a root system")))?;
    if rank < lo || rank > hi {
        return Err(Error::UnsupportedFamily(format!("{family}{rank} (supported ranks {lo}..={hi})")));
    }
    expect_keys(family, multiplicities)?;
    let m = |k: &str| multiplicities[k].clone();
    let n = rank;
    let mut members = Vec::new();
    let dim = match family {
        Family::A => {
            for i in 0..=n {
                for j in i + 1..=n {
                    members.push((combine(n + 1, &[(i, 1), (j, -1)]), m("all")));
                }
            }
            n + 1
        }
        Family::B | Family::C | Family::D => {
            // orbit of e_i +- e_j, and the orbit and scale of the axis roots
            let (pm_key, axis) = match family {
                Family::B => ("long", Some(("short", 1))),
                Family::C => ("short", Some(("long", 2))),
                _ => ("all", None),
            };
            if let Some((key, scale)) = axis {
                for i in 0..n {
                    members.push((unit(n, i, scale), m(key)));
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    members.push((combine(n, &[(i, 1), (j, -1)]), m(pm_key)));
                    members.push((combine(n, &[(i, 1), (j, 1)]), m(pm_key)));
                }
            }
            n
        }
        Family::G2 => {
            for i in 0..3 {
                for j in i + 1..3 {
                    members.push((combine(3, &[(i, 1), (j, -1)]), m("short")));
                }
            }
            for i in 0..3 {
                let others: Vec<(usize, i64)> = (0..3).filter(|&j| j != i).map(|j| (j, -1)).collect();
                let mut terms = vec![(i, 2)];
                terms.extend(others);
                members.push((combine(3, &terms), m("long")));
            }
            3
        }
        _ => unreachable!("handled above"),
    };
    let label = multiplicities.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
    let members = members.into_iter().map(|(v, mult)| (lift(v), mult)).collect();
    let title = if family == Family::G2 { family.to_string() } else { format!("{family}{rank}") };
    assemble(dim, Rat::zero(), members, format!("{title}({label})"))
}

/// `e_i - e_j` (`i < j <= n`) with multiplicity `m` and `e_i - sqrt(m) e_{n+1}`
/// with multiplicity 1, in `R^{n+1}`.
pub fn deformed_a(n: usize, m: Rat) -> Result<Configuration> {
    if n < 1 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if !m.is_positive() {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    let dim = n + 1;
    let root_m = QElem::sqrt(&m)?;
    let mut members = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            members.push((lift(combine(dim, &[(i, 1), (j, -1)])), m.clone()));
        }
    }
    for i in 0..n {
        let mut v = lift(unit(dim, i, 1));
        v[n] = -&root_m;
        members.push((v, Rat::one()));
    }
    assemble(dim, root_m.radicand().clone(), members, format!("A_deformed{n}(m={m})"))
}

/// The deformed `C_{n+1}(m, l)` family with `k = (2m + 1)/(2l + 1)`:
/// `e_i +- e_j` (mult `k`), `2 e_i` (mult `m`), `e_i +- sqrt(k) e_{n+1}`
/// (mult 1) and `2 sqrt(k) e_{n+1}` (mult `l`).
pub fn deformed_c(n: usize, m: Rat, l: Rat) -> Result<Configuration> {
    if n < 1 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let denom = rat(2, 1) * &l + Rat::one();
    if denom.is_zero() {
        return Err(Error::InvalidParameter("2l + 1 must be non-zero".into()));
    }
    let k = (rat(2, 1) * &m + Rat::one()) / denom;
    if !k.is_positive() {
        return Err(Error::InvalidParameter(format!("k = (2m+1)/(2l+1) must be positive, got {k}")));
    }
    let dim = n + 1;
    let root_k = QElem::sqrt(&k)?;
    let mut members = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            members.push((lift(combine(dim, &[(i, 1), (j, -1)])), k.clone()));
            members.push((lift(combine(dim, &[(i, 1), (j, 1)])), k.clone()));
        }
    }
    for i in 0..n {
        members.push((lift(unit(dim, i, 2)), m.clone()));
    }
    for i in 0..n {
        for sign in [1, -1] {
            let mut v = lift(unit(dim, i, 1));
            v[n] = &QElem::from_int(sign) * &root_k;
            members.push((v, Rat::one()));
        }
    }
    let mut top = vec![QElem::zero(); dim];
    top[n] = &QElem::from_int(2) * &root_k;
    members.push((top, l.clone()));
    assemble(dim, root_k.radicand().clone(), members, format!("C_deformed{}(m={m},l={l})", n + 1))
}
