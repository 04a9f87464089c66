//! Check reports and their JSON form.
//!
//! Floats are written with 17 significant digits in scientific notation,
//! so parsing a report and serializing it again is byte-identical.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::json::{QElemJson, RatJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A float with fixed 17-significant-digit JSON formatting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else if self.0.is_nan() {
            s.serialize_str("nan")
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Sci {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Sci(v)),
            Repr::Str(s) => match s.as_str() {
                "nan" => Ok(Sci(f64::NAN)),
                "inf" => Ok(Sci(f64::INFINITY)),
                "-inf" => Ok(Sci(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!("bad float {other:?}"))),
            },
        }
    }
}

pub fn sci_rows(rows: &[Vec<f64>]) -> Vec<Vec<Sci>> {
    rows.iter().map(|r| r.iter().copied().map(Sci).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneRef {
    pub basis_pair: [usize; 2],
    pub members: Vec<usize>,
    pub key: Vec<Vec<QElemJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Witness {
    /// An equivalence class whose exact residue sum is nonzero.
    Class { pivot: usize, plane: PlaneRef, class: Vec<usize>, residual: QElemJson },
    /// A plane whose exact vee-condition sum is nonzero.
    Plane {
        pivot: usize,
        plane: PlaneRef,
        residual: QElemJson,
        matrices: Option<BTreeMap<String, Vec<Vec<QElemJson>>>>,
    },
    /// The sample point with the largest residual.
    Sample {
        sample: usize,
        point: Vec<Sci>,
        pair: Option<[usize; 2]>,
        matrices: Option<BTreeMap<String, Vec<Vec<Sci>>>>,
    },
    /// A direction whose positive half gives a different `(rho, rho)`.
    Direction { direction: Vec<RatJson>, lambda: QElemJson, reference: QElemJson },
    /// An irreducible component whose mass operator is not scalar.
    Component { component: usize, members: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericSummary {
    pub samples: usize,
    pub max_residual: Sci,
    pub tol: Sci,
    pub seed: u64,
    pub precision: usize,
    pub min_margin: Sci,
    pub escalated_residual: Option<Sci>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub numeric: Option<NumericSummary>,
}

impl CheckReport {
    pub fn exact(check: &str, witness: Option<Witness>) -> Self {
        CheckReport {
            check: check.to_string(),
            verdict: Verdict::from_pass(witness.is_none()),
            witness,
            numeric: None,
        }
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.numeric.as_ref().map(|n| n.max_residual.0)
    }
}

/// Configuration metadata printed alongside the checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSummary {
    pub name: String,
    pub ambient_dim: usize,
    pub span_dim: usize,
    pub members: usize,
    pub radicand: RatJson,
    pub lambda: QElemJson,
    pub mu: Option<QElemJson>,
    #[serde(rename = "S")]
    pub s: QElemJson,
    pub components: usize,
}

impl ConfigSummary {
    pub fn of(config: &crate::configuration::Configuration) -> Self {
        ConfigSummary {
            name: config.name().to_string(),
            ambient_dim: config.ambient_dim(),
            span_dim: config.span_dim(),
            members: config.len(),
            radicand: RatJson::from(config.radicand()),
            lambda: QElemJson::from(&config.lambda_eig()),
            mu: config.is_scalar().as_ref().map(QElemJson::from),
            s: QElemJson::from(&crate::identity::constant_s(config)),
            components: config.irreducible_components().len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub configuration: ConfigSummary,
    pub checks: Vec<CheckReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
