//! JSON schema for rationals, field elements and configurations.
//!
//! Rationals are `{"num": "<int>", "den": "<int>"}` with decimal strings;
//! field elements are `[a, b]` meaning `a + b*sqrt(radicand)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::configuration::{build_config, Configuration};
use crate::error::{Error, Result};
use crate::field::{QElem, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl From<&Rat> for RatJson {
    fn from(r: &Rat) -> Self {
        RatJson { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl RatJson {
    pub fn to_rat(&self) -> Result<Rat> {
        let parse = |s: &str| {
            BigInt::from_str(s.trim()).map_err(|_| Error::InvalidJson(format!("not an integer: {s:?}")))
        };
        let num = parse(&self.num)?;
        let den = parse(&self.den)?;
        if den.is_zero() {
            return Err(Error::InvalidJson("zero denominator".into()));
        }
        Ok(Rat::new(num, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QElemJson(pub RatJson, pub RatJson);

impl From<&QElem> for QElemJson {
    fn from(q: &QElem) -> Self {
        QElemJson(RatJson::from(q.a()), RatJson::from(q.b()))
    }
}

impl QElemJson {
    pub fn to_qelem(&self, radicand: &Rat) -> Result<QElem> {
        QElem::new(self.0.to_rat()?, self.1.to_rat()?, radicand.clone())
    }
}

pub fn qmatrix_json(m: &[Vec<QElem>]) -> Vec<Vec<QElemJson>> {
    m.iter().map(|r| r.iter().map(QElemJson::from).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberJson {
    pub coords: Vec<QElemJson>,
    pub multiplicity: RatJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigJson {
    pub name: String,
    pub ambient_dim: usize,
    pub radicand: RatJson,
    pub direction: Vec<RatJson>,
    pub members: Vec<MemberJson>,
}

impl ConfigJson {
    pub fn from_config(c: &Configuration) -> Self {
        ConfigJson {
            name: c.name().to_string(),
            ambient_dim: c.ambient_dim(),
            radicand: RatJson::from(c.radicand()),
            direction: c.direction().iter().map(RatJson::from).collect(),
            members: c
                .members()
                .iter()
                .map(|m| MemberJson {
                    coords: m.vector.iter().map(QElemJson::from).collect(),
                    multiplicity: RatJson::from(&m.multiplicity),
                })
                .collect(),
        }
    }

    pub fn to_config(&self) -> Result<Configuration> {
        let radicand = self.radicand.to_rat()?;
        let direction = self.direction.iter().map(RatJson::to_rat).collect::<Result<Vec<_>>>()?;
        let members = self
            .members
            .iter()
            .map(|m| {
                let coords =
                    m.coords.iter().map(|q| q.to_qelem(&radicand)).collect::<Result<Vec<_>>>()?;
                Ok((coords, m.multiplicity.to_rat()?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(build_config(self.ambient_dim, radicand, members, direction)?.with_name(self.name.clone()))
    }
}

pub fn config_from_json(text: &str) -> Result<Configuration> {
    let parsed: ConfigJson = serde_json::from_str(text).map_err(|e| Error::InvalidJson(e.to_string()))?;
    parsed.to_config()
}

/// Canonical pretty-printed JSON for a configuration.
pub fn config_to_json(c: &Configuration) -> String {
    serde_json::to_string_pretty(&ConfigJson::from_config(c)).expect("configuration serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    const A2: &str = r#"{
      "name": "a2",
      "ambient_dim": 2,
      "radicand": {"num": "3", "den": "1"},
      "direction": [{"num": "1", "den": "1"}, {"num": "1", "den": "10"}],
      "members": [
        {"coords": [[{"num": "1", "den": "1"}, {"num": "0", "den": "1"}], [{"num": "0", "den": "1"}, {"num": "0", "den": "1"}]],
         "multiplicity": {"num": "1", "den": "1"}},
        {"coords": [[{"num": "1", "den": "2"}, {"num": "0", "den": "1"}], [{"num": "0", "den": "1"}, {"num": "1", "den": "2"}]],
         "multiplicity": {"num": "1", "den": "1"}},
        {"coords": [[{"num": "-1", "den": "2"}, {"num": "0", "den": "1"}], [{"num": "0", "den": "1"}, {"num": "1", "den": "2"}]],
         "multiplicity": {"num": "1", "den": "1"}}
      ]
    }"#;

    #[test]
    fn parses_and_canonicalizes() {
        let c = config_from_json(A2).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.radicand(), &rat(3, 1));
        let text = config_to_json(&c);
        let again = config_from_json(&text).unwrap();
        assert_eq!(config_to_json(&again), text);
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = A2.replacen("\"name\"", "\"colour\": 1, \"name\"", 1);
        assert!(matches!(config_from_json(&bad), Err(Error::InvalidJson(_))));
    }

    #[test]
    fn big_integers_survive() {
        let r = RatJson { num: "123456789012345678901234567890".into(), den: "-1".into() };
        let v = r.to_rat().unwrap();
        assert_eq!(RatJson::from(&v).num, "-123456789012345678901234567890");
        assert_eq!(RatJson::from(&v).den, "1");
        assert!(RatJson { num: "1".into(), den: "0".into() }.to_rat().is_err());
    }
}
