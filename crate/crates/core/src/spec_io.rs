//! JSON problem specifications.
//!
//! ```json
//! {
//!   "model": {"kind": "unitriangular", "n": 3},
//!   "subgroup": {"moduli": [1, 2, 2]},
//!   "phi": [["1", "0", "0"], ["0", "1/2", "0"], ["0", "0", "1/2"]],
//!   "digits": [[0, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1]],
//!   "elements": {"a": [1, 0, 0], "b": [0, 1, 0], "c": [0, 0, 1]},
//!   "generators": ["a", "b"],
//!   "alphabet_start": 1
//! }
//! ```
//!
//! `phi` is coordinate-linear; `phi_lie` gives the Lie-algebra matrix
//! instead. Rationals are strings `"p/q"` (plain integers are accepted too).
//! `digits`, `elements`, `generators` and `alphabet_start` are optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::action::SelfSimilarAction;
use crate::automaton::WordDictionary;
use crate::error::{Error, Result};
use crate::group::{
    DigitSet, GroupElement, GroupModel, PhiForm, SubgroupSpec, VirtualEndomorphism,
};
use crate::linalg::QMatrix;
use crate::{Int, Rat};

pub const HEISENBERG_JSON: &str = include_str!("../fixtures/heisenberg.json");
pub const HEISENBERG_PRIME_JSON: &str = include_str!("../fixtures/heisenberg_prime.json");
pub const ODOMETER_JSON: &str = include_str!("../fixtures/odometer.json");

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawModel {
    Unitriangular { n: usize },
    Abelian { rank: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSubgroup {
    Moduli { moduli: Vec<Num> },
    Lattice { lattice: Vec<Vec<Num>> },
}

/// A JSON integer or a decimal string; for rationals also "p/q".
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Small(i64),
    Text(String),
}

impl Num {
    fn int(&self) -> Result<Int> {
        match self {
            Num::Small(v) => Ok(Int::from(*v)),
            Num::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }

    fn rat(&self) -> Result<Rat> {
        match self {
            Num::Small(v) => Ok(Rat::from_integer(Int::from(*v))),
            Num::Text(s) => parse_rat(s),
        }
    }

    fn of_int(v: &Int) -> Num {
        i64::try_from(v)
            .map(Num::Small)
            .unwrap_or_else(|_| Num::Text(v.to_string()))
    }

    fn of_rat(v: &Rat) -> Num {
        Num::Text(v.to_string())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: Int = n.parse().map_err(|_| bad())?;
    let d: Int = d.parse().map_err(|_| bad())?;
    if d == Int::from(0) {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    model: RawModel,
    subgroup: RawSubgroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi_lie: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    digits: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    elements: BTreeMap<String, Vec<Num>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet_start: Option<usize>,
}

/// A validated problem: the pair (H, φ), optionally a digit set and a
/// dictionary of named elements.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub phi: VirtualEndomorphism,
    pub digits: Option<DigitSet>,
    pub elements: Vec<(String, GroupElement)>,
    pub generators: Vec<String>,
    pub alphabet_start: usize,
}

fn matrix(rows: &[Vec<Num>], k: usize) -> Result<QMatrix> {
    if rows.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: rows.len(),
        });
    }
    let mut out = Vec::with_capacity(k);
    for row in rows {
        if row.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: row.len(),
            });
        }
        out.push(row.iter().map(Num::rat).collect::<Result<Vec<_>>>()?);
    }
    Ok(QMatrix::from_rows(out))
}

fn element(model: &GroupModel, coords: &[Num]) -> Result<GroupElement> {
    let g = GroupElement(coords.iter().map(Num::int).collect::<Result<_>>()?);
    model.check(&g)?;
    Ok(g)
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let model = match raw.model {
            RawModel::Unitriangular { n } => GroupModel::unitriangular(n)?,
            RawModel::Abelian { rank } => GroupModel::abelian(rank)?,
        };
        let k = model.coordinate_count();
        let subgroup = match &raw.subgroup {
            RawSubgroup::Moduli { moduli } => SubgroupSpec::congruence(
                &model,
                moduli.iter().map(Num::int).collect::<Result<_>>()?,
            )?,
            RawSubgroup::Lattice { lattice } => SubgroupSpec::lattice(
                &model,
                lattice
                    .iter()
                    .map(|r| r.iter().map(Num::int).collect::<Result<_>>())
                    .collect::<Result<_>>()?,
            )?,
        };
        let phi = match (&raw.phi, &raw.phi_lie) {
            (Some(p), None) => VirtualEndomorphism::coordinate(model, subgroup, matrix(p, k)?)?,
            (None, Some(m)) => VirtualEndomorphism::lie(model, subgroup, matrix(m, k)?)?,
            _ => {
                return Err(Error::Parse(
                    "exactly one of \"phi\" and \"phi_lie\" is required".into(),
                ))
            }
        };
        let digits = match &raw.digits {
            Some(ds) => Some(DigitSet::new(
                ds.iter()
                    .map(|d| element(&model, d))
                    .collect::<Result<_>>()?,
            )),
            None => None,
        };
        let elements = raw
            .elements
            .iter()
            .map(|(n, c)| Ok((n.clone(), element(&model, c)?)))
            .collect::<Result<Vec<_>>>()?;
        for g in &raw.generators {
            if !elements.iter().any(|(n, _)| n == g) {
                return Err(Error::Parse(format!(
                    "generator {g:?} is not a named element"
                )));
            }
        }
        Ok(ProblemSpec {
            phi,
            digits,
            elements,
            generators: raw.generators,
            alphabet_start: raw.alphabet_start.unwrap_or(1),
        })
    }

    pub fn heisenberg() -> Self {
        Self::from_json(HEISENBERG_JSON).expect("bundled fixture")
    }

    /// The Heisenberg problem with the identity digit replaced by a.
    pub fn heisenberg_prime() -> Self {
        Self::from_json(HEISENBERG_PRIME_JSON).expect("bundled fixture")
    }

    pub fn odometer() -> Self {
        Self::from_json(ODOMETER_JSON).expect("bundled fixture")
    }

    /// One of the bundled problems by name.
    pub fn bundled(name: &str) -> Option<Self> {
        match name {
            "heisenberg" => Some(Self::heisenberg()),
            "heisenberg_prime" => Some(Self::heisenberg_prime()),
            "odometer" => Some(Self::odometer()),
            _ => None,
        }
    }

    pub fn model(&self) -> &GroupModel {
        self.phi.model()
    }

    pub fn action(&self) -> Result<SelfSimilarAction> {
        let digits = self
            .digits
            .clone()
            .ok_or_else(|| Error::Parse("the spec has no \"digits\"".into()))?;
        SelfSimilarAction::new(self.phi.clone(), digits, self.alphabet_start)
    }

    pub fn with_digits(&self, digits: DigitSet) -> Self {
        ProblemSpec {
            digits: Some(digits),
            ..self.clone()
        }
    }

    pub fn dictionary(&self) -> WordDictionary {
        let gens: Vec<&str> = self.generators.iter().map(String::as_str).collect();
        WordDictionary::new(*self.model(), self.elements.clone(), &gens)
    }

    /// Generators as named elements; falls back to the standard generators
    /// of the model (e12, e23, … or the unit vectors).
    pub fn generator_elements(&self) -> Vec<(String, GroupElement)> {
        if !self.generators.is_empty() {
            return self
                .generators
                .iter()
                .filter_map(|g| self.elements.iter().find(|(n, _)| n == g).cloned())
                .collect();
        }
        let model = self.model();
        model
            .generator_coordinates()
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("s{}", i + 1), model.basis_element(c)))
            .collect()
    }

    /// A named element or a comma-separated coordinate list.
    pub fn resolve(&self, s: &str) -> Result<GroupElement> {
        if let Some((_, g)) = self.elements.iter().find(|(n, _)| n == s.trim()) {
            return Ok(g.clone());
        }
        let g: GroupElement = s.parse()?;
        self.model().check(&g)?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let model = self.model();
        let raw_model = match *model {
            GroupModel::Unitriangular { n } => RawModel::Unitriangular { n },
            GroupModel::Abelian { rank } => RawModel::Abelian { rank },
        };
        let subgroup = match self.phi.subgroup() {
            SubgroupSpec::CongruenceDiagonal { moduli } => RawSubgroup::Moduli {
                moduli: moduli.iter().map(Num::of_int).collect(),
            },
            SubgroupSpec::IntegerLattice { basis, .. } => RawSubgroup::Lattice {
                lattice: basis
                    .iter()
                    .map(|r| r.iter().map(Num::of_int).collect())
                    .collect(),
            },
        };
        let rows = |m: &QMatrix| {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(Num::of_rat).collect())
                .collect()
        };
        let (phi, phi_lie) = match self.phi.form() {
            PhiForm::Coordinate(p) => (Some(rows(p)), None),
            PhiForm::Lie(m) => (None, Some(rows(m))),
        };
        let coords = |g: &GroupElement| g.coords().iter().map(Num::of_int).collect::<Vec<_>>();
        let raw = RawSpec {
            model: raw_model,
            subgroup,
            phi,
            phi_lie,
            digits: self
                .digits
                .as_ref()
                .map(|d| d.reps().iter().map(coords).collect()),
            elements: self
                .elements
                .iter()
                .map(|(n, g)| (n.clone(), coords(g)))
                .collect(),
            generators: self.generators.clone(),
            alphabet_start: Some(self.alphabet_start),
        };
        let mut out = String::new();
        write_json(
            &serde_json::to_value(&raw).expect("serializable"),
            0,
            &mut out,
        );
        out
    }
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().any(|i| i.is_array() || i.is_object()) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&format!(
                    "{}{}: ",
                    pad(indent + 1),
                    Value::String(k.clone())
                ));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        other => out.push_str(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn bundled_fixtures() {
        let h = ProblemSpec::heisenberg();
        assert_eq!(h.phi, VirtualEndomorphism::heisenberg());
        assert_eq!(h.digits.as_ref().unwrap().len(), 4);
        assert_eq!(h.resolve("b").unwrap(), GroupElement::from_i64s(&[0, 1, 0]));
        assert_eq!(
            h.resolve("(1,0,-1)").unwrap(),
            GroupElement::from_i64s(&[1, 0, -1])
        );
        assert_eq!(h.action().unwrap().alphabet().first_label, 1);
        let p = ProblemSpec::heisenberg_prime();
        assert_eq!(
            p.digits.as_ref().unwrap().reps()[0],
            GroupElement::from_i64s(&[1, 0, 0])
        );
        let o = ProblemSpec::odometer();
        assert_eq!(o.phi, VirtualEndomorphism::odometer());
        assert_eq!(o.action().unwrap().alphabet().first_label, 0);
    }

    #[test]
    fn round_trip() {
        for spec in [
            ProblemSpec::heisenberg(),
            ProblemSpec::heisenberg_prime(),
            ProblemSpec::odometer(),
        ] {
            let again = ProblemSpec::from_json(&spec.to_json()).unwrap();
            assert_eq!(again.phi, spec.phi);
            assert_eq!(again.digits, spec.digits);
            assert_eq!(again.elements, spec.elements);
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat(" -3/6 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn malformed() {
        let cases = [
            "{",
            r#"{"model":{"kind":"abelian","rank":1},"subgroup":{"lattice":[[2]]}}"#,
            r#"{"model":{"kind":"abelian","rank":2},"subgroup":{"lattice":[[2,0],[0,1]]},"phi":[["1/2"]]}"#,
            r#"{"model":{"kind":"unitriangular","n":3},"subgroup":{"moduli":[1,1,2]},"phi":[[1,0,0],[0,1,0],[0,0,1]]}"#,
            r#"{"model":{"kind":"abelian","rank":1},"subgroup":{"lattice":[[2]]},"phi":[["1/2"]],"generators":["a"]}"#,
        ];
        for c in cases {
            assert!(ProblemSpec::from_json(c).is_err(), "{c}");
        }
    }
}
