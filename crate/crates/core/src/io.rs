//! JSON and DOT formats.
//!
//! A complex is stored as
//!
//! ```json
//! {"dims": 1,
//!  "simplices": {"0": ["a", "b"], "1": ["ab", "ba"]},
//!  "faces": {"ab": ["b", "a"], "ba": ["a", "b"]},
//!  "transpositions": {"ab": ["ba"], "ba": ["ab"]}}
//! ```
//!
//! `faces` lists `d_0..d_p`, `transpositions` lists `t_0..t_{p-1}`; a missing
//! transposition entry means every `t_i` fixes the simplex.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::boundary::{StrataIncidence, StratumMap};
use crate::error::{Error, Result};
use crate::symdelta::{Cell, GeneralizedDeltaComplex, SimplexId};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    dims: i64,
    simplices: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    faces: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    transpositions: BTreeMap<String, Vec<String>>,
}

/// Input of the stacky build: object and relation strata and two maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackyInput {
    pub objects: StrataIncidence,
    pub relations: StrataIncidence,
    pub p1: StratumMap,
    pub p2: StratumMap,
}

/// Deserializes any of the JSON inputs.
pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn malformed(m: impl Into<String>) -> Error {
    Error::Malformed(m.into())
}

/// Parses a complex. Structural problems are `Malformed`; violated relations
/// are `InvalidComplex`.
pub fn complex_from_json(s: &str) -> Result<GeneralizedDeltaComplex> {
    let raw: ComplexJson = serde_json::from_str(s)?;
    let mut ids: Vec<Vec<String>> = Vec::new();
    let mut where_: HashMap<String, SimplexId> = HashMap::new();
    for (key, list) in &raw.simplices {
        let d: usize = key
            .parse()
            .map_err(|_| malformed(format!("simplices: key {key:?} is not a dimension")))?;
        if ids.len() <= d {
            ids.resize(d + 1, Vec::new());
        }
        for (i, id) in list.iter().enumerate() {
            if where_.insert(id.clone(), SimplexId::new(d, i)).is_some() {
                return Err(malformed(format!("simplices: duplicate id {id:?}")));
            }
        }
        ids[d] = list.clone();
    }
    while ids.last().is_some_and(Vec::is_empty) {
        ids.pop();
    }
    if raw.dims != ids.len() as i64 - 1 {
        return Err(malformed(format!(
            "dims: declared {} but simplices reach dimension {}",
            raw.dims,
            ids.len() as i64 - 1
        )));
    }
    for key in raw.faces.keys().chain(raw.transpositions.keys()) {
        if !where_.contains_key(key) {
            return Err(malformed(format!("unknown id {key:?}")));
        }
    }
    let lookup = |field: &str, owner: &str, target: &str, dim: usize| -> Result<usize> {
        match where_.get(target) {
            Some(id) if id.dim == dim => Ok(id.index),
            Some(_) => Err(malformed(format!("{field}.{owner}: {target:?} has the wrong dimension"))),
            None => Err(malformed(format!("{field}.{owner}: unknown id {target:?}"))),
        }
    };
    let mut levels = Vec::with_capacity(ids.len());
    for (d, list) in ids.iter().enumerate() {
        let mut cells = Vec::with_capacity(list.len());
        for (i, id) in list.iter().enumerate() {
            let faces = match (d, raw.faces.get(id)) {
                (0, None) => Vec::new(),
                (0, Some(_)) => return Err(malformed(format!("faces.{id}: vertices have no faces"))),
                (_, None) => return Err(malformed(format!("faces.{id}: missing"))),
                (_, Some(f)) => {
                    if f.len() != d + 1 {
                        return Err(malformed(format!("faces.{id}: expected {} entries, got {}", d + 1, f.len())));
                    }
                    f.iter().map(|t| lookup("faces", id, t, d - 1)).collect::<Result<_>>()?
                }
            };
            let swaps = match raw.transpositions.get(id) {
                None => vec![i; d],
                Some(t) => {
                    if t.len() != d {
                        return Err(malformed(format!("transpositions.{id}: expected {d} entries, got {}", t.len())));
                    }
                    t.iter().map(|x| lookup("transpositions", id, x, d)).collect::<Result<_>>()?
                }
            };
            cells.push(Cell { faces, swaps });
        }
        levels.push(cells);
    }
    let c = GeneralizedDeltaComplex::from_tables(levels, ids);
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidComplex(violations));
    }
    Ok(c)
}

/// Serializes a complex; transpositions that fix a simplex are omitted.
pub fn complex_to_json(c: &GeneralizedDeltaComplex) -> String {
    let mut raw = ComplexJson {
        dims: c.dim() as i64,
        simplices: BTreeMap::new(),
        faces: BTreeMap::new(),
        transpositions: BTreeMap::new(),
    };
    for d in 0..c.num_levels() {
        raw.simplices.insert(d.to_string(), c.labels(d).to_vec());
        for (i, cell) in c.cells(d).iter().enumerate() {
            let name = c.labels(d)[i].clone();
            if d > 0 {
                raw.faces.insert(name.clone(), cell.faces.iter().map(|&f| c.labels(d - 1)[f].clone()).collect());
            }
            if cell.swaps.iter().any(|&s| s != i) {
                raw.transpositions.insert(name, cell.swaps.iter().map(|&s| c.labels(d)[s].clone()).collect());
            }
        }
    }
    to_json(&raw)
}

/// Face-incidence graph: one node per orbit, one edge per elementary face of
/// the orbit's first member.
pub fn to_dot(c: &GeneralizedDeltaComplex) -> String {
    let mut out = String::from("digraph complex {\n  rankdir=BT;\n");
    let mut node_of: Vec<Vec<usize>> = Vec::new();
    for d in 0..c.num_levels() {
        let (of, _) = c.orbits(d);
        for (o, members) in c.orbit_members(d).iter().enumerate() {
            let name = c.orbit_name(SimplexId::new(d, members[0]));
            let _ = writeln!(out, "  \"{d}_{o}\" [label=\"{d}/{}\"];", escape(name));
        }
        node_of.push(of);
    }
    for d in 1..c.num_levels() {
        for (o, members) in c.orbit_members(d).iter().enumerate() {
            for &f in &c.cells(d)[members[0]].faces {
                let _ = writeln!(out, "  \"{d}_{o}\" -> \"{}_{}\";", d - 1, node_of[d - 1][f]);
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EDGE: &str = r#"{"dims": 1,
        "simplices": {"0": ["a", "b"], "1": ["ab", "ba"]},
        "faces": {"ab": ["b", "a"], "ba": ["a", "b"]},
        "transpositions": {"ab": ["ba"], "ba": ["ab"]}}"#;

    #[test]
    fn round_trip() {
        let c = complex_from_json(EDGE).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
        let again = complex_from_json(&complex_to_json(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let bad = EDGE.replace(r#""1": ["ab", "ba"]"#, r#""1": ["ab", "a"]"#);
        assert!(matches!(complex_from_json(&bad), Err(Error::Malformed(_))));
    }

    #[test]
    fn identity_transpositions_are_the_default() {
        let half = r#"{"dims": 1, "simplices": {"0": ["v"], "1": ["e"]}, "faces": {"e": ["v", "v"]}}"#;
        let c = complex_from_json(half).unwrap();
        assert!(!c.is_unordered());
        assert!(!complex_to_json(&c).contains("transpositions"));
    }

    #[test]
    fn broken_relations_are_semantic_errors() {
        let bad = r#"{"dims": 1, "simplices": {"0": ["u", "v"], "1": ["e"]}, "faces": {"e": ["u", "v"]}}"#;
        assert!(matches!(complex_from_json(bad), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn dot_has_one_node_per_orbit() {
        let c = complex_from_json(EDGE).unwrap();
        let dot = to_dot(&c);
        assert_eq!(dot.matches("[label=").count(), 3);
        assert_eq!(dot.matches("->").count(), 2);
    }
}
