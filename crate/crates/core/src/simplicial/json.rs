//! JSON exchange format:
//! `{ "dim_cap": n, "generators": { "<q>": [names] }, "faces": { "<name>": [{"gen", "word"}] } }`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::set::{SimplicialError, SimplicialSet};
use super::simplex::SimplexRef;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceJson {
    pub gen: String,
    #[serde(default)]
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicialSetJson {
    pub dim_cap: usize,
    pub generators: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub faces: BTreeMap<String, Vec<FaceJson>>,
}

impl SimplicialSet {
    pub fn to_json_value(&self) -> SimplicialSetJson {
        let mut generators = BTreeMap::new();
        let mut faces = BTreeMap::new();
        for (q, gens) in self.generators.iter().enumerate() {
            if gens.is_empty() {
                continue;
            }
            generators.insert(q.to_string(), gens.iter().map(|g| g.name.clone()).collect());
            for g in gens.iter().filter(|g| !g.faces.is_empty()) {
                let fs = g
                    .faces
                    .iter()
                    .map(|f| FaceJson { gen: self.name_of(f).to_string(), word: f.word.clone() })
                    .collect();
                faces.insert(g.name.clone(), fs);
            }
        }
        SimplicialSetJson { dim_cap: self.dim_cap, generators, faces }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(v: &SimplicialSetJson) -> Result<Self, SimplicialError> {
        let mut by_degree: BTreeMap<usize, &Vec<String>> = BTreeMap::new();
        for (k, names) in &v.generators {
            let q: usize = k.parse().map_err(|_| SimplicialError::Malformed(format!("degree key `{k}`")))?;
            by_degree.insert(q, names);
        }
        let mut out = SimplicialSet::empty(v.dim_cap);
        for (q, names) in by_degree {
            for name in names {
                let faces = match v.faces.get(name) {
                    None if q == 0 => Vec::new(),
                    None => return Err(SimplicialError::Malformed(format!("`{name}` has no face list"))),
                    Some(list) => {
                        if list.len() != q + 1 {
                            return Err(SimplicialError::Malformed(format!("`{name}` needs {} faces", q + 1)));
                        }
                        list.iter()
                            .map(|f| {
                                let base = out.lookup(&f.gen).ok_or_else(|| {
                                    SimplicialError::Malformed(format!("unknown face generator `{}`", f.gen))
                                })?;
                                Ok(SimplexRef {
                                    degree: base.degree + f.word.len(),
                                    generator: base.generator,
                                    word: f.word.clone(),
                                })
                            })
                            .collect::<Result<Vec<_>, SimplicialError>>()?
                    }
                };
                out.add_generator(name, faces)?;
            }
        }
        Ok(out)
    }

    pub fn from_json(s: &str) -> Result<Self, SimplicialError> {
        let v: SimplicialSetJson =
            serde_json::from_str(s).map_err(|e| SimplicialError::Malformed(format!("json: {e}")))?;
        Self::from_json_value(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let d1 = SimplicialSet::delta(1).unwrap();
        for s in [SimplicialSet::horn(3, 1).unwrap(), SimplicialSet::product(&d1, &d1).unwrap()] {
            let back = SimplicialSet::from_json(&s.to_json()).unwrap();
            assert_eq!(back.generators, s.generators);
            assert!(back.check_identities().pass);
        }
    }

    #[test]
    fn parses_hand_written_circle() {
        let text = r#"{"dim_cap": 2, "generators": {"0": ["v"], "1": ["e"]},
                       "faces": {"e": [{"gen": "v"}, {"gen": "v"}]}}"#;
        let c = SimplicialSet::from_json(text).unwrap();
        assert_eq!(c.nondegenerate_counts(), vec![1, 1]);
        assert_eq!(crate::simplicial::homology(&c, 1).unwrap().rank, 1);
    }

    #[test]
    fn rejects_unknown_faces() {
        let text = r#"{"dim_cap": 2, "generators": {"0": ["v"], "1": ["e"]},
                       "faces": {"e": [{"gen": "w"}, {"gen": "v"}]}}"#;
        assert!(SimplicialSet::from_json(text).is_err());
    }
}
