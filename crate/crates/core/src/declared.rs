//! Hand-declared factorization systems for rings without computable
//! arithmetic (Weyl and free algebras).
//!
//! Divisibility is the consecutive-subword rule: an ordered label sequence
//! divides the target iff, up to declared associate classes, it occurs as a
//! consecutive run inside some declared factorization or is listed in
//! `extra_divisibilities`.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeclaredAtom {
    pub label: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub associates: Vec<String>,
    /// Optional total degree, used by degree-based relations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeclaredSystem {
    pub ring_label: String,
    pub atoms: Vec<DeclaredAtom>,
    pub target: String,
    pub factorizations: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra_divisibilities: Vec<Vec<String>>,
    #[serde(skip)]
    class_of: HashMap<String, usize>,
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::validation(path, format!("missing required field '{key}'")))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::validation(path, "expected a string"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::validation(path, "expected an array"))
}

fn label_sequences(v: &Value, path: &str) -> Result<Vec<Vec<String>>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, seq)| {
            let p = format!("{path}/{i}");
            let items = as_array(seq, &p)?;
            if items.is_empty() {
                return Err(Error::validation(&p, "sequence must be nonempty"));
            }
            items
                .iter()
                .enumerate()
                .map(|(j, l)| as_str(l, &format!("{p}/{j}")).map(str::to_owned))
                .collect()
        })
        .collect()
}

impl DeclaredSystem {
    /// Parses and validates a JSON document; errors carry a JSON-pointer path.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| Error::validation("", format!("malformed JSON: {e}")))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::validation("", "expected an object"))?;
        const KEYS: [&str; 5] = [
            "ring_label",
            "atoms",
            "target",
            "factorizations",
            "extra_divisibilities",
        ];
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::validation(format!("/{k}"), "unknown field"));
        }
        let ring_label = as_str(field(obj, "ring_label", "")?, "/ring_label")?.to_owned();
        let target = as_str(field(obj, "target", "")?, "/target")?.to_owned();

        let mut atoms = Vec::new();
        let mut class_of = HashMap::new();
        let raw_atoms = as_array(field(obj, "atoms", "")?, "/atoms")?;
        if raw_atoms.is_empty() {
            return Err(Error::validation("/atoms", "at least one atom is required"));
        }
        for (i, a) in raw_atoms.iter().enumerate() {
            let p = format!("/atoms/{i}");
            let ao = a
                .as_object()
                .ok_or_else(|| Error::validation(&p, "expected an object"))?;
            if let Some(k) = ao
                .keys()
                .find(|k| !["label", "associates", "degree"].contains(&k.as_str()))
            {
                return Err(Error::validation(format!("{p}/{k}"), "unknown field"));
            }
            let label = as_str(field(ao, "label", &p)?, &format!("{p}/label"))?.to_owned();
            let associates = match ao.get("associates") {
                None => Vec::new(),
                Some(v) => as_array(v, &format!("{p}/associates"))?
                    .iter()
                    .enumerate()
                    .map(|(j, s)| as_str(s, &format!("{p}/associates/{j}")).map(str::to_owned))
                    .collect::<Result<_>>()?,
            };
            let degree = match ao.get("degree") {
                None => None,
                Some(v) => Some(v.as_u64().and_then(|d| u32::try_from(d).ok()).ok_or_else(
                    || Error::validation(format!("{p}/degree"), "expected a nonnegative integer"),
                )?),
            };
            let names = std::iter::once((format!("{p}/label"), &label)).chain(
                associates
                    .iter()
                    .enumerate()
                    .map(|(j, s)| (format!("{p}/associates/{j}"), s)),
            );
            for (np, name) in names {
                if class_of.insert(name.clone(), i).is_some() {
                    return Err(Error::validation(np, format!("duplicate label '{name}'")));
                }
            }
            atoms.push(DeclaredAtom {
                label,
                associates,
                degree,
            });
        }

        let factorizations = label_sequences(field(obj, "factorizations", "")?, "/factorizations")?;
        if factorizations.is_empty() {
            return Err(Error::validation(
                "/factorizations",
                "at least one factorization is required",
            ));
        }
        let extra_divisibilities = match obj.get("extra_divisibilities") {
            None => Vec::new(),
            Some(v) => label_sequences(v, "/extra_divisibilities")?,
        };
        for (name, seqs) in [
            ("factorizations", &factorizations),
            ("extra_divisibilities", &extra_divisibilities),
        ] {
            for (i, seq) in seqs.iter().enumerate() {
                for (j, l) in seq.iter().enumerate() {
                    if !class_of.contains_key(l) {
                        return Err(Error::validation(
                            format!("/{name}/{i}/{j}"),
                            format!("unknown atom label '{l}'"),
                        ));
                    }
                }
            }
        }
        Ok(DeclaredSystem {
            ring_label,
            atoms,
            target,
            factorizations,
            extra_divisibilities,
            class_of,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("declared systems serialize")
    }

    /// Index of the associate class containing `label`.
    pub fn class_of(&self, label: &str) -> Result<usize> {
        self.class_of
            .get(label)
            .copied()
            .ok_or_else(|| Error::Usage(format!("unknown atom label '{label}'")))
    }

    /// Canonical label of an associate class.
    pub fn class_label(&self, class: usize) -> &str {
        &self.atoms[class].label
    }

    pub fn class_degree(&self, class: usize) -> Option<u32> {
        self.atoms[class].degree
    }

    /// Declared factorizations as class-index sequences.
    pub fn factorization_classes(&self) -> Vec<Vec<usize>> {
        self.factorizations
            .iter()
            .map(|f| f.iter().map(|l| self.class_of[l]).collect())
            .collect()
    }

    fn extra_classes(&self) -> Vec<Vec<usize>> {
        self.extra_divisibilities
            .iter()
            .map(|f| f.iter().map(|l| self.class_of[l]).collect())
            .collect()
    }

    /// Whether the class sequence divides the target.
    pub fn divides_classes(&self, seq: &[usize]) -> bool {
        if seq.is_empty() {
            return true;
        }
        self.factorization_classes()
            .iter()
            .any(|f| f.windows(seq.len()).any(|w| w == seq))
            || self.extra_classes().iter().any(|e| e == seq)
    }

    /// Largest `n` such that `n` consecutive atoms of the class divide.
    pub fn max_power(&self, class: usize) -> u32 {
        let mut n = 0;
        while self.divides_classes(&vec![class; n + 1]) {
            n += 1;
        }
        n as u32
    }
}

pub fn load_declared(document: &str) -> Result<DeclaredSystem> {
    DeclaredSystem::from_json(document)
}

pub fn load_declared_file(path: impl AsRef<Path>) -> Result<DeclaredSystem> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    DeclaredSystem::from_json(&text)
}

/// Consecutive-subword divisibility of an ordered label sequence.
pub fn declared_divides(seq: &[&str], sys: &DeclaredSystem) -> Result<bool> {
    if seq.is_empty() {
        return Err(Error::Usage("label sequence must be nonempty".into()));
    }
    let classes = seq
        .iter()
        .map(|l| sys.class_of(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(sys.divides_classes(&classes))
}

/// One label per associate class used by some factorization, in declaration order.
pub fn declared_vertices(sys: &DeclaredSystem) -> Vec<String> {
    let used: BTreeSet<usize> = sys.factorization_classes().into_iter().flatten().collect();
    used.into_iter()
        .map(|c| sys.class_label(c).to_owned())
        .collect()
}

/// Shipped corpus systems, by name.
pub mod corpus {
    use super::*;

    pub const NAMES: [&str; 6] = [
        "weyl-g",
        "weyl-h",
        "free-f",
        "quat-free-f",
        "q-f-nonnormal",
        "tau-free-f",
    ];

    /// Environment variable naming a directory that overrides the embedded corpus.
    pub const CORPUS_ENV: &str = "IRRDIV_CORPUS";

    fn embedded(name: &str) -> Option<&'static str> {
        Some(match name {
            "weyl-g" => include_str!("../corpus/weyl-g.json"),
            "weyl-h" => include_str!("../corpus/weyl-h.json"),
            "free-f" => include_str!("../corpus/free-f.json"),
            "quat-free-f" => include_str!("../corpus/quat-free-f.json"),
            "q-f-nonnormal" => include_str!("../corpus/q-f-nonnormal.json"),
            "tau-free-f" => include_str!("../corpus/tau-free-f.json"),
            _ => return None,
        })
    }

    /// Loads `name` from `$IRRDIV_CORPUS/<name>.json` when set, else the embedded copy.
    pub fn load(name: &str) -> Result<DeclaredSystem> {
        if let Ok(dir) = std::env::var(CORPUS_ENV) {
            let path = Path::new(&dir).join(format!("{name}.json"));
            if path.exists() {
                return load_declared_file(path);
            }
        }
        let text = embedded(name)
            .ok_or_else(|| Error::Usage(format!("no corpus system named '{name}'")))?;
        DeclaredSystem::from_json(text)
    }

    pub fn all() -> Result<Vec<(&'static str, DeclaredSystem)>> {
        NAMES.iter().map(|&n| Ok((n, load(n)?))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        for (name, sys) in corpus::all().unwrap() {
            assert!(!sys.factorizations.is_empty(), "{name}");
        }
    }

    #[test]
    fn subword_divisibility() {
        let g = corpus::load("weyl-g").unwrap();
        assert!(declared_divides(&["x", "y"], &g).unwrap());
        assert!(declared_divides(&["1+y"], &g).unwrap());
        assert!(!declared_divides(&["y", "x"], &g).unwrap());
        assert!(declared_divides(&["q"], &g).is_err());
        let h = corpus::load("weyl-h").unwrap();
        assert!(!declared_divides(&["x", "1+x"], &h).unwrap());
        assert!(declared_divides(&["x", "y", "1+x"], &h).unwrap());
    }

    #[test]
    fn vertices_and_powers() {
        let g = corpus::load("weyl-g").unwrap();
        assert_eq!(declared_vertices(&g), ["x", "y", "1+y"]);
        let f = corpus::load("free-f").unwrap();
        assert_eq!(f.max_power(f.class_of("x").unwrap()), 1);
        let n = corpus::load("q-f-nonnormal").unwrap();
        assert_eq!(n.max_power(n.class_of("y").unwrap()), 2);
    }

    #[test]
    fn validation_paths() {
        let err = load_declared(
            r#"{"ring_label":"r","atoms":[{"label":"a"}],"target":"t","factorizations":[]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::validation("/factorizations", "at least one factorization is required")
        );
        let err = load_declared(r#"{"ring_label":"r","atoms":[{"label":"a"}],"target":"t","factorizations":[["a","b"]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "/factorizations/0/1"));
        let err = load_declared(r#"{"ring_label":"r","atoms":[{"label":"a"},{"label":"a"}],"target":"t","factorizations":[["a"]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "/atoms/1/label"));
        let err = load_declared(r#"{"ring_label":"r","atoms":[{"label":"a"}],"target":"t","factorizations":[["a"]],"bogus":1}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Validation { ref path, .. } if path == "/bogus"));
        assert!(load_declared("[1]").is_err());
    }

    #[test]
    fn associate_labels_share_a_class() {
        let sys = load_declared(
            r#"{"ring_label":"r","atoms":[{"label":"a","associates":["-a"]},{"label":"b"}],
                "target":"t","factorizations":[["a","b"]]}"#,
        )
        .unwrap();
        assert!(declared_divides(&["-a", "b"], &sys).unwrap());
        assert_eq!(declared_vertices(&sys), ["a", "b"]);
    }
}
