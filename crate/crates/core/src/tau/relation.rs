use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::factorize::{is_prime, PrimeVerdict, Splitter};
use crate::rings::{are_associates, is_normal, right_divides, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Irreducible,
    /// Normal and not refuted by the bounded prime falsifier at this bound.
    PrimeBounded(u64),
}

/// A symmetric relation on nonzero nonunits.
///
/// Symmetry holds structurally: every variant is evaluated through a
/// symmetric formula, and `Pairs` is stored as given but matched in both
/// orientations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauRelation {
    Empty,
    Full,
    GaugeEq,
    DegreeEq,
    /// `a τ b` iff both satisfy the predicate.
    Subset(Predicate),
    /// Pairs of elements (or declared labels), closed under associates and symmetry.
    Pairs(Vec<(String, String)>),
    /// `a τ b` iff one is a right multiple `βf` of an associate of `first`
    /// and the other a right multiple `γg` of an associate of `second`.
    LeftMultiples {
        first: String,
        second: String,
    },
}

impl TauRelation {
    /// Parses a CLI relation spec. `pairs:<file>` reads a JSON array of
    /// two-element string arrays.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        Ok(match spec {
            "empty" => TauRelation::Empty,
            "full" => TauRelation::Full,
            "gauge-eq" => TauRelation::GaugeEq,
            "degree-eq" => TauRelation::DegreeEq,
            "subset:irreducible" => TauRelation::Subset(Predicate::Irreducible),
            s => {
                if let Some(b) = s.strip_prefix("subset:prime-bounded:") {
                    let b = b
                        .parse()
                        .map_err(|_| Error::Usage(format!("bad prime bound '{b}'")))?;
                    TauRelation::Subset(Predicate::PrimeBounded(b))
                } else if let Some(path) = s.strip_prefix("pairs:") {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Io(format!("{path}: {e}")))?;
                    let pairs: Vec<(String, String)> =
                        serde_json::from_str(&text).map_err(|e| {
                            Error::validation("", format!("pairs file must be [[a, b], ...]: {e}"))
                        })?;
                    TauRelation::Pairs(pairs)
                } else if let Some(rest) = s.strip_prefix("left-multiples:") {
                    let (first, second) = rest.split_once(',').ok_or_else(|| {
                        Error::Usage(
                            "left-multiples needs two elements: left-multiples:<a>,<b>".into(),
                        )
                    })?;
                    TauRelation::LeftMultiples {
                        first: first.trim().into(),
                        second: second.trim().into(),
                    }
                } else {
                    return Err(Error::Usage(format!("unknown relation '{s}'")));
                }
            }
        })
    }

    pub fn pairs<A: Into<String>, B: Into<String>>(
        pairs: impl IntoIterator<Item = (A, B)>,
    ) -> Self {
        TauRelation::Pairs(
            pairs
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        )
    }
}

impl fmt::Display for TauRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauRelation::Empty => f.write_str("empty"),
            TauRelation::Full => f.write_str("full"),
            TauRelation::GaugeEq => f.write_str("gauge-eq"),
            TauRelation::DegreeEq => f.write_str("degree-eq"),
            TauRelation::Subset(Predicate::Irreducible) => f.write_str("subset:irreducible"),
            TauRelation::Subset(Predicate::PrimeBounded(b)) => {
                write!(f, "subset:prime-bounded:{b}")
            }
            TauRelation::Pairs(p) => {
                f.write_str("pairs:{")?;
                for (i, (a, b)) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({a}, {b})")?;
                }
                f.write_str("}")
            }
            TauRelation::LeftMultiples { first, second } => {
                write!(f, "left-multiples:{first},{second}")
            }
        }
    }
}

/// A relation bound to a computed ring, with parsed elements and cached
/// predicate values.
pub struct BoundRelation<'r, R: Ring> {
    ring: &'r R,
    spec: TauRelation,
    pairs: Vec<(R::Elem, R::Elem)>,
    predicate_cache: RefCell<HashMap<R::Elem, bool>>,
    splitter: RefCell<Splitter<'r, R>>,
}

impl<'r, R: Ring> BoundRelation<'r, R> {
    pub fn new(ring: &'r R, spec: &TauRelation) -> Result<Self> {
        let pairs = match spec {
            TauRelation::Pairs(p) => p
                .iter()
                .map(|(a, b)| Ok((ring.parse(a)?, ring.parse(b)?)))
                .collect::<Result<_>>()?,
            TauRelation::LeftMultiples { first, second } => {
                vec![(ring.parse(first)?, ring.parse(second)?)]
            }
            _ => Vec::new(),
        };
        Ok(BoundRelation {
            ring,
            spec: spec.clone(),
            pairs,
            predicate_cache: RefCell::new(HashMap::new()),
            splitter: RefCell::new(Splitter::new(ring, true)),
        })
    }

    pub fn ring(&self) -> &'r R {
        self.ring
    }

    pub fn spec(&self) -> &TauRelation {
        &self.spec
    }

    fn predicate(&self, p: &Predicate, a: &R::Elem) -> Result<bool> {
        if let Some(&hit) = self.predicate_cache.borrow().get(a) {
            return Ok(hit);
        }
        let v = match p {
            Predicate::Irreducible => self.splitter.borrow_mut().is_irreducible(a)?,
            Predicate::PrimeBounded(b) => {
                self.splitter.borrow_mut().is_irreducible(a)?
                    && is_normal(self.ring, a)?
                    && matches!(
                        is_prime(self.ring, a, *b)?,
                        PrimeVerdict::TrueUpToBound { .. }
                    )
            }
        };
        self.predicate_cache.borrow_mut().insert(a.clone(), v);
        Ok(v)
    }

    fn left_multiple_of_class(&self, beta: &R::Elem, a: &R::Elem) -> bool {
        self.ring
            .units()
            .iter()
            .any(|u| right_divides(self.ring, beta, &self.ring.mul(u, a)))
    }

    /// `a τ b`.
    pub fn related(&self, a: &R::Elem, b: &R::Elem) -> Result<bool> {
        let r = self.ring;
        Ok(match &self.spec {
            TauRelation::Empty => false,
            TauRelation::Full => true,
            TauRelation::GaugeEq => r.gauge(a) == r.gauge(b),
            TauRelation::DegreeEq => match (r.degree(a), r.degree(b)) {
                (Some(da), Some(db)) => da == db,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "degree-eq needs a graded backend; {} has no degree",
                        r.name()
                    )))
                }
            },
            TauRelation::Subset(p) => self.predicate(p, a)? && self.predicate(p, b)?,
            TauRelation::Pairs(_) => self.pairs.iter().any(|(p, q)| {
                (are_associates(r, a, p) && are_associates(r, b, q))
                    || (are_associates(r, a, q) && are_associates(r, b, p))
            }),
            TauRelation::LeftMultiples { .. } => {
                let (beta, gamma) = &self.pairs[0];
                (self.left_multiple_of_class(beta, a) && self.left_multiple_of_class(gamma, b))
                    || (self.left_multiple_of_class(gamma, a)
                        && self.left_multiple_of_class(beta, b))
            }
        })
    }

    /// Pairwise relatedness of distinct positions.
    pub fn pairwise(&self, factors: &[R::Elem]) -> Result<bool> {
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if !self.related(&factors[i], &factors[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Evaluates `a τ b` once; prefer [`BoundRelation`] in loops.
pub fn tau_related<R: Ring>(ring: &R, rel: &TauRelation, a: &R::Elem, b: &R::Elem) -> Result<bool> {
    BoundRelation::new(ring, rel)?.related(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Lipschitz, QuatPoly};

    #[test]
    fn basic_relations() {
        let r = Lipschitz::new();
        let a = r.parse("1+i").unwrap();
        let b = r.parse("1+j").unwrap();
        let c = r.parse("1+2i").unwrap();
        assert!(tau_related(&r, &TauRelation::Full, &a, &c).unwrap());
        assert!(!tau_related(&r, &TauRelation::Empty, &a, &b).unwrap());
        assert!(tau_related(&r, &TauRelation::GaugeEq, &a, &b).unwrap());
        assert!(!tau_related(&r, &TauRelation::GaugeEq, &a, &c).unwrap());
        assert!(tau_related(&r, &TauRelation::DegreeEq, &a, &b).is_err());
    }

    #[test]
    fn pair_relations_respect_associates() {
        let p = QuatPoly;
        let rel = TauRelation::pairs([("1+x", "1+j")]);
        let bound = BoundRelation::new(&p, &rel).unwrap();
        let e = |s: &str| p.parse(s).unwrap();
        assert!(bound.related(&e("1+j"), &e("1+x")).unwrap());
        assert!(bound.related(&e("i+k"), &e("-i-ix")).unwrap());
        assert!(!bound.related(&e("1+x"), &e("1+i")).unwrap());
        assert!(!bound.related(&e("x+x^2"), &e("x+jx")).unwrap());
    }

    #[test]
    fn left_multiple_relation() {
        let p = QuatPoly;
        let rel = TauRelation::parse_spec("left-multiples:1+x,1+j").unwrap();
        let bound = BoundRelation::new(&p, &rel).unwrap();
        let e = |s: &str| p.parse(s).unwrap();
        let jl = p.mul(&e("1+j"), &e("1+i"));
        let xl = p.mul(&e("1+x"), &e("1+i"));
        assert!(bound.related(&jl, &xl).unwrap());
        assert!(!bound.related(&e("1-k"), &e("1+x")).unwrap());
    }

    #[test]
    fn specs_round_trip() {
        for s in [
            "empty",
            "full",
            "gauge-eq",
            "degree-eq",
            "subset:irreducible",
            "subset:prime-bounded:16",
        ] {
            assert_eq!(TauRelation::parse_spec(s).unwrap().to_string(), s);
        }
        assert!(TauRelation::parse_spec("nope").is_err());
        assert!(TauRelation::parse_spec("pairs:/does/not/exist.json").is_err());
    }
}
