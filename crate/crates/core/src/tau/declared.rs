//! τ-factorizations of declared systems.
//!
//! A τ-factorization is a grouping of a declared atomic factorization into
//! consecutive blocks whose pairwise relation holds. Blocks are identified
//! by their atom-class sequence; a block spanning a whole factorization is
//! the target itself. Proper multi-atom blocks only know the
//! factorizations inherited from their parent, so their τ-irreducibility is
//! decided over those sub-groupings alone.

use std::collections::BTreeSet;

use crate::complexes::{build_graph, DivisorOracle};
use crate::declared::DeclaredSystem;
use crate::error::{Error, Result};

use super::relation::{Predicate, TauRelation};
use super::TauGraphs;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Block {
    Run(Vec<usize>),
    Target,
}

/// All groupings of `seq` into consecutive nonempty blocks.
fn groupings(len: usize) -> impl Iterator<Item = Vec<std::ops::Range<usize>>> {
    let cuts = len.saturating_sub(1);
    (0u64..1 << cuts).map(move |mask| {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 0..cuts {
            if mask >> i & 1 == 1 {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out.push(start..len);
        out
    })
}

struct Blocks<'s> {
    sys: &'s DeclaredSystem,
    rel: &'s TauRelation,
    target_degree: Option<u32>,
}

impl<'s> Blocks<'s> {
    fn new(sys: &'s DeclaredSystem, rel: &'s TauRelation) -> Result<Self> {
        if sys.factorizations.iter().any(|f| f.len() > 24) {
            return Err(Error::Unsupported(
                "declared factorizations longer than 24 atoms".into(),
            ));
        }
        let target_degree = sys
            .factorization_classes()
            .first()
            .and_then(|f| f.iter().map(|&c| sys.class_degree(c)).sum());
        Ok(Blocks {
            sys,
            rel,
            target_degree,
        })
    }

    fn label(&self, b: &Block) -> String {
        match b {
            Block::Target => self.sys.target.clone(),
            Block::Run(r) => r
                .iter()
                .map(|&c| self.sys.class_label(c))
                .collect::<Vec<_>>()
                .join("·"),
        }
    }

    fn degree(&self, b: &Block) -> Option<u32> {
        match b {
            Block::Target => self.target_degree,
            Block::Run(r) => r.iter().map(|&c| self.sys.class_degree(c)).sum(),
        }
    }

    fn is_atom(&self, b: &Block) -> bool {
        matches!(b, Block::Run(r) if r.len() == 1)
    }

    fn matches_label(&self, label: &str, b: &Block) -> bool {
        match b {
            Block::Run(r) if r.len() == 1 => self.sys.class_of(label).is_ok_and(|c| c == r[0]),
            _ => self.label(b) == label,
        }
    }

    fn related(&self, a: &Block, b: &Block) -> Result<bool> {
        Ok(match self.rel {
            TauRelation::Empty => false,
            TauRelation::Full => true,
            TauRelation::DegreeEq => match (self.degree(a), self.degree(b)) {
                (Some(x), Some(y)) => x == y,
                _ => {
                    return Err(Error::Unsupported(
                        "degree-eq needs a degree on every declared atom".into(),
                    ))
                }
            },
            TauRelation::Subset(Predicate::Irreducible) => self.is_atom(a) && self.is_atom(b),
            TauRelation::Pairs(pairs) => pairs.iter().any(|(p, q)| {
                (self.matches_label(p, a) && self.matches_label(q, b))
                    || (self.matches_label(q, a) && self.matches_label(p, b))
            }),
            other => {
                return Err(Error::Unsupported(format!(
                    "relation '{other}' needs ring arithmetic; declared systems support \
                     empty, full, degree-eq, subset:irreducible and pairs"
                )))
            }
        })
    }

    fn pairwise(&self, blocks: &[Block]) -> Result<bool> {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if !self.related(&blocks[i], &blocks[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every τ-grouping of every declared factorization, deduplicated.
    fn tau_blockings(&self) -> Result<BTreeSet<Vec<Block>>> {
        let mut out = BTreeSet::new();
        for f in self.sys.factorization_classes() {
            for g in groupings(f.len()) {
                let blocks: Vec<Block> = g
                    .iter()
                    .map(|r| {
                        if r.len() == f.len() {
                            Block::Target
                        } else {
                            Block::Run(f[r.clone()].to_vec())
                        }
                    })
                    .collect();
                if self.pairwise(&blocks)? {
                    out.insert(blocks);
                }
            }
        }
        Ok(out)
    }

    fn is_tau_irreducible(&self, b: &Block, blockings: &BTreeSet<Vec<Block>>) -> Result<bool> {
        match b {
            Block::Target => Ok(blockings.iter().all(|s| s.len() == 1)),
            Block::Run(r) if r.len() == 1 => Ok(true),
            Block::Run(r) => {
                for g in groupings(r.len()).filter(|g| g.len() > 1) {
                    let sub: Vec<Block> = g
                        .iter()
                        .map(|x| Block::Run(r[x.clone()].to_vec()))
                        .collect();
                    if self.pairwise(&sub)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// τ-divisor oracle over a declared system.
pub struct DeclaredTauOracle<'s> {
    blocks: Blocks<'s>,
    blockings: BTreeSet<Vec<Block>>,
    vertices: Vec<Block>,
}

impl<'s> DeclaredTauOracle<'s> {
    pub fn new(sys: &'s DeclaredSystem, rel: &'s TauRelation) -> Result<Self> {
        let blocks = Blocks::new(sys, rel)?;
        let blockings = blocks.tau_blockings()?;
        let mut seen = BTreeSet::new();
        for b in blockings.iter().flatten() {
            if !seen.contains(b) && blocks.is_tau_irreducible(b, &blockings)? {
                seen.insert(b.clone());
            }
        }
        Ok(DeclaredTauOracle {
            blocks,
            blockings,
            vertices: seen.into_iter().collect(),
        })
    }

    fn run_divides(&self, seq: &[Block]) -> bool {
        let all_atoms = seq.iter().all(|b| self.blocks.is_atom(b));
        if matches!(self.blocks.rel, TauRelation::Full) && all_atoms {
            // τ = full: τ-divisibility is ordinary declared divisibility,
            // including any extra declared divisibilities.
            let classes: Vec<usize> = seq
                .iter()
                .map(|b| match b {
                    Block::Run(r) => r[0],
                    Block::Target => unreachable!(),
                })
                .collect();
            return self.blocks.sys.divides_classes(&classes);
        }
        self.blockings
            .iter()
            .any(|s| s.windows(seq.len()).any(|w| w == seq))
    }
}

impl DivisorOracle for DeclaredTauOracle<'_> {
    fn labels(&self) -> Vec<String> {
        self.vertices.iter().map(|b| self.blocks.label(b)).collect()
    }

    fn product_divides(&self, seq: &[usize]) -> Result<bool> {
        let seq: Vec<Block> = seq.iter().map(|&i| self.vertices[i].clone()).collect();
        Ok(self.run_divides(&seq))
    }

    fn loop_count(&self, v: usize) -> Result<u32> {
        let mut n = 1;
        while self.run_divides(&vec![self.vertices[v].clone(); n + 1]) {
            n += 1;
        }
        Ok(n as u32 - 1)
    }
}

pub fn declared_tau_graphs(sys: &DeclaredSystem, rel: &TauRelation) -> Result<TauGraphs> {
    let oracle = DeclaredTauOracle::new(sys, rel)?;
    Ok(TauGraphs::from_pair(
        build_graph(&oracle, true)?,
        build_graph(&oracle, false)?,
    ))
}

/// τ-factorizations as block-label sequences.
pub fn declared_tau_factorizations(
    sys: &DeclaredSystem,
    rel: &TauRelation,
) -> Result<Vec<Vec<String>>> {
    let blocks = Blocks::new(sys, rel)?;
    Ok(blocks
        .tau_blockings()?
        .iter()
        .map(|s| s.iter().map(|b| blocks.label(b)).collect())
        .collect())
}

pub fn declared_is_tau_irreducible(sys: &DeclaredSystem, rel: &TauRelation) -> Result<bool> {
    let blocks = Blocks::new(sys, rel)?;
    let blockings = blocks.tau_blockings()?;
    blocks.is_tau_irreducible(&Block::Target, &blockings)
}

/// Some τ-factorization has a block matching `label` (an atom label, a
/// `·`-joined run, or the target).
pub fn declared_tau_divides(label: &str, sys: &DeclaredSystem, rel: &TauRelation) -> Result<bool> {
    declared_tau_product_divides(&[label], sys, rel)
}

pub fn declared_tau_product_divides(
    labels: &[&str],
    sys: &DeclaredSystem,
    rel: &TauRelation,
) -> Result<bool> {
    if labels.is_empty() {
        return Err(Error::Usage("label sequence must be nonempty".into()));
    }
    let blocks = Blocks::new(sys, rel)?;
    let blockings = blocks.tau_blockings()?;
    Ok(blockings.iter().any(|s| {
        s.windows(labels.len()).any(|w| {
            w.iter()
                .zip(labels)
                .all(|(b, l)| blocks.matches_label(l, b))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::declared_graph;
    use crate::declared::corpus;

    #[test]
    fn groupings_count() {
        assert_eq!(groupings(1).count(), 1);
        assert_eq!(groupings(3).count(), 4);
        assert!(groupings(3).any(|g| g == vec![0..1, 1..3]));
    }

    #[test]
    fn degree_relation_on_free_algebra() {
        let sys = corpus::load("tau-free-f").unwrap();
        let rel = TauRelation::DegreeEq;
        assert!(declared_is_tau_irreducible(&sys, &rel).unwrap());
        let g = declared_tau_graphs(&sys, &rel).unwrap();
        assert!(g.is_single_loopless_vertex());
        assert_eq!(g.directed.vertices, vec![sys.target.clone()]);
        assert_eq!(
            declared_tau_factorizations(&sys, &rel).unwrap(),
            vec![vec![sys.target.clone()]]
        );
    }

    #[test]
    fn degree_relation_on_weyl_keeps_graphs() {
        let sys = corpus::load("weyl-g").unwrap();
        let rel = TauRelation::DegreeEq;
        assert!(declared_tau_product_divides(&["x", "y"], &sys, &rel).unwrap());
        let g = declared_tau_graphs(&sys, &rel).unwrap();
        assert!(g.directed.same_as(&declared_graph(&sys, true).unwrap()));
        assert!(g.undirected.same_as(&declared_graph(&sys, false).unwrap()));
    }

    #[test]
    fn full_and_empty_on_corpus() {
        for (name, sys) in corpus::all().unwrap() {
            let full = declared_tau_graphs(&sys, &TauRelation::Full).unwrap();
            assert!(
                full.directed.same_as(&declared_graph(&sys, true).unwrap()),
                "{name}"
            );
            assert!(
                full.undirected
                    .same_as(&declared_graph(&sys, false).unwrap()),
                "{name}"
            );
            let empty = declared_tau_graphs(&sys, &TauRelation::Empty).unwrap();
            assert!(empty.is_single_loopless_vertex(), "{name}");
            assert!(declared_tau_divides(&sys.target, &sys, &TauRelation::Empty).unwrap());
        }
    }

    #[test]
    fn unsupported_relations() {
        let sys = corpus::load("weyl-g").unwrap();
        assert!(declared_tau_graphs(&sys, &TauRelation::GaugeEq).is_err());
    }
}
