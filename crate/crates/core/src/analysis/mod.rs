//! Graph predicates, degree functions and small-graph isomorphism, plus the
//! sweep harnesses in [`harness`].
//!
//! Connectivity ignores loops. Graphs with zero or one vertex are complete,
//! tournaments and connected in every sense.

mod corpus;
mod harness;

pub use corpus::{corpus_checks, GoldenCheck};

pub use harness::{
    ffd_sweep, ufd_harness, BackendClass, ElementRecord, ElementVerdict, HarnessReport, PrimeCheck,
    Summary,
};

use serde::Serialize;

use crate::complexes::DivisorGraph;
use crate::error::{Error, Result};

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Transitive closure over the edge set (treated as directed unless `g` is
/// undirected).
fn reachability(g: &DivisorGraph) -> Vec<Vec<bool>> {
    let n = g.vertices.len();
    let mut r = vec![vec![false; n]; n];
    for (a, row) in r.iter_mut().enumerate() {
        row[a] = true;
    }
    for &(a, b) in &g.edges {
        r[a][b] = true;
        if !g.directed {
            r[b][a] = true;
        }
    }
    for k in 0..n {
        let row_k = r[k].clone();
        for row in r.iter_mut().filter(|row| row[k]) {
            for (dst, &via) in row.iter_mut().zip(&row_k) {
                *dst |= via;
            }
        }
    }
    r
}

fn undirected_view(g: &DivisorGraph) -> DivisorGraph {
    let mut u = DivisorGraph::new(false, g.vertices.clone());
    for &(a, b) in &g.edges {
        u.add_edge(a, b);
    }
    u.loops = g.loops.clone();
    u
}

/// Both `(a,b)` and `(b,a)` for every pair of distinct vertices.
pub fn is_complete_digraph(g: &DivisorGraph) -> bool {
    pairs(g.vertices.len()).all(|(a, b)| g.has_edge(a, b) && g.has_edge(b, a))
}

/// At least one of `(a,b)`, `(b,a)` for every pair of distinct vertices.
pub fn is_tournament(g: &DivisorGraph) -> bool {
    pairs(g.vertices.len()).all(|(a, b)| g.has_edge(a, b) || g.has_edge(b, a))
}

pub fn is_strongly_connected(g: &DivisorGraph) -> bool {
    let r = reachability(g);
    pairs(g.vertices.len()).all(|(a, b)| r[a][b] && r[b][a])
}

pub fn is_unilaterally_connected(g: &DivisorGraph) -> bool {
    let r = reachability(g);
    pairs(g.vertices.len()).all(|(a, b)| r[a][b] || r[b][a])
}

pub fn is_weakly_connected(g: &DivisorGraph) -> bool {
    is_connected_undirected(&undirected_view(g))
}

pub fn is_complete_undirected(g: &DivisorGraph) -> bool {
    pairs(g.vertices.len()).all(|(a, b)| g.has_edge(a, b) || g.has_edge(b, a))
}

pub fn is_connected_undirected(g: &DivisorGraph) -> bool {
    let r = reachability(&undirected_view(g));
    pairs(g.vertices.len()).all(|(a, b)| r[a][b])
}

/// Every directed-graph predicate, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DigraphPredicates {
    pub complete: bool,
    pub tournament: bool,
    pub strongly_connected: bool,
    pub unilaterally_connected: bool,
    pub weakly_connected: bool,
}

impl DigraphPredicates {
    pub fn of(g: &DivisorGraph) -> Self {
        DigraphPredicates {
            complete: is_complete_digraph(g),
            tournament: is_tournament(g),
            strongly_connected: is_strongly_connected(g),
            unilaterally_connected: is_unilaterally_connected(g),
            weakly_connected: is_weakly_connected(g),
        }
    }

    /// complete ⟹ tournament ⟹ unilateral ⟹ weak, and strong ⟹ unilateral.
    pub fn chain_holds(&self) -> bool {
        (!self.complete || self.tournament)
            && (!self.tournament || self.unilaterally_connected)
            && (!self.strongly_connected || self.unilaterally_connected)
            && (!self.unilaterally_connected || self.weakly_connected)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Degrees {
    Directed {
        indeg: usize,
        outdeg: usize,
        indegl: usize,
        outdegl: usize,
    },
    Undirected {
        deg: usize,
        degl: usize,
    },
}

/// Loop-free degrees and their loop-augmented versions (`l + deg`, where `l`
/// is the vertex's loop count).
pub fn degrees_at(g: &DivisorGraph, v: usize) -> Degrees {
    let l = g.loops[v] as usize;
    if g.directed {
        let indeg = g.edges.iter().filter(|e| e.1 == v).count();
        let outdeg = g.edges.iter().filter(|e| e.0 == v).count();
        Degrees::Directed {
            indeg,
            outdeg,
            indegl: indeg + l,
            outdegl: outdeg + l,
        }
    } else {
        let deg = g.edges.iter().filter(|e| e.0 == v || e.1 == v).count();
        Degrees::Undirected { deg, degl: deg + l }
    }
}

pub fn degrees(g: &DivisorGraph, label: &str) -> Result<Degrees> {
    let v = g
        .vertex_index(label)
        .ok_or_else(|| Error::Usage(format!("'{label}' is not a vertex")))?;
    Ok(degrees_at(g, v))
}

pub const ISOMORPHISM_LIMIT: usize = 10;

/// Brute-force isomorphism respecting direction and loop counts.
pub fn graphs_isomorphic(g1: &DivisorGraph, g2: &DivisorGraph) -> Result<bool> {
    let n = g1.vertices.len();
    if n > ISOMORPHISM_LIMIT || g2.vertices.len() > ISOMORPHISM_LIMIT {
        return Err(Error::Unsupported(format!(
            "isomorphism search is limited to {ISOMORPHISM_LIMIT} vertices"
        )));
    }
    if g1.directed != g2.directed || n != g2.vertices.len() || g1.edges.len() != g2.edges.len() {
        return Ok(false);
    }
    let sig = |g: &DivisorGraph, v: usize| (degrees_at(g, v), g.loops[v]);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend(g1, g2, 0, &mut map, &mut used, &sig))
}

fn extend(
    g1: &DivisorGraph,
    g2: &DivisorGraph,
    v: usize,
    map: &mut [usize],
    used: &mut [bool],
    sig: &dyn Fn(&DivisorGraph, usize) -> (Degrees, u32),
) -> bool {
    if v == map.len() {
        return true;
    }
    for w in 0..map.len() {
        if used[w] || sig(g1, v) != sig(g2, w) {
            continue;
        }
        let consistent = (0..v).all(|u| {
            g1.has_edge(u, v) == g2.has_edge(map[u], w)
                && g1.has_edge(v, u) == g2.has_edge(w, map[u])
        });
        if consistent {
            map[v] = w;
            used[w] = true;
            if extend(g1, g2, v + 1, map, used, sig) {
                return true;
            }
            used[w] = false;
        }
    }
    false
}
