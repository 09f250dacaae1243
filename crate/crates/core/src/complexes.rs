//! Irreducible divisor graphs `G(x)`, `Γ(x)` and the simplicial complex `S(x)`.
//!
//! Every builder works against a [`DivisorOracle`]: a vertex list plus a
//! test for whether an ordered vertex sequence divides the target. The same
//! builders therefore serve computed rings, declared systems and the
//! τ-variants.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::declared::DeclaredSystem;
use crate::error::{Error, Result};
use crate::factorize::{factorizations, irreducible_divisors, max_class_power_dividing};
use crate::rings::{canonical_rep, divides, gauge_u64, is_nonzero_nonunit, product, Ring};

/// Source of vertices and product divisibility for one target.
pub trait DivisorOracle {
    fn labels(&self) -> Vec<String>;
    /// Whether the ordered product of the given vertices divides the target.
    fn product_divides(&self, seq: &[usize]) -> Result<bool>;
    /// `n − 1` where `n` is the largest dividing power of (an associate of) the vertex.
    fn loop_count(&self, v: usize) -> Result<u32>;
    /// Cheap necessary condition for some ordering of `set` to divide.
    fn feasible(&self, _set: &[usize]) -> bool {
        true
    }
    /// False when every ordering of a set gives the same verdict.
    fn order_matters(&self) -> bool {
        true
    }
}

/// Oracle over a computed ring, using two-sided divisibility of products of
/// canonical representatives.
pub struct ComputedOracle<'r, R: Ring> {
    ring: &'r R,
    x: R::Elem,
    vertices: Vec<R::Elem>,
    gauges: Vec<u64>,
    target_gauge: u64,
}

impl<'r, R: Ring> ComputedOracle<'r, R> {
    pub fn new(ring: &'r R, x: &R::Elem) -> Result<Self> {
        if !is_nonzero_nonunit(ring, x) {
            return Err(Error::Domain(format!("{x} is zero or a unit")));
        }
        let vertices = irreducible_divisors(ring, x)?;
        let gauges = vertices
            .iter()
            .map(|v| gauge_u64(ring, v))
            .collect::<Result<_>>()?;
        Ok(ComputedOracle {
            ring,
            x: x.clone(),
            target_gauge: gauge_u64(ring, x)?,
            vertices,
            gauges,
        })
    }

    pub fn vertices(&self) -> &[R::Elem] {
        &self.vertices
    }
}

impl<R: Ring> DivisorOracle for ComputedOracle<'_, R> {
    fn labels(&self) -> Vec<String> {
        self.vertices.iter().map(ToString::to_string).collect()
    }

    fn product_divides(&self, seq: &[usize]) -> Result<bool> {
        let p = product(self.ring, seq.iter().map(|&i| &self.vertices[i]));
        divides(self.ring, &p, &self.x)
    }

    fn loop_count(&self, v: usize) -> Result<u32> {
        Ok(max_class_power_dividing(self.ring, &self.vertices[v], &self.x)?.saturating_sub(1))
    }

    fn feasible(&self, set: &[usize]) -> bool {
        let g = set
            .iter()
            .try_fold(1u64, |acc, &i| acc.checked_mul(self.gauges[i]));
        matches!(g, Some(g) if self.target_gauge.is_multiple_of(g))
    }

    fn order_matters(&self) -> bool {
        !self.ring.is_commutative()
    }
}

/// Oracle over a declared system (consecutive-subword semantics).
pub struct DeclaredOracle<'s> {
    sys: &'s DeclaredSystem,
    classes: Vec<usize>,
}

impl<'s> DeclaredOracle<'s> {
    pub fn new(sys: &'s DeclaredSystem) -> Self {
        let classes: BTreeSet<usize> = sys.factorization_classes().into_iter().flatten().collect();
        DeclaredOracle {
            sys,
            classes: classes.into_iter().collect(),
        }
    }
}

impl DivisorOracle for DeclaredOracle<'_> {
    fn labels(&self) -> Vec<String> {
        self.classes
            .iter()
            .map(|&c| self.sys.class_label(c).to_owned())
            .collect()
    }

    fn product_divides(&self, seq: &[usize]) -> Result<bool> {
        let classes: Vec<usize> = seq.iter().map(|&i| self.classes[i]).collect();
        Ok(self.sys.divides_classes(&classes))
    }

    fn loop_count(&self, v: usize) -> Result<u32> {
        Ok(self.sys.max_power(self.classes[v]).saturating_sub(1))
    }
}

/// A divisor graph with labelled vertices. Undirected edges are stored once
/// with the smaller index first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorGraph {
    pub directed: bool,
    pub vertices: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
    pub loops: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    directed: bool,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    loops: BTreeMap<String, u32>,
}

impl DivisorGraph {
    pub fn new(directed: bool, vertices: Vec<String>) -> Self {
        let n = vertices.len();
        DivisorGraph {
            directed,
            vertices,
            edges: BTreeSet::new(),
            loops: vec![0; n],
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are stored as counts, not edges");
        let e = if self.directed || a < b {
            (a, b)
        } else {
            (b, a)
        };
        self.edges.insert(e);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if self.directed {
            self.edges.contains(&(a, b))
        } else {
            self.edges.contains(&(a.min(b), a.max(b)))
        }
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Edges as label pairs (undirected pairs in vertex order).
    pub fn edge_labels(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].clone(), self.vertices[b].clone()))
            .collect()
    }

    pub fn loop_map(&self) -> BTreeMap<String, u32> {
        self.vertices
            .iter()
            .cloned()
            .zip(self.loops.iter().copied())
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Equality by labels, independent of vertex order.
    pub fn same_as(&self, other: &DivisorGraph) -> bool {
        let norm = |g: &DivisorGraph| -> BTreeSet<(String, String)> {
            g.edge_labels()
                .into_iter()
                .map(|(a, b)| if g.directed || a <= b { (a, b) } else { (b, a) })
                .collect()
        };
        self.directed == other.directed
            && self.vertices.iter().collect::<BTreeSet<_>>()
                == other.vertices.iter().collect::<BTreeSet<_>>()
            && norm(self) == norm(other)
            && self.loop_map() == other.loop_map()
    }

    /// The same graph with every loop removed.
    pub fn reduced(&self) -> DivisorGraph {
        DivisorGraph {
            loops: vec![0; self.vertices.len()],
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            directed: self.directed,
            vertices: self.vertices.clone(),
            edges: self.edge_labels().into_iter().collect(),
            loops: self.loop_map(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)
            .map_err(|e| Error::validation("", format!("malformed graph document: {e}")))?;
        let mut g = DivisorGraph::new(doc.directed, doc.vertices);
        for (i, (a, b)) in doc.edges.iter().enumerate() {
            let lookup = |l: &str| {
                g.vertex_index(l).ok_or_else(|| {
                    Error::validation(format!("/edges/{i}"), format!("unknown vertex '{l}'"))
                })
            };
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            g.add_edge(ia, ib);
        }
        for (l, n) in doc.loops {
            let i = g
                .vertex_index(&l)
                .ok_or_else(|| Error::validation(format!("/loops/{l}"), "unknown vertex"))?;
            g.loops[i] = n;
        }
        Ok(g)
    }

    /// DOT text; each loop is emitted as a separate self-edge.
    pub fn to_dot(&self) -> String {
        let (kw, arrow) = if self.directed {
            ("digraph", "->")
        } else {
            ("graph", "--")
        };
        let mut out = format!("{kw} G {{\n");
        for v in &self.vertices {
            out.push_str(&format!("  {};\n", dot_quote(v)));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!(
                "  {} {arrow} {};\n",
                dot_quote(&self.vertices[a]),
                dot_quote(&self.vertices[b])
            ));
        }
        for (v, &n) in self.vertices.iter().zip(&self.loops) {
            for _ in 0..n {
                let q = dot_quote(v);
                out.push_str(&format!("  {q} {arrow} {q};\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Parses the DOT subset produced by [`DivisorGraph::to_dot`].
    pub fn from_dot(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty DOT document"))?;
        let directed = if header.starts_with("digraph") {
            true
        } else if header.starts_with("graph") {
            false
        } else {
            return Err(Error::parse(0, "expected 'graph' or 'digraph'"));
        };
        let arrow = if directed { "->" } else { "--" };
        let mut g = DivisorGraph::new(directed, Vec::new());
        let mut pending = Vec::new();
        for (ln, line) in lines.enumerate() {
            if line == "}" {
                break;
            }
            let body = line
                .strip_suffix(';')
                .ok_or_else(|| Error::parse(ln + 1, "expected ';' at end of statement"))?;
            let (first, rest) =
                dot_unquote(body).ok_or_else(|| Error::parse(ln + 1, "expected a quoted id"))?;
            let rest = rest.trim();
            if rest.is_empty() {
                g.vertices.push(first);
                g.loops.push(0);
                continue;
            }
            let rest = rest
                .strip_prefix(arrow)
                .ok_or_else(|| Error::parse(ln + 1, format!("expected '{arrow}'")))?;
            let (second, tail) = dot_unquote(rest.trim())
                .ok_or_else(|| Error::parse(ln + 1, "expected a quoted id"))?;
            if !tail.trim().is_empty() {
                return Err(Error::parse(ln + 1, "unexpected trailing tokens"));
            }
            pending.push((ln + 1, first, second));
        }
        for (ln, a, b) in pending {
            let ia = g
                .vertex_index(&a)
                .ok_or_else(|| Error::parse(ln, format!("undeclared vertex '{a}'")))?;
            let ib = g
                .vertex_index(&b)
                .ok_or_else(|| Error::parse(ln, format!("undeclared vertex '{b}'")))?;
            if ia == ib {
                g.loops[ia] += 1;
            } else {
                g.add_edge(ia, ib);
            }
        }
        Ok(g)
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Reads one quoted id from the front of `s`; returns it and the remainder.
fn dot_unquote(s: &str) -> Option<(String, &str)> {
    let s = s.strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = s.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?.1),
            '"' => return Some((out, &s[i + 1..])),
            c => out.push(c),
        }
    }
    None
}

/// A face family on labelled vertices. Faces are sorted index lists and
/// always include `∅` and every singleton; the family need not be
/// downward closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    pub faces: BTreeSet<Vec<usize>>,
    pub loops: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    vertices: Vec<String>,
    faces: Vec<Vec<String>>,
    facets: Vec<Vec<String>>,
    loops: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardVerdict {
    Standard,
    /// `face` is in the family but its subset `missing` is not.
    Witness {
        face: Vec<String>,
        missing: Vec<String>,
    },
}

impl SimplicialComplex {
    pub fn new(vertices: Vec<String>, loops: Vec<u32>) -> Self {
        let mut faces = BTreeSet::new();
        faces.insert(Vec::new());
        for v in 0..vertices.len() {
            faces.insert(vec![v]);
        }
        SimplicialComplex {
            vertices,
            faces,
            loops,
        }
    }

    pub fn face_labels(&self, face: &[usize]) -> Vec<String> {
        let mut v: Vec<String> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        v.sort();
        v
    }

    /// All faces as sorted label sets.
    pub fn face_sets(&self) -> BTreeSet<Vec<String>> {
        self.faces.iter().map(|f| self.face_labels(f)).collect()
    }

    /// Faces of dimension `d` (that is, `d + 1` vertices).
    pub fn faces_of_dim(&self, d: usize) -> BTreeSet<Vec<String>> {
        self.faces
            .iter()
            .filter(|f| f.len() == d + 1)
            .map(|f| self.face_labels(f))
            .collect()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces
            .iter()
            .map(Vec::len)
            .max()
            .and_then(|n| n.checked_sub(1))
    }

    /// Inclusion-maximal faces.
    pub fn facets(&self) -> BTreeSet<Vec<String>> {
        let sets: Vec<BTreeSet<usize>> = self
            .faces
            .iter()
            .map(|f| f.iter().copied().collect())
            .collect();
        sets.iter()
            .filter(|s| !s.is_empty() || self.vertices.is_empty())
            .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
            .map(|s| self.face_labels(&s.iter().copied().collect::<Vec<_>>()))
            .collect()
    }

    pub fn skeleton(&self, l: usize) -> SimplicialComplex {
        SimplicialComplex {
            faces: self
                .faces
                .iter()
                .filter(|f| f.len() <= l + 1)
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    /// Undirected graph of the 1-faces, with the complex's loop annotations.
    pub fn one_skeleton_graph(&self) -> DivisorGraph {
        let mut g = DivisorGraph::new(false, self.vertices.clone());
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            g.add_edge(f[0], f[1]);
        }
        g.loops = self.loops.clone();
        g
    }

    pub fn is_standard(&self) -> StandardVerdict {
        let mut by_size: Vec<&Vec<usize>> = self.faces.iter().collect();
        by_size.sort_by_key(|f| (f.len(), (*f).clone()));
        for face in by_size {
            let k = face.len();
            for mask in 1..(1u64 << k) - 1 {
                let sub: Vec<usize> = (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| face[b])
                    .collect();
                if !self.faces.contains(&sub) {
                    return StandardVerdict::Witness {
                        face: self.face_labels(face),
                        missing: self.face_labels(&sub),
                    };
                }
            }
        }
        StandardVerdict::Standard
    }

    pub fn is_powerset_complex(&self) -> bool {
        self.faces.len() as u128 == 1u128 << self.vertices.len()
    }

    /// Complex on the union of the vertex sets with faces `{A ∪ B}`. A vertex
    /// shared by both sides carries power `n_a + n_b`, i.e. `l_a + l_b + 1` loops.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut vertices = self.vertices.clone();
        let mut loops = self.loops.clone();
        let mut remap = Vec::with_capacity(other.vertices.len());
        for (v, &l) in other.vertices.iter().zip(&other.loops) {
            match vertices.iter().position(|w| w == v) {
                Some(i) => {
                    loops[i] += l + 1;
                    remap.push(i);
                }
                None => {
                    vertices.push(v.clone());
                    loops.push(l);
                    remap.push(vertices.len() - 1);
                }
            }
        }
        let mut faces = BTreeSet::new();
        for a in &self.faces {
            for b in &other.faces {
                let mut f: BTreeSet<usize> = a.iter().copied().collect();
                f.extend(b.iter().map(|&i| remap[i]));
                faces.insert(f.into_iter().collect());
            }
        }
        SimplicialComplex {
            vertices,
            faces,
            loops,
        }
    }

    /// Equality by labels (vertex sets, face sets and loops).
    pub fn same_as(&self, other: &SimplicialComplex) -> bool {
        let loops = |s: &SimplicialComplex| -> BTreeMap<String, u32> {
            s.vertices
                .iter()
                .cloned()
                .zip(s.loops.iter().copied())
                .filter(|&(_, n)| n > 0)
                .collect()
        };
        self.vertices.iter().collect::<BTreeSet<_>>()
            == other.vertices.iter().collect::<BTreeSet<_>>()
            && self.face_sets() == other.face_sets()
            && loops(self) == loops(other)
    }

    pub fn to_json(&self) -> String {
        let doc = ComplexDoc {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|f| self.face_labels(f)).collect(),
            facets: self.facets().into_iter().collect(),
            loops: self
                .vertices
                .iter()
                .cloned()
                .zip(self.loops.iter().copied())
                .filter(|&(_, n)| n > 0)
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("complex serializes")
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn some_ordering_divides(oracle: &dyn DivisorOracle, set: &[usize]) -> Result<bool> {
    if !oracle.feasible(set) {
        return Ok(false);
    }
    if !oracle.order_matters() {
        return oracle.product_divides(set);
    }
    for p in permutations(set) {
        if oracle.product_divides(&p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `Γ(x)` when `directed`, else `G(x)`.
pub fn build_graph(oracle: &dyn DivisorOracle, directed: bool) -> Result<DivisorGraph> {
    let mut g = DivisorGraph::new(directed, oracle.labels());
    let n = g.vertices.len();
    for a in 0..n {
        g.loops[a] = oracle.loop_count(a)?;
        for b in 0..n {
            if a == b || (!directed && b < a) {
                continue;
            }
            let ab = oracle.feasible(&[a, b]) && oracle.product_divides(&[a, b])?;
            let hit = if directed {
                ab
            } else {
                ab || (oracle.feasible(&[a, b]) && oracle.product_divides(&[b, a])?)
            };
            if hit {
                g.add_edge(a, b);
            }
        }
    }
    Ok(g)
}

/// `S(x)`: every vertex subset some ordering of which divides the target.
pub fn build_complex(oracle: &dyn DivisorOracle) -> Result<SimplicialComplex> {
    let labels = oracle.labels();
    let n = labels.len();
    if n > 20 {
        return Err(Error::Unsupported(format!(
            "{n} vertices is beyond the face enumeration limit"
        )));
    }
    let loops = (0..n)
        .map(|v| oracle.loop_count(v))
        .collect::<Result<_>>()?;
    let mut s = SimplicialComplex::new(labels, loops);
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
        if some_ordering_divides(oracle, &set)? {
            s.faces.insert(set);
        }
    }
    Ok(s)
}

pub fn build_undirected_graph<R: Ring>(ring: &R, x: &R::Elem) -> Result<DivisorGraph> {
    build_graph(&ComputedOracle::new(ring, x)?, false)
}

pub fn build_directed_graph<R: Ring>(ring: &R, x: &R::Elem) -> Result<DivisorGraph> {
    build_graph(&ComputedOracle::new(ring, x)?, true)
}

pub fn complex_of<R: Ring>(ring: &R, x: &R::Elem) -> Result<SimplicialComplex> {
    build_complex(&ComputedOracle::new(ring, x)?)
}

pub fn declared_graph(sys: &DeclaredSystem, directed: bool) -> Result<DivisorGraph> {
    build_graph(&DeclaredOracle::new(sys), directed)
}

pub fn declared_complex(sys: &DeclaredSystem) -> Result<SimplicialComplex> {
    build_complex(&DeclaredOracle::new(sys))
}

/// Whether the 1-skeleton of `S(x)` equals `G(x)`, loops included.
pub fn skeleton1_equals_graph(oracle: &dyn DivisorOracle) -> Result<bool> {
    let s = build_complex(oracle)?;
    let g = build_graph(oracle, false)?;
    Ok(s.skeleton(1).one_skeleton_graph().same_as(&g))
}

/// A factorization of `x` whose atom classes are exactly `facet`.
pub fn facet_to_factorization<R: Ring>(
    ring: &R,
    x: &R::Elem,
    facet: &[String],
) -> Result<Option<Vec<R::Elem>>> {
    let want: BTreeSet<&String> = facet.iter().collect();
    for class in factorizations(ring, x)? {
        let labels: Vec<String> = class
            .atoms
            .iter()
            .map(|a| canonical_rep(ring, a).to_string())
            .collect();
        if labels.iter().collect::<BTreeSet<_>>() == want {
            return Ok(Some(class.atoms));
        }
    }
    Ok(None)
}

/// Declared counterpart of [`facet_to_factorization`].
pub fn declared_facet_to_factorization(
    sys: &DeclaredSystem,
    facet: &[String],
) -> Option<Vec<String>> {
    let want: BTreeSet<&str> = facet.iter().map(String::as_str).collect();
    sys.factorization_classes().into_iter().find_map(|f| {
        let got: BTreeSet<&str> = f.iter().map(|&c| sys.class_label(c)).collect();
        (got == want).then(|| f.iter().map(|&c| sys.class_label(c).to_owned()).collect())
    })
}
