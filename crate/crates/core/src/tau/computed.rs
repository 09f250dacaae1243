use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::complexes::{build_graph, DivisorOracle};
use crate::error::{Error, Result};
use crate::factorize::{canonical_class, FactorizationClass, Sequences, Splitter};
use crate::rings::{canonical_rep, gauge_u64, is_nonzero_nonunit, is_unit, pow, product, Ring};

use super::relation::{BoundRelation, TauRelation};
use super::TauGraphs;

/// `unit_prefix · factors[0] ⋯ factors[m-1] = target`, factors pairwise τ-related.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauFactorization<E> {
    pub unit_prefix: E,
    pub factors: Vec<E>,
    pub target: E,
}

impl<E: Clone + Eq> TauFactorization<E> {
    pub fn multiplies_back<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        ring.mul(&self.unit_prefix, &product(ring, &self.factors)) == self.target
    }
}

/// Enumerates fine τ-sequences (exact product, unit prefix absorbed).
///
/// Fine sequences cover every factorization up to unit migration, and every
/// supported relation is invariant under associates, so filtering them by
/// pairwise relatedness yields every τ-factorization class.
pub(crate) struct TauEngine<'r, R: Ring> {
    ring: &'r R,
    rel: BoundRelation<'r, R>,
    splitter: RefCell<Splitter<'r, R>>,
    memo: RefCell<HashMap<R::Elem, Sequences<R::Elem>>>,
}

impl<'r, R: Ring> TauEngine<'r, R> {
    pub(crate) fn new(ring: &'r R, rel: &TauRelation) -> Result<Self> {
        Ok(TauEngine {
            ring,
            rel: BoundRelation::new(ring, rel)?,
            splitter: RefCell::new(Splitter::new(ring, false)),
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub(crate) fn relation(&self) -> &BoundRelation<'r, R> {
        &self.rel
    }

    pub(crate) fn sequences(&self, x: &R::Elem) -> Result<Rc<Vec<Vec<R::Elem>>>> {
        if let Some(hit) = self.memo.borrow().get(x) {
            return Ok(hit.clone());
        }
        let all = self.splitter.borrow_mut().sequences(x)?;
        let mut kept = Vec::new();
        for seq in all.iter() {
            if self.rel.pairwise(seq)? {
                kept.push(seq.clone());
            }
        }
        let kept = Rc::new(kept);
        self.memo.borrow_mut().insert(x.clone(), kept.clone());
        Ok(kept)
    }

    pub(crate) fn is_tau_irreducible(&self, x: &R::Elem) -> Result<bool> {
        Ok(self.sequences(x)?.iter().all(|s| s.len() == 1))
    }

    /// Canonical representatives of proper τ-divisors of `x` (factors of a
    /// nontrivial τ-factorization).
    pub(crate) fn proper_tau_divisors(&self, x: &R::Elem) -> Result<BTreeSet<R::Elem>> {
        let cx = canonical_rep(self.ring, x);
        Ok(self
            .sequences(x)?
            .iter()
            .flatten()
            .map(|f| canonical_rep(self.ring, f))
            .filter(|f| *f != cx)
            .collect())
    }
}

fn require_nonunit<R: Ring>(ring: &R, x: &R::Elem) -> Result<()> {
    if is_nonzero_nonunit(ring, x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{x} is zero or a unit")))
    }
}

/// Every τ-factorization class of `x`, including the trivial length-1 class.
pub fn tau_factorizations<R: Ring>(
    ring: &R,
    x: &R::Elem,
    rel: &TauRelation,
) -> Result<Vec<FactorizationClass<R::Elem>>> {
    Ok(tau_factorization_representatives(ring, x, rel)?
        .into_iter()
        .map(|(c, _)| c)
        .collect())
}

/// τ-factorization classes, each with one representative.
pub type ClassedTauFactorizations<E> = Vec<(FactorizationClass<E>, TauFactorization<E>)>;

pub fn tau_factorization_representatives<R: Ring>(
    ring: &R,
    x: &R::Elem,
    rel: &TauRelation,
) -> Result<ClassedTauFactorizations<R::Elem>> {
    require_nonunit(ring, x)?;
    let engine = TauEngine::new(ring, rel)?;
    let mut classes = BTreeMap::new();
    for seq in engine.sequences(x)?.iter() {
        classes
            .entry(canonical_class(ring, seq))
            .or_insert_with(|| TauFactorization {
                unit_prefix: ring.one(),
                factors: seq.clone(),
                target: x.clone(),
            });
    }
    Ok(classes.into_iter().collect())
}

pub fn is_tau_irreducible<R: Ring>(ring: &R, x: &R::Elem, rel: &TauRelation) -> Result<bool> {
    require_nonunit(ring, x)?;
    TauEngine::new(ring, rel)?.is_tau_irreducible(x)
}

/// Some τ-factorization of `x` has a factor associate to `a`.
pub fn tau_divides<R: Ring>(ring: &R, a: &R::Elem, x: &R::Elem, rel: &TauRelation) -> Result<bool> {
    require_nonunit(ring, a)?;
    require_nonunit(ring, x)?;
    let ca = canonical_rep(ring, a);
    let engine = TauEngine::new(ring, rel)?;
    let found = engine
        .sequences(x)?
        .iter()
        .flatten()
        .any(|f| canonical_rep(ring, f) == ca);
    Ok(found)
}

fn run_matches<R: Ring>(ring: &R, seq: &[R::Elem], ys: &[R::Elem], target_class: &R::Elem) -> bool {
    seq.windows(ys.len()).any(|w| {
        w.iter().zip(ys).all(|(f, y)| canonical_rep(ring, f) == *y)
            && canonical_rep(ring, &product(ring, w)) == *target_class
    })
}

/// Some τ-factorization of `x` contains a consecutive run `b₁…b_k` with each
/// `bᵢ ~ yᵢ` and `b₁⋯b_k ~ y₁⋯y_k`.
pub fn tau_product_divides<R: Ring>(
    ring: &R,
    ys: &[R::Elem],
    x: &R::Elem,
    rel: &TauRelation,
) -> Result<bool> {
    if ys.is_empty() {
        return Err(Error::Usage("product sequence must be nonempty".into()));
    }
    for y in ys {
        require_nonunit(ring, y)?;
    }
    require_nonunit(ring, x)?;
    let engine = TauEngine::new(ring, rel)?;
    let ys: Vec<_> = ys.iter().map(|y| canonical_rep(ring, y)).collect();
    let pc = canonical_rep(ring, &product(ring, &ys));
    Ok(engine
        .sequences(x)?
        .iter()
        .any(|s| run_matches(ring, s, &ys, &pc)))
}

/// Checks a proposed τ-factorization: nonunit factors, pairwise related, and
/// `λ·Π factors = x` for some unit `λ`. Works without finite gauge fibers.
pub fn is_tau_factorization<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    factors: &[R::Elem],
    x: &R::Elem,
) -> Result<bool> {
    if factors.is_empty() || !factors.iter().all(|f| is_nonzero_nonunit(ring, f)) {
        return Ok(false);
    }
    let bound = BoundRelation::new(ring, rel)?;
    if !bound.pairwise(factors)? {
        return Ok(false);
    }
    let p = product(ring, factors);
    Ok(ring
        .left_quotient(&p, x)
        .is_some_and(|lambda| is_unit(ring, &lambda)))
}

/// τ-divisor oracle over a computed ring. Vertices are the τ-irreducible
/// canonical factors occurring in τ-factorizations of the target.
pub struct TauOracle<'r, R: Ring> {
    ring: &'r R,
    sequences: Rc<Vec<Vec<R::Elem>>>,
    vertices: Vec<R::Elem>,
    gauges: Vec<u64>,
    target_gauge: u64,
}

impl<'r, R: Ring> TauOracle<'r, R> {
    pub fn new(ring: &'r R, x: &R::Elem, rel: &TauRelation) -> Result<Self> {
        require_nonunit(ring, x)?;
        let engine = TauEngine::new(ring, rel)?;
        let sequences = engine.sequences(x)?;
        let mut vertices = BTreeSet::new();
        for f in sequences.iter().flatten() {
            let c = canonical_rep(ring, f);
            if !vertices.contains(&c) && engine.is_tau_irreducible(&c)? {
                vertices.insert(c);
            }
        }
        let vertices: Vec<_> = vertices.into_iter().collect();
        let gauges = vertices
            .iter()
            .map(|v| gauge_u64(ring, v))
            .collect::<Result<_>>()?;
        Ok(TauOracle {
            ring,
            sequences,
            vertices,
            gauges,
            target_gauge: gauge_u64(ring, x)?,
        })
    }

    pub fn vertices(&self) -> &[R::Elem] {
        &self.vertices
    }
}

impl<R: Ring> DivisorOracle for TauOracle<'_, R> {
    fn labels(&self) -> Vec<String> {
        self.vertices.iter().map(ToString::to_string).collect()
    }

    fn product_divides(&self, seq: &[usize]) -> Result<bool> {
        let ys: Vec<_> = seq.iter().map(|&i| self.vertices[i].clone()).collect();
        let pc = canonical_rep(self.ring, &product(self.ring, &ys));
        Ok(self
            .sequences
            .iter()
            .any(|s| run_matches(self.ring, s, &ys, &pc)))
    }

    /// A run of `n` factors associate to `y` whose product is associate to
    /// `(y·w)ⁿ` for some unit `w`; under the full relation this is exactly the
    /// ordinary loop count.
    fn loop_count(&self, v: usize) -> Result<u32> {
        let y = &self.vertices[v];
        let units = self.ring.units();
        let mut n = 1;
        while self.feasible(&vec![v; n + 1]) {
            let ys = vec![y.clone(); n + 1];
            let powers: BTreeSet<R::Elem> = units
                .iter()
                .map(|w| {
                    canonical_rep(
                        self.ring,
                        &pow(self.ring, &self.ring.mul(y, w), n as u32 + 1),
                    )
                })
                .collect();
            let hit = self
                .sequences
                .iter()
                .any(|s| powers.iter().any(|pc| run_matches(self.ring, s, &ys, pc)));
            if !hit {
                break;
            }
            n += 1;
        }
        Ok(n as u32 - 1)
    }

    fn feasible(&self, set: &[usize]) -> bool {
        let g = set
            .iter()
            .try_fold(1u64, |acc, &i| acc.checked_mul(self.gauges[i]));
        matches!(g, Some(g) if self.target_gauge.is_multiple_of(g))
    }
}

pub fn build_tau_graphs<R: Ring>(ring: &R, x: &R::Elem, rel: &TauRelation) -> Result<TauGraphs> {
    let oracle = TauOracle::new(ring, x, rel)?;
    Ok(TauGraphs::from_pair(
        build_graph(&oracle, true)?,
        build_graph(&oracle, false)?,
    ))
}

/// Both sides of "`Γ_τ(x)` is a single loop-free vertex iff `x` is τ-irreducible".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingleVertexCheck {
    pub single_vertex: bool,
    pub tau_irreducible: bool,
}

impl SingleVertexCheck {
    pub fn agrees(&self) -> bool {
        self.single_vertex == self.tau_irreducible
    }
}

pub fn single_vertex_iff_tau_irreducible<R: Ring>(
    ring: &R,
    x: &R::Elem,
    rel: &TauRelation,
) -> Result<SingleVertexCheck> {
    Ok(SingleVertexCheck {
        single_vertex: build_tau_graphs(ring, x, rel)?.is_single_loopless_vertex(),
        tau_irreducible: is_tau_irreducible(ring, x, rel)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_directed_graph, build_undirected_graph};
    use crate::factorize::{factorizations, is_irreducible};
    use crate::rings::{Integers, Lipschitz, QuatPoly};

    fn q(s: &str) -> crate::rings::Quaternion {
        Lipschitz::new().parse(s).unwrap()
    }

    #[test]
    fn empty_relation_is_trivial() {
        let r = Lipschitz::new();
        let x = q("2i+2k");
        let classes = tau_factorizations(&r, &x, &TauRelation::Empty).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 1);
        assert!(is_tau_irreducible(&r, &x, &TauRelation::Empty).unwrap());
        let g = build_tau_graphs(&r, &x, &TauRelation::Empty).unwrap();
        assert!(g.is_single_loopless_vertex());
        assert!(g.undirected.edges.is_empty());
        assert!(tau_divides(&r, &q("2+2j"), &x, &TauRelation::Empty).unwrap());
        assert!(!tau_divides(&r, &q("1+j"), &x, &TauRelation::Empty).unwrap());
    }

    #[test]
    fn full_relation_adds_coarse_splittings() {
        let r = Lipschitz::new();
        let x = q("1+i+j+k");
        let classes = tau_factorizations(&r, &x, &TauRelation::Full).unwrap();
        // three atomic classes plus the trivial one
        assert_eq!(classes.len(), 4);
        let atomic = factorizations(&r, &x).unwrap();
        for c in &atomic {
            assert!(classes.contains(c));
        }
        for (_, f) in tau_factorization_representatives(&r, &x, &TauRelation::Full).unwrap() {
            assert!(f.multiplies_back(&r));
        }
    }

    #[test]
    fn gauge_equal_keeps_atomic_classes() {
        let r = Lipschitz::new();
        let x = q("2i+2k");
        let classes = tau_factorizations(&r, &x, &TauRelation::GaugeEq).unwrap();
        let nontrivial: Vec<_> = classes.iter().filter(|c| c.len() > 1).collect();
        assert_eq!(nontrivial.len(), 9);
        assert!(nontrivial.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn full_relation_matches_ordinary_graphs() {
        let r = Lipschitz::new();
        for s in ["1+i+j+k", "2i+2k", "2", "3+i", "1+2i+j"] {
            let x = q(s);
            let g = build_tau_graphs(&r, &x, &TauRelation::Full).unwrap();
            assert!(
                g.directed.same_as(&build_directed_graph(&r, &x).unwrap()),
                "{s}"
            );
            assert!(
                g.undirected
                    .same_as(&build_undirected_graph(&r, &x).unwrap()),
                "{s}"
            );
            assert_eq!(
                is_tau_irreducible(&r, &x, &TauRelation::Full).unwrap(),
                is_irreducible(&r, &x).unwrap()
            );
        }
    }

    #[test]
    fn integer_single_vertex_check() {
        let z = Integers;
        let six = z.parse("6").unwrap();
        let c = single_vertex_iff_tau_irreducible(&z, &six, &TauRelation::Full).unwrap();
        assert!(!c.single_vertex && !c.tau_irreducible && c.agrees());
        let g = build_tau_graphs(&z, &z.parse("12").unwrap(), &TauRelation::Full).unwrap();
        let v = g.directed.vertex_index("2").unwrap();
        assert_eq!(g.directed.loops[v], 1);
        assert!(tau_product_divides(
            &z,
            &[z.parse("2").unwrap(), z.parse("3").unwrap()],
            &six,
            &TauRelation::Full
        )
        .unwrap());
    }

    #[test]
    fn quaternion_polynomial_tau_two() {
        let p = QuatPoly;
        let e = |s: &str| p.parse(s).unwrap();
        let rel = TauRelation::pairs([("1+x", "1+j")]);
        let y = p.mul(&e("1+j"), &e("1+x"));
        assert!(is_tau_factorization(&p, &rel, &[e("1+j"), e("1+x")], &y).unwrap());
        // (1+j)(1+x) = (1+x)(1+j), so the swapped order also multiplies back
        assert!(is_tau_factorization(&p, &rel, &[e("1+x"), e("1+j")], &y).unwrap());
        let z = p.mul(&e("1-k"), &e("1+x"));
        assert!(!is_tau_factorization(&p, &rel, &[e("1-k"), e("1+x")], &z).unwrap());
        assert!(!is_tau_factorization(&p, &rel, &[e("1+j"), e("1+x")], &z).unwrap());
    }

    #[test]
    fn domain_errors() {
        let r = Lipschitz::new();
        assert!(tau_factorizations(&r, &q("i"), &TauRelation::Full).is_err());
        assert!(is_tau_irreducible(&r, &q("0"), &TauRelation::Full).is_err());
    }

    #[test]
    fn repeated_class_gives_a_loop() {
        let r = Lipschitz::new();
        let x = r.parse("-5i+j+k").unwrap();
        let g = build_tau_graphs(&r, &x, &TauRelation::Full).unwrap();
        assert_eq!(g.directed.loops, vec![2]);
        assert!(
            single_vertex_iff_tau_irreducible(&r, &x, &TauRelation::Full)
                .unwrap()
                .agrees()
        );
        assert!(g
            .directed
            .same_as(&crate::complexes::build_directed_graph(&r, &x).unwrap()));
    }
}
