//! Factorization into atoms for the computed backends.
//!
//! Factorizations are enumerated in a *fine* form: the leftmost factor is the
//! minimum of its right coset `aU`, the remaining factors are exact quotients,
//! and the unit prefix is absorbed. Every factorization is unit-migration
//! equivalent to exactly one fine sequence, so the fine sequences cover every
//! class. Classes are then formed positionally up to two-sided associates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rings::{
    canonical_rep, divisors, gauge_u64, is_nonzero_nonunit, is_normal, is_unit, pow, product,
    right_coset_rep, right_divides, Ring,
};

/// `unit_prefix · atoms[0] ⋯ atoms[m-1] = target`, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<E> {
    pub unit_prefix: E,
    pub atoms: Vec<E>,
    pub target: E,
}

impl<E: Clone + Eq> Factorization<E> {
    pub fn multiplies_back<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        ring.mul(&self.unit_prefix, &product(ring, &self.atoms)) == self.target
    }
}

/// A factorization up to positional two-sided association: each atom is
/// replaced by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorizationClass<E> {
    pub atoms: Vec<E>,
}

impl<E: fmt::Display> fmt::Display for FactorizationClass<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.atoms {
            write!(f, "({a})")?;
        }
        Ok(())
    }
}

impl<E: Ord + Clone> FactorizationClass<E> {
    /// Atom multiset, the key for permutation equivalence.
    pub fn sorted_atoms(&self) -> Vec<E> {
        let mut v = self.atoms.clone();
        v.sort();
        v
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

pub(crate) type Sequences<E> = Rc<Vec<Vec<E>>>;
/// Factorization classes, each with one representative factorization.
pub type ClassedFactorizations<E> = Vec<(FactorizationClass<E>, Factorization<E>)>;
/// Elements paired with their factorization classes.
pub type Census<E> = Vec<(E, Vec<FactorizationClass<E>>)>;

/// Memoized fine-sequence enumerator for one ring.
pub(crate) struct Splitter<'r, R: Ring> {
    ring: &'r R,
    atoms_only: bool,
    irreducible: HashMap<R::Elem, bool>,
    coset_reps: HashMap<u64, Rc<Vec<R::Elem>>>,
    memo: HashMap<R::Elem, Sequences<R::Elem>>,
}

impl<'r, R: Ring> Splitter<'r, R> {
    /// `atoms_only = false` enumerates factorizations into arbitrary nonunits.
    pub(crate) fn new(ring: &'r R, atoms_only: bool) -> Self {
        Splitter {
            ring,
            atoms_only,
            irreducible: HashMap::new(),
            coset_reps: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    fn coset_reps(&mut self, m: u64) -> Result<Rc<Vec<R::Elem>>> {
        if let Some(hit) = self.coset_reps.get(&m) {
            return Ok(hit.clone());
        }
        let reps: BTreeSet<R::Elem> = self
            .ring
            .elements_of_gauge(m)?
            .iter()
            .map(|e| right_coset_rep(self.ring, e))
            .collect();
        let reps = Rc::new(reps.into_iter().collect::<Vec<_>>());
        self.coset_reps.insert(m, reps.clone());
        Ok(reps)
    }

    pub(crate) fn is_irreducible(&mut self, x: &R::Elem) -> Result<bool> {
        if self.ring.is_zero(x) {
            return Err(Error::Domain(
                "irreducibility is only defined for nonzero elements".into(),
            ));
        }
        if !is_nonzero_nonunit(self.ring, x) {
            return Ok(false);
        }
        if let Some(&hit) = self.irreducible.get(x) {
            return Ok(hit);
        }
        let n = gauge_u64(self.ring, x)?;
        let mut irreducible = true;
        'scan: for m in divisors(n) {
            if m == 1 || m == n {
                continue;
            }
            for b in self.coset_reps(m)?.iter() {
                if right_divides(self.ring, b, x) {
                    irreducible = false;
                    break 'scan;
                }
            }
        }
        self.irreducible.insert(x.clone(), irreducible);
        Ok(irreducible)
    }

    /// All fine sequences with exact product `x`.
    pub(crate) fn sequences(&mut self, x: &R::Elem) -> Result<Rc<Vec<Vec<R::Elem>>>> {
        if !is_nonzero_nonunit(self.ring, x) {
            return Err(Error::Domain(format!(
                "factorization needs a nonzero nonunit, got {x}"
            )));
        }
        if let Some(hit) = self.memo.get(x) {
            return Ok(hit.clone());
        }
        let n = gauge_u64(self.ring, x)?;
        let mut out = Vec::new();
        if !self.atoms_only || self.is_irreducible(x)? {
            out.push(vec![x.clone()]);
        }
        for m in divisors(n) {
            if m == 1 || m == n {
                continue;
            }
            let reps = self.coset_reps(m)?;
            for b in reps.iter() {
                let Some(rest) = self.ring.right_quotient(b, x) else {
                    continue;
                };
                if self.atoms_only && !self.is_irreducible(b)? {
                    continue;
                }
                for tail in self.sequences(&rest)?.iter() {
                    let mut seq = Vec::with_capacity(tail.len() + 1);
                    seq.push(b.clone());
                    seq.extend(tail.iter().cloned());
                    out.push(seq);
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert(x.clone(), out.clone());
        Ok(out)
    }
}

pub(crate) fn canonical_class<R: Ring>(ring: &R, seq: &[R::Elem]) -> FactorizationClass<R::Elem> {
    FactorizationClass {
        atoms: seq.iter().map(|a| canonical_rep(ring, a)).collect(),
    }
}

/// False for units; true iff `a` is not a product of two nonunits.
pub fn is_irreducible<R: Ring>(ring: &R, a: &R::Elem) -> Result<bool> {
    Splitter::new(ring, true).is_irreducible(a)
}

/// Every factorization class of `x`, sorted by leftmost atom (gauge first).
pub fn factorizations<R: Ring>(ring: &R, x: &R::Elem) -> Result<Vec<FactorizationClass<R::Elem>>> {
    Ok(factorization_representatives(ring, x)?
        .into_iter()
        .map(|(c, _)| c)
        .collect())
}

/// Each class paired with one exact factorization in it.
pub fn factorization_representatives<R: Ring>(
    ring: &R,
    x: &R::Elem,
) -> Result<ClassedFactorizations<R::Elem>> {
    let mut splitter = Splitter::new(ring, true);
    let mut classes = BTreeMap::new();
    for seq in splitter.sequences(x)?.iter() {
        classes
            .entry(canonical_class(ring, seq))
            .or_insert_with(|| Factorization {
                unit_prefix: ring.one(),
                atoms: seq.clone(),
                target: x.clone(),
            });
    }
    Ok(classes.into_iter().collect())
}

/// The unit `λ` with `λ · Π class.atoms = x`, when the class admits a
/// prefix-only normal form.
pub fn prefix_form<R: Ring>(
    ring: &R,
    class: &FactorizationClass<R::Elem>,
    x: &R::Elem,
) -> Option<R::Elem> {
    let p = product(ring, &class.atoms);
    let lambda = ring.left_quotient(&p, x)?;
    is_unit(ring, &lambda).then_some(lambda)
}

/// Canonical representatives of the irreducible two-sided divisors of `x`.
pub fn irreducible_divisors<R: Ring>(ring: &R, x: &R::Elem) -> Result<Vec<R::Elem>> {
    let mut splitter = Splitter::new(ring, true);
    let mut seen = BTreeSet::new();
    for seq in splitter.sequences(x)?.iter() {
        for a in seq {
            seen.insert(canonical_rep(ring, a));
        }
    }
    Ok(seen.into_iter().collect())
}

/// Irreducible divisors found by scanning gauge fibers directly with the
/// two-sided divisibility test, independent of factorization enumeration.
pub fn irreducible_divisors_by_scan<R: Ring>(ring: &R, x: &R::Elem) -> Result<Vec<R::Elem>> {
    if !is_nonzero_nonunit(ring, x) {
        return Err(Error::Domain(format!("{x} is zero or a unit")));
    }
    let mut splitter = Splitter::new(ring, true);
    let n = gauge_u64(ring, x)?;
    let mut seen = BTreeSet::new();
    for m in divisors(n).into_iter().skip(1) {
        for e in ring.elements_of_gauge(m)?.iter() {
            let y = canonical_rep(ring, e);
            if seen.contains(&y) || !splitter.is_irreducible(&y)? {
                continue;
            }
            if crate::rings::divides(ring, &y, x)? {
                seen.insert(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Largest `n` with `yⁿ | x` (two-sided).
pub fn max_power_dividing<R: Ring>(ring: &R, y: &R::Elem, x: &R::Elem) -> Result<u32> {
    if !is_nonzero_nonunit(ring, y) {
        return Err(Error::Domain(format!("{y} must be a nonzero nonunit")));
    }
    if ring.is_zero(x) {
        return Err(Error::Domain("target must be nonzero".into()));
    }
    let mut n = 0;
    while crate::rings::divides(ring, &pow(ring, y, n + 1), x)? {
        n += 1;
    }
    Ok(n)
}

/// Largest `n` with `(y·w)ⁿ | x` for some unit `w`. Two-sided divisibility
/// absorbs outer units, and `(u·y·v)ⁿ = u·(y·vu)ⁿ·u⁻¹`, so this is the
/// largest power of any associate of `y`; it depends only on the class.
pub fn max_class_power_dividing<R: Ring>(ring: &R, y: &R::Elem, x: &R::Elem) -> Result<u32> {
    let mut right_associates: Vec<R::Elem> = ring.units().iter().map(|w| ring.mul(y, w)).collect();
    right_associates.sort();
    right_associates.dedup();
    let mut best = 0;
    for z in &right_associates {
        best = best.max(max_power_dividing(ring, z, x)?);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeVerdict<E> {
    /// No counterexample among pairs with both gauges at most `bound`.
    TrueUpToBound { bound: u64 },
    /// `p | ab` while `p ∤ a` and `p ∤ b`.
    Counterexample { a: E, b: E },
}

/// Bounded falsifier for primality of a normal element.
///
/// Counterexamples are ordered by `gauge(ab)`, then `ab`, `a`, `b` in element
/// order; the first one is returned. For normal `p` two-sided divisibility
/// coincides with `p |_r`, and both sides are stable under `a ↦ ua`,
/// `b ↦ bv`, so `a` and `b` range over unit-coset representatives only.
pub fn is_prime<R: Ring>(ring: &R, p: &R::Elem, bound: u64) -> Result<PrimeVerdict<R::Elem>> {
    if !is_normal(ring, p)? {
        return Err(Error::Domain(format!(
            "{p} is not normal; primality is undefined"
        )));
    }
    let gp = gauge_u64(ring, p)?;
    if bound < gp {
        return Err(Error::Usage(format!(
            "bound {bound} is below gauge({p}) = {gp}"
        )));
    }
    let units = ring.units();
    let mut lefts = BTreeSet::new();
    let mut rights = BTreeSet::new();
    for n in 1..=bound {
        for e in ring.elements_of_gauge(n)?.iter() {
            if right_divides(ring, p, e) {
                continue;
            }
            lefts.insert(units.iter().map(|u| ring.mul(u, e)).min().expect("units"));
            rights.insert(right_coset_rep(ring, e));
        }
    }
    let rights: Vec<_> = rights.into_iter().collect();
    let best = lefts
        .into_par_iter()
        .filter_map(|a| {
            rights
                .iter()
                .filter_map(|b| {
                    let ab = ring.mul(&a, b);
                    right_divides(ring, p, &ab).then(|| (ring.gauge(&ab), ab, a.clone(), b.clone()))
                })
                .min()
        })
        .min();
    Ok(match best {
        None => PrimeVerdict::TrueUpToBound { bound },
        Some((_, _, a, b)) => PrimeVerdict::Counterexample { a, b },
    })
}

/// Equal length and a permutation matching atoms up to association.
pub fn permutation_equivalent<R: Ring>(
    ring: &R,
    f: &FactorizationClass<R::Elem>,
    g: &FactorizationClass<R::Elem>,
) -> bool {
    let key = |c: &FactorizationClass<R::Elem>| {
        let mut v: Vec<_> = c.atoms.iter().map(|a| canonical_rep(ring, a)).collect();
        v.sort();
        v
    };
    f.len() == g.len() && key(f) == key(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UfdVerdict<E> {
    Consistent {
        checked: usize,
    },
    /// `x` has at least two permutation-inequivalent classes.
    Witness {
        x: E,
        classes: Vec<FactorizationClass<E>>,
    },
}

/// Every canonical nonunit of gauge at most `bound` whose factorizations are
/// not unique up to permutation, in element order.
pub fn uniqueness_violations<R: Ring>(ring: &R, bound: u64) -> Result<Census<R::Elem>> {
    let reps = crate::rings::nonunit_reps_up_to(ring, bound)?;
    let found: Result<Vec<_>> = reps
        .par_iter()
        .map(|x| {
            let classes = factorizations(ring, x)?;
            let groups: BTreeSet<_> = classes.iter().map(|c| c.sorted_atoms()).collect();
            Ok((groups.len() > 1).then(|| (x.clone(), classes)))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// First uniqueness violation among gauges up to `bound`, or consistency.
pub fn is_ufd_sample<R: Ring>(ring: &R, bound: u64) -> Result<UfdVerdict<R::Elem>> {
    let checked = crate::rings::nonunit_reps_up_to(ring, bound)?.len();
    Ok(
        match uniqueness_violations(ring, bound)?.into_iter().next() {
            Some((x, classes)) => UfdVerdict::Witness { x, classes },
            None => UfdVerdict::Consistent { checked },
        },
    )
}
