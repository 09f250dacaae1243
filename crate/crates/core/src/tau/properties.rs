//! Bounded falsifiers for relation properties, the Condition (*)/(**)
//! witness search, and the τ-ACCPr chain probe.
//!
//! All properties quantify over the whole ring; these checks only search a
//! finite sample and report the sample size when nothing is found.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorize::is_irreducible;
use crate::rings::{
    are_associates, associate_orbit, canonical_rep, gauge_u64, is_nonzero_nonunit, is_normal,
    is_unit, nonunit_reps_up_to, Ring,
};

use super::computed::TauEngine;
use super::relation::{BoundRelation, TauRelation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PropertyVerdict {
    NoCounterexample {
        sample_size: usize,
    },
    Witness {
        detail: String,
        elements: Vec<String>,
    },
}

impl PropertyVerdict {
    pub fn is_witness(&self) -> bool {
        matches!(self, PropertyVerdict::Witness { .. })
    }

    fn witness<E: ToString>(detail: impl Into<String>, elements: &[&E]) -> Self {
        PropertyVerdict::Witness {
            detail: detail.into(),
            elements: elements.iter().map(|e| e.to_string()).collect(),
        }
    }
}

fn nonunits<R: Ring>(ring: &R, sample: &[R::Elem]) -> Vec<R::Elem> {
    sample
        .iter()
        .filter(|e| is_nonzero_nonunit(ring, e))
        .cloned()
        .collect()
}

/// `a τ b` and `b ~ b′` imply `a τ b′`, with `b′` ranging over the full
/// two-sided associate orbit of `b`.
pub fn is_associate_preserving<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
) -> Result<PropertyVerdict> {
    let bound = BoundRelation::new(ring, rel)?;
    let s = nonunits(ring, sample);
    for a in &s {
        for b in &s {
            if !bound.related(a, b)? {
                continue;
            }
            for b2 in associate_orbit(ring, b) {
                if !bound.related(a, &b2)? {
                    return Ok(PropertyVerdict::witness(
                        format!("{a} τ {b} but not {a} τ {b2}"),
                        &[a, b, &b2],
                    ));
                }
            }
        }
    }
    Ok(PropertyVerdict::NoCounterexample {
        sample_size: s.len(),
    })
}

#[derive(Clone, Copy)]
enum Side {
    Right,
    Left,
}

fn multiply<R: Ring>(ring: &R, side: Side, a: &R::Elem, m: &R::Elem) -> R::Elem {
    match side {
        Side::Right => ring.mul(a, m),
        Side::Left => ring.mul(m, a),
    }
}

fn multiplicative<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
    side: Side,
) -> Result<PropertyVerdict> {
    let bound = BoundRelation::new(ring, rel)?;
    let s = nonunits(ring, sample);
    for a in &s {
        for b in &s {
            if !bound.related(a, b)? {
                continue;
            }
            for m in &s {
                let (am, bm) = (multiply(ring, side, a, m), multiply(ring, side, b, m));
                if !bound.related(&am, &bm)? {
                    let detail = match side {
                        Side::Right => format!("{a} τ {b} but not ({a})({m}) τ ({b})({m})"),
                        Side::Left => format!("{a} τ {b} but not ({m})({a}) τ ({m})({b})"),
                    };
                    return Ok(PropertyVerdict::witness(detail, &[a, b, m]));
                }
            }
        }
    }
    Ok(PropertyVerdict::NoCounterexample {
        sample_size: s.len(),
    })
}

fn cancellative<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
    side: Side,
) -> Result<PropertyVerdict> {
    let bound = BoundRelation::new(ring, rel)?;
    let s = nonunits(ring, sample);
    for a in &s {
        for b in &s {
            if bound.related(a, b)? {
                continue;
            }
            for m in &s {
                let (am, bm) = (multiply(ring, side, a, m), multiply(ring, side, b, m));
                if bound.related(&am, &bm)? {
                    let detail = match side {
                        Side::Right => format!("({a})({m}) τ ({b})({m}) but not {a} τ {b}"),
                        Side::Left => format!("({m})({a}) τ ({m})({b}) but not {a} τ {b}"),
                    };
                    return Ok(PropertyVerdict::witness(detail, &[a, b, m]));
                }
            }
        }
    }
    Ok(PropertyVerdict::NoCounterexample {
        sample_size: s.len(),
    })
}

/// `a τ b` implies `ax τ bx` for every multiplier in the sample.
pub fn is_right_multiplicative<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
) -> Result<PropertyVerdict> {
    multiplicative(ring, rel, sample, Side::Right)
}

/// `a τ b` implies `xa τ xb`.
pub fn is_left_multiplicative<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
) -> Result<PropertyVerdict> {
    multiplicative(ring, rel, sample, Side::Left)
}

/// `ax τ bx` implies `a τ b`.
pub fn is_right_cancellative<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
) -> Result<PropertyVerdict> {
    cancellative(ring, rel, sample, Side::Right)
}

/// `xa τ xb` implies `a τ b`.
pub fn is_left_cancellative<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
) -> Result<PropertyVerdict> {
    cancellative(ring, rel, sample, Side::Left)
}

/// Every τ-refinement of a τ-factorization of a sample element is again a
/// τ-factorization. Needs finite gauge fibers.
pub fn is_refinable<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    sample: &[R::Elem],
) -> Result<PropertyVerdict> {
    let engine = TauEngine::new(ring, rel)?;
    let s = nonunits(ring, sample);
    for x in &s {
        for seq in engine.sequences(x)?.iter().filter(|s| s.len() > 1) {
            for (i, a) in seq.iter().enumerate() {
                for sub in engine.sequences(a)?.iter().filter(|s| s.len() > 1) {
                    let mut refined = seq[..i].to_vec();
                    refined.extend(sub.iter().cloned());
                    refined.extend(seq[i + 1..].iter().cloned());
                    if !engine.relation().pairwise(&refined)? {
                        let shown = refined.iter().map(|f| format!("({f})")).collect::<String>();
                        return Ok(PropertyVerdict::Witness {
                            detail: format!("refining factor {a} of a τ-factorization of {x} gives {shown}, not a τ-factorization"),
                            elements: refined.iter().map(ToString::to_string).collect(),
                        });
                    }
                }
            }
        }
    }
    Ok(PropertyVerdict::NoCounterexample {
        sample_size: s.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionVariant {
    /// Normal irreducible triples.
    Star,
    /// Normal τ-irreducible triples.
    StarStar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionVerdict<E> {
    NoWitness {
        bound: u64,
    },
    /// `a·r = r′·a` with `r ≁ r′`.
    Witness {
        a: E,
        r: E,
        r_prime: E,
    },
}

/// Searches normal (τ-)irreducible `a, r, r′` of gauge at most `bound` with
/// `a·r = r′·a` and `r`, `r′` not associated. The first hit in canonical
/// order of `(a, r)` wins.
pub fn condition_witness<R: Ring>(
    ring: &R,
    bound: u64,
    variant: ConditionVariant,
    rel: &TauRelation,
) -> Result<ConditionVerdict<R::Elem>> {
    if ring.is_commutative() {
        return Ok(ConditionVerdict::NoWitness { bound });
    }
    let engine = TauEngine::new(ring, rel)?;
    let mut pool = Vec::new();
    for c in nonunit_reps_up_to(ring, bound)? {
        let irreducible = match variant {
            ConditionVariant::Star => is_irreducible(ring, &c)?,
            ConditionVariant::StarStar => engine.is_tau_irreducible(&c)?,
        };
        if irreducible && is_normal(ring, &c)? {
            pool.push(c);
        }
    }
    let members: BTreeSet<_> = pool.iter().cloned().collect();
    let pairs: Vec<(usize, usize)> = (0..pool.len())
        .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
        .collect();
    let hit = pairs.par_iter().find_map_first(|&(i, j)| {
        let (a, r) = (&pool[i], &pool[j]);
        let r_prime = ring.left_quotient(a, &ring.mul(a, r))?;
        (members.contains(&canonical_rep(ring, &r_prime)) && !are_associates(ring, r, &r_prime))
            .then(|| (a.clone(), r.clone(), r_prime))
    });
    Ok(match hit {
        Some((a, r, r_prime)) => ConditionVerdict::Witness { a, r, r_prime },
        None => ConditionVerdict::NoWitness { bound },
    })
}

/// Instance checks of the conjugation lemma: for normal τ-irreducible `x`
/// and `x·r = r′·x` with gauges at most `bound`, `r` and `r′` agree on being
/// units and on normality, and (when `rel` passes the right-multiplicative
/// and left-cancellative falsifiers on the sample) on τ-irreducibility.
pub fn lemma_instance_check<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    bound: u64,
) -> Result<PropertyVerdict> {
    let engine = TauEngine::new(ring, rel)?;
    let reps = nonunit_reps_up_to(ring, bound)?;
    let check_tau = !is_right_multiplicative(ring, rel, &reps)?.is_witness()
        && !is_left_cancellative(ring, rel, &reps)?.is_witness();
    let mut checked = 0;
    for x in &reps {
        if !engine.is_tau_irreducible(x)? || !is_normal(ring, x)? {
            continue;
        }
        for g in 1..=bound {
            for r in ring.elements_of_gauge(g)?.iter() {
                let Some(r2) = ring.left_quotient(x, &ring.mul(x, r)) else {
                    continue;
                };
                checked += 1;
                if is_unit(ring, r) != is_unit(ring, &r2) {
                    return Ok(PropertyVerdict::witness(
                        "unit status differs",
                        &[x, r, &r2],
                    ));
                }
                if is_normal(ring, r)? != is_normal(ring, &r2)? {
                    return Ok(PropertyVerdict::witness("normality differs", &[x, r, &r2]));
                }
                if check_tau
                    && !is_unit(ring, r)
                    && engine.is_tau_irreducible(r)? != engine.is_tau_irreducible(&r2)?
                {
                    return Ok(PropertyVerdict::witness(
                        "τ-irreducibility differs",
                        &[x, r, &r2],
                    ));
                }
            }
        }
    }
    Ok(PropertyVerdict::NoCounterexample {
        sample_size: checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AccpVerdict<E> {
    /// No proper τ-divisor after `depth` steps.
    Stabilized {
        depth: usize,
        chain: Vec<E>,
    },
    DepthExceeded {
        chain: Vec<E>,
    },
}

impl<E> AccpVerdict<E> {
    pub fn chain(&self) -> &[E] {
        match self {
            AccpVerdict::Stabilized { chain, .. } | AccpVerdict::DepthExceeded { chain } => chain,
        }
    }
}

/// Greedy τ-divisor chain from `start`: each step moves to the proper
/// τ-divisor of largest gauge (smallest in canonical order on ties).
pub fn tau_accp_probe<R: Ring>(
    ring: &R,
    rel: &TauRelation,
    start: &R::Elem,
    max_depth: usize,
) -> Result<AccpVerdict<R::Elem>> {
    if !is_nonzero_nonunit(ring, start) {
        return Err(Error::Domain(format!("{start} is zero or a unit")));
    }
    let engine = TauEngine::new(ring, rel)?;
    let mut chain = vec![canonical_rep(ring, start)];
    loop {
        let cur = chain.last().expect("chain is nonempty");
        let mut best: Option<(u64, R::Elem)> = None;
        for d in engine.proper_tau_divisors(cur)? {
            let g = gauge_u64(ring, &d)?;
            if best.as_ref().is_none_or(|(bg, _)| g > *bg) {
                best = Some((g, d));
            }
        }
        let Some((_, next)) = best else {
            return Ok(AccpVerdict::Stabilized {
                depth: chain.len() - 1,
                chain,
            });
        };
        if chain.len() > max_depth {
            return Ok(AccpVerdict::DepthExceeded { chain });
        }
        chain.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Integers, Lipschitz, Quadratic, QuatPoly};

    #[test]
    fn tau_two_is_not_right_multiplicative() {
        let p = QuatPoly;
        let e = |s: &str| p.parse(s).unwrap();
        let rel = TauRelation::pairs([("1+x", "1+j")]);
        let v = is_right_multiplicative(&p, &rel, &[e("x"), e("1+x"), e("1+j")]).unwrap();
        match v {
            PropertyVerdict::Witness { elements, .. } => {
                assert_eq!(elements, vec!["1+x", "1+j", "x"])
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn full_and_gauge_relations_hold_on_samples() {
        let r = Lipschitz::new();
        let sample = nonunit_reps_up_to(&r, 6).unwrap();
        for rel in [TauRelation::Full, TauRelation::GaugeEq] {
            assert!(!is_right_multiplicative(&r, &rel, &sample)
                .unwrap()
                .is_witness());
            assert!(!is_left_multiplicative(&r, &rel, &sample)
                .unwrap()
                .is_witness());
            assert!(!is_associate_preserving(&r, &rel, &sample)
                .unwrap()
                .is_witness());
        }
        for check in [
            is_right_cancellative::<Lipschitz>,
            is_left_cancellative,
            is_refinable,
        ] {
            assert!(!check(&r, &TauRelation::Full, &sample).unwrap().is_witness());
        }
    }

    #[test]
    fn gauge_relation_is_not_refinable() {
        // 4 = 2·2 is gauge-equal; splitting one 2 gives gauges (2, 2, 4).
        let r = Lipschitz::new();
        let x = r.parse("4").unwrap();
        let v = is_refinable(&r, &TauRelation::GaugeEq, &[x]).unwrap();
        assert!(v.is_witness(), "{v:?}");
    }

    #[test]
    fn lipschitz_condition_witness() {
        let r = Lipschitz::new();
        let v = condition_witness(&r, 2, ConditionVariant::StarStar, &TauRelation::Full).unwrap();
        let q = |s: &str| r.parse(s).unwrap();
        assert_eq!(
            v,
            ConditionVerdict::Witness {
                a: q("1+i"),
                r: q("1+j"),
                r_prime: q("1+k")
            }
        );
        assert!(matches!(
            condition_witness(&Integers, 50, ConditionVariant::Star, &TauRelation::Full).unwrap(),
            ConditionVerdict::NoWitness { .. }
        ));
        let z5 = Quadratic::new(5).unwrap();
        assert!(matches!(
            condition_witness(&z5, 36, ConditionVariant::Star, &TauRelation::Full).unwrap(),
            ConditionVerdict::NoWitness { .. }
        ));
    }

    #[test]
    fn accp_chains() {
        let r = Lipschitz::new();
        let v = tau_accp_probe(&r, &TauRelation::Full, &r.parse("2i+2k").unwrap(), 10).unwrap();
        assert!(matches!(v, AccpVerdict::Stabilized { depth, .. } if depth <= 3));
        let z = Integers;
        let v = tau_accp_probe(&z, &TauRelation::Full, &z.parse("60").unwrap(), 10).unwrap();
        assert_eq!(
            v.chain()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
            ["60", "30", "15", "5"]
        );
        let v = tau_accp_probe(&r, &TauRelation::Full, &r.parse("1+i").unwrap(), 10).unwrap();
        assert_eq!(
            v,
            AccpVerdict::Stabilized {
                depth: 0,
                chain: vec![r.parse("1+i").unwrap()]
            }
        );
        let v = tau_accp_probe(&z, &TauRelation::Full, &z.parse("64").unwrap(), 2).unwrap();
        assert!(matches!(v, AccpVerdict::DepthExceeded { .. }));
    }

    #[test]
    fn lemma_instances_hold() {
        let r = Lipschitz::new();
        let v = lemma_instance_check(&r, &TauRelation::Full, 4).unwrap();
        assert!(!v.is_witness(), "{v:?}");
    }
}
