//! Exact arithmetic for the computed ring backends together with the
//! ring-generic notions built on top of it: units, association, canonical
//! representatives, one- and two-sided divisibility, and normality.
//!
//! Naming follows the factorization literature: `right_divides(a, b)` means
//! `b = a·c` for some `c` (the divisor sits on the left of the product), and
//! `left_divides(a, b)` means `b = c·a`.

mod integers;
pub(crate) mod parse;
mod quadratic;
mod quat_poly;
mod quaternion;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use integers::{Integers, RationalInt};
pub use quadratic::{Quadratic, QuadraticInt};
pub use quat_poly::{QuatPoly, QuaternionPoly};
pub use quaternion::{Lipschitz, Quaternion};

/// A computed ring backend: exact arithmetic plus the finite unit group and
/// the multiplicative gauge used to bound every search.
///
/// `Elem`'s `Ord` is the canonical element order: ascending gauge first, then
/// a backend-specific tie-break. The minimum of an associate orbit under this
/// order is the canonical representative.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync;

    /// Backend selector string, e.g. `lipschitz` or `quadratic:5`.
    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn gauge(&self, a: &Self::Elem) -> BigUint;
    /// The full (finite) unit group.
    fn units(&self) -> Vec<Self::Elem>;
    fn is_commutative(&self) -> bool;

    /// Whether `a` is an element of this particular ring instance.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    /// Every element of gauge exactly `n`, sorted in canonical order.
    fn elements_of_gauge(&self, n: u64) -> Result<Arc<Vec<Self::Elem>>>;

    fn has_finite_fibers(&self) -> bool {
        true
    }

    /// The `c` with `a·c = b`, if it exists (`a` nonzero).
    fn right_quotient(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// The `c` with `c·a = b`, if it exists (`a` nonzero).
    fn left_quotient(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Additive basis generators that are not central; normality only has to
    /// be checked against these.
    fn generators(&self) -> Vec<Self::Elem>;

    fn parse(&self, text: &str) -> Result<Self::Elem>;

    /// Polynomial degree, for backends that have one.
    fn degree(&self, _a: &Self::Elem) -> Option<usize> {
        None
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// Backend selector used by the CLI and the harnesses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingHandle {
    Lipschitz,
    Quadratic(u64),
    Integers,
    QuatPoly,
}

impl RingHandle {
    pub fn quadratic(d: u64) -> Result<Self> {
        quadratic::validate_parameter(d)?;
        Ok(RingHandle::Quadratic(d))
    }

    pub fn has_finite_fibers(&self) -> bool {
        !matches!(self, RingHandle::QuatPoly)
    }
}

impl FromStr for RingHandle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lipschitz" => Ok(RingHandle::Lipschitz),
            "integers" => Ok(RingHandle::Integers),
            "quat-poly" => Ok(RingHandle::QuatPoly),
            other => {
                let d = other
                    .strip_prefix("quadratic:")
                    .ok_or_else(|| Error::Usage(format!("unknown ring '{other}'")))?;
                let d: u64 = d
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad quadratic parameter '{d}'")))?;
                RingHandle::quadratic(d)
            }
        }
    }
}

impl fmt::Display for RingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingHandle::Lipschitz => f.write_str("lipschitz"),
            RingHandle::Quadratic(d) => write!(f, "quadratic:{d}"),
            RingHandle::Integers => f.write_str("integers"),
            RingHandle::QuatPoly => f.write_str("quat-poly"),
        }
    }
}

/// Binds `$ring` to a concrete backend for `$handle` and evaluates `$body`.
#[macro_export]
macro_rules! with_ring {
    ($handle:expr, |$ring:ident| $body:expr) => {
        match $handle {
            $crate::rings::RingHandle::Lipschitz => {
                let $ring = $crate::rings::Lipschitz::new();
                $body
            }
            $crate::rings::RingHandle::Quadratic(d) => {
                let $ring = $crate::rings::Quadratic::from_validated(*d);
                $body
            }
            $crate::rings::RingHandle::Integers => {
                let $ring = $crate::rings::Integers;
                $body
            }
            $crate::rings::RingHandle::QuatPoly => {
                let $ring = $crate::rings::QuatPoly;
                $body
            }
        }
    };
}

/// Per-ring memo of gauge fibers, shared by clones of the ring.
#[derive(Debug, Clone)]
pub(crate) struct FiberCache<E> {
    inner: Arc<RwLock<HashMap<u64, Arc<Vec<E>>>>>,
}

impl<E> Default for FiberCache<E> {
    fn default() -> Self {
        FiberCache {
            inner: Arc::default(),
        }
    }
}

impl<E: Clone> FiberCache<E> {
    pub(crate) fn get_or_compute(&self, n: u64, compute: impl FnOnce() -> Vec<E>) -> Arc<Vec<E>> {
        if let Some(hit) = self.inner.read().expect("fiber cache poisoned").get(&n) {
            return hit.clone();
        }
        let fresh = Arc::new(compute());
        self.inner
            .write()
            .expect("fiber cache poisoned")
            .entry(n)
            .or_insert(fresh)
            .clone()
    }
}

/// Ring product with a membership check on both operands.
pub fn mul<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
    for (name, x) in [("left", a), ("right", b)] {
        if !ring.contains(x) {
            return Err(Error::Usage(format!(
                "{name} operand {x} is not an element of {}",
                ring.name()
            )));
        }
    }
    Ok(ring.mul(a, b))
}

pub fn product<'a, R: Ring>(ring: &R, factors: impl IntoIterator<Item = &'a R::Elem>) -> R::Elem
where
    R::Elem: 'a,
{
    factors
        .into_iter()
        .fold(ring.one(), |acc, f| ring.mul(&acc, f))
}

pub fn pow<R: Ring>(ring: &R, a: &R::Elem, n: u32) -> R::Elem {
    (0..n).fold(ring.one(), |acc, _| ring.mul(&acc, a))
}

/// Gauge as a machine integer; searches over gauge fibers need this.
pub fn gauge_u64<R: Ring>(ring: &R, a: &R::Elem) -> Result<u64> {
    ring.gauge(a)
        .to_u64()
        .ok_or_else(|| Error::Unsupported(format!("gauge of {a} exceeds the search range")))
}

pub fn is_unit<R: Ring>(ring: &R, a: &R::Elem) -> bool {
    ring.gauge(a).is_one()
}

pub fn is_nonzero_nonunit<R: Ring>(ring: &R, a: &R::Elem) -> bool {
    let g = ring.gauge(a);
    !g.is_zero() && !g.is_one()
}

/// Inverse of a unit; `None` when `u` is not a unit.
pub fn unit_inverse<R: Ring>(ring: &R, u: &R::Elem) -> Option<R::Elem> {
    let one = ring.one();
    ring.units().into_iter().find(|v| ring.mul(u, v) == one)
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `{u·a·v : u, v units}`.
pub fn associate_orbit<R: Ring>(ring: &R, a: &R::Elem) -> BTreeSet<R::Elem> {
    let units = ring.units();
    if ring.is_commutative() {
        return units.iter().map(|u| ring.mul(u, a)).collect();
    }
    let mut orbit = BTreeSet::new();
    for u in &units {
        let ua = ring.mul(u, a);
        for v in &units {
            orbit.insert(ring.mul(&ua, v));
        }
    }
    orbit
}

/// Two-sided association: `a = u·b·v` for some units `u`, `v`.
pub fn are_associates<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> bool {
    if ring.gauge(a) != ring.gauge(b) {
        return false;
    }
    if a == b {
        return true;
    }
    let units = ring.units();
    units.iter().any(|u| {
        let ub = ring.mul(u, b);
        units.iter().any(|v| ring.mul(&ub, v) == *a)
    })
}

/// `a = b·u` for some unit `u`.
pub fn are_right_associates<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> bool {
    ring.gauge(a) == ring.gauge(b) && ring.units().iter().any(|u| ring.mul(b, u) == *a)
}

/// Minimum of the two-sided associate orbit in canonical element order.
///
/// The order puts larger leading coefficients first, so the representative
/// of `-1+i` is `1+i` and every unit maps to `1`.
pub fn canonical_rep<R: Ring>(ring: &R, a: &R::Elem) -> R::Elem {
    associate_orbit(ring, a)
        .into_iter()
        .next()
        .expect("orbit contains a itself")
}

/// Representative of the right coset `a·U`, used to enumerate left factors
/// once per unit-migration class.
pub(crate) fn right_coset_rep<R: Ring>(ring: &R, a: &R::Elem) -> R::Elem {
    ring.units()
        .iter()
        .map(|u| ring.mul(a, u))
        .min()
        .expect("unit group is nonempty")
}

/// `b = a·c` for some `c`.
pub fn right_divides<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> bool {
    ring.right_quotient(a, b).is_some()
}

/// `b = c·a` for some `c`.
pub fn left_divides<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> bool {
    ring.left_quotient(a, b).is_some()
}

/// Two-sided divisibility `b = c·a·d`.
///
/// Decided by enumerating the left cofactor `c` over the gauge fibers of the
/// divisors of `gauge(b)/gauge(a)` and testing exact quotients.
pub fn divides<R: Ring>(ring: &R, a: &R::Elem, b: &R::Elem) -> Result<bool> {
    if ring.is_zero(a) {
        return Err(Error::Domain("divisor must be nonzero".into()));
    }
    if ring.is_zero(b) {
        return Ok(true);
    }
    let (ga, gb) = (ring.gauge(a), ring.gauge(b));
    if !(&gb % &ga).is_zero() {
        return Ok(false);
    }
    if right_divides(ring, a, b) || left_divides(ring, a, b) {
        return Ok(true);
    }
    if ring.is_commutative() {
        return Ok(false);
    }
    if !ring.has_finite_fibers() {
        return Err(Error::Unsupported(format!(
            "two-sided divisibility in {} needs finite gauge fibers",
            ring.name()
        )));
    }
    let cofactor = (gb / ga)
        .to_u64()
        .ok_or_else(|| Error::Unsupported("gauge too large for cofactor search".into()))?;
    for m in divisors(cofactor) {
        for c in ring.elements_of_gauge(m)?.iter() {
            if let Some(e) = ring.right_quotient(c, b) {
                if right_divides(ring, a, &e) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// `aD = Da`, decided exactly: for every generator `g`, `a·g ∈ D·a` and
/// `g·a ∈ a·D`.
pub fn is_normal<R: Ring>(ring: &R, a: &R::Elem) -> Result<bool> {
    if ring.is_zero(a) {
        return Err(Error::Domain(
            "normality is only tested for nonzero elements".into(),
        ));
    }
    if ring.is_commutative() {
        return Ok(true);
    }
    Ok(ring
        .generators()
        .iter()
        .all(|g| left_divides(ring, a, &ring.mul(a, g)) && right_divides(ring, a, &ring.mul(g, a))))
}

pub fn parse_element<R: Ring>(ring: &R, text: &str) -> Result<R::Elem> {
    ring.parse(text)
}

pub fn format_element<R: Ring>(_ring: &R, a: &R::Elem) -> String {
    a.to_string()
}

/// Canonical representatives of the nonzero nonunits with gauge in `2..=bound`,
/// in canonical order.
pub fn nonunit_reps_up_to<R: Ring>(ring: &R, bound: u64) -> Result<Vec<R::Elem>> {
    let mut out = Vec::new();
    for n in 2..=bound {
        let mut seen = BTreeSet::new();
        for e in ring.elements_of_gauge(n)?.iter() {
            seen.insert(canonical_rep(ring, e));
        }
        out.extend(seen);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn ring_handles_parse() {
        assert_eq!(
            "lipschitz".parse::<RingHandle>().unwrap(),
            RingHandle::Lipschitz
        );
        assert_eq!(
            "quadratic:5".parse::<RingHandle>().unwrap(),
            RingHandle::Quadratic(5)
        );
        assert!("quadratic:4".parse::<RingHandle>().is_err());
        assert!("quadratic:0".parse::<RingHandle>().is_err());
        assert!("hurwitz".parse::<RingHandle>().is_err());
        assert_eq!(RingHandle::Quadratic(5).to_string(), "quadratic:5");
    }
}
