use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::parse::Cursor;
use super::Ring;
use crate::error::Result;

/// A rational integer; canonical order is `|n|` ascending with positives first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInt(pub BigInt);

impl RationalInt {
    pub fn new(n: impl Into<BigInt>) -> Self {
        RationalInt(n.into())
    }
}

impl fmt::Display for RationalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ord for RationalInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .abs()
            .cmp(&other.0.abs())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for RationalInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = RationalInt;

    fn name(&self) -> String {
        "integers".into()
    }

    fn zero(&self) -> RationalInt {
        RationalInt(BigInt::zero())
    }

    fn one(&self) -> RationalInt {
        RationalInt(BigInt::one())
    }

    fn add(&self, a: &RationalInt, b: &RationalInt) -> RationalInt {
        RationalInt(&a.0 + &b.0)
    }

    fn neg(&self, a: &RationalInt) -> RationalInt {
        RationalInt(-&a.0)
    }

    fn mul(&self, a: &RationalInt, b: &RationalInt) -> RationalInt {
        RationalInt(&a.0 * &b.0)
    }

    fn gauge(&self, a: &RationalInt) -> BigUint {
        a.0.magnitude().clone()
    }

    fn units(&self) -> Vec<RationalInt> {
        vec![RationalInt::new(1), RationalInt::new(-1)]
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn elements_of_gauge(&self, n: u64) -> Result<Arc<Vec<RationalInt>>> {
        Ok(Arc::new(if n == 0 {
            vec![self.zero()]
        } else {
            vec![RationalInt::new(n), RationalInt::new(-(n as i128))]
        }))
    }

    fn right_quotient(&self, a: &RationalInt, b: &RationalInt) -> Option<RationalInt> {
        let (q, r) = b.0.div_rem(&a.0);
        r.is_zero().then_some(RationalInt(q))
    }

    fn left_quotient(&self, a: &RationalInt, b: &RationalInt) -> Option<RationalInt> {
        self.right_quotient(a, b)
    }

    fn generators(&self) -> Vec<RationalInt> {
        Vec::new()
    }

    fn parse(&self, text: &str) -> Result<RationalInt> {
        let mut cur = Cursor::new(text);
        let negative = cur.sign().unwrap_or(false);
        let n = cur
            .digits()
            .ok_or_else(|| cur.error("expected a decimal literal"))?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(RationalInt(if negative { -n } else { n }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{canonical_rep, divides, is_normal};

    #[test]
    fn basics() {
        let z = Integers;
        assert_eq!(z.units(), vec![RationalInt::new(1), RationalInt::new(-1)]);
        assert_eq!(
            canonical_rep(&z, &RationalInt::new(-12)),
            RationalInt::new(12)
        );
        assert!(divides(&z, &RationalInt::new(3), &RationalInt::new(-12)).unwrap());
        assert!(!divides(&z, &RationalInt::new(5), &RationalInt::new(12)).unwrap());
        assert!(is_normal(&z, &RationalInt::new(2)).unwrap());
        assert_eq!(z.parse(" -42 ").unwrap(), RationalInt::new(-42));
        assert!(z.parse("4x").is_err());
        assert!(RationalInt::new(2) < RationalInt::new(-2));
        assert!(RationalInt::new(-2) < RationalInt::new(3));
    }
}
