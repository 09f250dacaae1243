use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::parse::{format_linear, parse_linear};
use super::quaternion::isqrt;
use super::{FiberCache, Ring};
use crate::error::{Error, Result};

/// `a + b·s` with `s = √−d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticInt {
    pub a: BigInt,
    pub b: BigInt,
    pub d: u64,
}

impl QuadraticInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, d: u64) -> Self {
        QuadraticInt {
            a: a.into(),
            b: b.into(),
            d,
        }
    }

    pub fn conj(&self) -> Self {
        QuadraticInt {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    /// `a² + d·b²`.
    pub fn norm(&self) -> BigUint {
        let n = &self.a * &self.a + BigInt::from(self.d) * &self.b * &self.b;
        n.to_biguint().expect("positive definite form")
    }
}

impl fmt::Display for QuadraticInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_linear(&[&self.a, &self.b], &['s']))
    }
}

impl Ord for QuadraticInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d
            .cmp(&other.d)
            .then_with(|| self.norm().cmp(&other.norm()))
            .then_with(|| other.a.cmp(&self.a))
            .then_with(|| other.b.cmp(&self.b))
    }
}

impl PartialOrd for QuadraticInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(super) fn validate_parameter(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::Usage("quadratic parameter must be positive".into()));
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return Err(Error::Usage(format!(
                "quadratic parameter {d} is not square-free"
            )));
        }
        p += 1;
    }
    Ok(())
}

/// The imaginary quadratic order `ℤ[√−d]`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    d: u64,
    fibers: FiberCache<QuadraticInt>,
}

impl Quadratic {
    pub fn new(d: u64) -> Result<Self> {
        validate_parameter(d)?;
        Ok(Quadratic::from_validated(d))
    }

    #[doc(hidden)]
    pub fn from_validated(d: u64) -> Self {
        Quadratic {
            d,
            fibers: FiberCache::default(),
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn elem(&self, a: i64, b: i64) -> QuadraticInt {
        QuadraticInt::new(a, b, self.d)
    }

    fn scan_fiber(&self, n: u64) -> Vec<QuadraticInt> {
        let rb = isqrt(n / self.d) as i64;
        let mut out = Vec::new();
        for b in -rb..=rb {
            let rest = n as i64 - self.d as i64 * b * b;
            if rest < 0 {
                continue;
            }
            let a = isqrt(rest as u64) as i64;
            if a * a == rest {
                out.push(self.elem(a, b));
                if a != 0 {
                    out.push(self.elem(-a, b));
                }
            }
        }
        out.sort();
        out
    }

    fn div_exact(&self, num: &QuadraticInt, n: &BigInt) -> Option<QuadraticInt> {
        let (qa, ra) = num.a.div_rem(n);
        let (qb, rb) = num.b.div_rem(n);
        (ra.is_zero() && rb.is_zero()).then_some(QuadraticInt {
            a: qa,
            b: qb,
            d: self.d,
        })
    }
}

impl Ring for Quadratic {
    type Elem = QuadraticInt;

    fn name(&self) -> String {
        format!("quadratic:{}", self.d)
    }

    fn zero(&self) -> QuadraticInt {
        self.elem(0, 0)
    }

    fn one(&self) -> QuadraticInt {
        self.elem(1, 0)
    }

    fn add(&self, x: &QuadraticInt, y: &QuadraticInt) -> QuadraticInt {
        QuadraticInt {
            a: &x.a + &y.a,
            b: &x.b + &y.b,
            d: self.d,
        }
    }

    fn neg(&self, x: &QuadraticInt) -> QuadraticInt {
        QuadraticInt {
            a: -&x.a,
            b: -&x.b,
            d: self.d,
        }
    }

    fn mul(&self, x: &QuadraticInt, y: &QuadraticInt) -> QuadraticInt {
        let d = BigInt::from(self.d);
        QuadraticInt {
            a: &x.a * &y.a - d * &x.b * &y.b,
            b: &x.a * &y.b + &x.b * &y.a,
            d: self.d,
        }
    }

    fn gauge(&self, x: &QuadraticInt) -> BigUint {
        x.norm()
    }

    fn units(&self) -> Vec<QuadraticInt> {
        self.scan_fiber(1)
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn contains(&self, x: &QuadraticInt) -> bool {
        x.d == self.d
    }

    fn elements_of_gauge(&self, n: u64) -> Result<Arc<Vec<QuadraticInt>>> {
        Ok(self.fibers.get_or_compute(n, || self.scan_fiber(n)))
    }

    fn right_quotient(&self, x: &QuadraticInt, y: &QuadraticInt) -> Option<QuadraticInt> {
        let n = BigInt::from(x.norm());
        self.div_exact(&self.mul(y, &x.conj()), &n)
    }

    fn left_quotient(&self, x: &QuadraticInt, y: &QuadraticInt) -> Option<QuadraticInt> {
        self.right_quotient(x, y)
    }

    fn generators(&self) -> Vec<QuadraticInt> {
        vec![self.elem(0, 1)]
    }

    fn parse(&self, text: &str) -> Result<QuadraticInt> {
        let c = parse_linear(text, &['s'])?;
        let [a, b]: [BigInt; 2] = c.try_into().expect("two slots");
        Ok(QuadraticInt { a, b, d: self.d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{canonical_rep, divides, mul};

    #[test]
    fn units_and_fibers() {
        let r = Quadratic::new(5).unwrap();
        assert_eq!(r.units(), vec![r.elem(1, 0), r.elem(-1, 0)]);
        let six = r.elements_of_gauge(6).unwrap();
        assert_eq!(
            *six,
            vec![r.elem(1, 1), r.elem(1, -1), r.elem(-1, 1), r.elem(-1, -1)]
        );
        assert_eq!(Quadratic::new(1).unwrap().units().len(), 4);
    }

    #[test]
    fn arithmetic_and_divisibility() {
        let r = Quadratic::new(5).unwrap();
        let p = r.parse("1+s").unwrap();
        let q = r.parse("1-s").unwrap();
        assert_eq!(r.mul(&p, &q), r.elem(6, 0));
        assert!(divides(&r, &r.elem(2, 0), &r.elem(6, 0)).unwrap());
        assert!(!divides(&r, &r.elem(2, 0), &p).unwrap());
        assert_eq!(canonical_rep(&r, &r.elem(-1, 1)), q);
    }

    #[test]
    fn mixed_rings_rejected() {
        let r5 = Quadratic::new(5).unwrap();
        let r3 = Quadratic::new(3).unwrap();
        let err = mul(&r5, &r5.elem(1, 1), &r3.elem(1, 1)).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Quadratic::new(0).is_err());
        assert!(Quadratic::new(12).is_err());
        assert!(Quadratic::new(6).is_ok());
    }
}
