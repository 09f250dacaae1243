use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::parse::{format_linear, parse_linear};
use super::{FiberCache, Ring};
use crate::error::Result;

/// `a + b·i + c·j + d·k` with integer coefficients (the Lipschitz order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Quaternion {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        Quaternion {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn zero() -> Self {
        Quaternion::new(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Quaternion::new(1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quaternion {
            a: self.a.clone(),
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// `a² + b² + c² + d²`.
    pub fn norm(&self) -> BigUint {
        let n = &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d;
        n.to_biguint().expect("sum of squares is nonnegative")
    }

    pub fn coeffs(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Exact division of every coefficient by `n`, if possible.
    pub(crate) fn div_exact(&self, n: &BigInt) -> Option<Self> {
        let mut out = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for (slot, c) in self.coeffs().into_iter().enumerate() {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            out[slot] = q;
        }
        let [a, b, c, d] = out;
        Some(Quaternion { a, b, c, d })
    }

    /// Number of nonzero coefficients.
    pub(crate) fn support(&self) -> usize {
        self.coeffs().iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_linear(&self.coeffs(), &['i', 'j', 'k']))
    }
}

impl Ord for Quaternion {
    /// Ascending norm, then each coefficient descending.
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| other.a.cmp(&self.a))
            .then_with(|| other.b.cmp(&self.b))
            .then_with(|| other.c.cmp(&self.c))
            .then_with(|| other.d.cmp(&self.d))
    }
}

impl PartialOrd for Quaternion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;

    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }
}

impl<'a> Sub<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;

    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl<'a> Mul<&'a Quaternion> for &'a Quaternion {
    type Output = Quaternion;

    // ij = k, jk = i, ki = j, i² = j² = k² = -1
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        Quaternion {
            a: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            b: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            c: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            d: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        }
    }
}

/// The Lipschitz order `ℤ[1, i, j, k]`.
#[derive(Clone, Debug, Default)]
pub struct Lipschitz {
    fibers: FiberCache<Quaternion>,
}

impl Lipschitz {
    pub fn new() -> Self {
        Lipschitz::default()
    }

    fn scan_fiber(n: u64) -> Vec<Quaternion> {
        let r = isqrt(n) as i64;
        let n = n as i64;
        let mut out = Vec::new();
        for a in -r..=r {
            let ra = n - a * a;
            for b in -r..=r {
                let rb = ra - b * b;
                if rb < 0 {
                    continue;
                }
                for c in -r..=r {
                    let rc = rb - c * c;
                    if rc < 0 {
                        continue;
                    }
                    let d = isqrt(rc as u64) as i64;
                    if d * d == rc {
                        out.push(Quaternion::new(a, b, c, d));
                        if d != 0 {
                            out.push(Quaternion::new(a, b, c, -d));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl Ring for Lipschitz {
    type Elem = Quaternion;

    fn name(&self) -> String {
        "lipschitz".into()
    }

    fn zero(&self) -> Quaternion {
        Quaternion::zero()
    }

    fn one(&self) -> Quaternion {
        Quaternion::one()
    }

    fn add(&self, a: &Quaternion, b: &Quaternion) -> Quaternion {
        a + b
    }

    fn neg(&self, a: &Quaternion) -> Quaternion {
        -a
    }

    fn mul(&self, a: &Quaternion, b: &Quaternion) -> Quaternion {
        a * b
    }

    fn gauge(&self, a: &Quaternion) -> BigUint {
        a.norm()
    }

    fn units(&self) -> Vec<Quaternion> {
        let mut units = Vec::with_capacity(8);
        for s in [1, -1] {
            units.push(Quaternion::new(s, 0, 0, 0));
            units.push(Quaternion::new(0, s, 0, 0));
            units.push(Quaternion::new(0, 0, s, 0));
            units.push(Quaternion::new(0, 0, 0, s));
        }
        units.sort();
        units
    }

    fn is_commutative(&self) -> bool {
        false
    }

    fn elements_of_gauge(&self, n: u64) -> Result<Arc<Vec<Quaternion>>> {
        Ok(self.fibers.get_or_compute(n, || Lipschitz::scan_fiber(n)))
    }

    fn right_quotient(&self, a: &Quaternion, b: &Quaternion) -> Option<Quaternion> {
        let n = BigInt::from(a.norm());
        (&a.conj() * b).div_exact(&n)
    }

    fn left_quotient(&self, a: &Quaternion, b: &Quaternion) -> Option<Quaternion> {
        let n = BigInt::from(a.norm());
        (b * &a.conj()).div_exact(&n)
    }

    fn generators(&self) -> Vec<Quaternion> {
        vec![
            Quaternion::new(0, 1, 0, 0),
            Quaternion::new(0, 0, 1, 0),
            Quaternion::new(0, 0, 0, 1),
        ]
    }

    fn parse(&self, text: &str) -> Result<Quaternion> {
        let c = parse_linear(text, &['i', 'j', 'k'])?;
        let [a, b, c, d]: [BigInt; 4] = c.try_into().expect("four slots");
        Ok(Quaternion { a, b, c, d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{
        are_associates, are_right_associates, canonical_rep, divides, is_normal, left_divides,
        right_divides,
    };

    fn q(s: &str) -> Quaternion {
        Lipschitz::new().parse(s).unwrap()
    }

    #[test]
    fn basis_table() {
        let one = q("1");
        let (i, j, k) = (q("i"), q("j"), q("k"));
        let basis = [&one, &i, &j, &k];
        // rows: left factor, columns: right factor
        let table = [
            ["1", "i", "j", "k"],
            ["i", "-1", "k", "-j"],
            ["j", "-k", "-1", "i"],
            ["k", "j", "-i", "-1"],
        ];
        for (r, x) in basis.iter().enumerate() {
            for (c, y) in basis.iter().enumerate() {
                assert_eq!(*x * *y, q(table[r][c]), "{x}*{y}");
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&q("1+i") * &q("1+j"), q("1+i+j+k"));
        assert_eq!(&q("1+i") * &q("1"), q("1+i"));
        assert_eq!(&(&q("1+i") * &q("1+i")) * &q("1+j"), q("2i+2k"));
    }

    #[test]
    fn gauge_examples() {
        let r = Lipschitz::new();
        assert_eq!(r.gauge(&q("1+i+j+k")), BigUint::from(4u32));
        assert_eq!(r.gauge(&q("1")), BigUint::from(1u32));
        assert_eq!(r.gauge(&q("2i+2k")), BigUint::from(8u32));
        assert_eq!(r.gauge(&q("0")), BigUint::from(0u32));
    }

    #[test]
    fn fibers_and_units() {
        let r = Lipschitz::new();
        assert_eq!(r.units().len(), 8);
        assert_eq!(*r.elements_of_gauge(1).unwrap(), {
            let mut u = r.units();
            u.sort();
            u
        });
        let two = r.elements_of_gauge(2).unwrap();
        assert_eq!(two.len(), 24);
        assert!(two.iter().all(|e| e.support() == 2));
        assert_eq!(r.elements_of_gauge(3).unwrap().len(), 32);
    }

    #[test]
    fn association() {
        let r = Lipschitz::new();
        assert!(are_associates(&r, &q("1+i"), &q("-1+i")));
        assert!(!are_associates(&r, &q("1+j"), &q("1+k")));
        assert!(are_associates(&r, &q("2+3k"), &q("2+3k")));
        assert!(are_right_associates(&r, &q("1+i"), &q("1+i")));
        assert!(are_right_associates(&r, &q("i-1"), &q("1+i")));
        assert!(!are_right_associates(&r, &q("1+j"), &q("1+i")));
        assert_eq!(canonical_rep(&r, &q("-1+i")), q("1+i"));
        assert_eq!(canonical_rep(&r, &q("-k")), q("1"));
        assert_ne!(canonical_rep(&r, &q("1+j")), canonical_rep(&r, &q("1+k")));
    }

    #[test]
    fn divisibility() {
        let r = Lipschitz::new();
        assert!(divides(&r, &q("1+i"), &q("2")).unwrap());
        assert!(divides(&r, &q("1+2j"), &q("1+2j")).unwrap());
        assert!(!divides(&r, &q("2i"), &q("1+i+j+k")).unwrap());
        assert!(right_divides(&r, &q("1+i"), &q("1+i+j+k")));
        assert!(right_divides(&r, &q("3-k"), &q("3-k")));
        assert!(left_divides(&r, &q("1+j"), &q("1+i+j+k")));
        assert!(right_divides(&r, &q("1+j"), &q("1+i+j+k")));
        assert!(!right_divides(&r, &q("1+i+j"), &q("1+2i+2j")));
        assert!(!left_divides(&r, &q("1+i+j"), &q("1+2i+2j")));
    }

    #[test]
    fn normality() {
        let r = Lipschitz::new();
        assert!(is_normal(&r, &q("1+i")).unwrap());
        assert!(is_normal(&r, &q("2")).unwrap());
        // regression value from the conjugation-integrality check
        assert!(!is_normal(&r, &q("1+i+j")).unwrap());
        assert!(is_normal(&r, &q("0")).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(q("2i+2k"), Quaternion::new(0, 2, 0, 2));
        assert_eq!(q("0"), Quaternion::zero());
        assert_eq!(q("1-k"), Quaternion::new(1, 0, 0, -1));
        assert_eq!(Quaternion::new(-1, 0, 2, 0).to_string(), "-1+2j");
        assert_eq!(Quaternion::new(0, -1, 0, 1).to_string(), "-i+k");
    }
}
