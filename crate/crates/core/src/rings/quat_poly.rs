use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::parse::{parse_linear_terms, Cursor};
use super::{Lipschitz, Quaternion, Ring};
use crate::error::{Error, Result};

/// `Σ cₘ·xᵐ` with Lipschitz coefficients and a central indeterminate `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuaternionPoly {
    coeffs: Vec<Quaternion>,
}

impl QuaternionPoly {
    /// Builds a polynomial from low-to-high coefficients, trimming zeros.
    pub fn new(mut coeffs: Vec<Quaternion>) -> Self {
        while coeffs.last().is_some_and(Quaternion::is_zero) {
            coeffs.pop();
        }
        QuaternionPoly { coeffs }
    }

    pub fn constant(q: Quaternion) -> Self {
        QuaternionPoly::new(vec![q])
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        QuaternionPoly::new(vec![Quaternion::zero(), Quaternion::one()])
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Quaternion> {
        self.coeffs.last()
    }

    pub fn conj(&self) -> Self {
        QuaternionPoly {
            coeffs: self.coeffs.iter().map(Quaternion::conj).collect(),
        }
    }

    /// `N(lead)·2^deg`: multiplicative, 1 exactly on units, 0 only at zero.
    pub fn gauge(&self) -> BigUint {
        match self.lead() {
            None => BigUint::zero(),
            Some(l) => l.norm() << self.coeffs.len().saturating_sub(1),
        }
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = Quaternion::zero();
        QuaternionPoly::new(
            (0..n)
                .map(|m| {
                    let a = self.coeffs.get(m).unwrap_or(&zero);
                    let b = o.coeffs.get(m).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QuaternionPoly::new(Vec::new());
        }
        let mut out = vec![Quaternion::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (m, a) in self.coeffs.iter().enumerate() {
            for (n, b) in o.coeffs.iter().enumerate() {
                out[m + n] = &out[m + n] + &(a * b);
            }
        }
        QuaternionPoly::new(out)
    }

    /// Divides every quaternion component exactly by the integer polynomial
    /// `den` (low-to-high, nonzero leading term).
    fn div_by_integer_poly(&self, den: &[BigInt]) -> Option<Self> {
        let comps: Vec<Vec<BigInt>> = (0..4)
            .map(|s| self.coeffs.iter().map(|q| q.coeffs()[s].clone()).collect())
            .collect();
        let mut quots = Vec::with_capacity(4);
        for c in comps {
            quots.push(int_poly_div_exact(c, den)?);
        }
        let len = quots.iter().map(Vec::len).max().unwrap_or(0);
        let get = |s: usize, m: usize| quots[s].get(m).cloned().unwrap_or_else(BigInt::zero);
        Some(QuaternionPoly::new(
            (0..len)
                .map(|m| Quaternion::new(get(0, m), get(1, m), get(2, m), get(3, m)))
                .collect(),
        ))
    }

    /// `conj(p)·p` as an integer polynomial.
    fn norm_poly(&self) -> Vec<BigInt> {
        self.conj()
            .mul(self)
            .coeffs
            .iter()
            .map(|q| q.a.clone())
            .collect()
    }
}

fn int_poly_div_exact(mut num: Vec<BigInt>, den: &[BigInt]) -> Option<Vec<BigInt>> {
    while num.last().is_some_and(Zero::is_zero) {
        num.pop();
    }
    if num.is_empty() {
        return Some(Vec::new());
    }
    let dl = den.len();
    if num.len() < dl {
        return None;
    }
    let lead = den.last().expect("nonzero divisor");
    let mut quot = vec![BigInt::zero(); num.len() - dl + 1];
    for shift in (0..quot.len()).rev() {
        let top = &num[shift + dl - 1];
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (t, d) in den.iter().enumerate() {
            num[shift + t] -= &q * d;
        }
        quot[shift] = q;
    }
    num.iter().all(Zero::is_zero).then_some(quot)
}

impl Ord for QuaternionPoly {
    /// Gauge, then degree, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gauge()
            .cmp(&other.gauge())
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for QuaternionPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuaternionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let body = q.to_string();
            let power = match m {
                0 => String::new(),
                1 => "x".into(),
                m => format!("x^{m}"),
            };
            let term = if m == 0 {
                body
            } else if q.support() > 1 {
                format!("({body}){power}")
            } else if body == "1" {
                power
            } else if body == "-1" {
                format!("-{power}")
            } else {
                format!("{body}{power}")
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        f.write_str(&out)
    }
}

/// `R[x]` over the Lipschitz order with `x` central.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuatPoly;

impl QuatPoly {
    pub fn constant(&self, text: &str) -> Result<QuaternionPoly> {
        Ok(QuaternionPoly::constant(Lipschitz::new().parse(text)?))
    }
}

fn parse_power(cur: &mut Cursor<'_>) -> Result<Option<usize>> {
    if !cur.eat('x') {
        return Ok(None);
    }
    if !cur.eat('^') {
        return Ok(Some(1));
    }
    let digits = cur
        .digits()
        .ok_or_else(|| cur.error("expected an exponent after '^'"))?;
    let m: usize = digits
        .try_into()
        .map_err(|_| cur.error("exponent too large"))?;
    Ok(Some(m))
}

impl Ring for QuatPoly {
    type Elem = QuaternionPoly;

    fn name(&self) -> String {
        "quat-poly".into()
    }

    fn zero(&self) -> QuaternionPoly {
        QuaternionPoly::new(Vec::new())
    }

    fn one(&self) -> QuaternionPoly {
        QuaternionPoly::constant(Quaternion::one())
    }

    fn add(&self, a: &QuaternionPoly, b: &QuaternionPoly) -> QuaternionPoly {
        a.add(b)
    }

    fn neg(&self, a: &QuaternionPoly) -> QuaternionPoly {
        QuaternionPoly::new(a.coeffs.iter().map(|q| -q).collect())
    }

    fn mul(&self, a: &QuaternionPoly, b: &QuaternionPoly) -> QuaternionPoly {
        a.mul(b)
    }

    fn gauge(&self, a: &QuaternionPoly) -> BigUint {
        a.gauge()
    }

    fn units(&self) -> Vec<QuaternionPoly> {
        Lipschitz::new()
            .units()
            .into_iter()
            .map(QuaternionPoly::constant)
            .collect()
    }

    fn is_commutative(&self) -> bool {
        false
    }

    fn elements_of_gauge(&self, _n: u64) -> Result<Arc<Vec<QuaternionPoly>>> {
        Err(Error::Unsupported(
            "quat-poly has infinite gauge fibers; enumeration is unavailable".into(),
        ))
    }

    fn has_finite_fibers(&self) -> bool {
        false
    }

    fn degree(&self, a: &QuaternionPoly) -> Option<usize> {
        a.degree()
    }

    fn right_quotient(&self, a: &QuaternionPoly, b: &QuaternionPoly) -> Option<QuaternionPoly> {
        if a.is_zero() {
            return None;
        }
        a.conj().mul(b).div_by_integer_poly(&a.norm_poly())
    }

    fn left_quotient(&self, a: &QuaternionPoly, b: &QuaternionPoly) -> Option<QuaternionPoly> {
        if a.is_zero() {
            return None;
        }
        b.mul(&a.conj()).div_by_integer_poly(&a.norm_poly())
    }

    fn generators(&self) -> Vec<QuaternionPoly> {
        Lipschitz::new()
            .generators()
            .into_iter()
            .map(QuaternionPoly::constant)
            .collect()
    }

    /// Terms are `q`, `qx^m` for single-term `q`, or `(q)x^m`; `x` means `x^1`.
    fn parse(&self, text: &str) -> Result<QuaternionPoly> {
        let letters = ['i', 'j', 'k'];
        let mut cur = Cursor::new(text);
        if cur.at_end() {
            return Err(cur.error("empty literal"));
        }
        let mut coeffs: Vec<Quaternion> = Vec::new();
        let mut first = true;
        while !cur.at_end() {
            let negative = match cur.sign() {
                Some(n) => n,
                None if first => false,
                None => return Err(cur.error("expected '+' or '-'")),
            };
            first = false;
            let coeff = if cur.eat('(') {
                let c = parse_linear_terms(&mut cur, &letters, Some(')'))?;
                if !cur.eat(')') {
                    return Err(cur.error("expected ')'"));
                }
                let [a, b, c, d]: [BigInt; 4] = c.try_into().expect("four slots");
                Quaternion { a, b, c, d }
            } else {
                let start = cur.pos();
                let mag = cur.digits();
                let slot = match cur.peek() {
                    Some(ch) if letters.contains(&ch) => {
                        cur.bump();
                        1 + letters.iter().position(|&l| l == ch).unwrap()
                    }
                    _ => 0,
                };
                if mag.is_none() && slot == 0 && cur.peek() != Some('x') {
                    return Err(Error::parse(
                        start,
                        "expected a coefficient, basis letter, '(' or 'x'",
                    ));
                }
                let mut c = [
                    BigInt::zero(),
                    BigInt::zero(),
                    BigInt::zero(),
                    BigInt::zero(),
                ];
                c[slot] = mag.unwrap_or_else(BigInt::one);
                let [a, b, c, d] = c;
                Quaternion { a, b, c, d }
            };
            let m = parse_power(&mut cur)?.unwrap_or(0);
            let coeff = if negative { -&coeff } else { coeff };
            if coeffs.len() <= m {
                coeffs.resize(m + 1, Quaternion::zero());
            }
            coeffs[m] = &coeffs[m] + &coeff;
        }
        Ok(QuaternionPoly::new(coeffs))
    }
}
