//! Exact field arithmetic: arbitrary-precision rationals, univariate
//! polynomials and rational functions over them, and small prime fields used
//! by the fuzz suite.
//!
//! Everything downstream is generic over [`Field`]; base-point search
//! additionally needs [`RootField`], which knows how to find all roots of a
//! univariate polynomial that lie in the field itself.

pub mod poly;
pub mod ratfun;
mod zroots;

pub use poly::Poly;
pub use ratfun::RatFun;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::hash::Hash;

/// Exact field operations. All values are immutable; all operations are pure.
pub trait Field:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    fn parse(s: &str) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        other
            .inv()
            .map(|i| self.mul(&i))
            .ok_or(Error::DivisionByZero)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Roots of a univariate polynomial lying in the field, with multiplicities,
/// plus the root-free cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport<F: Field> {
    pub roots: Vec<(F, usize)>,
    /// Monic cofactor with no roots in the field.
    pub cofactor: Poly<F>,
}

/// Fields over which we can enumerate all in-field roots of a polynomial.
pub trait RootField: Field {
    /// All roots of `p` in the field with multiplicities, and the root-free
    /// cofactor (monic). `p` must be nonzero.
    fn poly_roots(p: &Poly<Self>) -> RootReport<Self>;

    fn characteristic() -> u64;
}

// ---------------------------------------------------------------------------
// Rational numbers
// ---------------------------------------------------------------------------

/// Exact rational scalar. Canonical form (reduced, positive denominator) is
/// maintained by the underlying representation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    fn neg(&self) -> Self {
        Rational(-self.0.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let num: BigInt = n.trim().parse().map_err(|_| bad())?;
            let den: BigInt = d.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational(BigRational::new(num, den)))
        } else {
            let num: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational(BigRational::from_integer(num)))
        }
    }
}

impl RootField for Rational {
    fn poly_roots(p: &Poly<Self>) -> RootReport<Self> {
        zroots::rational_poly_roots(p)
    }

    fn characteristic() -> u64 {
        0
    }
}

/// `scalar_arith` of the artifact interface, dispatching on an operator char.
pub fn scalar_arith<F: Field>(a: &F, b: &F, op: char) -> Result<F> {
    match op {
        '+' => Ok(a.add(b)),
        '-' => Ok(a.sub(b)),
        '*' => Ok(a.mul(b)),
        '/' => a.div(b),
        _ => Err(Error::Parse(format!("unknown operator {op:?}"))),
    }
}

/// Roots in the field plus root-free cofactor (`rational_roots` over ℚ).
pub fn rational_roots<F: RootField>(p: &Poly<F>) -> RootReport<F> {
    F::poly_roots(p)
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Prime field with compile-time modulus, used by the fuzz suite.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        let p = P as i64;
        let mut r = v % p;
        if r < 0 {
            r += p;
        }
        Fp(r as u64)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1 % P)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % P)
    }

    fn sub(&self, other: &Self) -> Self {
        Fp((self.0 + P - other.0) % P)
    }

    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 * other.0 as u128) % P as u128) as u64)
    }

    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat: p is prime.
            Some(self.pow(P - 2))
        }
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn parse(s: &str) -> Result<Self> {
        let n: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid field element: {s:?}")))?;
        Ok(Fp::new(n))
    }
}

impl<const P: u64> RootField for Fp<P> {
    fn poly_roots(p: &Poly<Self>) -> RootReport<Self> {
        assert!(!p.is_zero(), "poly_roots of the zero polynomial");
        let mut roots = Vec::new();
        let mut rest = p.clone();
        for v in 0..P {
            let cand = Fp::<P>(v);
            let mut mult = 0usize;
            while rest.degree() > 0 && rest.eval(&cand).is_zero() {
                rest = rest.div_linear_root(&cand);
                mult += 1;
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
        }
        RootReport {
            roots,
            cofactor: rest.monic(),
        }
    }

    fn characteristic() -> u64 {
        P
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn scalar_arith_examples() {
        // (1/2) + (1/3) = 5/6
        assert_eq!(scalar_arith(&q(1, 2), &q(1, 3), '+').unwrap(), q(5, 6));
        // 2/4 canonicalizes to 1/2
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(2, 4).to_string(), "1/2");
        // (3/7) * (7/3) = 1
        assert_eq!(scalar_arith(&q(3, 7), &q(7, 3), '*').unwrap(), q(1, 1));
        assert_eq!(
            scalar_arith(&q(1, 2), &Rational::zero(), '/'),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn display_and_parse_roundtrip() {
        for s in ["5/6", "-3", "0", "22/7", "-5/9"] {
            let v = Rational::parse(s).unwrap();
            assert_eq!(v.to_string(), s);
            assert_eq!(Rational::parse(&v.to_string()).unwrap(), v);
        }
        // non-canonical input parses to canonical form
        assert_eq!(Rational::parse("4/6").unwrap(), q(2, 3));
        assert_eq!(Rational::parse("-4/-6").unwrap(), q(2, 3));
    }

    #[test]
    fn fp_field_axioms_small() {
        type F = Fp<7>;
        for a in 0..7 {
            for b in 0..7 {
                let (x, y) = (F::new(a), F::new(b));
                assert_eq!(x.add(&y), y.add(&x));
                assert_eq!(x.mul(&y), y.mul(&x));
                if !y.is_zero() {
                    assert_eq!(x.div(&y).unwrap().mul(&y), x);
                }
            }
        }
    }
}
