//! Univariate rational functions: the field of fractions of `F[x]`.

use super::poly::Poly;
use super::Field;
use crate::error::{Error, Result};
use std::fmt;

/// Rational function in canonical form: coprime numerator/denominator,
/// denominator monic and nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFun<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let lc_inv = den.leading().inv().unwrap();
        RatFun {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn x() -> Self {
        RatFun::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Substitute a rational function for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        // f(n/d) with f = p/q: clear denominators by d^max(deg p, deg q)
        let e = self.num.degree().max(self.den.degree());
        let eval_cleared = |p: &Poly<F>| -> Poly<F> {
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = inner.num.pow(k).mul(&inner.den.pow(e - k)).scale(c);
                acc = acc.add(&term);
            }
            acc
        };
        Self::reduce(eval_cleared(&self.num), eval_cleared(&self.den))
    }
}

impl<F: Field> fmt::Display for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        let ns = self.num.to_string();
        let ds = self.den.to_string();
        let wrap = |s: &str| {
            if s.contains([' ', '+']) || s.starts_with('-') {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&ns), wrap(&ds))
    }
}

impl<F: Field> fmt::Debug for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> Field for RatFun<F> {
    fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }

    fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        Self::reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn sub(&self, other: &Self) -> Self {
        Self::reduce(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::reduce(self.den.clone(), self.num.clone()))
        }
    }

    fn from_i64(n: i64) -> Self {
        RatFun::from_poly(Poly::constant(F::from_i64(n)))
    }

    fn parse(s: &str) -> Result<Self> {
        crate::serialize::parse_ratfun(s)
    }
}

/// `ratfun_arith` of the artifact interface.
pub fn ratfun_arith<F: Field>(f: &RatFun<F>, g: &RatFun<F>, op: char) -> Result<RatFun<F>> {
    match op {
        '+' => Ok(f.add(g)),
        '-' => Ok(f.sub(g)),
        '*' => Ok(f.mul(g)),
        '/' => f.div(g),
        _ => Err(Error::Parse(format!("unknown operator {op:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn qp(coeffs: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    #[test]
    fn canonicalization() {
        // x / x = 1
        let f = RatFun::new(qp(&[0, 1]), qp(&[0, 1])).unwrap();
        assert!(f.is_one());
        // (x^2 - 1)/(x - 1) = x + 1
        let g = RatFun::new(qp(&[-1, 0, 1]), qp(&[-1, 1])).unwrap();
        assert_eq!(g, RatFun::from_poly(qp(&[1, 1])));
        // denominator becomes monic
        let h = RatFun::new(qp(&[1]), qp(&[0, 2])).unwrap();
        assert_eq!(h.den(), &qp(&[0, 1]));
        assert_eq!(h.num(), &Poly::constant(Rational::new(1, 2).unwrap()));
    }

    #[test]
    fn arithmetic() {
        // 1/x + 1/x = 2/x
        let inv_x = RatFun::new(qp(&[1]), qp(&[0, 1])).unwrap();
        let two_over_x = RatFun::new(qp(&[2]), qp(&[0, 1])).unwrap();
        assert_eq!(inv_x.add(&inv_x), two_over_x);
        assert_eq!(ratfun_arith(&inv_x, &inv_x, '/').unwrap(), RatFun::one());
    }

    #[test]
    fn display_format() {
        let g = RatFun::new(qp(&[-1, 0, 1]), qp(&[2, 1])).unwrap();
        assert_eq!(g.to_string(), "(x^2 - 1)/(x + 2)");
    }
}
