//! Dense univariate polynomials over a [`Field`].

use super::Field;
use crate::error::{Error, Result};
use std::fmt;

/// Univariate polynomial; `coeffs[i]` is the coefficient of `x^i`, highest
/// coefficient nonzero (zero polynomial has an empty vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn x() -> Self {
        Poly::monomial(F::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; 0 for constants including the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; errors on division by zero polynomial.
    pub fn div_rem(&self, div: &Self) -> Result<(Self, Self)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dlc = div.leading();
        let dlc_inv = dlc.inv().expect("nonzero leading coefficient");
        let dd = div.degree();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![F::zero(); self.coeffs.len().saturating_sub(div.coeffs.len()) + 1];
        while rem.len() >= div.coeffs.len() && !rem.is_empty() {
            let k = rem.len() - div.coeffs.len();
            let c = rem.last().unwrap().mul(&dlc_inv);
            if !c.is_zero() {
                quo[k] = c.clone();
                for (j, b) in div.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&c.mul(b));
                }
            }
            // leading entry is now exactly zero
            debug_assert!(rem.last().unwrap().is_zero() || dd == 0);
            rem.pop();
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() < div.coeffs.len() {
                break;
            }
        }
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    /// Exact division; panics if not divisible (internal use on certified divisors).
    pub fn div_exact(&self, div: &Self) -> Self {
        let (q, r) = self.div_rem(div).expect("division by zero");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Divide by `(x - r)` once, assuming `r` is a root.
    pub fn div_linear_root(&self, r: &F) -> Self {
        let lin = Poly::from_coeffs(vec![r.neg(), F::one()]);
        self.div_exact(&lin)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().inv().unwrap();
        self.scale(&inv)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&F::from_i64(i as i64)));
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Substitute `x -> x + c` (Taylor shift).
    pub fn shift_var(&self, c: &F) -> Self {
        let mut acc = Poly::zero();
        let shift = Poly::from_coeffs(vec![c.clone(), F::one()]);
        for co in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&Poly::constant(co.clone()));
        }
        acc
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero();
        for co in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(co.clone()));
        }
        acc
    }

    /// Order of vanishing at 0 (index of first nonzero coefficient).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Resultant of two polynomials, via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> F {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.is_zero() || b.is_zero() {
            return F::zero();
        }
        let mut acc = F::one();
        let mut sign_swaps = 0usize;
        while b.degree() > 0 {
            if a.degree() < b.degree() {
                std::mem::swap(&mut a, &mut b);
                sign_swaps += a.degree() * b.degree();
                continue;
            }
            let (_, r) = a.div_rem(&b).unwrap();
            if r.is_zero() {
                return F::zero();
            }
            // res(a,b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b) * res(b,r)
            acc = acc.mul(&b.leading().pow((a.degree() - r.degree()) as u64));
            sign_swaps += a.degree() * b.degree();
            a = b;
            b = r;
        }
        // b is a nonzero constant: res(a, b) = b^(deg a)
        acc = acc.mul(&b.leading().pow(a.degree() as u64));
        if sign_swaps % 2 == 1 {
            acc = acc.neg();
        }
        acc
    }

    /// Render with a custom variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let term = match i {
                0 => cs,
                _ => {
                    let xp = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if cs == "1" {
                        xp
                    } else if cs == "-1" {
                        format!("-{xp}")
                    } else {
                        format!("{cs}*{xp}")
                    }
                }
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (k, t) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(t);
            } else if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational, RootField};

    fn qp(coeffs: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    #[test]
    fn div_rem_and_gcd() {
        let a = qp(&[-1, 0, 1]); // x^2 - 1
        let b = qp(&[-1, 1]); // x - 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, qp(&[1, 1]));
        assert_eq!(a.gcd(&b), b.monic());
        let c = qp(&[1, 1]);
        assert_eq!(a.gcd(&c), c);
    }

    #[test]
    fn resultant_matches_root_product() {
        // res(x^2-1, x-2) = (2^2 - 1) * lc stuff = 3
        let a = qp(&[-1, 0, 1]);
        let b = qp(&[-2, 1]);
        assert_eq!(a.resultant(&b), Rational::from_i64(3));
        // shared root -> 0
        assert_eq!(a.resultant(&qp(&[-1, 1])), Rational::from_i64(0));
    }

    #[test]
    fn shift_and_eval() {
        let p = qp(&[1, 2, 1]); // (x+1)^2
        let shifted = p.shift_var(&Rational::from_i64(-1)); // x^2
        assert_eq!(shifted, qp(&[0, 0, 1]));
        assert_eq!(p.eval(&Rational::from_i64(2)), Rational::from_i64(9));
    }

    #[test]
    fn fp_roots_brute_force() {
        // x^2 + 1 over F_5 has roots 2, 3
        let p: Poly<Fp<5>> = Poly::from_coeffs(vec![Fp::new(1), Fp::new(0), Fp::new(1)]);
        let rep = Fp::<5>::poly_roots(&p);
        let roots: Vec<u64> = rep.roots.iter().map(|(r, _)| r.0).collect();
        assert_eq!(roots, vec![2, 3]);
        assert!(rep.cofactor.is_constant());
    }

    #[test]
    fn display_poly() {
        let p = qp(&[-1, 0, 1]);
        assert_eq!(p.to_string(), "x^2 - 1");
        assert_eq!(qp(&[2, 0, 0]).to_string(), "2");
    }
}
