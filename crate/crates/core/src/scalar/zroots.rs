//! Complete rational-root extraction for polynomials over ℚ.
//!
//! The search is exact and complete: every root in ℚ is found. A rational
//! root a/b of a primitive integer polynomial satisfies b | lc and a | tc, so
//! z = lc·(a/b) is an integer with |z| ≤ |lc·tc|. We find roots modulo a
//! prime (Cantor–Zassenhaus on the squarefree part), Hensel-lift past
//! 2·|lc·tc|, read z off the symmetric residue and verify exactly.

use super::poly::Poly;
use super::{Rational, RootReport};
use crate::scalar::Field;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

// ---------------------------------------------------------------------------
// Integer polynomial helpers (dense, trailing-normalized Vec<BigInt>)
// ---------------------------------------------------------------------------

fn znorm(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zcontent(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn zprimitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = zcontent(p);
    if c.is_zero() {
        return vec![];
    }
    let mut out: Vec<BigInt> = p.iter().map(|x| x / &c).collect();
    if out.last().map_or(false, |l| l.sign() == Sign::Minus) {
        out = out.iter().map(|x| -x).collect();
    }
    out
}

fn zderivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Pseudo-remainder: lc(b)^(da-db+1) * a  mod b.
fn zpseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let top = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * &lc;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&top * bc);
        }
        r = znorm(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Primitive-PRS gcd over ℤ (positive leading coefficient).
fn zgcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return zprimitive(b).iter().map(|c| c * zcontent(b)).collect();
    }
    if b.is_empty() {
        return zprimitive(a).iter().map(|c| c * zcontent(a)).collect();
    }
    let cont = zcontent(a).gcd(&zcontent(b));
    let mut x = zprimitive(a);
    let mut y = zprimitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = zprimitive(&zpseudo_rem(&x, &y));
        x = y;
        y = r;
    }
    x.iter().map(|c| c * &cont).collect()
}

/// Exact division of integer polynomials (panics if inexact).
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert!(!b.is_empty(), "division by zero polynomial");
    let lc = b.last().unwrap();
    let mut rem = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len().saturating_sub(b.len()) + 1];
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let (q, r) = rem.last().unwrap().div_rem(lc);
        assert!(r.is_zero(), "inexact integer polynomial division");
        quo[k] = q.clone();
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &(&q * bc);
        }
        rem = znorm(rem);
    }
    assert!(rem.is_empty(), "inexact integer polynomial division");
    quo
}

fn zeval_rational(p: &[BigInt], r: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc.mul(r).add(&Rational::from_bigint(c.clone()));
    }
    acc
}

// ---------------------------------------------------------------------------
// Arithmetic mod a word-sized prime
// ---------------------------------------------------------------------------

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for n < 2^64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = mulmod(x, x, n);
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, m: u64) -> u64 {
    powmod(a, m - 2, m)
}

type MPoly = Vec<u64>;

fn mnorm(mut v: MPoly) -> MPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mmul(a: &MPoly, b: &MPoly, q: u64) -> MPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, q)) % q;
        }
    }
    mnorm(out)
}

fn mrem(a: &MPoly, b: &MPoly, q: u64) -> MPoly {
    let mut r = a.clone();
    let lci = invmod(*b.last().unwrap(), q);
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lci, q);
        for (j, &bc) in b.iter().enumerate() {
            let sub = mulmod(c, bc, q);
            r[k + j] = (r[k + j] + q - sub) % q;
        }
        r = mnorm(r);
    }
    r
}

fn mgcd(a: &MPoly, b: &MPoly, q: u64) -> MPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = mrem(&x, &y, q);
        x = y;
        y = r;
    }
    if let Some(&lc) = x.last() {
        let inv = invmod(lc, q);
        x = x.iter().map(|&c| mulmod(c, inv, q)).collect();
    }
    x
}

fn mpow_xq(f: &MPoly, e: u64, q: u64) -> MPoly {
    // x^e mod f
    let mut acc = vec![1u64];
    let mut base = mrem(&vec![0, 1], f, q);
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = mrem(&mmul(&acc, &base, q), f, q);
        }
        base = mrem(&mmul(&base, &base, q), f, q);
        k >>= 1;
    }
    acc
}

/// Roots of a squarefree monic-able polynomial mod q, via equal-degree splitting.
fn mod_roots(f: &MPoly, q: u64) -> Vec<u64> {
    // linear-factor part: gcd(f, x^q - x)
    let xq = mpow_xq(f, q, q);
    let mut xq_minus_x = xq;
    while xq_minus_x.len() < 2 {
        xq_minus_x.push(0);
    }
    xq_minus_x[1] = (xq_minus_x[1] + q - 1) % q;
    let lin = mgcd(f, &mnorm(xq_minus_x), q);
    let mut roots = Vec::new();
    let mut stack = vec![lin];
    let mut shift = 0u64;
    while let Some(g) = stack.pop() {
        if g.len() <= 1 {
            continue;
        }
        if g.len() == 2 {
            // c0 + c1 x: root = -c0/c1
            let r = mulmod(q - g[0] % q, invmod(g[1], q), q) % q;
            roots.push(r);
            continue;
        }
        // split with gcd(g, (x+a)^((q-1)/2) - 1), deterministic shift scan
        loop {
            let a = shift;
            shift += 1;
            let base = mrem(&vec![a % q, 1], &g, q);
            let mut h = mpow_general(&base, (q - 1) / 2, &g, q);
            if h.is_empty() {
                h = vec![0];
            }
            h[0] = (h[0] + q - 1) % q;
            let h = mgcd(&g, &mnorm(h.clone()), q);
            if !h.is_empty() && h.len() > 1 && h.len() < g.len() {
                let other = mdiv_exact(&g, &h, q);
                stack.push(h);
                stack.push(other);
                break;
            }
        }
    }
    roots.sort_unstable();
    roots
}

fn mpow_general(base: &MPoly, mut e: u64, modp: &MPoly, q: u64) -> MPoly {
    let mut acc = vec![1u64];
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mrem(&mmul(&acc, &b, q), modp, q);
        }
        b = mrem(&mmul(&b, &b, q), modp, q);
        e >>= 1;
    }
    acc
}

fn mdiv_exact(a: &MPoly, b: &MPoly, q: u64) -> MPoly {
    let mut r = a.clone();
    let lci = invmod(*b.last().unwrap(), q);
    let mut quo = vec![0u64; a.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lci, q);
        quo[k] = c;
        for (j, &bc) in b.iter().enumerate() {
            let sub = mulmod(c, bc, q);
            r[k + j] = (r[k + j] + q - sub) % q;
        }
        r = mnorm(r);
    }
    debug_assert!(r.is_empty());
    mnorm(quo)
}

// ---------------------------------------------------------------------------
// Hensel lifting and the main driver
// ---------------------------------------------------------------------------

fn big_mod(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

fn zeval_mod(p: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = big_mod(&(&acc * x + c), m);
    }
    acc
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(big_mod(&e.x, m))
    } else {
        None
    }
}

/// Lift a simple root of `s` from mod q to mod q^(2^k) ≥ target.
fn hensel_lift(s: &[BigInt], ds: &[BigInt], root: u64, q: u64, target: &BigInt) -> (BigInt, BigInt) {
    let mut m = BigInt::from(q);
    let mut r = BigInt::from(root);
    while &m < target {
        let m2 = &m * &m;
        let val = zeval_mod(s, &r, &m2);
        let der = zeval_mod(ds, &r, &m2);
        let dinv = inv_mod_big(&der, &m2).expect("derivative stays invertible for simple roots");
        r = big_mod(&(&r - &(&val * &dinv)), &m2);
        m = m2;
    }
    (r, m)
}

pub(crate) fn rational_poly_roots(p: &Poly<Rational>) -> RootReport<Rational> {
    assert!(!p.is_zero(), "poly_roots of the zero polynomial");
    let mut roots: Vec<(Rational, usize)> = Vec::new();

    // strip x^k
    let val = p.valuation().unwrap();
    let mut work = Poly::from_coeffs(p.coeffs()[val..].to_vec());
    if val > 0 {
        roots.push((Rational::zero(), val));
    }
    if work.is_constant() {
        return RootReport {
            roots,
            cofactor: Poly::one(),
        };
    }

    // primitive integer polynomial with the same nonzero roots
    let mut den = BigInt::one();
    for c in work.coeffs() {
        den = den.lcm(c.denom());
    }
    let zp: Vec<BigInt> = work.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let zp = zprimitive(&zp);

    // squarefree part
    let g = zgcd(&zp, &zderivative(&zp));
    let s = if g.len() > 1 {
        zprimitive(&zdiv_exact(&zp, &g))
    } else {
        zp.clone()
    };

    let found = if s.len() == 2 {
        // single linear factor: root directly
        vec![Rational::from_big(-s[0].clone(), s[1].clone()).unwrap()]
    } else {
        find_roots_modular(&s)
    };

    for r in found {
        let mut mult = 0usize;
        loop {
            if work.degree() == 0 {
                break;
            }
            if !work.eval(&r).is_zero() {
                break;
            }
            work = work.div_linear_root(&r);
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    RootReport {
        roots,
        cofactor: work.monic(),
    }
}

/// Rational roots of a squarefree primitive integer polynomial of degree ≥ 2.
fn find_roots_modular(s: &[BigInt]) -> Vec<Rational> {
    let lc = s.last().unwrap().clone();
    let tc = s[0].clone();
    debug_assert!(!tc.is_zero());
    let target: BigInt = (&lc * &tc).abs() * BigInt::from(2) + BigInt::one();
    let ds = zderivative(s);

    // prime with lc invertible and s squarefree mod q
    let mut q = (1u64 << 30) + 3;
    let q = loop {
        if is_prime_u64(q) {
            let qb = BigInt::from(q);
            if !big_mod(&lc, &qb).is_zero() {
                let sm: MPoly = mnorm(
                    s.iter()
                        .map(|c| big_mod(c, &qb).to_u64().unwrap())
                        .collect(),
                );
                let dm: MPoly = mnorm(
                    ds.iter()
                        .map(|c| big_mod(c, &qb).to_u64().unwrap())
                        .collect(),
                );
                if sm.len() == s.len() && !dm.is_empty() && mgcd(&sm, &dm, q).len() == 1 {
                    break q;
                }
            }
        }
        q += 2;
    };

    let qb = BigInt::from(q);
    let sm: MPoly = mnorm(s.iter().map(|c| big_mod(c, &qb).to_u64().unwrap()).collect());
    let mroots = mod_roots(&sm, q);

    let mut out = Vec::new();
    for r0 in mroots {
        let (r, m) = hensel_lift(s, &ds, r0, q, &target);
        // z = lc * root must be an integer bounded by |lc*tc|
        let z = big_mod(&(&lc * &r), &m);
        let half = &m / BigInt::from(2);
        let z = if z > half { z - &m } else { z };
        let cand = Rational::from_big(z, lc.clone()).unwrap();
        if zeval_rational(s, &cand).is_zero() {
            out.push(cand);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational_roots, Field, Rational};

    fn qp(coeffs: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn simple_quadratics() {
        // x^2 - 1 -> {1, -1}, cofactor 1
        let rep = rational_roots(&qp(&[-1, 0, 1]));
        assert_eq!(
            rep.roots,
            vec![(q(-1, 1), 1), (q(1, 1), 1)]
        );
        assert!(rep.cofactor.is_constant());
        // x^2 + 1 -> no roots, cofactor x^2 + 1
        let rep = rational_roots(&qp(&[1, 0, 1]));
        assert!(rep.roots.is_empty());
        assert_eq!(rep.cofactor, qp(&[1, 0, 1]));
    }

    #[test]
    fn derived_cubic_example() {
        // 2x^3 - x^2 -> roots {0 (x2), 1/2}, cofactor 1
        let p = qp(&[0, 0, -1, 2]);
        let rep = rational_roots(&p);
        assert_eq!(rep.roots, vec![(q(0, 1), 2), (q(1, 2), 1)]);
        assert!(rep.cofactor.is_constant());
        // check by evaluation and division
        for (r, _) in &rep.roots {
            assert!(p.eval(r).is_zero());
        }
        let rebuilt = qp(&[0, 1]).pow(2).mul(&qp(&[-1, 2]));
        assert_eq!(rebuilt, p);
    }

    #[test]
    fn degree_and_multiplicity_accounting() {
        // (x-2)^2 (3x+1) (x^2+x+1): deg(cofactor) + sum mult = deg(p)
        let p = qp(&[-2, 1])
            .pow(2)
            .mul(&qp(&[1, 3]))
            .mul(&qp(&[1, 1, 1]));
        let rep = rational_roots(&p);
        let total: usize = rep.roots.iter().map(|(_, m)| m).sum();
        assert_eq!(total + rep.cofactor.degree(), p.degree());
        assert_eq!(rep.roots, vec![(q(-1, 3), 1), (q(2, 1), 2)]);
    }

    #[test]
    fn big_coefficients_still_complete() {
        // roots 7/3 and -11/5 times an irreducible quartic, scaled large
        let p = qp(&[-7, 3])
            .mul(&qp(&[11, 5]))
            .mul(&qp(&[1, 0, 0, 0, 2]))
            .scale(&Rational::from_i64(982451653));
        let rep = rational_roots(&p);
        let roots: Vec<Rational> = rep.roots.iter().map(|(r, _)| r.clone()).collect();
        assert!(roots.contains(&q(7, 3)));
        assert!(roots.contains(&q(-11, 5)));
        assert_eq!(rep.cofactor.degree(), 4);
    }
}
