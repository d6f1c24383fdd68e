//! Bivariate polynomials: coefficients of `x^i` are univariate polynomials in
//! `y`. Support for the gcd kernel and for blow-up charts.

use crate::scalar::{Field, Poly};

/// `coeffs[i]` is the coefficient of `x^i`, a polynomial in `y`; the highest
/// entry is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Bivar<F: Field> {
    coeffs: Vec<Poly<F>>,
}

impl<F: Field> Bivar<F> {
    pub fn from_coeffs(mut coeffs: Vec<Poly<F>>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Bivar { coeffs }
    }

    pub fn zero() -> Self {
        Bivar { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Poly<F>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly<F> {
        self.coeffs.get(i).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn deg_x(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.coeffs.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn leading_x(&self) -> Poly<F> {
        self.coeffs.last().cloned().unwrap_or_else(Poly::zero)
    }

    pub fn term(c: F, i: usize, j: usize) -> Self {
        if c.is_zero() {
            return Bivar::zero();
        }
        let mut coeffs = vec![Poly::zero(); i + 1];
        coeffs[i] = Poly::monomial(c, j);
        Bivar { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Bivar::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Bivar::from_coeffs(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Bivar::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
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
        Bivar::from_coeffs(out)
    }

    pub fn scale_poly(&self, p: &Poly<F>) -> Self {
        Bivar::from_coeffs(self.coeffs.iter().map(|c| c.mul(p)).collect())
    }

    /// Substitute `y = c`, producing a univariate polynomial in x.
    pub fn eval_y(&self, c: &F) -> Poly<F> {
        Poly::from_coeffs(self.coeffs.iter().map(|p| p.eval(c)).collect())
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.eval(y));
        }
        acc
    }

    /// Restriction to `x = 0`: the constant coefficient, a polynomial in y.
    pub fn at_x_zero(&self) -> Poly<F> {
        self.coeff(0)
    }

    /// Restriction to `y = 0`, as a polynomial in x.
    pub fn at_y_zero(&self) -> Poly<F> {
        Poly::from_coeffs(self.coeffs.iter().map(|p| p.coeff(0)).collect())
    }

    /// Order of vanishing at the origin: min of i + j over monomials.
    pub fn vanishing_order(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, p) in self.coeffs.iter().enumerate() {
            if let Some(v) = p.valuation() {
                let t = i + v;
                best = Some(best.map_or(t, |b| b.min(t)));
            }
        }
        best
    }

    /// Substitute `(x, y) -> (x, x*y)` (first blow-up chart; x is the
    /// exceptional coordinate afterwards).
    pub fn blowup_first(&self) -> Self {
        let mut out = Bivar::zero();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&Bivar::term(c.clone(), i + j, j));
                }
            }
        }
        out
    }

    /// Substitute `(x, y) -> (x*y, y)` (second chart; y is exceptional).
    pub fn blowup_second(&self) -> Self {
        let mut out = Bivar::zero();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&Bivar::term(c.clone(), i, i + j));
                }
            }
        }
        out
    }

    /// Exact division by `x^k`.
    pub fn div_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return Bivar::zero();
        }
        for i in 0..k.min(self.coeffs.len()) {
            assert!(self.coeffs[i].is_zero(), "inexact division by x^k");
        }
        Bivar::from_coeffs(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// Exact division by `y^k`.
    pub fn div_y_pow(&self, k: usize) -> Self {
        let yk = Poly::monomial(F::one(), k);
        Bivar::from_coeffs(self.coeffs.iter().map(|p| p.div_exact(&yk)).collect())
    }

    /// Substitute `x -> x + c`.
    pub fn shift_x(&self, c: &F) -> Self {
        let mut acc = Bivar::zero();
        let shift = Bivar::from_coeffs(vec![Poly::constant(c.clone()), Poly::one()]);
        for p in self.coeffs.iter().rev() {
            acc = acc
                .mul(&shift)
                .add(&Bivar::from_coeffs(vec![p.clone()]));
        }
        acc
    }

    /// Substitute `y -> y + c`.
    pub fn shift_y(&self, c: &F) -> Self {
        Bivar::from_coeffs(self.coeffs.iter().map(|p| p.shift_var(c)).collect())
    }

    /// Content with respect to x: gcd of the y-coefficient polynomials.
    pub fn content(&self) -> Poly<F> {
        let mut g = Poly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.monic() } else { g.gcd(c) };
            if g.is_constant() {
                break;
            }
        }
        g
    }

    pub fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Bivar::from_coeffs(self.coeffs.iter().map(|p| p.div_exact(&c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return Bivar::zero();
        }
        let mut coeffs = vec![Poly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Bivar { coeffs }
    }

    /// Pseudo-remainder with respect to x; requires `deg_x(div) >= 1`.
    pub fn pseudo_rem(&self, div: &Self) -> Self {
        let db = div.deg_x();
        assert!(db >= 1, "pseudo_rem needs positive x-degree divisor");
        let lc = div.leading_x();
        let mut r = self.clone();
        while !r.is_zero() && r.deg_x() >= db {
            let k = r.deg_x() - db;
            let top = r.leading_x();
            r = r.scale_poly(&lc);
            let sub = div.scale_poly(&top).mul_x_pow(k);
            r = r.sub(&sub);
        }
        r
    }

    /// gcd of the primitive parts via the primitive polynomial remainder
    /// sequence in (F[y])[x], preceded by an evaluation shortcut that
    /// certifies coprimality.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let ca = self.content();
        let cb = other.content();
        let content_gcd = ca.gcd(&cb);
        let pa = self.primitive();
        let pb = other.primitive();
        let prim_gcd = Self::prim_gcd(&pa, &pb);
        prim_gcd.scale_poly(&content_gcd)
    }

    fn prim_gcd(pa: &Self, pb: &Self) -> Self {
        if pa.deg_x() == 0 && pb.deg_x() == 0 {
            // primitive polys in y alone: gcd of contents is 1
            return Bivar::from_coeffs(vec![Poly::one()]);
        }
        // evaluation shortcut: a sample with nonvanishing leading coefficients
        // and trivial univariate gcd certifies a trivial primitive gcd
        let la = pa.leading_x();
        let lb = pb.leading_x();
        let mut tried = 0i64;
        let budget = (pa.deg_y().max(pb.deg_y()) + 2) as i64;
        let mut c = 0i64;
        while tried < budget {
            let cv = F::from_i64(c);
            c += 1;
            if la.eval(&cv).is_zero() || lb.eval(&cv).is_zero() {
                continue;
            }
            tried += 1;
            let g = pa.eval_y(&cv).gcd(&pb.eval_y(&cv));
            if g.is_constant() {
                return Bivar::from_coeffs(vec![Poly::one()]);
            }
            break; // nontrivial sample gcd: fall through to the PRS
        }
        let (mut a, mut b) = if pa.deg_x() >= pb.deg_x() {
            (pa.clone(), pb.clone())
        } else {
            (pb.clone(), pa.clone())
        };
        loop {
            if b.is_zero() {
                return a.primitive();
            }
            if b.deg_x() == 0 {
                // nonzero poly in y alone; primitive => unit
                return Bivar::from_coeffs(vec![Poly::one()]);
            }
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
    }

    /// Exact divisibility test (and quotient) with respect to both variables.
    pub fn div_exact(&self, div: &Self) -> Self {
        if self.is_zero() {
            return Bivar::zero();
        }
        let db = div.deg_x();
        let lc = div.leading_x();
        let mut r = self.clone();
        let mut q = vec![Poly::zero(); self.deg_x() - db + 1];
        while !r.is_zero() {
            assert!(r.deg_x() >= db, "inexact bivariate division");
            let k = r.deg_x() - db;
            let (qq, rr) = r.leading_x().div_rem(&lc).unwrap();
            assert!(rr.is_zero(), "inexact bivariate division");
            q[k] = qq.clone();
            let mut shifted = vec![Poly::zero(); k];
            shifted.extend(div.coeffs.iter().map(|p| p.mul(&qq)));
            r = r.sub(&Bivar::from_coeffs(shifted));
        }
        Bivar::from_coeffs(q)
    }
}

impl<F: Field> std::fmt::Debug for Bivar<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            if !p.is_zero() {
                parts.push(format!("({})*x^{}", p.display_with("y"), i));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}
