//! Homogeneous polynomials in X, Y, Z and Cremona maps as simplified triples.
//!
//! Composition substitutes and then removes the gcd of the three components;
//! exact multivariate gcd is the correctness linchpin here. The gcd reduces
//! to a bivariate computation after stripping monomial content and
//! dehomogenizing, since dehomogenization is multiplicative and
//! degree-preserving on Z-free homogeneous polynomials.

use crate::bivar::Bivar;
use crate::error::{Error, Result};
use crate::projlinear::{ProjLinearMap, ProjPoint};
use crate::scalar::{Field, Poly};
use std::collections::BTreeMap;
use std::fmt;

/// Exponents of X, Y, Z; entries sum to the degree.
pub type Mono = [u16; 3];

/// Homogeneous polynomial stored as a sparse exponent → coefficient map.
#[derive(Clone, PartialEq, Eq)]
pub struct HomPoly<F: Field> {
    terms: BTreeMap<Mono, F>,
    degree: usize,
}

impl<F: Field> HomPoly<F> {
    pub fn zero() -> Self {
        HomPoly {
            terms: BTreeMap::new(),
            degree: 0,
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, F)>) -> Result<Self> {
        let mut map: BTreeMap<Mono, F> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(F::zero);
            *entry = entry.add(&c);
            if entry.is_zero() {
                map.remove(&m);
            }
        }
        let mut degree = 0usize;
        let mut first = true;
        for m in map.keys() {
            let d = (m[0] + m[1] + m[2]) as usize;
            if first {
                degree = d;
                first = false;
            } else if d != degree {
                return Err(Error::Parse("polynomial is not homogeneous".into()));
            }
        }
        Ok(HomPoly { terms: map, degree })
    }

    pub fn monomial(c: F, m: Mono) -> Self {
        HomPoly::from_terms([(m, c)]).unwrap()
    }

    /// The coordinate variable: 0 = X, 1 = Y, 2 = Z.
    pub fn var(i: usize) -> Self {
        let mut m = [0u16; 3];
        m[i] = 1;
        HomPoly::monomial(F::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_insert_with(F::zero);
            *e = e.add(c);
            if e.is_zero() {
                terms.remove(m);
            }
        }
        let degree = if terms.is_empty() {
            0
        } else {
            self.degree.max(other.degree)
        };
        HomPoly { terms, degree }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        HomPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
            degree: self.degree,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return HomPoly::zero();
        }
        HomPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a.mul(c))).collect(),
            degree: self.degree,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return HomPoly::zero();
        }
        let mut terms: BTreeMap<Mono, F> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]];
                let e = terms.entry(m).or_insert_with(F::zero);
                *e = e.add(&c1.mul(c2));
                if e.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        let degree = if terms.is_empty() {
            0
        } else {
            self.degree + other.degree
        };
        HomPoly { terms, degree }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = HomPoly::monomial(F::one(), [0, 0, 0]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &ProjPoint<F>) -> F {
        let c = p.coords();
        let mut acc = F::zero();
        for (m, a) in &self.terms {
            let t = c[0]
                .pow(m[0] as u64)
                .mul(&c[1].pow(m[1] as u64))
                .mul(&c[2].pow(m[2] as u64));
            acc = acc.add(&a.mul(&t));
        }
        acc
    }

    /// Substitute the linear forms given by the rows of `m` for the variables.
    pub fn substitute_linear(&self, m: &ProjLinearMap<F>) -> Self {
        let rows = m.rows();
        let lin: Vec<HomPoly<F>> = (0..3)
            .map(|i| {
                HomPoly::from_terms([
                    ([1, 0, 0], rows[i][0].clone()),
                    ([0, 1, 0], rows[i][1].clone()),
                    ([0, 0, 1], rows[i][2].clone()),
                ])
                .unwrap()
            })
            .collect();
        let mut pows: Vec<Vec<HomPoly<F>>> = vec![vec![], vec![], vec![]];
        for (v, p) in pows.iter_mut().zip(lin.iter()) {
            v.push(HomPoly::monomial(F::one(), [0, 0, 0]));
            for k in 1..=self.degree {
                let prev = v[k - 1].clone();
                v.push(prev.mul(p));
            }
        }
        let mut acc = HomPoly::zero();
        for (m0, c) in &self.terms {
            let t = pows[0][m0[0] as usize]
                .mul(&pows[1][m0[1] as usize])
                .mul(&pows[2][m0[2] as usize]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Minimal exponent of each variable across the terms.
    fn min_exponents(&self) -> Mono {
        let mut out = [u16::MAX; 3];
        for m in self.terms.keys() {
            for i in 0..3 {
                out[i] = out[i].min(m[i]);
            }
        }
        out
    }

    fn shift_down(&self, by: Mono) -> Self {
        HomPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| ([m[0] - by[0], m[1] - by[1], m[2] - by[2]], c.clone()))
                .collect(),
            degree: self.degree - (by[0] + by[1] + by[2]) as usize,
        }
    }

    fn shift_up(&self, by: Mono) -> Self {
        HomPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| ([m[0] + by[0], m[1] + by[1], m[2] + by[2]], c.clone()))
                .collect(),
            degree: self.degree + (by[0] + by[1] + by[2]) as usize,
        }
    }

    /// Dehomogenize (Z = 1): X -> x, Y -> y.
    pub fn dehomogenize(&self) -> Bivar<F> {
        let mut acc = Bivar::zero();
        for (m, c) in &self.terms {
            acc = acc.add(&Bivar::term(c.clone(), m[0] as usize, m[1] as usize));
        }
        acc
    }

    /// Homogenize a bivariate polynomial to the given degree with Z powers.
    pub fn homogenize(b: &Bivar<F>, degree: usize) -> Self {
        let mut terms = Vec::new();
        for (i, p) in b.coeffs().iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    assert!(i + j <= degree, "degree too small to homogenize");
                    terms.push(([i as u16, j as u16, (degree - i - j) as u16], c.clone()));
                }
            }
        }
        HomPoly::from_terms(terms).unwrap()
    }

    /// gcd of two homogeneous polynomials (monic-normalized by canonical scale).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // common monomial content
        let ma = self.min_exponents();
        let mb = other.min_exponents();
        let common = [ma[0].min(mb[0]), ma[1].min(mb[1]), ma[2].min(mb[2])];
        let a = self.shift_down(self.min_exponents());
        let b = other.shift_down(other.min_exponents());
        // now Z divides neither stripped part fully... strip only own content
        // above; the common part is `common`.
        let ga = a.dehomogenize();
        let gb = b.dehomogenize();
        let g = ga.gcd(&gb);
        let gdeg = g.deg_total();
        let ghom = HomPoly::homogenize(&g, gdeg);
        let full = ghom.shift_up(common);
        full.canonical_scale()
    }

    /// Exact division (panics if not divisible; internal, divisor certified).
    pub fn div_exact(&self, div: &Self) -> Self {
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return HomPoly::zero();
        }
        let mut rem = self.clone();
        let mut quo = HomPoly::zero();
        let (dm, dc) = {
            let (m, c) = div.terms.iter().next_back().unwrap();
            (*m, c.clone())
        };
        let dc_inv = dc.inv().unwrap();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.terms.iter().next_back().unwrap();
                (*m, c.clone())
            };
            assert!(
                rm[0] >= dm[0] && rm[1] >= dm[1] && rm[2] >= dm[2],
                "inexact multivariate division"
            );
            let qm = [rm[0] - dm[0], rm[1] - dm[1], rm[2] - dm[2]];
            let qc = rc.mul(&dc_inv);
            let t = HomPoly::monomial(qc, qm);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(div));
        }
        quo
    }

    /// Lexicographically smallest monomial (the canonical-scaling anchor).
    pub fn min_monomial(&self) -> Option<(Mono, F)> {
        self.terms.iter().next().map(|(m, c)| (*m, c.clone()))
    }

    fn canonical_scale(&self) -> Self {
        match self.min_monomial() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn display_with_vars(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let names = ["X", "Y", "Z"];
        let mut parts: Vec<String> = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for i in 0..3 {
                match m[i] {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    e => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let cs = c.to_string();
            let body = factors.join("*");
            let term = if body.is_empty() {
                cs
            } else if cs == "1" {
                body
            } else if cs == "-1" {
                format!("-{body}")
            } else if cs.contains('/') {
                format!("({cs})*{body}")
            } else {
                format!("{cs}*{body}")
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

impl<F: Field> fmt::Display for HomPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with_vars())
    }
}

impl<F: Field> fmt::Debug for HomPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> Bivar<F> {
    /// Total degree.
    pub fn deg_total(&self) -> usize {
        let mut best = 0usize;
        for (i, p) in self.coeffs().iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    best = best.max(i + j);
                }
            }
        }
        best
    }
}

/// Birational-candidate map of ℙ² as a simplified triple of homogeneous
/// polynomials of equal degree, gcd removed, canonically scaled.
#[derive(Clone, PartialEq, Eq)]
pub struct CremonaMap<F: Field> {
    components: [HomPoly<F>; 3],
    degree: usize,
}

impl<F: Field> CremonaMap<F> {
    /// Simplify and canonicalize a raw triple.
    pub fn new(raw: [HomPoly<F>; 3]) -> Result<Self> {
        let nonzero: Vec<&HomPoly<F>> = raw.iter().filter(|p| !p.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::CollapsedMap);
        }
        let deg = nonzero[0].degree();
        if nonzero.iter().any(|p| p.degree() != deg) {
            return Err(Error::Parse(
                "triple components have different degrees".into(),
            ));
        }
        // remove the common factor
        let mut g = nonzero[0].clone();
        for p in nonzero.iter().skip(1) {
            if g.degree() == 0 {
                break;
            }
            g = g.gcd(p);
        }
        let mut comps: Vec<HomPoly<F>> = raw
            .iter()
            .map(|p| {
                if p.is_zero() {
                    HomPoly::zero()
                } else if g.degree() == 0 {
                    p.clone()
                } else {
                    p.div_exact(&g)
                }
            })
            .collect();
        // proportionality check: all pairwise cross products vanish
        let prop = |a: &HomPoly<F>, b: &HomPoly<F>| -> bool {
            if a.is_zero() || b.is_zero() {
                return true;
            }
            // a*lead(b) == b*lead(a)
            let (ma, ca) = a.min_monomial().unwrap();
            let (mb, cb) = b.min_monomial().unwrap();
            let _ = (ma, mb);
            a.scale(&cb).sub(&b.scale(&ca)).is_zero()
        };
        if prop(&comps[0], &comps[1]) && prop(&comps[0], &comps[2]) && prop(&comps[1], &comps[2]) {
            return Err(Error::CollapsedMap);
        }
        // canonical projective scaling
        let anchor = comps
            .iter()
            .find(|p| !p.is_zero())
            .and_then(|p| p.min_monomial())
            .unwrap()
            .1;
        let inv = anchor.inv().unwrap();
        for c in comps.iter_mut() {
            *c = c.scale(&inv);
        }
        let degree = comps.iter().find(|p| !p.is_zero()).unwrap().degree();
        Ok(CremonaMap {
            components: [comps[0].clone(), comps[1].clone(), comps[2].clone()],
            degree,
        })
    }

    pub fn identity() -> Self {
        CremonaMap::new([HomPoly::var(0), HomPoly::var(1), HomPoly::var(2)]).unwrap()
    }

    pub fn components(&self) -> &[HomPoly<F>; 3] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity()
    }

    pub fn is_linear(&self) -> bool {
        self.degree == 1
    }

    /// Composition `g ∘ f` (f applies first), simplified.
    pub fn compose(g: &Self, f: &Self) -> Result<Self> {
        let d = g.degree;
        let mut pows: Vec<Vec<HomPoly<F>>> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut v = Vec::with_capacity(d + 1);
            v.push(HomPoly::monomial(F::one(), [0, 0, 0]));
            for k in 1..=d {
                let prev: HomPoly<F> = v[k - 1].clone();
                v.push(prev.mul(&f.components[i]));
            }
            pows.push(v);
        }
        let mut out: Vec<HomPoly<F>> = Vec::with_capacity(3);
        for comp in &g.components {
            let mut acc = HomPoly::zero();
            for (m, c) in comp.terms() {
                let t = pows[0][m[0] as usize]
                    .mul(&pows[1][m[1] as usize])
                    .mul(&pows[2][m[2] as usize]);
                acc = acc.add(&t.scale(c));
            }
            out.push(acc);
        }
        CremonaMap::new([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    /// Evaluate away from base points.
    pub fn eval_at(&self, p: &ProjPoint<F>) -> Result<ProjPoint<F>> {
        let vals = [
            self.components[0].eval(p),
            self.components[1].eval(p),
            self.components[2].eval(p),
        ];
        ProjPoint::new(vals[0].clone(), vals[1].clone(), vals[2].clone())
            .map_err(|_| Error::BasePointEvaluation)
    }

    pub fn from_linear(m: &ProjLinearMap<F>) -> Self {
        let rows = m.rows();
        let comp = |i: usize| {
            HomPoly::from_terms([
                ([1, 0, 0], rows[i][0].clone()),
                ([0, 1, 0], rows[i][1].clone()),
                ([0, 0, 1], rows[i][2].clone()),
            ])
            .unwrap()
        };
        CremonaMap::new([comp(0), comp(1), comp(2)]).expect("invertible matrix gives a map")
    }

    /// Extract the matrix of a degree-1 map.
    pub fn to_linear(&self) -> Option<ProjLinearMap<F>> {
        if self.degree != 1 {
            return None;
        }
        let row = |i: usize| {
            [
                self.components[i].coeff(&[1, 0, 0]),
                self.components[i].coeff(&[0, 1, 0]),
                self.components[i].coeff(&[0, 0, 1]),
            ]
        };
        ProjLinearMap::from_rows([row(0), row(1), row(2)]).ok()
    }
}

/// Equality of maps up to the projective scalar (canonical forms compared).
pub fn maps_equal<F: Field>(f: &CremonaMap<F>, g: &CremonaMap<F>) -> bool {
    f == g
}

pub fn linear_to_cremona<F: Field>(m: &ProjLinearMap<F>) -> CremonaMap<F> {
    CremonaMap::from_linear(m)
}

impl<F: Field> fmt::Display for CremonaMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} : {} : {}]",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

impl<F: Field> fmt::Debug for CremonaMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadlib::{nu1, nu2, sigma, tau_map};
    use crate::scalar::Rational;

    type Map = CremonaMap<Rational>;

    #[test]
    fn sigma_is_an_involution() {
        let s = sigma::<Rational>();
        assert_eq!(s.degree(), 2);
        let ss = Map::compose(&s, &s).unwrap();
        assert!(ss.is_identity());
    }

    #[test]
    fn sigma_nu1_composition_drops_gcd() {
        // sigma . nu1 = nu2 after removing the common factor YZ
        let got = Map::compose(&sigma::<Rational>(), &nu1()).unwrap();
        assert_eq!(got, nu2());
        assert_eq!(got.degree(), 2);
    }

    #[test]
    fn sigma_tau_commute_as_maps() {
        let st = Map::compose(&sigma::<Rational>(), &tau_map()).unwrap();
        let ts = Map::compose(&tau_map::<Rational>(), &sigma()).unwrap();
        assert_eq!(st, ts);
        // the common value is (XZ : YZ : XY)
        let expect = Map::new([
            HomPoly::monomial(Rational::from_i64(1), [1, 0, 1]),
            HomPoly::monomial(Rational::from_i64(1), [0, 1, 1]),
            HomPoly::monomial(Rational::from_i64(1), [1, 1, 0]),
        ])
        .unwrap();
        assert_eq!(st, expect);
        // tau sigma tau = sigma
        let tst = Map::compose(&Map::compose(&tau_map::<Rational>(), &sigma()).unwrap(), &tau_map()).unwrap();
        assert_eq!(tst, sigma());
        assert!(!maps_equal(&sigma::<Rational>(), &tau_map()));
    }

    #[test]
    fn scaling_is_projective() {
        let s2 = Map::new([
            HomPoly::monomial(Rational::from_i64(2), [0, 1, 1]),
            HomPoly::monomial(Rational::from_i64(2), [1, 0, 1]),
            HomPoly::monomial(Rational::from_i64(2), [1, 1, 0]),
        ])
        .unwrap();
        assert_eq!(s2, sigma());
    }

    #[test]
    fn eval_and_base_point_error() {
        let s = sigma::<Rational>();
        let p = ProjPoint::from_i64(1, 1, 1);
        assert_eq!(s.eval_at(&p).unwrap(), p);
        assert_eq!(
            s.eval_at(&ProjPoint::from_i64(1, 0, 0)),
            Err(Error::BasePointEvaluation)
        );
        // nu1 fixes (1:1:1)
        assert_eq!(nu1::<Rational>().eval_at(&p).unwrap(), p);
    }

    #[test]
    fn composition_degree_with_generic_translate() {
        // sigma . a . sigma with a generic translation: degree 4
        let a = ProjLinearMap::from_i64([[1, 0, 1], [0, 1, 2], [0, 0, 1]]).unwrap();
        let am = Map::from_linear(&a);
        let f = Map::compose(&sigma::<Rational>(), &Map::compose(&am, &sigma()).unwrap()).unwrap();
        assert_eq!(f.degree(), 4);
    }

    #[test]
    fn eval_commutes_with_composition() {
        let a = ProjLinearMap::from_i64([[1, 2, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        let am = Map::from_linear(&a);
        let comp = Map::compose(&sigma::<Rational>(), &am).unwrap();
        for pt in [[1i64, 1, 1], [2, -1, 3], [5, 1, -2]] {
            let p = ProjPoint::from_i64(pt[0], pt[1], pt[2]);
            let lhs = comp.eval_at(&p).unwrap();
            let rhs = sigma::<Rational>()
                .eval_at(&am.eval_at(&p).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn collapsed_composition_detected() {
        // (X^2 : XY : XZ) simplifies to the identity; a rank-1 triple errors
        let x = HomPoly::<Rational>::var(0);
        let y = HomPoly::var(1);
        let z = HomPoly::var(2);
        let simplified = Map::new([x.mul(&x), x.mul(&y), x.mul(&z)]).unwrap();
        assert!(simplified.is_identity());
        let bad = Map::new([x.mul(&x), x.mul(&x).scale(&Rational::from_i64(2)), x.mul(&x)]);
        assert_eq!(bad, Err(Error::CollapsedMap));
    }

    #[test]
    fn linear_round_trip() {
        let m = ProjLinearMap::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        let cm = linear_to_cremona(&m);
        assert_eq!(cm.degree(), 1);
        assert_eq!(cm.to_linear().unwrap(), m);
        assert_eq!(cm, tau_map());
    }
}
