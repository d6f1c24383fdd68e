//! Text forms for field elements, polynomials, points, matrices and map
//! triples. These are the wire formats used by the CLI and the trace files.

use crate::error::{Error, Result};
use crate::polymap::{CremonaMap, HomPoly, Mono};
use crate::projlinear::{Moebius, ProjLinearMap, ProjPoint};
use crate::scalar::{Field, Poly, RatFun};
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Tokenizer and expression AST
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                out.push(Tok::Num(chars[i..j].iter().collect()));
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push(Tok::Ident(chars[i..j].iter().collect()));
                i = j;
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(String),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                // juxtaposition like "2X" is not accepted; require operators
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.factor()?))),
            Some(Tok::Plus) => self.factor(),
            Some(Tok::Num(n)) => self.maybe_pow(Expr::Num(n)),
            Some(Tok::Ident(v)) => self.maybe_pow(Expr::Var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => self.maybe_pow(e),
                    _ => Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }

    fn maybe_pow(&mut self, base: Expr) -> Result<Expr> {
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            match self.next() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {n:?}")))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                t => Err(Error::Parse(format!("bad exponent token {t:?}"))),
            }
        } else {
            Ok(base)
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation into trivariate fractions (for map triples)
// ---------------------------------------------------------------------------

/// Sparse trivariate polynomial without a homogeneity requirement (parser
/// intermediate only).
type SPoly<F> = BTreeMap<Mono, F>;

fn sp_term<F: Field>(c: F, m: Mono) -> SPoly<F> {
    let mut t = BTreeMap::new();
    if !c.is_zero() {
        t.insert(m, c);
    }
    t
}

fn sp_add<F: Field>(a: &SPoly<F>, b: &SPoly<F>) -> SPoly<F> {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(*m).or_insert_with(F::zero);
        *e = e.add(c);
        if e.is_zero() {
            out.remove(m);
        }
    }
    out
}

fn sp_neg<F: Field>(a: &SPoly<F>) -> SPoly<F> {
    a.iter().map(|(m, c)| (*m, c.neg())).collect()
}

fn sp_mul<F: Field>(a: &SPoly<F>, b: &SPoly<F>) -> SPoly<F> {
    let mut out = BTreeMap::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            let m = [m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]];
            let e = out.entry(m).or_insert_with(F::zero);
            *e = e.add(&c1.mul(c2));
            if e.is_zero() {
                out.remove(&m);
            }
        }
    }
    out
}

struct Frac<F: Field> {
    num: SPoly<F>,
    den: SPoly<F>,
}

fn eval_frac<F: Field>(e: &Expr, vars: &[(&str, Mono)]) -> Result<Frac<F>> {
    let one = sp_term(F::one(), [0, 0, 0]);
    Ok(match e {
        Expr::Num(n) => Frac {
            num: sp_term(F::parse(n)?, [0, 0, 0]),
            den: one,
        },
        Expr::Var(v) => {
            let m = vars
                .iter()
                .find(|(name, _)| name == v)
                .map(|(_, m)| *m)
                .ok_or_else(|| Error::Parse(format!("unknown variable {v:?}")))?;
            Frac {
                num: sp_term(F::one(), m),
                den: one,
            }
        }
        Expr::Neg(a) => {
            let f = eval_frac(a, vars)?;
            Frac {
                num: sp_neg(&f.num),
                den: f.den,
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let fa = eval_frac::<F>(a, vars)?;
            let mut fb = eval_frac::<F>(b, vars)?;
            if matches!(e, Expr::Sub(..)) {
                fb.num = sp_neg(&fb.num);
            }
            Frac {
                num: sp_add(&sp_mul(&fa.num, &fb.den), &sp_mul(&fb.num, &fa.den)),
                den: sp_mul(&fa.den, &fb.den),
            }
        }
        Expr::Mul(a, b) => {
            let fa = eval_frac::<F>(a, vars)?;
            let fb = eval_frac::<F>(b, vars)?;
            Frac {
                num: sp_mul(&fa.num, &fb.num),
                den: sp_mul(&fa.den, &fb.den),
            }
        }
        Expr::Div(a, b) => {
            let fa = eval_frac::<F>(a, vars)?;
            let fb = eval_frac::<F>(b, vars)?;
            if fb.num.is_empty() {
                return Err(Error::DivisionByZero);
            }
            Frac {
                num: sp_mul(&fa.num, &fb.den),
                den: sp_mul(&fa.den, &fb.num),
            }
        }
        Expr::Pow(a, k) => {
            let fa = eval_frac::<F>(a, vars)?;
            let mut num = sp_term(F::one(), [0, 0, 0]);
            let mut den = num.clone();
            for _ in 0..*k {
                num = sp_mul(&num, &fa.num);
                den = sp_mul(&den, &fa.den);
            }
            Frac { num, den }
        }
    })
}

const XYZ: [(&str, Mono); 3] = [("X", [1, 0, 0]), ("Y", [0, 1, 0]), ("Z", [0, 0, 1])];

/// Parse a polynomial in X, Y, Z (must be homogeneous, denominator constant).
pub fn parse_hompoly<F: Field>(s: &str) -> Result<HomPoly<F>> {
    let f: Frac<F> = eval_frac(&parse_expr(s)?, &XYZ)?;
    if f.den.len() != 1 || !f.den.contains_key(&[0, 0, 0]) {
        return Err(Error::Parse(format!(
            "polynomial expected, found nonconstant denominator in {s:?}"
        )));
    }
    let d = f.den[&[0, 0, 0]].inv().ok_or(Error::DivisionByZero)?;
    HomPoly::from_terms(f.num.into_iter().map(|(m, c)| (m, c.mul(&d))))
}

/// Parse a map triple "[P0 : P1 : P2]", clearing any scalar denominators.
pub fn parse_triple<F: Field>(s: &str) -> Result<CremonaMap<F>> {
    let inner = s.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("map triple must be bracketed: {s:?}")))?;
    let parts = split_top_level(inner, ':');
    if parts.len() != 3 {
        return Err(Error::Parse("map triple needs three components".into()));
    }
    let comps: Vec<HomPoly<F>> = parts
        .iter()
        .map(|p| parse_hompoly(p))
        .collect::<Result<_>>()?;
    CremonaMap::new([comps[0].clone(), comps[1].clone(), comps[2].clone()])
}

/// Parse a point "(X:Y:Z)" with scalar entries.
pub fn parse_point<F: Field>(s: &str) -> Result<ProjPoint<F>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("point must look like (a:b:c): {s:?}")))?;
    let parts = split_top_level(inner, ':');
    if parts.len() != 3 {
        return Err(Error::Parse("point needs three coordinates".into()));
    }
    let c: Vec<F> = parts
        .iter()
        .map(|p| parse_scalar_expr(p))
        .collect::<Result<_>>()?;
    ProjPoint::new(c[0].clone(), c[1].clone(), c[2].clone())
}

/// Parse a scalar allowing expressions like "-3/4".
pub fn parse_scalar_expr<F: Field>(s: &str) -> Result<F> {
    let f: Frac<F> = eval_frac(&parse_expr(s)?, &[])?;
    let num = f.num.get(&[0, 0, 0]).cloned().unwrap_or_else(F::zero);
    let den = f.den.get(&[0, 0, 0]).cloned().unwrap_or_else(F::zero);
    if f.num.len() > 1 || f.den.len() > 1 {
        return Err(Error::Parse(format!("scalar expected: {s:?}")));
    }
    num.div(&den)
}

/// Parse a univariate rational function in x.
pub fn parse_ratfun<F: Field>(s: &str) -> Result<RatFun<F>> {
    let vars = [("x", [1u16, 0, 0] as Mono)];
    let f: Frac<F> = eval_frac(&parse_expr(s)?, &vars)?;
    let to_poly = |sp: &SPoly<F>| -> Poly<F> {
        let deg = sp.keys().map(|m| m[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![F::zero(); deg + 1];
        for (m, c) in sp {
            coeffs[m[0] as usize] = c.clone();
        }
        Poly::from_coeffs(coeffs)
    };
    RatFun::new(to_poly(&f.num), to_poly(&f.den))
}

/// Parse a univariate polynomial in x.
pub fn parse_poly_x<F: Field>(s: &str) -> Result<Poly<F>> {
    let r = parse_ratfun::<F>(s)?;
    if !r.is_polynomial() {
        return Err(Error::Parse(format!("polynomial expected: {s:?}")));
    }
    let d = r.den().leading().inv().ok_or(Error::DivisionByZero)?;
    Ok(r.num().scale(&d))
}

/// Parse a 3x3 matrix "[a,b,c; d,e,f; g,h,i]" (or with "mat(...)" wrapper).
pub fn parse_matrix<F: Field>(s: &str) -> Result<ProjLinearMap<F>> {
    let t = s.trim();
    let inner = if let Some(x) = t.strip_prefix("mat(").and_then(|x| x.strip_suffix(')')) {
        x
    } else if let Some(x) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        x
    } else {
        return Err(Error::Parse(format!("matrix must be [..;..;..]: {s:?}")));
    };
    let rows = split_top_level(inner, ';');
    if rows.len() != 3 {
        return Err(Error::Parse("matrix needs three rows".into()));
    }
    let mut out: Vec<[F; 3]> = Vec::new();
    for r in rows {
        let cells = split_top_level(&r, ',');
        if cells.len() != 3 {
            return Err(Error::Parse("matrix row needs three entries".into()));
        }
        let vals: Vec<F> = cells
            .iter()
            .map(|c| parse_scalar_expr(c))
            .collect::<Result<_>>()?;
        out.push([vals[0].clone(), vals[1].clone(), vals[2].clone()]);
    }
    ProjLinearMap::from_rows([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Parse a 2x2 Möbius matrix over scalars: "[[a,b],[c,d]]".
pub fn parse_moebius_scalar<F: Field>(s: &str) -> Result<Moebius<F>> {
    let entries = parse_2x2(s)?;
    let vals: Vec<F> = entries
        .iter()
        .map(|e| parse_scalar_expr(e))
        .collect::<Result<_>>()?;
    Moebius::new([
        [vals[0].clone(), vals[1].clone()],
        [vals[2].clone(), vals[3].clone()],
    ])
}

/// Parse a 2x2 Möbius matrix with polynomial-in-x entries: "[[a,b],[c,d]]".
pub fn parse_moebius_ratfun<F: Field>(s: &str) -> Result<Moebius<RatFun<F>>> {
    let entries = parse_2x2(s)?;
    let vals: Vec<RatFun<F>> = entries
        .iter()
        .map(|e| parse_ratfun(e))
        .collect::<Result<_>>()?;
    Moebius::new([
        [vals[0].clone(), vals[1].clone()],
        [vals[2].clone(), vals[3].clone()],
    ])
}

fn parse_2x2(s: &str) -> Result<[String; 4]> {
    let t = s.trim();
    let inner = t
        .strip_prefix("[[")
        .and_then(|x| x.strip_suffix("]]"))
        .ok_or_else(|| Error::Parse(format!("2x2 matrix must be [[a,b],[c,d]]: {s:?}")))?;
    let rows: Vec<String> = inner.split("],[").map(|r| r.to_string()).collect();
    if rows.len() != 2 {
        return Err(Error::Parse("2x2 matrix needs two rows".into()));
    }
    let mut out = Vec::new();
    for r in rows {
        let cells = split_top_level(&r, ',');
        if cells.len() != 2 {
            return Err(Error::Parse("2x2 matrix row needs two entries".into()));
        }
        out.extend(cells);
    }
    Ok([
        out[0].clone(),
        out[1].clone(),
        out[2].clone(),
        out[3].clone(),
    ])
}

/// Split on a separator at parenthesis/bracket depth zero.
pub fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(c);
            }
            _ if c == sep && depth == 0 => {
                parts.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(c),
        }
    }
    parts.push(cur.trim().to_string());
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadlib::sigma;
    use crate::scalar::Rational;

    #[test]
    fn triple_round_trip() {
        let s: CremonaMap<Rational> = parse_triple("[Y*Z : X*Z : X*Y]").unwrap();
        assert_eq!(s, sigma());
        let printed = s.to_string();
        let again: CremonaMap<Rational> = parse_triple(&printed).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn point_and_scalar() {
        let p: ProjPoint<Rational> = parse_point("(1:0:0)").unwrap();
        assert_eq!(p, crate::projlinear::p1());
        let q: ProjPoint<Rational> = parse_point("(1/2 : -3 : 1)").unwrap();
        assert_eq!(q, ProjPoint::new(
            Rational::new(1, 2).unwrap(),
            Rational::from_i64(-3),
            Rational::from_i64(1),
        ).unwrap());
    }

    #[test]
    fn ratfun_round_trip() {
        let f: RatFun<Rational> = parse_ratfun("(x^2 - 1)/(x + 2)").unwrap();
        assert_eq!(f.to_string(), "(x^2 - 1)/(x + 2)");
        let g: RatFun<Rational> = parse_ratfun(&f.to_string()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn nonhomogeneous_rejected() {
        assert!(parse_hompoly::<Rational>("X^2 + Y").is_err());
    }

    #[test]
    fn matrix_parse() {
        let m: ProjLinearMap<Rational> = parse_matrix("[0,1,0; 1,0,0; 0,0,1]").unwrap();
        assert_eq!(m, crate::projlinear::tau());
        let again: ProjLinearMap<Rational> = parse_matrix(&m.to_string()).unwrap();
        assert_eq!(again, m);
    }
}
