//! Base points of Cremona maps, including infinitely near points through
//! explicit blow-up towers, multiplicities, and linear-system classes.
//!
//! Proper base points are located by eliminating Z with resultants of two
//! generic members of the system, extracting rational directions, and
//! verifying candidate points exactly. Infinitely near points come from
//! recursive blow-ups of the local strict transforms. Completeness over the
//! ground field is certified by the homaloidal sums Σm = 3d−3 and
//! Σm² = d²−1; when they fail, surviving nonlinear factors are tested for
//! genuine common zeros over an extension before reporting.

use crate::bivar::Bivar;
use crate::error::{Error, Result};
use crate::polymap::{CremonaMap, HomPoly};
use crate::projlinear::{Line, ProjLinearMap, ProjPoint};
use crate::scalar::{Field, Poly, RatFun, RootField};
use std::collections::BTreeMap;
use std::fmt;

/// Blow-up chart of a point on the latest exceptional curve.
///
/// At local coordinates (u, v) centered at the blown-up point, chart `First`
/// is (u, v) = (s, s t) with exceptional coordinate t, and chart `Second` is
/// (u, v) = (s t, t) covering the leftover direction at s = 0. A point is
/// stored in the chart where it is visible, preferring `First`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    First,
    Second,
}

/// Proper or infinitely near point: a plane root plus a tower of blow-up
/// steps, each naming the chart and the exceptional coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BubblePoint<F: Field> {
    pub root: ProjPoint<F>,
    pub tower: Vec<(Chart, F)>,
}

impl<F: Field> BubblePoint<F> {
    pub fn proper(root: ProjPoint<F>) -> Self {
        BubblePoint {
            root,
            tower: vec![],
        }
    }

    pub fn is_proper(&self) -> bool {
        self.tower.is_empty()
    }

    pub fn height(&self) -> usize {
        self.tower.len()
    }

    fn extended(&self, chart: Chart, coord: F) -> Self {
        let mut tower = self.tower.clone();
        tower.push((chart, coord));
        BubblePoint {
            root: self.root.clone(),
            tower,
        }
    }

    /// True when `self` lies above `other` in the same tower (strictly).
    pub fn is_infinitely_near(&self, other: &BubblePoint<F>) -> bool {
        self.root == other.root
            && self.tower.len() > other.tower.len()
            && self.tower[..other.tower.len()] == other.tower[..]
    }

    /// True when `self` is in the first neighborhood of `other`.
    pub fn is_first_neighborhood_of(&self, other: &BubblePoint<F>) -> bool {
        self.is_infinitely_near(other) && self.tower.len() == other.tower.len() + 1
    }
}

impl<F: Field> fmt::Display for BubblePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for (chart, c) in &self.tower {
            let name = match chart {
                Chart::First => "first",
                Chart::Second => "second",
            };
            write!(f, "[{name},{c}]")?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for BubblePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Assignment of multiplicities to bubble points.
pub type MultiplicityMap<F> = BTreeMap<BubblePoint<F>, usize>;

/// Degree plus multiplicities: the class of a linear system of plane curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystemClass<F: Field> {
    pub degree: usize,
    pub mults: MultiplicityMap<F>,
}

impl<F: Field> LinearSystemClass<F> {
    pub fn lines() -> Self {
        LinearSystemClass {
            degree: 1,
            mults: BTreeMap::new(),
        }
    }

    pub fn mult_sum(&self) -> i64 {
        self.mults.values().map(|&m| m as i64).sum()
    }

    pub fn mult_sq_sum(&self) -> i64 {
        self.mults.values().map(|&m| (m * m) as i64).sum()
    }

    /// Σm = 3d−3 and Σm² = d²−1, the class of a birational map.
    pub fn is_homaloidal(&self) -> bool {
        let d = self.degree as i64;
        self.mult_sum() == 3 * d - 3 && self.mult_sq_sum() == d * d - 1
    }

    /// Weak proximity consistency along towers: ancestors carry at least the
    /// multiplicity of each point infinitely near them.
    pub fn proximity_consistent(&self) -> bool {
        for (p, &mp) in &self.mults {
            for (q, &mq) in &self.mults {
                if q.is_infinitely_near(p) && mq > mp {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Local (affine) systems
// ---------------------------------------------------------------------------

/// Matrix moving `p` to (0:0:1): swap the pivot coordinate to the last slot,
/// then translate. Deterministic, so chart data of bubble points is unique.
pub fn move_to_origin<F: Field>(p: &ProjPoint<F>) -> ProjLinearMap<F> {
    let piv = p.pivot();
    let mut rows = [[0i64; 3]; 3];
    for i in 0..3 {
        rows[i][i] = 1;
    }
    if piv != 2 {
        rows = [[0; 3]; 3];
        let perm = |i: usize| -> usize {
            if i == piv {
                2
            } else if i == 2 {
                piv
            } else {
                i
            }
        };
        for i in 0..3 {
            rows[perm(i)][i] = 1;
        }
    }
    let m1 = ProjLinearMap::from_i64(rows).unwrap();
    let moved = m1.apply(p);
    let c = moved.coords();
    debug_assert!(c[2].is_one());
    let m2 = ProjLinearMap::from_rows([
        [F::one(), F::zero(), c[0].neg()],
        [F::zero(), F::one(), c[1].neg()],
        [F::zero(), F::zero(), F::one()],
    ])
    .unwrap();
    m2.compose(&m1)
}

/// The three components of `f` in the affine chart centered at `p`.
pub fn affine_system<F: Field>(f: &CremonaMap<F>, p: &ProjPoint<F>) -> [Bivar<F>; 3] {
    let minv = move_to_origin(p).inverse();
    let comp = |i: usize| f.components()[i].substitute_linear(&minv).dehomogenize();
    [comp(0), comp(1), comp(2)]
}

fn system_order<F: Field>(sys: &[Bivar<F>; 3]) -> usize {
    sys.iter()
        .filter_map(|b| b.vanishing_order())
        .min()
        .unwrap_or(usize::MAX)
}

/// One blow-up of the local system at the origin, dividing out the common
/// multiplicity `m`: strict transforms in both charts.
fn strict_transforms<F: Field>(sys: &[Bivar<F>; 3], m: usize) -> ([Bivar<F>; 3], [Bivar<F>; 3]) {
    let first = |b: &Bivar<F>| {
        if b.is_zero() {
            Bivar::zero()
        } else {
            b.blowup_first().div_x_pow(m)
        }
    };
    let second = |b: &Bivar<F>| {
        if b.is_zero() {
            Bivar::zero()
        } else {
            b.blowup_second().div_y_pow(m)
        }
    };
    (
        [first(&sys[0]), first(&sys[1]), first(&sys[2])],
        [second(&sys[0]), second(&sys[1]), second(&sys[2])],
    )
}

/// Exceptional base points after one blow-up: chart-first points from the
/// rational roots of the gcd of the restrictions to the exceptional curve,
/// plus the chart-second point at coordinate 0 when all transforms vanish
/// there.
struct BlowUpStep<F: Field> {
    points: Vec<(Chart, F, [Bivar<F>; 3], usize)>,
}

fn blow_up_local<F: RootField>(sys: &[Bivar<F>; 3], m: usize) -> Result<BlowUpStep<F>> {
    let (first, second) = strict_transforms(sys, m);
    let mut points = Vec::new();

    // chart First: restrictions to {s = 0} are polynomials in t
    let mut g: Option<Poly<F>> = None;
    let mut all_zero = true;
    for b in &first {
        if b.is_zero() {
            continue;
        }
        let r = b.at_x_zero();
        all_zero = false;
        if r.is_zero() {
            continue;
        }
        g = Some(match g {
            None => r.monic(),
            Some(prev) => prev.gcd(&r),
        });
    }
    assert!(!all_zero, "strict transform system vanished identically");
    if let Some(g) = g {
        if !g.is_constant() {
            let rep = F::poly_roots(&g);
            if !rep.cofactor.is_constant() {
                return Err(Error::NonRationalBasePoint {
                    factor: rep.cofactor.to_string(),
                });
            }
            for (t0, _) in rep.roots {
                let local = [
                    first[0].shift_y(&t0),
                    first[1].shift_y(&t0),
                    first[2].shift_y(&t0),
                ];
                let order = system_order(&local);
                debug_assert!(order >= 1);
                points.push((Chart::First, t0, local, order));
            }
        }
    } else {
        // every nonzero restriction vanished identically: the whole
        // exceptional curve would be in the base locus, impossible for a
        // simplified triple
        return Err(Error::NotSimplified);
    }

    // chart Second: only the direction invisible in chart First, at s = 0
    let origin_order = system_order(&second);
    if origin_order >= 1 && origin_order != usize::MAX {
        points.push((Chart::Second, F::zero(), second.clone(), origin_order));
    }
    Ok(BlowUpStep { points })
}

/// Public blow-up data for one point of a map's system.
pub struct BlowUpData<F: Field> {
    pub strict_first: [Bivar<F>; 3],
    pub strict_second: [Bivar<F>; 3],
    pub exceptional_points: Vec<(Chart, F, usize)>,
}

/// Blow up the system of `f` at a (possibly infinitely near) base point.
pub fn blow_up<F: RootField>(f: &CremonaMap<F>, q: &BubblePoint<F>) -> Result<BlowUpData<F>> {
    let (sys, m) = descend_to(f, q)?;
    if m == 0 {
        return Err(Error::DegenerateConfiguration(format!(
            "{q} is not a base point of the system"
        )));
    }
    let (first, second) = strict_transforms(&sys, m);
    let step = blow_up_local(&sys, m)?;
    Ok(BlowUpData {
        strict_first: first,
        strict_second: second,
        exceptional_points: step
            .points
            .into_iter()
            .map(|(c, t, _, o)| (c, t, o))
            .collect(),
    })
}

/// Walk the tower of `q`, returning the local system centered at `q` and the
/// multiplicity of the system there.
fn descend_to<F: Field>(f: &CremonaMap<F>, q: &BubblePoint<F>) -> Result<([Bivar<F>; 3], usize)> {
    let mut sys = affine_system(f, &q.root);
    for (chart, coord) in &q.tower {
        let m = system_order(&sys);
        if m == 0 || m == usize::MAX {
            // not a base point at this level: everything above has mult 0
            return Ok((sys, 0));
        }
        let (first, second) = strict_transforms(&sys, m);
        sys = match chart {
            Chart::First => [
                first[0].shift_y(coord),
                first[1].shift_y(coord),
                first[2].shift_y(coord),
            ],
            Chart::Second => [
                second[0].shift_x(coord),
                second[1].shift_x(coord),
                second[2].shift_x(coord),
            ],
        };
    }
    let m = system_order(&sys);
    Ok((sys, if m == usize::MAX { 0 } else { m }))
}

/// Multiplicity of the system of `f` at the bubble point `q`.
pub fn multiplicity_at<F: Field>(f: &CremonaMap<F>, q: &BubblePoint<F>) -> usize {
    match descend_to(f, q) {
        Ok((_, m)) => m,
        Err(_) => 0,
    }
}

// ---------------------------------------------------------------------------
// Proper base point search
// ---------------------------------------------------------------------------

/// Specialize a homogeneous polynomial along the line (x0 t : y0 t : Z).
fn specialize_z<F: Field>(p: &HomPoly<F>, x0: &F, y0: &F) -> Poly<F> {
    let mut coeffs = vec![F::zero(); p.degree() + 1];
    for (m, c) in p.terms() {
        let v = x0.pow(m[0] as u64).mul(&y0.pow(m[1] as u64));
        let k = m[2] as usize;
        coeffs[k] = coeffs[k].add(&c.mul(&v));
    }
    Poly::from_coeffs(coeffs)
}

/// Z-degree of a homogeneous polynomial.
fn z_degree<F: Field>(p: &HomPoly<F>) -> usize {
    p.terms().map(|(m, _)| m[2] as usize).max().unwrap_or(0)
}

/// Resultant in Z of two members, as a polynomial in t along (1 : t : Z).
///
/// Interpolates the formal-degree Sylvester determinant from exact univariate
/// resultants; falls back to an exact computation over F(t) when the field is
/// too small to supply interpolation nodes.
fn resultant_direction_poly<F: Field>(u: &HomPoly<F>, v: &HomPoly<F>) -> Poly<F> {
    let d = u.degree();
    let eu = z_degree(u);
    let ev = z_degree(v);
    if eu == 0 {
        return dehom_line(u);
    }
    if ev == 0 {
        return dehom_line(v);
    }
    let bound = d * (eu + ev) - eu * ev;
    let nodes_needed = bound + 1;
    let p = field_size_limit::<F>();
    if let Some(p) = p {
        if (p as usize) < nodes_needed {
            return resultant_via_ratfun(u, v);
        }
    }
    // Newton interpolation through exact evaluations
    let mut xs: Vec<F> = Vec::with_capacity(nodes_needed);
    let mut ys: Vec<F> = Vec::with_capacity(nodes_needed);
    for j in 0..nodes_needed {
        let t = F::from_i64(j as i64);
        let up = specialize_z_at(u, &t);
        let vp = specialize_z_at(v, &t);
        ys.push(formal_resultant(&up, &vp, eu, ev));
        xs.push(t);
    }
    newton_interpolate(&xs, &ys)
}

fn field_size_limit<F: Field>() -> Option<u64> {
    // distinct small integers exist iff the characteristic is large or zero;
    // probe by comparing a few images
    let mut seen = Vec::new();
    for j in 0..64i64 {
        let v = F::from_i64(j);
        if seen.contains(&v) {
            return Some(j as u64);
        }
        seen.push(v);
    }
    None
}

fn specialize_z_at<F: Field>(p: &HomPoly<F>, t: &F) -> Poly<F> {
    specialize_z(p, &F::one(), t)
}

fn dehom_line<F: Field>(p: &HomPoly<F>) -> Poly<F> {
    // restrict to (1 : t : 0)-free form: p has no Z, view as poly in t = Y/X
    let deg = p.degree();
    let mut coeffs = vec![F::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m[1] as usize] = coeffs[m[1] as usize].add(c);
    }
    Poly::from_coeffs(coeffs)
}

/// det Sylvester with formal degrees (eu, ev) from actual-degree resultants.
fn formal_resultant<F: Field>(up: &Poly<F>, vp: &Poly<F>, eu: usize, ev: usize) -> F {
    let du = if up.is_zero() { None } else { Some(up.degree()) };
    let dv = if vp.is_zero() { None } else { Some(vp.degree()) };
    match (du, dv) {
        (None, _) | (_, None) => F::zero(),
        (Some(du), Some(dv)) => {
            if du < eu && dv < ev {
                return F::zero();
            }
            if du == eu && dv == ev {
                return up.resultant(vp);
            }
            if du < eu {
                // det Syl_{eu,ev}(u,v) = (-1)^{ev (eu-du)} lc(v)^{eu-du} det Syl_{du,ev}
                let k = eu - du;
                let mut r = vp.leading().pow(k as u64).mul(&up.resultant(vp));
                if (ev * k) % 2 == 1 {
                    r = r.neg();
                }
                r
            } else {
                let k = ev - dv;
                let mut r = up.leading().pow(k as u64).mul(&up.resultant(vp));
                if (eu * k) % 2 == 1 {
                    r = r.neg();
                }
                r
            }
        }
    }
}

/// Slow exact path: resultant over the rational function field F(t).
fn resultant_via_ratfun<F: Field>(u: &HomPoly<F>, v: &HomPoly<F>) -> Poly<F> {
    let lift = |p: &HomPoly<F>| -> Poly<RatFun<F>> {
        let mut coeffs: Vec<RatFun<F>> = vec![RatFun::zero(); z_degree(p) + 1];
        for (m, c) in p.terms() {
            let t_pow = RatFun::from_poly(Poly::monomial(c.clone(), m[1] as usize));
            coeffs[m[2] as usize] = coeffs[m[2] as usize].add(&t_pow);
        }
        Poly::from_coeffs(coeffs)
    };
    let r = lift(u).resultant(&lift(v));
    if r.is_zero() {
        return Poly::zero();
    }
    assert!(r.is_polynomial(), "resultant of polynomials is polynomial");
    let lead = r.den().leading().inv().unwrap();
    r.num().scale(&lead)
}

fn newton_interpolate<F: Field>(xs: &[F], ys: &[F]) -> Poly<F> {
    // divided differences
    let n = xs.len();
    let mut table: Vec<F> = ys.to_vec();
    let mut coeffs: Vec<F> = Vec::with_capacity(n);
    coeffs.push(table[0].clone());
    for level in 1..n {
        for i in 0..(n - level) {
            let dx = xs[i + level].sub(&xs[i]);
            table[i] = table[i + 1].sub(&table[i]).div(&dx).unwrap();
        }
        coeffs.push(table[0].clone());
    }
    let mut acc = Poly::zero();
    for (k, c) in coeffs.iter().enumerate().rev() {
        let lin = Poly::from_coeffs(vec![xs[k].neg(), F::one()]);
        if k == coeffs.len() - 1 {
            acc = Poly::constant(c.clone());
        } else {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
    }
    acc
}

/// Deterministic member-combination scan until the resultant is nonzero.
fn member_pair<F: Field>(f: &CremonaMap<F>) -> Result<(HomPoly<F>, HomPoly<F>, Poly<F>)> {
    let combos: Vec<[i64; 3]> = {
        let mut v = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for k in 1..14i64 {
            v.push([1, k, k * k]);
        }
        v
    };
    let member = |lam: &[i64; 3]| -> HomPoly<F> {
        let mut acc = HomPoly::zero();
        for (i, c) in lam.iter().enumerate() {
            acc = acc.add(&f.components()[i].scale(&F::from_i64(*c)));
        }
        acc
    };
    for i in 0..combos.len() {
        for j in (i + 1)..combos.len() {
            let u = member(&combos[i]);
            let v = member(&combos[j]);
            if u.is_zero() || v.is_zero() {
                continue;
            }
            let r = resultant_direction_poly(&u, &v);
            if !r.is_zero() {
                return Ok((u, v, r));
            }
        }
    }
    Err(Error::NotHomaloidal(
        "no coprime pair of members found; components share factors".into(),
    ))
}

struct ProperScan<F: Field> {
    points: Vec<ProjPoint<F>>,
    /// nonlinear, rational-root-free part of the direction resultant,
    /// kept for the lazy non-rationality certificate
    direction_cofactor: Poly<F>,
}

fn proper_base_points<F: RootField>(f: &CremonaMap<F>) -> Result<ProperScan<F>> {
    let mut points: Vec<ProjPoint<F>> = Vec::new();
    // the direction-free point (0:0:1)
    let origin = ProjPoint::from_i64(0, 0, 1);
    if f.components().iter().all(|c| c.is_zero() || c.eval(&origin).is_zero()) {
        points.push(origin);
    }
    let (_, _, r) = member_pair(f)?;
    let rep = F::poly_roots(&r);
    let mut directions: Vec<(F, F)> = rep
        .roots
        .iter()
        .map(|(t, _)| (F::one(), t.clone()))
        .collect();
    directions.push((F::zero(), F::one()));
    for (x0, y0) in directions {
        let mut g: Option<Poly<F>> = None;
        for c in f.components() {
            if c.is_zero() {
                continue;
            }
            let w = specialize_z(c, &x0, &y0);
            if w.is_zero() {
                continue;
            }
            g = Some(match g {
                None => w.monic(),
                Some(prev) => prev.gcd(&w),
            });
        }
        let g = match g {
            Some(g) => g,
            None => return Err(Error::NotSimplified),
        };
        if g.is_constant() {
            continue;
        }
        let zrep = F::poly_roots(&g);
        if !zrep.cofactor.is_constant() {
            // genuine common zeros along this line outside the ground field
            return Err(Error::NonRationalBasePoint {
                factor: zrep.cofactor.display_with("Z"),
            });
        }
        for (z0, _) in zrep.roots {
            let p = ProjPoint::new(x0.clone(), y0.clone(), z0)?;
            if f.components()
                .iter()
                .all(|c| c.is_zero() || c.eval(&p).is_zero())
                && !points.contains(&p)
            {
                points.push(p);
            }
        }
    }
    Ok(ProperScan {
        points,
        direction_cofactor: rep.cofactor,
    })
}

// ---------------------------------------------------------------------------
// Base points with certificate
// ---------------------------------------------------------------------------

/// All base points of the system of `f`, with multiplicities, certified
/// complete by the homaloidal sums.
pub fn base_points<F: RootField>(f: &CremonaMap<F>) -> Result<MultiplicityMap<F>> {
    let d = f.degree() as i64;
    let mut out: MultiplicityMap<F> = BTreeMap::new();
    if d == 1 {
        if f.to_linear().is_none() {
            return Err(Error::NotHomaloidal(
                "degree-1 triple is not invertible".into(),
            ));
        }
        return Ok(out);
    }
    let target_m = 3 * d - 3;
    let target_m2 = d * d - 1;
    let scan = proper_base_points(f)?;
    let mut mass = 0i64;
    let mut mass2 = 0i64;
    let mut stack: Vec<(BubblePoint<F>, [Bivar<F>; 3], usize)> = Vec::new();
    for p in scan.points {
        let sys = affine_system(f, &p);
        let m = system_order(&sys);
        if m == 0 || m == usize::MAX {
            continue;
        }
        let bp = BubblePoint::proper(p);
        out.insert(bp.clone(), m);
        mass += m as i64;
        mass2 += (m * m) as i64;
        stack.push((bp, sys, m));
    }
    while let Some((bp, sys, m)) = stack.pop() {
        if mass > target_m || mass2 > target_m2 {
            return Err(Error::NotHomaloidal(format!(
                "multiplicity mass exceeded: sum {mass} (target {target_m}), squares {mass2} (target {target_m2})"
            )));
        }
        let step = blow_up_local(&sys, m)?;
        for (chart, coord, local, order) in step.points {
            let nbp = bp.extended(chart, coord);
            out.insert(nbp.clone(), order);
            mass += order as i64;
            mass2 += (order * order) as i64;
            stack.push((nbp, local, order));
        }
    }
    if mass == target_m && mass2 == target_m2 {
        return Ok(out);
    }
    // sums failed: decide between honestly missing (non-rational) points and
    // a non-birational input
    if !scan.direction_cofactor.is_constant() {
        if let Some(factor) = certify_nonrational(f, &scan.direction_cofactor) {
            return Err(Error::NonRationalBasePoint { factor });
        }
    }
    Err(Error::NotHomaloidal(format!(
        "sums Σm = {mass} (need {target_m}), Σm² = {mass2} (need {target_m2})"
    )))
}

/// Class of the linear system of a realized map: degree of the forward map,
/// base points of the inverse realization.
pub fn class_of<F: RootField>(
    forward: &CremonaMap<F>,
    inverse: &CremonaMap<F>,
) -> Result<LinearSystemClass<F>> {
    let check = CremonaMap::compose(forward, inverse)?;
    if !check.is_identity() {
        return Err(Error::DegenerateConfiguration(
            "inverse realization does not invert the map".into(),
        ));
    }
    Ok(LinearSystemClass {
        degree: forward.degree(),
        mults: base_points(inverse)?,
    })
}

/// Degree prediction for a de Jonquières letter of degree `big_d` crossing a
/// system of degree `d_n`: big_d·d_n − (big_d − 1)·m(anchor) − Σ m(others).
pub fn jonq_degree_formula(big_d: i64, d_n: i64, m_anchor: i64, m_others_sum: i64) -> i64 {
    big_d * d_n - (big_d - 1) * m_anchor - m_others_sum
}

/// Image of the system of degree d with mults m under a quadratic map θ:
/// recomputed polynomially and cross-checked against
/// d' = 2d − m(q0) − m(q1) − m(q2) and m'(image point) = d − m(qj) − m(qk).
pub fn pushforward_quadratic<F: RootField>(
    forward: &CremonaMap<F>,
    inverse: &CremonaMap<F>,
    theta: &CremonaMap<F>,
    theta_inv: &CremonaMap<F>,
) -> Result<LinearSystemClass<F>> {
    if theta.degree() != 2 {
        return Err(Error::DegenerateConfiguration(
            "pushforward_quadratic needs a quadratic map".into(),
        ));
    }
    let new_forward = CremonaMap::compose(theta, forward)?;
    let new_inverse = CremonaMap::compose(inverse, theta_inv)?;
    let class = class_of(&new_forward, &new_inverse)?;

    let theta_bp = base_points(theta)?;
    if theta_bp.len() != 3 || theta_bp.values().any(|&m| m != 1) {
        return Err(Error::DegenerateConfiguration(
            "quadratic map must have three simple base points".into(),
        ));
    }
    let d = forward.degree() as i64;
    let m_at = |q: &BubblePoint<F>| multiplicity_at(inverse, q) as i64;
    let bps: Vec<BubblePoint<F>> = theta_bp.keys().cloned().collect();
    let predicted = 2 * d - m_at(&bps[0]) - m_at(&bps[1]) - m_at(&bps[2]);
    if predicted != class.degree as i64 {
        return Err(Error::ProofGapDetected(format!(
            "pushforward degree mismatch: formula {predicted}, polynomial {}",
            class.degree
        )));
    }
    // image multiplicities at the contracted-line images
    for i in 0..3 {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let line = joining_line(&bps[j], &bps[k])?;
        let image = contracted_image(theta, &line)?;
        let expect = d - m_at(&bps[j]) - m_at(&bps[k]);
        let got = multiplicity_at(&new_inverse, &BubblePoint::proper(image.clone())) as i64;
        if expect != got {
            return Err(Error::ProofGapDetected(format!(
                "pushforward multiplicity mismatch at {image}: formula {expect}, polynomial {got}"
            )));
        }
    }
    Ok(class)
}

/// Line joining two base points of a quadratic map (direction line when one
/// is infinitely near the other).
pub fn joining_line<F: Field>(a: &BubblePoint<F>, b: &BubblePoint<F>) -> Result<Line<F>> {
    if a.is_proper() && b.is_proper() {
        Line::through(&a.root, &b.root)
    } else if b.is_first_neighborhood_of(a) {
        direction_line(b)
    } else if a.is_first_neighborhood_of(b) {
        direction_line(a)
    } else {
        Err(Error::DegenerateConfiguration(format!(
            "no joining line for {a} and {b}"
        )))
    }
}

/// The point to which a quadratic map contracts a line through two of its
/// base points.
pub fn contracted_image<F: Field>(theta: &CremonaMap<F>, line: &Line<F>) -> Result<ProjPoint<F>> {
    let mut image: Option<ProjPoint<F>> = None;
    let mut seen = 0;
    for k in 0..24i64 {
        let t = F::from_i64(k);
        // parameterize the line through two canonical points
        let p0 = line.point_other_than(&ProjPoint::from_i64(1, 1, 1));
        let p1 = line.point_other_than(&p0);
        let c0 = p0.coords();
        let c1 = p1.coords();
        let cand = ProjPoint::new(
            c0[0].add(&t.mul(&c1[0])),
            c0[1].add(&t.mul(&c1[1])),
            c0[2].add(&t.mul(&c1[2])),
        );
        let cand = match cand {
            Ok(c) => c,
            Err(_) => continue,
        };
        match theta.eval_at(&cand) {
            Ok(img) => {
                match &image {
                    None => image = Some(img),
                    Some(prev) => {
                        if prev != &img {
                            return Err(Error::DegenerateConfiguration(
                                "line is not contracted by the quadratic map".into(),
                            ));
                        }
                    }
                }
                seen += 1;
                if seen >= 2 {
                    return Ok(image.unwrap());
                }
            }
            Err(_) => continue,
        }
    }
    Err(Error::DegenerateConfiguration(
        "could not sample the contracted line".into(),
    ))
}

// ---------------------------------------------------------------------------
// First-neighborhood utilities
// ---------------------------------------------------------------------------

/// The bubble point in the first neighborhood of `root` in the direction of
/// `line` (which must pass through `root`).
pub fn first_neighborhood_point<F: Field>(
    root: &ProjPoint<F>,
    line: &Line<F>,
) -> Result<BubblePoint<F>> {
    if !line.contains(root) {
        return Err(Error::DegenerateConfiguration(format!(
            "direction line {line} does not pass through {root}"
        )));
    }
    let m = move_to_origin(root);
    let other = line.point_other_than(root);
    let img = m.apply(&other);
    let c = img.coords();
    // direction vector of the image line through the origin
    let (u, v) = (c[0].clone(), c[1].clone());
    if !u.is_zero() {
        let t0 = v.div(&u).unwrap();
        Ok(BubblePoint {
            root: root.clone(),
            tower: vec![(Chart::First, t0)],
        })
    } else {
        Ok(BubblePoint {
            root: root.clone(),
            tower: vec![(Chart::Second, F::zero())],
        })
    }
}

/// Direction line of a height-1 bubble point.
pub fn direction_line<F: Field>(bp: &BubblePoint<F>) -> Result<Line<F>> {
    if bp.height() != 1 {
        return Err(Error::DegenerateConfiguration(
            "direction line requires a height-1 point".into(),
        ));
    }
    let (chart, coord) = &bp.tower[0];
    let (u, v) = match chart {
        Chart::First => (F::one(), coord.clone()),
        Chart::Second => (coord.clone(), F::one()),
    };
    let minv = move_to_origin(&bp.root).inverse();
    let infinity = minv.apply(&ProjPoint::new(u, v, F::zero())?);
    Line::through(&bp.root, &infinity)
}

/// Transport a proper or height-1 bubble point under a linear map.
pub fn transport_linear<F: Field>(
    m: &ProjLinearMap<F>,
    bp: &BubblePoint<F>,
) -> Result<BubblePoint<F>> {
    match bp.height() {
        0 => Ok(BubblePoint::proper(m.apply(&bp.root))),
        1 => {
            let l = direction_line(bp)?;
            first_neighborhood_point(&m.apply(&bp.root), &m.apply_line(&l))
        }
        _ => Err(Error::DegenerateConfiguration(
            "linear transport only implemented through the first neighborhood".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Non-rationality certificate over extensions
// ---------------------------------------------------------------------------

/// Test whether the system has a common zero along directions annihilating a
/// nonlinear factor of the direction resultant, computing in F[t]/(c) with
/// D5-style splitting when zero divisors appear. Returns the offending
/// factor on success.
fn certify_nonrational<F: RootField>(f: &CremonaMap<F>, cofactor: &Poly<F>) -> Option<String> {
    // squarefree part
    let deriv = cofactor.derivative();
    let sf = if deriv.is_zero() {
        cofactor.monic()
    } else {
        cofactor.div_exact(&cofactor.gcd(&deriv)).monic()
    };
    let mut moduli = vec![sf];
    while let Some(c) = moduli.pop() {
        if c.degree() < 2 {
            continue;
        }
        // lift the three components to Z-polynomials with coefficients in F[t]/(c)
        let comps: Vec<Vec<Poly<F>>> = f
            .components()
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| {
                let mut coeffs: Vec<Poly<F>> = vec![Poly::zero(); z_degree(p) + 1];
                for (m, co) in p.terms() {
                    let t_pow = Poly::monomial(co.clone(), m[1] as usize);
                    coeffs[m[2] as usize] = coeffs[m[2] as usize].add(&t_pow);
                }
                coeffs
                    .into_iter()
                    .map(|q| q.div_rem(&c).unwrap().1)
                    .collect()
            })
            .collect();
        match ext_gcd_all(&comps, &c) {
            ExtOutcome::Split(c1, c2) => {
                moduli.push(c1);
                moduli.push(c2);
            }
            ExtOutcome::Gcd(deg) => {
                if deg >= 1 {
                    return Some(c.display_with("t"));
                }
            }
        }
    }
    None
}

enum ExtOutcome<F: Field> {
    /// modulus split into two factors
    Split(Poly<F>, Poly<F>),
    /// gcd computed; its Z-degree
    Gcd(usize),
}

/// gcd in (F[t]/(c))[Z] of several polynomials, splitting `c` on zero divisors.
fn ext_gcd_all<F: Field>(polys: &[Vec<Poly<F>>], c: &Poly<F>) -> ExtOutcome<F> {
    let norm = |v: &mut Vec<Poly<F>>| {
        while v.last().map_or(false, |p| p.is_zero()) {
            v.pop();
        }
    };
    let mut acc: Option<Vec<Poly<F>>> = None;
    for p in polys {
        let mut p = p.clone();
        norm(&mut p);
        if p.is_empty() {
            continue;
        }
        acc = Some(match acc {
            None => p,
            Some(q) => {
                let (mut a, mut b) = (q, p);
                loop {
                    norm(&mut a);
                    norm(&mut b);
                    if b.is_empty() {
                        break a;
                    }
                    if a.len() < b.len() {
                        std::mem::swap(&mut a, &mut b);
                        continue;
                    }
                    // invert the leading coefficient of b mod c
                    let lc = b.last().unwrap().clone();
                    let g = lc.gcd(c);
                    if !g.is_constant() {
                        // zero divisor: split the (squarefree) modulus
                        let other = c.div_exact(&g);
                        return ExtOutcome::Split(g, other);
                    }
                    let inv = ext_invert(&lc, c);
                    let bm: Vec<Poly<F>> = b
                        .iter()
                        .map(|q| q.mul(&inv).div_rem(c).unwrap().1)
                        .collect();
                    // a := a mod (monic) b
                    while a.len() >= bm.len() && !a.is_empty() {
                        let k = a.len() - bm.len();
                        let top = a.last().unwrap().clone();
                        for (j, q) in bm.iter().enumerate() {
                            let sub = q.mul(&top).div_rem(c).unwrap().1;
                            a[k + j] = a[k + j].sub(&sub).div_rem(c).unwrap().1;
                        }
                        norm(&mut a);
                    }
                    std::mem::swap(&mut a, &mut b);
                }
            }
        });
    }
    match acc {
        None => ExtOutcome::Gcd(0),
        Some(g) => ExtOutcome::Gcd(g.len().saturating_sub(1)),
    }
}

/// Inverse of a unit in F[t]/(c) via the extended Euclidean algorithm.
fn ext_invert<F: Field>(a: &Poly<F>, c: &Poly<F>) -> Poly<F> {
    // extended euclid on (a, c)
    let (mut r0, mut r1) = (a.clone(), c.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).unwrap();
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 = gcd = constant
    let inv = r0.leading().inv().expect("unit in the extension");
    s0.scale(&inv).div_rem(c).unwrap().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadlib::{nu1, nu2, sigma};
    use crate::scalar::Rational;

    type Map = CremonaMap<Rational>;
    type BP = BubblePoint<Rational>;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint<Rational> {
        ProjPoint::from_i64(x, y, z)
    }

    #[test]
    fn sigma_base_points() {
        let bp = base_points(&sigma::<Rational>()).unwrap();
        assert_eq!(bp.len(), 3);
        for p in [pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)] {
            assert_eq!(bp[&BP::proper(p)], 1);
        }
        let class = LinearSystemClass {
            degree: 2,
            mults: bp,
        };
        assert!(class.is_homaloidal());
        assert!(class.proximity_consistent());
    }

    #[test]
    fn sigma_multiplicities() {
        let s = sigma::<Rational>();
        assert_eq!(multiplicity_at(&s, &BP::proper(pt(1, 0, 0))), 1);
        assert_eq!(multiplicity_at(&s, &BP::proper(pt(1, 1, 1))), 0);
        // no exceptional base points above p1
        let data = blow_up(&s, &BP::proper(pt(1, 0, 0))).unwrap();
        assert!(data.exceptional_points.is_empty());
    }

    #[test]
    fn nu1_infinitely_near_point() {
        let n1 = nu1::<Rational>();
        let bp = base_points(&n1).unwrap();
        assert_eq!(bp.len(), 3);
        let p1b = BP::proper(pt(1, 0, 0));
        let p2b = BP::proper(pt(0, 1, 0));
        assert_eq!(bp[&p1b], 1);
        assert_eq!(bp[&p2b], 1);
        let inf: Vec<&BP> = bp.keys().filter(|q| !q.is_proper()).collect();
        assert_eq!(inf.len(), 1);
        let q = inf[0];
        assert!(q.is_first_neighborhood_of(&p1b));
        // the direction is the line Y = 0
        let line = direction_line(q).unwrap();
        assert_eq!(line, Line::new(
            Rational::zero(),
            Rational::from_i64(1),
            Rational::zero()
        ).unwrap());
        assert_eq!(multiplicity_at(&n1, q), 1);
        // nu1's system at p1 has one exceptional base point
        let data = blow_up(&n1, &p1b).unwrap();
        assert_eq!(data.exceptional_points.len(), 1);
    }

    #[test]
    fn nu2_near_point_over_p2() {
        let bp = base_points(&nu2::<Rational>()).unwrap();
        let p2b = BP::proper(pt(0, 1, 0));
        let inf: Vec<&BP> = bp.keys().filter(|q| !q.is_proper()).collect();
        assert_eq!(inf.len(), 1);
        assert!(inf[0].is_first_neighborhood_of(&p2b));
        let line = direction_line(inf[0]).unwrap();
        // direction of line X = 0
        assert!(line.contains(&pt(0, 0, 1)));
        assert!(line.contains(&pt(0, 1, 0)));
    }

    #[test]
    fn non_homaloidal_square_map() {
        let x = HomPoly::<Rational>::var(0);
        let y = HomPoly::var(1);
        let z = HomPoly::var(2);
        let f = Map::new([x.mul(&x), y.mul(&y), z.mul(&z)]).unwrap();
        match base_points(&f) {
            Err(Error::NotHomaloidal(_)) => {}
            other => panic!("expected NotHomaloidal, got {other:?}"),
        }
    }

    #[test]
    fn nonrational_base_point_reported() {
        // components sharing zeros on X^2 = 2 Z^2 style loci: build a triple
        // whose common zeros include (±√2 : 0 : 1)
        let q = crate::serialize::parse_hompoly::<Rational>("X^2 - 2*Z^2").unwrap();
        let f = Map::new([
            q.mul(&HomPoly::var(0)),
            q.mul(&HomPoly::var(1)),
            HomPoly::var(1).mul(&HomPoly::var(1)).mul(&HomPoly::var(1)),
        ])
        .unwrap();
        match base_points(&f) {
            Err(Error::NonRationalBasePoint { factor }) => {
                assert!(factor.contains('2'), "factor output: {factor}");
            }
            other => panic!("expected NonRationalBasePoint, got {other:?}"),
        }
    }

    #[test]
    fn degree_formula_values() {
        assert_eq!(jonq_degree_formula(2, 2, 1, 2), 1);
        assert_eq!(jonq_degree_formula(2, 3, 2, 1), 3);
        assert_eq!(jonq_degree_formula(3, 1, 0, 0), 3);
    }

    #[test]
    fn first_neighborhood_round_trip() {
        let root = pt(1, 0, 0);
        let line = Line::new(Rational::zero(), Rational::from_i64(1), Rational::zero()).unwrap();
        let bp = first_neighborhood_point(&root, &line).unwrap();
        assert_eq!(direction_line(&bp).unwrap(), line);
        // transport under tau lands over p2 with direction tau(line)
        let m = crate::projlinear::tau::<Rational>();
        let moved = transport_linear(&m, &bp).unwrap();
        assert_eq!(moved.root, pt(0, 1, 0));
        assert_eq!(direction_line(&moved).unwrap(), m.apply_line(&line));
    }
}
