//! Points of ℙ², lines, PGL(3) acting on the plane, and 2×2 Möbius matrices.
//!
//! Projective objects are kept in a canonical scaling (first nonzero
//! coordinate or entry equal to 1) so that equality is literal comparison.

use crate::error::{Error, Result};
use crate::scalar::Field;
use std::fmt;

/// Point of ℙ², canonicalized so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<F: Field> {
    coords: [F; 3],
}

impl<F: Field> ProjPoint<F> {
    pub fn new(x: F, y: F, z: F) -> Result<Self> {
        let coords = [x, y, z];
        let pivot = coords.iter().position(|c| !c.is_zero()).ok_or_else(|| {
            Error::DegenerateConfiguration("projective point with all coordinates zero".into())
        })?;
        let inv = coords[pivot].inv().unwrap();
        Ok(ProjPoint {
            coords: [
                coords[0].mul(&inv),
                coords[1].mul(&inv),
                coords[2].mul(&inv),
            ],
        })
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        ProjPoint::new(F::from_i64(x), F::from_i64(y), F::from_i64(z)).unwrap()
    }

    pub fn coords(&self) -> &[F; 3] {
        &self.coords
    }

    /// Index of the first nonzero (canonical = 1) coordinate.
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }
}

/// The pencil base point p1 = (1:0:0).
pub fn p1<F: Field>() -> ProjPoint<F> {
    ProjPoint::from_i64(1, 0, 0)
}

pub fn p2<F: Field>() -> ProjPoint<F> {
    ProjPoint::from_i64(0, 1, 0)
}

pub fn p3<F: Field>() -> ProjPoint<F> {
    ProjPoint::from_i64(0, 0, 1)
}

impl<F: Field> fmt::Display for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{})",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

impl<F: Field> fmt::Debug for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Line of ℙ² as a covector `aX + bY + cZ = 0`, canonicalized like a point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line<F: Field> {
    coeffs: [F; 3],
}

impl<F: Field> Line<F> {
    pub fn new(a: F, b: F, c: F) -> Result<Self> {
        let p = ProjPoint::new(a, b, c).map_err(|_| {
            Error::DegenerateConfiguration("line with all coefficients zero".into())
        })?;
        Ok(Line {
            coeffs: p.coords.clone(),
        })
    }

    pub fn coeffs(&self) -> &[F; 3] {
        &self.coeffs
    }

    pub fn through(p: &ProjPoint<F>, q: &ProjPoint<F>) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateConfiguration(
                "line through two equal points".into(),
            ));
        }
        let a = &p.coords;
        let b = &q.coords;
        Line::new(
            a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
            a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
            a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
        )
    }

    pub fn contains(&self, p: &ProjPoint<F>) -> bool {
        let s = self.coeffs[0]
            .mul(&p.coords[0])
            .add(&self.coeffs[1].mul(&p.coords[1]))
            .add(&self.coeffs[2].mul(&p.coords[2]));
        s.is_zero()
    }

    /// A canonical point on the line distinct from `avoid`.
    pub fn point_other_than(&self, avoid: &ProjPoint<F>) -> ProjPoint<F> {
        // two independent solutions of a single linear equation
        let [a, b, c] = self.coeffs.clone();
        let candidates = if !a.is_zero() {
            [
                ProjPoint::new(b.neg(), a.clone(), F::zero()),
                ProjPoint::new(c.neg(), F::zero(), a.clone()),
            ]
        } else if !b.is_zero() {
            [
                ProjPoint::new(F::one(), F::zero(), F::zero()),
                ProjPoint::new(F::zero(), c.neg(), b.clone()),
            ]
        } else {
            [
                ProjPoint::new(F::one(), F::zero(), F::zero()),
                ProjPoint::new(F::zero(), F::one(), F::zero()),
            ]
        };
        for cand in candidates.into_iter().flatten() {
            if &cand != avoid {
                return cand;
            }
        }
        unreachable!("a projective line has more than two points")
    }
}

impl<F: Field> fmt::Display for Line<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}*X + {}*Y + {}*Z = 0}}",
            self.coeffs[0], self.coeffs[1], self.coeffs[2]
        )
    }
}

impl<F: Field> fmt::Debug for Line<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub fn collinear<F: Field>(p: &ProjPoint<F>, q: &ProjPoint<F>, r: &ProjPoint<F>) -> bool {
    det3(&[p.coords.clone(), q.coords.clone(), r.coords.clone()]).is_zero()
}

fn det3<F: Field>(rows: &[[F; 3]; 3]) -> F {
    let m = rows;
    let t1 = m[0][0].mul(&m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1])));
    let t2 = m[0][1].mul(&m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0])));
    let t3 = m[0][2].mul(&m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0])));
    t1.sub(&t2).add(&t3)
}

/// Element of PGL(3) acting on points as column vectors, canonicalized so the
/// first nonzero entry in row-major order is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjLinearMap<F: Field> {
    rows: [[F; 3]; 3],
}

impl<F: Field> ProjLinearMap<F> {
    pub fn from_rows(rows: [[F; 3]; 3]) -> Result<Self> {
        if det3(&rows).is_zero() {
            return Err(Error::DegenerateConfiguration(
                "singular matrix for a projective linear map".into(),
            ));
        }
        Ok(Self::canonical(rows))
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Result<Self> {
        Self::from_rows(rows.map(|r| r.map(F::from_i64)))
    }

    fn canonical(rows: [[F; 3]; 3]) -> Self {
        let pivot = rows
            .iter()
            .flatten()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("nonsingular matrix is nonzero");
        let inv = pivot.inv().unwrap();
        ProjLinearMap {
            rows: rows.map(|r| r.map(|c| c.mul(&inv))),
        }
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    pub fn rows(&self) -> &[[F; 3]; 3] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity()
    }

    pub fn det(&self) -> F {
        det3(&self.rows)
    }

    /// Matrix product: `self.compose(&g)` applies `g` first.
    pub fn compose(&self, g: &Self) -> Self {
        let mut rows = [[F::zero(), F::zero(), F::zero()],
            [F::zero(), F::zero(), F::zero()],
            [F::zero(), F::zero(), F::zero()]];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = F::zero();
                for k in 0..3 {
                    acc = acc.add(&self.rows[i][k].mul(&g.rows[k][j]));
                }
                rows[i][j] = acc;
            }
        }
        Self::canonical(rows)
    }

    /// Inverse via the adjugate; the determinant drops out projectively.
    pub fn inverse(&self) -> Self {
        let m = &self.rows;
        // adj[i][j] = (-1)^{i+j} minor(j,i)
        let minor = |i: usize, j: usize| {
            let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            m[r[0]][c[0]]
                .mul(&m[r[1]][c[1]])
                .sub(&m[r[0]][c[1]].mul(&m[r[1]][c[0]]))
        };
        let mut adj = [[F::zero(), F::zero(), F::zero()],
            [F::zero(), F::zero(), F::zero()],
            [F::zero(), F::zero(), F::zero()]];
        for i in 0..3 {
            for j in 0..3 {
                let mm = minor(j, i);
                adj[i][j] = if (i + j) % 2 == 0 { mm } else { mm.neg() };
            }
        }
        Self::canonical(adj)
    }

    pub fn apply(&self, p: &ProjPoint<F>) -> ProjPoint<F> {
        let c = &p.coords().clone();
        let row = |i: usize| {
            self.rows[i][0]
                .mul(&c[0])
                .add(&self.rows[i][1].mul(&c[1]))
                .add(&self.rows[i][2].mul(&c[2]))
        };
        ProjPoint::new(row(0), row(1), row(2)).expect("invertible map sends points to points")
    }

    /// Image of a line: the covector transforms by the inverse matrix.
    pub fn apply_line(&self, l: &Line<F>) -> Line<F> {
        let inv = self.inverse();
        let c = l.coeffs();
        let col = |j: usize| {
            c[0].mul(&inv.rows[0][j])
                .add(&c[1].mul(&inv.rows[1][j]))
                .add(&c[2].mul(&inv.rows[2][j]))
        };
        Line::new(col(0), col(1), col(2)).expect("invertible map sends lines to lines")
    }
}

impl<F: Field> fmt::Display for ProjLinearMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "[{},{},{}; {},{},{}; {},{},{}]",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

impl<F: Field> fmt::Debug for ProjLinearMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub fn apply_linear<F: Field>(m: &ProjLinearMap<F>, p: &ProjPoint<F>) -> ProjPoint<F> {
    m.apply(p)
}

/// The unique PGL(3) element sending one 4-point frame to another.
///
/// Both quadruples must be frames: no three of the four points collinear.
pub fn linear_map_through<F: Field>(
    src: &[ProjPoint<F>; 4],
    dst: &[ProjPoint<F>; 4],
) -> Result<ProjLinearMap<F>> {
    Ok(frame_to(dst)?.compose(&frame_to(src)?.inverse()))
}

/// Map sending the standard frame (e1, e2, e3, e1+e2+e3) to the given frame.
fn frame_to<F: Field>(pts: &[ProjPoint<F>; 4]) -> Result<ProjLinearMap<F>> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                if collinear(&pts[i], &pts[j], &pts[k]) {
                    return Err(Error::DegenerateConfiguration(format!(
                        "collinear triple in frame: {}, {}, {}",
                        pts[i], pts[j], pts[k]
                    )));
                }
            }
        }
    }
    // solve [q0 q1 q2] * lambda = q3 (Cramer), then columns are lambda_i * qi
    let q: Vec<&[F; 3]> = pts.iter().map(|p| p.coords()).collect();
    let d = det3(&[q[0].clone(), q[1].clone(), q[2].clone()]);
    let lam = |i: usize| {
        let mut rows = [q[0].clone(), q[1].clone(), q[2].clone()];
        rows[i] = q[3].clone();
        det3(&rows).div(&d).unwrap()
    };
    let (l0, l1, l2) = (lam(0), lam(1), lam(2));
    // det3 above is of ROWS of q_i; the matrix we build has columns l_i q_i.
    let rows = [
        [
            l0.mul(&q[0][0]),
            l1.mul(&q[1][0]),
            l2.mul(&q[2][0]),
        ],
        [
            l0.mul(&q[0][1]),
            l1.mul(&q[1][1]),
            l2.mul(&q[2][1]),
        ],
        [
            l0.mul(&q[0][2]),
            l1.mul(&q[1][2]),
            l2.mul(&q[2][2]),
        ],
    ];
    ProjLinearMap::from_rows(rows)
}

/// Deterministic completion of a partial configuration to a frame: scan the
/// rational normal curve (1 : t : t^2), which meets any line at most twice.
pub fn complete_frame<F: Field>(fixed: &[ProjPoint<F>]) -> [ProjPoint<F>; 4] {
    let mut pts: Vec<ProjPoint<F>> = fixed.to_vec();
    let mut t = 0i64;
    while pts.len() < 4 {
        let ti = F::from_i64(t);
        let cand = ProjPoint::new(F::one(), ti.clone(), ti.clone().mul(&ti)).unwrap();
        t += 1;
        if pts.contains(&cand) {
            continue;
        }
        let ok = pts.len() < 2
            || {
                let mut good = true;
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        if collinear(&pts[i], &pts[j], &cand) {
                            good = false;
                        }
                    }
                }
                good
            };
        if ok {
            pts.push(cand);
        }
        assert!(t < 64, "frame completion exhausted the curve scan");
    }
    [pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()]
}

/// τ = (X:Y:Z) -> (Y:X:Z), exchanging p1 and p2.
pub fn tau<F: Field>() -> ProjLinearMap<F> {
    ProjLinearMap::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap()
}

/// An involution of PGL(3) exchanging two distinct points: the conjugate of τ
/// by a deterministic frame map sending (p, q) to (p1, p2).
pub fn swap_map<F: Field>(p: &ProjPoint<F>, q: &ProjPoint<F>) -> Result<ProjLinearMap<F>> {
    if p == q {
        return Err(Error::DegenerateConfiguration(
            "swap_map needs two distinct points".into(),
        ));
    }
    let src = complete_frame(&[p.clone(), q.clone()]);
    let dst = [
        p1::<F>(),
        p2::<F>(),
        p3::<F>(),
        ProjPoint::from_i64(1, 1, 1),
    ];
    let w = linear_map_through(&src, &dst)?;
    Ok(w.inverse().compose(&tau()).compose(&w))
}

/// Membership in A ∩ J: linear maps fixing p1 = (1:0:0).
pub fn in_a_cap_j<F: Field>(m: &ProjLinearMap<F>) -> bool {
    m.apply(&p1::<F>()) == p1::<F>()
}

/// 2×2 invertible matrix up to scale over any field (k or k(x)).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Moebius<K: Field> {
    entries: [[K; 2]; 2],
}

impl<K: Field> Moebius<K> {
    pub fn new(entries: [[K; 2]; 2]) -> Result<Self> {
        let det = entries[0][0]
            .mul(&entries[1][1])
            .sub(&entries[0][1].mul(&entries[1][0]));
        if det.is_zero() {
            return Err(Error::DegenerateConfiguration(
                "singular 2x2 matrix".into(),
            ));
        }
        Ok(Self::canonical(entries))
    }

    fn canonical(entries: [[K; 2]; 2]) -> Self {
        let pivot = entries
            .iter()
            .flatten()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap();
        let inv = pivot.inv().unwrap();
        Moebius {
            entries: entries.map(|r| r.map(|c| c.mul(&inv))),
        }
    }

    pub fn identity() -> Self {
        Moebius {
            entries: [[K::one(), K::zero()], [K::zero(), K::one()]],
        }
    }

    pub fn entries(&self) -> &[[K; 2]; 2] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity()
    }

    pub fn compose(&self, g: &Self) -> Self {
        let a = &self.entries;
        let b = &g.entries;
        let mut out = [[K::zero(), K::zero()], [K::zero(), K::zero()]];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
            }
        }
        Self::canonical(out)
    }

    pub fn inverse(&self) -> Self {
        let e = &self.entries;
        Self::canonical([
            [e[1][1].clone(), e[0][1].neg()],
            [e[1][0].neg(), e[0][0].clone()],
        ])
    }

    /// Apply as a fractional linear map to a field value; `None` at the pole.
    pub fn apply(&self, v: &K) -> Option<K> {
        let e = &self.entries;
        let den = e[1][0].mul(v).add(&e[1][1]);
        if den.is_zero() {
            return None;
        }
        Some(e[0][0].mul(v).add(&e[0][1]).div(&den).unwrap())
    }
}

impl<K: Field> fmt::Display for Moebius<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

impl<K: Field> fmt::Debug for Moebius<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = ProjPoint<Rational>;
    type M = ProjLinearMap<Rational>;

    #[test]
    fn tau_swaps_p1_p2() {
        let t = tau::<Rational>();
        assert_eq!(t.apply(&p1()), p2());
        assert_eq!(t.apply(&p2()), p1());
        assert!(t.compose(&t).is_identity());
        // identity fixes (2:3:5)
        let p = P::from_i64(2, 3, 5);
        assert_eq!(M::identity().apply(&p), p);
    }

    #[test]
    fn rho1_moves_origin_point() {
        // rho1 = (X : Z-Y : Z) applied to (0:0:1) -> (0:1:1)
        let rho1 = M::from_i64([[1, 0, 0], [0, -1, 1], [0, 0, 1]]).unwrap();
        assert_eq!(rho1.apply(&P::from_i64(0, 0, 1)), P::from_i64(0, 1, 1));
        assert!(in_a_cap_j(&rho1));
    }

    #[test]
    fn collinearity_examples() {
        assert!(!collinear(&p1::<Rational>(), &p2(), &p3()));
        assert!(collinear(
            &p1::<Rational>(),
            &p2(),
            &P::from_i64(1, 1, 0)
        ));
        // equal projective points are collinear with anything
        assert!(collinear(
            &P::from_i64(1, 2, 1),
            &P::from_i64(2, 4, 2),
            &P::from_i64(0, 0, 1)
        ));
    }

    #[test]
    fn map_through_frames() {
        let std = [p1::<Rational>(), p2(), p3(), P::from_i64(1, 1, 1)];
        let id = linear_map_through(&std, &std).unwrap();
        assert!(id.is_identity());
        // swap p1, p2, fix p3 and (1:1:1) -> tau
        let swapped = [p2::<Rational>(), p1(), p3(), P::from_i64(1, 1, 1)];
        let m = linear_map_through(&std, &swapped).unwrap();
        assert_eq!(m, tau());
        // collinear source triple
        let bad = [p1::<Rational>(), p2(), P::from_i64(1, 1, 0), P::from_i64(1, 1, 1)];
        assert!(linear_map_through(&bad, &std).is_err());
    }

    #[test]
    fn swap_map_involution() {
        let p = P::from_i64(1, 0, 0);
        let q = P::from_i64(1, 1, 1);
        let s = swap_map(&p, &q).unwrap();
        assert_eq!(s.apply(&p), q);
        assert_eq!(s.apply(&q), p);
        assert!(s.compose(&s).is_identity());
        assert_eq!(swap_map(&p1(), &p2()).unwrap(), tau::<Rational>());
    }

    #[test]
    fn intersection_membership() {
        assert!(in_a_cap_j(&M::identity()));
        assert!(!in_a_cap_j(&tau::<Rational>()));
    }

    #[test]
    fn inverse_and_action_compatibility() {
        let m = M::from_i64([[1, 2, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        assert!(m.compose(&m.inverse()).is_identity());
        let p = P::from_i64(2, -1, 3);
        let l = Line::through(&p, &P::from_i64(1, 1, 1)).unwrap();
        assert!(m.apply_line(&l).contains(&m.apply(&p)));
    }
}
