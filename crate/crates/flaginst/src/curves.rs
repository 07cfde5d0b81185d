//! Conics and lines on F.
//!
//! The Hilbert scheme of conics is P² × P̌²: the pair (p, L) gives
//! C = {(q, S) : L(q) = 0, S(p) = 0}. When L(p) ≠ 0 the conic is smooth and
//! q ↦ (q, p × q) for q on L parametrizes it, pulling O_F(a,b) back to
//! O_{P¹}(a+b). When L(p) = 0 it breaks into the lines λ_p ∪ λ_L.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{scalar_to_string, Field, Scalar};
use crate::ring::{BiPoly, Bidegree, Poly};

pub fn cross<F: Field>(a: &[F; 3], b: &[F; 3]) -> [F; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

pub fn dot<F: Field>(a: &[F; 3], b: &[F; 3]) -> F {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn is_zero3<F: Field>(a: &[F; 3]) -> bool {
    a.iter().all(|v| v.is_zero())
}

fn unit<F: Field>(i: usize) -> [F; 3] {
    std::array::from_fn(|j| if i == j { F::one() } else { F::zero() })
}

/// Scale so the first nonzero coordinate is 1.
pub fn normalize<F: Field>(a: &[F; 3]) -> [F; 3] {
    match a.iter().find(|v| !v.is_zero()) {
        Some(lead) => {
            let inv = lead.inv();
            std::array::from_fn(|i| a[i].mul(&inv))
        }
        None => a.clone(),
    }
}

/// Coordinate pairs tried, in order, for a basis L × e_i, L × e_j of L^⊥.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// First pair whose cross products with `l` are independent.
pub fn basis_pair<F: Field>(l: &[F; 3]) -> Option<(usize, usize)> {
    PAIRS.into_iter().find(|&(i, j)| !is_zero3(&cross(&cross(l, &unit(i)), &cross(l, &unit(j)))))
}

/// x = s·q1 + t·q2, y = s·y1 + t·y2 as linear forms in (s, t) = variables 0, 1.
fn linear_images<F: Field>(x: [&[F; 3]; 2], y: [&[F; 3]; 2]) -> [Poly<F>; 6] {
    let form = |v: [&[F; 3]; 2], i: usize| Poly::linear(0, &[v[0][i].clone(), v[1][i].clone()]);
    std::array::from_fn(|n| if n < 3 { form(x, n) } else { form(y, n - 3) })
}

/// Images of x0..y2 for the conic (p, L) with basis pair `pair`.
pub fn conic_images<F: Field>(p: &[F; 3], l: &[F; 3], pair: (usize, usize)) -> [Poly<F>; 6] {
    let q1 = cross(l, &unit(pair.0));
    let q2 = cross(l, &unit(pair.1));
    let y1 = cross(p, &q1);
    let y2 = cross(p, &q2);
    linear_images([&q1, &q2], [&y1, &y2])
}

/// Images for λ_p (family 1) or λ_L (family 2) with basis pair `pair`.
pub fn line_images<F: Field>(family: u8, datum: &[F; 3], pair: (usize, usize)) -> [Poly<F>; 6] {
    let r1 = cross(datum, &unit(pair.0));
    let r2 = cross(datum, &unit(pair.1));
    let cst = |v: &[F; 3], i: usize| Poly::constant(v[i].clone());
    let form = |i: usize| Poly::linear(0, &[r1[i].clone(), r2[i].clone()]);
    std::array::from_fn(|n| match (family, n < 3) {
        (1, true) => cst(datum, n),
        (1, false) => form(n - 3),
        (_, true) => form(n),
        (_, false) => cst(datum, n - 3),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConicPoint {
    pub p: [Scalar; 3],
    pub l: [Scalar; 3],
}

impl ConicPoint {
    /// Canonicalized point of P² × P̌².
    pub fn new(p: [Scalar; 3], l: [Scalar; 3]) -> Result<Self> {
        if is_zero3(&p) || is_zero3(&l) {
            return Err(Error::Shape("conic point has a zero coordinate vector".into()));
        }
        Ok(ConicPoint { p: normalize(&p), l: normalize(&l) })
    }

    pub fn from_ints(p: [i64; 3], l: [i64; 3]) -> Result<Self> {
        Self::new(p.map(Scalar::from_i64), l.map(Scalar::from_i64))
    }

    /// L(p); zero exactly for reducible conics.
    pub fn incidence(&self) -> Scalar {
        dot(&self.p, &self.l)
    }

    pub fn is_smooth(&self) -> bool {
        !self.incidence().is_zero()
    }

    pub fn to_fields(&self) -> [String; 6] {
        let s = |v: &Scalar| scalar_to_string(v);
        [s(&self.p[0]), s(&self.p[1]), s(&self.p[2]), s(&self.l[0]), s(&self.l[1]), s(&self.l[2])]
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_fields();
        write!(f, "p=({},{},{}) L=({},{},{})", v[0], v[1], v[2], v[3], v[4], v[5])
    }
}

/// Parse "a,b,c" into three rationals.
pub fn parse_vec3(s: &str) -> Result<[Scalar; 3]> {
    let parts: Vec<_> = s.split(',').map(|t| t.trim()).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected three comma-separated rationals, got {s:?}")));
    }
    let mut out: [Scalar; 3] = std::array::from_fn(|_| <Scalar as Field>::zero());
    for (o, t) in out.iter_mut().zip(&parts) {
        *o = crate::field::parse_scalar(t).ok_or_else(|| Error::Parse(format!("bad rational {t:?}")))?;
    }
    Ok(out)
}

/// A line of F: λ_p = {p} × p^⊥ (family 1) or λ_L = L^⊥ × {L} (family 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineParam {
    pub family: u8,
    pub datum: [Scalar; 3],
    pub pair: (usize, usize),
    pub images: [BiPoly; 6],
}

impl LineParam {
    pub fn pullback_bidegree(&self) -> Bidegree {
        if self.family == 1 {
            Bidegree::new(0, 1)
        } else {
            Bidegree::new(1, 0)
        }
    }
}

pub fn line_param(family: u8, datum: [Scalar; 3]) -> Result<LineParam> {
    if family != 1 && family != 2 {
        return Err(Error::Parse(format!("line family must be 1 or 2, got {family}")));
    }
    let datum = normalize(&datum);
    let pair = basis_pair(&datum).ok_or_else(|| Error::DegenerateBasis(format!("{datum:?}")))?;
    let images = line_images(family, &datum, pair);
    Ok(LineParam { family, datum, pair, images })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicParam {
    pub point: ConicPoint,
    pub pair: (usize, usize),
    pub q1: [Scalar; 3],
    pub q2: [Scalar; 3],
    pub images: [BiPoly; 6],
}

impl ConicParam {
    pub fn pullback_bidegree(&self) -> Bidegree {
        Bidegree::new(1, 1)
    }

    /// L(q) ≡ 0, S(p) ≡ 0 and q·S ≡ 0 as forms in (s, t).
    pub fn check_invariants(&self) -> bool {
        let x = &self.images[0..3];
        let y = &self.images[3..6];
        let lq = (0..3).fold(BiPoly::zero(), |acc, i| acc.add(&x[i].scale(&self.point.l[i])));
        let sp = (0..3).fold(BiPoly::zero(), |acc, i| acc.add(&y[i].scale(&self.point.p[i])));
        let flag = (0..3).fold(BiPoly::zero(), |acc, i| acc.add(&x[i].mul_raw(&y[i])));
        lq.is_zero() && sp.is_zero() && flag.is_zero() && !is_zero3(&cross(&self.q1, &self.q2))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicClass {
    Smooth,
    /// λ_p ∪ λ_L meeting at (p, L).
    Reducible(Box<(LineParam, LineParam)>),
}

pub fn classify_conic(c: &ConicPoint) -> Result<ConicClass> {
    if c.is_smooth() {
        return Ok(ConicClass::Smooth);
    }
    Ok(ConicClass::Reducible(Box::new((line_param(1, c.p.clone())?, line_param(2, c.l.clone())?))))
}

pub fn conic_param(c: &ConicPoint) -> Result<ConicParam> {
    if !c.is_smooth() {
        return Err(Error::ReducibleInput);
    }
    let pair = basis_pair(&c.l).ok_or_else(|| Error::DegenerateBasis(c.to_string()))?;
    let q1 = cross(&c.l, &unit(pair.0));
    let q2 = cross(&c.l, &unit(pair.1));
    let images = conic_images(&c.p, &c.l, pair);
    Ok(ConicParam { point: c.clone(), pair, q1, q2, images })
}

/// The unique conic through two points (x1, y1), (x2, y2) of F in general
/// position: p = y1 ∩ y2 and L = line(x1, x2).
pub fn conic_through(a: (&[Scalar; 3], &[Scalar; 3]), b: (&[Scalar; 3], &[Scalar; 3])) -> Result<ConicPoint> {
    ConicPoint::new(cross(a.1, b.1), cross(a.0, b.0))
}

/// Does (x, y) ∈ F lie on the conic (p, L)?
pub fn on_conic(c: &ConicPoint, x: &[Scalar; 3], y: &[Scalar; 3]) -> bool {
    dot(&c.l, x).is_zero() && dot(&c.p, y).is_zero() && dot(x, y).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// p moves: p + u·v.
    P,
    /// L moves: L + u·v.
    L,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "P" => Ok(Side::P),
            "L" | "l" => Ok(Side::L),
            _ => Err(Error::Parse(format!("pencil direction must be p or L, got {s:?}"))),
        }
    }
}

/// A line in one factor of P² × P̌² through a base conic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSpec {
    pub base: ConicPoint,
    pub side: Side,
    pub v: [Scalar; 3],
    /// Basis pair of the L^⊥ parametrization, fixed along the pencil.
    pub pair: (usize, usize),
    /// (c0, c1) of the linear form L(u)·p(u) = c0 + c1·u.
    pub incidence: [Scalar; 2],
    /// (c0, c1) of the coordinate of L(u) whose vanishing degenerates the basis.
    pub basis_form: [Scalar; 2],
    pub reducible_at: Vec<Scalar>,
    pub degenerate_at: Vec<Scalar>,
}

fn linear_root(c: &[Scalar; 2]) -> Vec<Scalar> {
    if c[1].is_zero() {
        vec![]
    } else {
        vec![c[0].neg().div(&c[1])]
    }
}

pub fn pencil(base: &ConicPoint, side: Side, v: [Scalar; 3]) -> Result<PencilSpec> {
    let moving = match side {
        Side::P => &base.p,
        Side::L => &base.l,
    };
    if is_zero3(&cross(moving, &v)) {
        return Err(Error::ConstantPencil);
    }
    let pair = basis_pair(&base.l).ok_or_else(|| Error::DegenerateBasis(base.to_string()))?;
    let k = 3 - pair.0 - pair.1;
    let (incidence, basis_form) = match side {
        Side::P => ([base.incidence(), dot(&v, &base.l)], [base.l[k].clone(), <Scalar as Field>::zero()]),
        Side::L => ([base.incidence(), dot(&base.p, &v)], [base.l[k].clone(), v[k].clone()]),
    };
    let reducible_at = linear_root(&incidence);
    let degenerate_at = linear_root(&basis_form);
    Ok(PencilSpec { base: base.clone(), side, v, pair, incidence, basis_form, reducible_at, degenerate_at })
}

impl PencilSpec {
    /// (p(u), L(u)) over any field containing the data.
    pub fn member_over<F: Field>(&self, u: &F) -> Option<([F; 3], [F; 3])> {
        let conv = |a: &[Scalar; 3]| -> Option<[F; 3]> {
            Some([F::from_scalar(&a[0])?, F::from_scalar(&a[1])?, F::from_scalar(&a[2])?])
        };
        let (p, l, v) = (conv(&self.base.p)?, conv(&self.base.l)?, conv(&self.v)?);
        let moved: [F; 3] = match self.side {
            Side::P => std::array::from_fn(|i| p[i].add(&u.mul(&v[i]))),
            Side::L => std::array::from_fn(|i| l[i].add(&u.mul(&v[i]))),
        };
        Some(match self.side {
            Side::P => (moved, l),
            Side::L => (p, moved),
        })
    }

    pub fn member(&self, u: &Scalar) -> Result<ConicPoint> {
        let (p, l) = self.member_over(u).expect("rational data");
        ConicPoint::new(p, l)
    }

    /// Conic images at u with the pencil's fixed basis pair.
    pub fn images_over<F: Field>(&self, u: &F) -> Option<[Poly<F>; 6]> {
        let (p, l) = self.member_over(u)?;
        Some(conic_images(&p, &l, self.pair))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn v(a: [i64; 3]) -> [Scalar; 3] {
        a.map(q)
    }

    #[test]
    fn incidence_classification() {
        let c = ConicPoint::from_ints([1, 0, 0], [0, 0, 1]).unwrap();
        assert!(matches!(classify_conic(&c).unwrap(), ConicClass::Reducible(_)));
        let c = ConicPoint::from_ints([1, 0, 0], [1, 0, 0]).unwrap();
        assert_eq!(classify_conic(&c).unwrap(), ConicClass::Smooth);
    }

    #[test]
    fn parametrization_invariants() {
        let c = ConicPoint::from_ints([1, 0, 0], [1, 1, 1]).unwrap();
        let cp = conic_param(&c).unwrap();
        assert_eq!(cp.q1, cross(&c.l, &v([1, 0, 0])));
        assert_eq!(cp.q2, cross(&c.l, &v([0, 1, 0])));
        assert!(cp.check_invariants());
        for img in cp.images.iter().filter(|i| !i.is_zero()) {
            assert_eq!(img.bidegree(), Some(Bidegree::new(1, 0)));
        }
    }

    #[test]
    fn lines_land_in_f() {
        for fam in [1, 2] {
            let lp = line_param(fam, v([2, -1, 3])).unwrap();
            let flag = (0..3).fold(BiPoly::zero(), |acc, i| acc.add(&lp.images[i].mul_raw(&lp.images[3 + i])));
            assert!(flag.is_zero());
        }
    }

    #[test]
    fn pencils() {
        let c = ConicPoint::from_ints([1, 2, 3], [1, -1, 2]).unwrap();
        assert!(matches!(pencil(&c, Side::P, v([2, 4, 6])), Err(Error::ConstantPencil)));
        let pl = pencil(&c, Side::L, v([0, 1, 1])).unwrap();
        assert_eq!(pl.reducible_at.len(), 1);
        let u = pl.reducible_at[0].clone();
        assert!(!pl.member(&u).unwrap().is_smooth());
    }

    #[test]
    fn conic_through_two_points() {
        let x1 = v([1, 0, 0]);
        let y1 = v([0, 1, 2]);
        let x2 = v([0, 1, 1]);
        let y2 = v([3, 1, -1]);
        let c = conic_through((&x1, &y1), (&x2, &y2)).unwrap();
        assert!(on_conic(&c, &x1, &y1) && on_conic(&c, &x2, &y2));
    }
}
