//! Restriction of monads to conics and lines.
//!
//! Along a parametrization P¹ → F of pullback bidegree (d1, d2), O_F(a,b)
//! becomes O(a·d1 + b·d2) and the monad becomes a complex on P¹ whose
//! hypercohomology is computed by the same Čech engine. For reducible conics
//! E|C is computed instead as E ⊗ O_C with O_C resolved by the Koszul complex
//! of L·x and p·y, which also serves as an independent check on smooth conics.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cohom::{hyper_degrees, hyper_dims, Ambient, AmbientComplex, LineComplex, PolyMatrix};
use crate::curves::{conic_param, ConicParam, ConicPoint, LineParam};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::monad::LineBundleMonad;
use crate::ring::{Bidegree, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curve {
    Conic(ConicParam),
    Line(LineParam),
}

impl Curve {
    pub fn images(&self) -> &[Poly<Scalar>; 6] {
        match self {
            Curve::Conic(c) => &c.images,
            Curve::Line(l) => &l.images,
        }
    }

    pub fn pullback_bidegree(&self) -> Bidegree {
        match self {
            Curve::Conic(c) => c.pullback_bidegree(),
            Curve::Line(l) => l.pullback_bidegree(),
        }
    }
}

fn p1_degree(t: Bidegree, d: Bidegree) -> i32 {
    t.a * d.a + t.b * d.b
}

/// Pull a complex on F back along `images` of pullback bidegree `d`.
pub fn pullback_complex<F: Field>(c: &LineComplex<F>, images: &[Poly<F>; 6], d: Bidegree) -> Result<AmbientComplex<F>> {
    let terms = c.terms.iter().map(|ts| ts.iter().map(|t| [p1_degree(*t, d), 0]).collect()).collect();
    let maps: Vec<PolyMatrix<F>> = c.maps.iter().map(|m| m.map(|p| p.substitute(images))).collect();
    for n in 0..maps.len().saturating_sub(1) {
        let comp = maps[n + 1].mul_raw(&maps[n]);
        if let Some((row, col, entry)) = comp.first_nonzero() {
            return Err(Error::CompositionNonzero { term: n, row, col, entry: format!("{entry:?}") });
        }
    }
    Ok(AmbientComplex { ambient: Ambient::P1, start: c.start, terms, maps })
}

pub fn pullback_to_p1(m: &LineBundleMonad, curve: &Curve, twist: Bidegree) -> Result<AmbientComplex<Scalar>> {
    pullback_complex(&m.complex().twist(twist), curve.images(), curve.pullback_bidegree())
}

/// Degree on P¹ of the pulled back determinant of the monad cohomology.
fn pullback_c1(m: &LineBundleMonad, d: Bidegree) -> i64 {
    let s = |ts: &[Bidegree]| ts.iter().map(|t| p1_degree(*t, d) as i64).sum::<i64>();
    s(&m.middle) - s(&m.left) - s(&m.right)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    /// a1 ≥ a2 ≥ …
    pub degrees: Vec<i64>,
    /// Probed (m, h⁰(E|(m))).
    pub h0: Vec<(i64, usize)>,
}

impl SplittingType {
    pub fn is_trivial(&self) -> bool {
        self.degrees.iter().all(|a| *a == 0)
    }

    pub fn h0_predicted(&self, m: i64) -> usize {
        self.degrees.iter().map(|a| (a + m + 1).max(0) as usize).sum()
    }
}

/// (h⁰, h¹) of a complex on P¹ expected to be a bundle of the given rank and degree.
fn p1_h0_h1(cx: &AmbientComplex<Scalar>, rank: i64, deg: i64, m: i64) -> Result<(usize, usize)> {
    let dims = hyper_dims(cx)?;
    if dims.keys().any(|d| *d != 0 && *d != 1) {
        return Err(Error::RankUnexpected { expected: rank as usize, detail: format!("twist {m}: cohomology {dims:?}") });
    }
    let h0 = dims.get(&0).copied().unwrap_or(0) as i64;
    let h1 = dims.get(&1).copied().unwrap_or(0) as i64;
    if h0 - h1 != rank * (m + 1) + deg {
        return Err(Error::RankUnexpected {
            expected: rank as usize,
            detail: format!("twist {m}: h0 - h1 = {} but a rank {rank} bundle of degree {deg} gives {}", h0 - h1, rank * (m + 1) + deg),
        });
    }
    Ok((h0 as usize, h1 as usize))
}

fn twist_p1(cx: &AmbientComplex<Scalar>, m: i64) -> AmbientComplex<Scalar> {
    let mut c = cx.clone();
    for ts in &mut c.terms {
        for t in ts {
            t[0] += m as i32;
        }
    }
    c
}

/// Splitting type of E restricted to a rational curve, from h⁰(E|(m)).
pub fn splitting_type(m: &LineBundleMonad, curve: &Curve) -> Result<SplittingType> {
    let rank = m.rank();
    let d = curve.pullback_bidegree();
    let deg = pullback_c1(m, d);
    let base = pullback_to_p1(m, curve, Bidegree::ZERO)?;
    let mut h0: BTreeMap<i64, usize> = BTreeMap::new();
    let mut w = m.charge as i64 + 2;
    loop {
        for mm in -w - 1..=w {
            if let std::collections::btree_map::Entry::Vacant(e) = h0.entry(mm) {
                e.insert(p1_h0_h1(&twist_p1(&base, mm), rank, deg, mm)?.0);
            }
        }
        // Δ(m) = #{i : a_i ≥ −m}
        let delta = |mm: i64| h0[&mm] as i64 - h0[&(mm - 1)] as i64;
        if delta(-w) == 0 && delta(w) == rank {
            let mut degrees = Vec::new();
            for mm in -w..=w {
                let jumps = delta(mm) - if mm > -w { delta(mm - 1) } else { 0 };
                if jumps < 0 {
                    return Err(Error::RankUnexpected { expected: rank as usize, detail: "h0 not convex".into() });
                }
                for _ in 0..jumps {
                    degrees.push(-mm);
                }
            }
            degrees.sort_unstable_by(|a, b| b.cmp(a));
            let st = SplittingType { degrees, h0: h0.iter().map(|(a, b)| (*a, *b)).collect() };
            if st.degrees.iter().sum::<i64>() != deg || h0.iter().any(|(mm, v)| st.h0_predicted(*mm) != *v) {
                return Err(Error::RankUnexpected { expected: rank as usize, detail: format!("inconsistent h0 {:?}", st.h0) });
            }
            return Ok(st);
        }
        if w > 8 * (m.charge as i64 + 2) {
            return Err(Error::RankUnexpected { expected: rank as usize, detail: format!("window {w} exhausted") });
        }
        w *= 2;
    }
}

/// [O(−1,−1) → O(−1,0) ⊕ O(0,−1) → O] resolving O_C for C = {L·x = 0, p·y = 0}.
pub fn koszul_conic<F: Field>(p: &[F; 3], l: &[F; 3]) -> LineComplex<F> {
    let lx = Poly::linear(0, l);
    let py = Poly::linear(3, p);
    LineComplex {
        start: -2,
        terms: vec![vec![Bidegree::new(-1, -1)], vec![Bidegree::new(-1, 0), Bidegree::new(0, -1)], vec![Bidegree::ZERO]],
        maps: vec![PolyMatrix::from_rows(vec![vec![py.clone()], vec![lx.neg()]]), PolyMatrix::from_rows(vec![vec![lx, py]])],
    }
}

/// (h¹(E|C(−1,0)), h¹(E|C(0,−1))) through the Koszul resolution of O_C.
pub fn koszul_order<F: Field>(e: &LineComplex<F>, p: &[F; 3], l: &[F; 3]) -> Result<(usize, usize)> {
    let k = koszul_conic(p, l);
    let mut out = [0usize; 2];
    for (o, t) in out.iter_mut().zip([Bidegree::new(-1, 0), Bidegree::new(0, -1)]) {
        let dims = hyper_degrees(&e.twist(t).tensor(&k))?;
        if dims.keys().any(|d| *d != 0 && *d != 1) {
            return Err(Error::RankUnexpected { expected: 2, detail: format!("E|C{t} has cohomology {dims:?}") });
        }
        *o = dims.get(&1).copied().unwrap_or(0);
    }
    Ok((out[0], out[1]))
}

/// Jumping order (a, b) of a conic: P¹ model on smooth conics, Koszul model on reducible ones.
pub fn jumping_order(m: &LineBundleMonad, c: &ConicPoint) -> Result<(usize, usize)> {
    if !c.is_smooth() {
        return koszul_order(&m.complex(), &c.p, &c.l);
    }
    let curve = Curve::Conic(conic_param(c)?);
    let cx = pullback_to_p1(m, &curve, Bidegree::new(-1, 0))?;
    let deg = pullback_c1(m, Bidegree::new(1, 1)) - m.rank();
    let (_, a) = p1_h0_h1(&cx, m.rank(), deg, 0)?;
    Ok((a, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::line_param;
    use crate::field::q;
    use crate::monad::{charge1_family, split_charge1};

    fn generic() -> LineBundleMonad {
        charge1_family([q(1), q(2), q(3)], [q(-1), q(0), q(2)], q(1), q(1))
    }

    #[test]
    fn pullback_degrees() {
        let c = ConicPoint::from_ints([1, 2, -1], [3, 1, 1]).unwrap();
        let cx = pullback_to_p1(&generic(), &Curve::Conic(conic_param(&c).unwrap()), Bidegree::ZERO).unwrap();
        assert_eq!(cx.terms[0], vec![[-1, 0]; 2]);
        assert_eq!(cx.terms[2], vec![[1, 0]; 2]);
        let lp = line_param(1, [q(1), q(2), q(-1)]).unwrap();
        let cx = pullback_to_p1(&generic(), &Curve::Line(lp), Bidegree::ZERO).unwrap();
        assert_eq!(cx.terms[0], vec![[0, 0], [-1, 0]]);
        assert_eq!(cx.terms[2], vec![[0, 0], [1, 0]]);
    }

    #[test]
    fn split_fixture_splittings() {
        let m = split_charge1();
        let c = ConicPoint::from_ints([1, 2, -1], [3, 1, 1]).unwrap();
        assert!(splitting_type(&m, &Curve::Conic(conic_param(&c).unwrap())).unwrap().is_trivial());
        for fam in [1, 2] {
            let lp = line_param(fam, [q(1), q(2), q(-1)]).unwrap();
            assert_eq!(splitting_type(&m, &Curve::Line(lp)).unwrap().degrees, vec![1, -1]);
        }
    }

    #[test]
    fn trivial_monad_orders() {
        let m = LineBundleMonad::trivial(2);
        for c in [ConicPoint::from_ints([1, 0, 0], [1, 1, 0]).unwrap(), ConicPoint::from_ints([1, 0, 0], [0, 1, 0]).unwrap()] {
            assert_eq!(jumping_order(&m, &c).unwrap(), (0, 0));
        }
    }

    #[test]
    fn koszul_agrees_on_smooth_conics() {
        let m = generic();
        for (p, l) in [([1, 2, -1], [3, 1, 1]), ([0, 1, 1], [1, 0, 2]), ([2, -1, 1], [1, 1, 1])] {
            let c = ConicPoint::from_ints(p, l).unwrap();
            assert_eq!(jumping_order(&m, &c).unwrap(), koszul_order(&m.complex(), &c.p, &c.l).unwrap());
        }
    }

    #[test]
    fn split_fixture_reducible_conic_jumps() {
        let m = split_charge1();
        let c = ConicPoint::from_ints([1, 0, 0], [0, 1, 0]).unwrap();
        let (a, b) = jumping_order(&m, &c).unwrap();
        assert!(a + b > 0, "({a},{b})");
    }
}
