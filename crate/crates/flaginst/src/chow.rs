//! The Chow ring of F with rational coefficients.
//!
//! A(F) = Z[h1,h2]/(h1² − h1h2 + h2², h1³, h2³). We store classes in the
//! basis {1, h1, h2, h1², h2², pt} with pt = h1²h2 = h1h2², so that
//! h1h2 = h1² + h2², h1·h1² = h2·h2² = 0 and h1·h2² = h2·h1² = pt.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{parse_scalar, q, qf, scalar_to_string, Field, Scalar};
use crate::ring::Bidegree;

/// Index names of the six basis coordinates.
pub const ONE: usize = 0;
pub const H1: usize = 1;
pub const H2: usize = 2;
pub const H1SQ: usize = 3;
pub const H2SQ: usize = 4;
pub const PT: usize = 5;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ChowClass(pub [Scalar; 6]);

impl ChowClass {
    pub fn zero() -> Self {
        ChowClass(std::array::from_fn(|_| q(0)))
    }

    pub fn basis(i: usize) -> Self {
        let mut c = Self::zero();
        c.0[i] = q(1);
        c
    }

    pub fn one() -> Self {
        Self::basis(ONE)
    }
    pub fn h1() -> Self {
        Self::basis(H1)
    }
    pub fn h2() -> Self {
        Self::basis(H2)
    }
    pub fn pt() -> Self {
        Self::basis(PT)
    }

    pub fn from_ints(v: [i64; 6]) -> Self {
        ChowClass(v.map(q))
    }

    /// a·h1 + b·h2.
    pub fn divisor(d: Bidegree) -> Self {
        let mut c = Self::zero();
        c.0[H1] = q(d.a as i64);
        c.0[H2] = q(d.b as i64);
        c
    }

    pub fn add(&self, o: &Self) -> Self {
        ChowClass(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        ChowClass(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        ChowClass(std::array::from_fn(|i| &self.0[i] * s))
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        let mut r = Self::zero();
        r.0[ONE] = &a[ONE] * &b[ONE];
        r.0[H1] = &a[ONE] * &b[H1] + &a[H1] * &b[ONE];
        r.0[H2] = &a[ONE] * &b[H2] + &a[H2] * &b[ONE];
        // h1h2 contributes to both squares.
        let mixed = &a[H1] * &b[H2] + &a[H2] * &b[H1];
        r.0[H1SQ] = &a[ONE] * &b[H1SQ] + &a[H1SQ] * &b[ONE] + &a[H1] * &b[H1] + &mixed;
        r.0[H2SQ] = &a[ONE] * &b[H2SQ] + &a[H2SQ] * &b[ONE] + &a[H2] * &b[H2] + &mixed;
        r.0[PT] = &a[ONE] * &b[PT]
            + &a[PT] * &b[ONE]
            + &a[H1] * &b[H2SQ]
            + &a[H2SQ] * &b[H1]
            + &a[H2] * &b[H1SQ]
            + &a[H1SQ] * &b[H2];
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn degree(&self) -> Scalar {
        self.0[PT].clone()
    }

    /// Component of codimension `d`.
    pub fn part(&self, d: usize) -> Self {
        let mut c = Self::zero();
        for &i in indices_of_degree(d) {
            c.0[i] = self.0[i].clone();
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| Field::is_zero(v))
    }

    /// Whether the class is concentrated in codimension `d`.
    pub fn is_pure(&self, d: usize) -> bool {
        (0..=3).filter(|e| *e != d).all(|e| self.part(e).is_zero())
    }

    /// Sign flip on odd codimension parts (dual of a Chern character).
    pub fn dual(&self) -> Self {
        let mut c = self.clone();
        for i in [H1, H2, PT] {
            c.0[i] = -&c.0[i];
        }
        c
    }

    /// exp of a class with vanishing constant term.
    pub fn exp_nilpotent(&self) -> Self {
        assert!(Field::is_zero(&self.0[ONE]));
        let x2 = self.mul(self);
        let x3 = x2.mul(self);
        Self::one().add(self).add(&x2.scale(&qf(1, 2))).add(&x3.scale(&qf(1, 6)))
    }

    /// Inverse of a class with constant term 1.
    pub fn inverse_unit(&self) -> Result<Self> {
        if self.0[ONE] != q(1) {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let x = self.sub(&Self::one());
        let x2 = x.mul(&x);
        let x3 = x2.mul(&x);
        Ok(Self::one().sub(&x).add(&x2).sub(&x3))
    }

    /// Exchange h1 and h2.
    pub fn swap_factors(&self) -> Self {
        let a = &self.0;
        ChowClass([a[ONE].clone(), a[H2].clone(), a[H1].clone(), a[H2SQ].clone(), a[H1SQ].clone(), a[PT].clone()])
    }
}

fn indices_of_degree(d: usize) -> &'static [usize] {
    match d {
        0 => &[ONE],
        1 => &[H1, H2],
        2 => &[H1SQ, H2SQ],
        3 => &[PT],
        _ => &[],
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 6] = ["", "h1", "h2", "h1^2", "h2^2", "h1^2h2"];
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if Field::is_zero(c) {
                continue;
            }
            let s = scalar_to_string(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if i == ONE {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", NAMES[i])?;
            } else {
                write!(f, "{mag}·{}", NAMES[i])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass({self})")
    }
}

impl Serialize for ChowClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(scalar_to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChowClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != 6 {
            return Err(serde::de::Error::custom("expected six coefficients"));
        }
        let mut c = ChowClass::zero();
        for (i, s) in v.iter().enumerate() {
            c.0[i] = parse_scalar(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))?;
        }
        Ok(c)
    }
}

/// Rank and Chern classes of a sheaf or complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: ChowClass,
    pub c2: ChowClass,
    pub c3: ChowClass,
}

impl ChernData {
    pub fn trivial(rank: i64) -> Self {
        ChernData { rank, c1: ChowClass::zero(), c2: ChowClass::zero(), c3: ChowClass::zero() }
    }

    pub fn line(d: Bidegree) -> Self {
        ChernData { rank: 1, c1: ChowClass::divisor(d), c2: ChowClass::zero(), c3: ChowClass::zero() }
    }

    /// Rank 2, c1 = 0, c2 = k·h1h2, c3 = 0.
    pub fn instanton(k: i64) -> Self {
        let h1h2 = ChowClass::h1().mul(&ChowClass::h2());
        ChernData { rank: 2, c1: ChowClass::zero(), c2: h1h2.scale(&q(k)), c3: ChowClass::zero() }
    }

    /// G1 with c1 = h1, c2 = h1² (twisted cotangent of the first factor).
    pub fn g1() -> Self {
        ChernData {
            rank: 2,
            c1: ChowClass::h1(),
            c2: ChowClass::basis(H1SQ),
            c3: ChowClass::zero(),
        }
    }

    pub fn g2() -> Self {
        Self::g1().swap_factors()
    }

    pub fn total(&self) -> ChowClass {
        ChowClass::one().add(&self.c1).add(&self.c2).add(&self.c3)
    }

    pub fn from_total(rank: i64, c: &ChowClass) -> Result<Self> {
        if c.0[ONE] != q(1) {
            return Err(Error::NotInvertible(c.to_string()));
        }
        Ok(ChernData { rank, c1: c.part(1), c2: c.part(2), c3: c.part(3) })
    }

    pub fn character(&self) -> ChowClass {
        let (c1, c2, c3) = (&self.c1, &self.c2, &self.c3);
        let c1sq = c1.mul(c1);
        let ch2 = c1sq.sub(&c2.scale(&q(2))).scale(&qf(1, 2));
        let ch3 = c1sq
            .mul(c1)
            .sub(&c1.mul(c2).scale(&q(3)))
            .add(&c3.scale(&q(3)))
            .scale(&qf(1, 6));
        ChowClass::one().scale(&q(self.rank)).add(c1).add(&ch2).add(&ch3)
    }

    /// Inverse of [`ChernData::character`] via Newton's identities.
    pub fn from_character(ch: &ChowClass) -> Result<Self> {
        let r = &ch.0[ONE];
        if !r.is_integer() {
            return Err(Error::NonIntegralRank(scalar_to_string(r)));
        }
        let rank = i64::try_from(r.to_integer()).map_err(|_| Error::NonIntegralRank(scalar_to_string(r)))?;
        let c1 = ch.part(1);
        let ch2 = ch.part(2);
        let ch3 = ch.part(3);
        let c1sq = c1.mul(&c1);
        let c2 = c1sq.sub(&ch2.scale(&q(2))).scale(&qf(1, 2));
        let c3 = ch3
            .scale(&q(6))
            .sub(&c1sq.mul(&c1))
            .add(&c1.mul(&c2).scale(&q(3)))
            .scale(&qf(1, 3));
        Ok(ChernData { rank, c1, c2, c3 })
    }

    pub fn swap_factors(&self) -> Self {
        ChernData {
            rank: self.rank,
            c1: self.c1.swap_factors(),
            c2: self.c2.swap_factors(),
            c3: self.c3.swap_factors(),
        }
    }

    pub fn dual(&self) -> Self {
        Self::from_character(&self.character().dual()).expect("dual keeps the rank")
    }

    pub fn tensor(&self, o: &Self) -> Self {
        Self::from_character(&self.character().mul(&o.character())).expect("integral rank")
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Self::from_character(&self.character().add(&o.character())).expect("integral rank")
    }
}

/// Todd class of F: 1 + (h1+h2) + (3/2)h1h2 + pt.
pub fn todd() -> ChowClass {
    let h = ChowClass::h1().add(&ChowClass::h2());
    let h1h2 = ChowClass::h1().mul(&ChowClass::h2());
    ChowClass::one().add(&h).add(&h1h2.scale(&qf(3, 2))).add(&ChowClass::pt())
}

pub fn chow_mul(u: &ChowClass, v: &ChowClass) -> ChowClass {
    u.mul(v)
}

pub fn degree(u: &ChowClass) -> Scalar {
    u.degree()
}

/// Chern data of E ⊗ O(t).
pub fn chern_twist(c: &ChernData, t: Bidegree) -> ChernData {
    let ch = c.character().mul(&ChowClass::divisor(t).exp_nilpotent());
    ChernData::from_character(&ch).expect("twisting keeps the rank")
}

/// Euler characteristic by Hirzebruch–Riemann–Roch.
pub fn chi_rr(c: &ChernData) -> Scalar {
    chi_character(&c.character())
}

pub fn chi_character(ch: &ChowClass) -> Scalar {
    ch.mul(&todd()).degree()
}

/// χ(E, F) = Σ (−1)^i ext^i(E, F) for locally free E.
pub fn chi_pair(e: &ChowClass, f: &ChowClass) -> Scalar {
    chi_character(&e.dual().mul(f))
}

/// Chern character of a line bundle.
pub fn line_character(d: Bidegree) -> ChowClass {
    ChowClass::divisor(d).exp_nilpotent()
}

/// Evaluate an expression in h1, h2 such as `(h1+h2)^3` or `3/2*h1*h2 - 1`.
pub fn eval_expr(src: &str) -> Result<ChowClass> {
    let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = ExprParser { toks, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("unexpected input at position {}", p.pos)));
    }
    Ok(v)
}

struct ExprParser {
    toks: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<ChowClass> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.product()?.neg()
            }
            _ => self.product()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<ChowClass> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some('h') | Some('(') => acc = acc.mul(&self.power()?),
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<ChowClass> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = self.toks[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse("bad exponent".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ChowClass> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('h') => {
                self.pos += 1;
                match self.peek() {
                    Some('1') => {
                        self.pos += 1;
                        Ok(ChowClass::h1())
                    }
                    Some('2') => {
                        self.pos += 1;
                        Ok(ChowClass::h2())
                    }
                    _ => Err(Error::Parse("expected h1 or h2".into())),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
                    self.pos += 1;
                }
                let s: String = self.toks[start..self.pos].iter().collect();
                let v = parse_scalar(&s).ok_or_else(|| Error::Parse(format!("bad number {s:?}")))?;
                Ok(ChowClass::one().scale(&v))
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    /// Independent oracle: polynomials in h1, h2 reduced by rewriting
    /// h1h2 -> h1² + h2², then h1³ = h2³ = 0 and h1²h2 = h1h2² = pt.
    fn oracle(terms: &[((u32, u32), i64)]) -> ChowClass {
        let mut work: BTreeMap<(u32, u32), i64> = terms.iter().cloned().collect();
        let mut out = [0i64; 6];
        while let Some((&(a, b), &c)) = work.iter().next() {
            work.remove(&(a, b));
            if c == 0 {
                continue;
            }
            match (a, b) {
                (0, 0) => out[ONE] += c,
                (1, 0) => out[H1] += c,
                (0, 1) => out[H2] += c,
                (2, 0) => out[H1SQ] += c,
                (0, 2) => out[H2SQ] += c,
                (1, 1) => {
                    out[H1SQ] += c;
                    out[H2SQ] += c;
                }
                (2, 1) | (1, 2) => out[PT] += c,
                (a, b) if a + b > 3 || a >= 3 || b >= 3 => {}
                _ => unreachable!(),
            }
        }
        ChowClass::from_ints(out)
    }

    #[test]
    fn products_against_oracle() {
        let h1 = ChowClass::h1();
        let h2 = ChowClass::h2();
        assert_eq!(h1.mul(&h2), oracle(&[((1, 1), 1)]));
        assert_eq!(h1.mul(&h1.mul(&h1)), oracle(&[((3, 0), 1)]));
        assert!(h1.mul(&h1.mul(&h1)).is_zero());
        assert_eq!(h1.mul(&h2).mul(&h2), ChowClass::pt());
        assert_eq!(h1.mul(&h1).mul(&h2), ChowClass::pt());
        assert_eq!(h1.pow(2).mul(&h2), h1.mul(&h2.pow(2)));
    }

    #[test]
    fn degree_six() {
        let h = ChowClass::h1().add(&ChowClass::h2());
        assert_eq!(h.pow(3).degree(), q(6));
    }

    #[test]
    fn twist_conic_structure_sheaf() {
        // c(O_C) = 1 − h1² − h2² − 2pt, rank 0.
        let oc = ChernData {
            rank: 0,
            c1: ChowClass::zero(),
            c2: ChowClass::from_ints([0, 0, 0, -1, -1, 0]),
            c3: ChowClass::from_ints([0, 0, 0, 0, 0, -2]),
        };
        let t = chern_twist(&oc, Bidegree::new(1, 0));
        let h1h2 = ChowClass::h1().mul(&ChowClass::h2());
        assert_eq!(t.total(), ChowClass::one().sub(&h1h2));
        assert_eq!(chern_twist(&oc, Bidegree::ZERO), oc);
    }

    #[test]
    fn instanton_euler_characteristics() {
        for k in 1..=3 {
            let e = ChernData::instanton(k);
            assert_eq!(chi_rr(&e), q(2 - 2 * k));
            assert_eq!(chi_rr(&chern_twist(&e, Bidegree::new(0, -1))), q(-k));
        }
    }

    #[test]
    fn expr_parser() {
        assert_eq!(eval_expr("(h1+h2)^3").unwrap(), ChowClass::pt().scale(&q(6)));
        assert_eq!(eval_expr("h1*h2").unwrap(), eval_expr("h1^2 + h2^2").unwrap());
        assert_eq!(eval_expr("-3/2 h1 h2").unwrap(), eval_expr("-3/2*(h1^2+h2^2)").unwrap());
        assert!(eval_expr("h3").is_err());
    }

    #[test]
    fn g1_matches_euler_presentation() {
        // 0 → G1(−1,0) → O³ → O(1,0) → 0
        let g1m = chern_twist(&ChernData::g1(), Bidegree::new(-1, 0));
        let lhs = g1m.total().mul(&ChernData::line(Bidegree::new(1, 0)).total());
        assert_eq!(lhs, ChowClass::one());
        assert_eq!(g1m.rank + 1, 3);
    }

    #[test]
    fn display_format() {
        let c = ChowClass::from_ints([1, 2, 0, -1, 0, 3]);
        assert_eq!(c.to_string(), "1 + 2·h1 - h1^2 + 3·h1^2h2");
    }
}
