//! The bigraded coordinate ring of the flag threefold.
//!
//! Polynomials live in K[x0,x1,x2,y0,y1,y2] and are kept in normal form
//! modulo the flag quadric `x0y0 + x1y1 + x2y2`. Under lex order with
//! x0 > x1 > x2 > y0 > y1 > y2 the leading term is x0y0, so reduction is the
//! substitution x0y0 -> -(x1y1 + x2y2) repeated until no monomial is
//! divisible by x0y0.
//!
//! The same [`Poly`] type doubles as binary forms in (s,t) = variables 0,1.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::field::{parse_scalar, q, scalar_to_string, Field, Scalar};

pub const NVARS: usize = 6;

/// Exponent vector (x0,x1,x2,y0,y1,y2).
pub type Mono = [u16; NVARS];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub a: i32,
    pub b: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { a: 0, b: 0 };

    pub const fn new(a: i32, b: i32) -> Self {
        Bidegree { a, b }
    }

    pub fn swap(self) -> Self {
        Bidegree::new(self.b, self.a)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.a, -self.b)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

pub fn mono_bidegree(m: &Mono) -> Bidegree {
    Bidegree::new(
        (m[0] + m[1] + m[2]) as i32,
        (m[3] + m[4] + m[5]) as i32,
    )
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = *a;
    for i in 0..NVARS {
        r[i] += b[i];
    }
    r
}

/// Sparse polynomial with coefficients in `F`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Mono, F>,
}

pub type BiPoly = Poly<Scalar>;

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial([0; NVARS], c)
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn monomial(m: Mono, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// The variable with index `i` (0..3 are x, 3..6 are y).
    pub fn var(i: usize) -> Self {
        let mut m = [0; NVARS];
        m[i] = 1;
        Self::monomial(m, F::one())
    }

    /// Linear form `Σ c_i v_{off+i}`.
    pub fn linear(off: usize, coeffs: &[F]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let mut m = [0; NVARS];
            m[off + i] = 1;
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Common bidegree of all terms, `None` for zero or mixed polynomials.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(mono_bidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (*m, v.mul(c))).collect() }
    }

    /// Plain product in the polynomial ring (no reduction).
    pub fn mul_raw(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(mono_mul(m1, m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn mul_mono(&self, m: &Mono, c: &F) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            r.add_term(mono_mul(m1, m), c1.mul(c));
        }
        r
    }

    /// Product followed by normal form on F.
    pub fn mul(&self, o: &Self) -> Self {
        reduce(&self.mul_raw(o))
    }

    pub fn pow_raw(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul_raw(self);
        }
        r
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(*m, f(c));
        }
        r
    }

    /// Evaluate at a point of the ambient affine space.
    pub fn eval(&self, pt: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, e) in m.iter().enumerate() {
                for _ in 0..*e {
                    v = v.mul(&pt[i]);
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Substitute `images[i]` for variable i (raw products, no reduction).
    pub fn substitute(&self, images: &[Poly<F>]) -> Poly<F> {
        let mut cache: Vec<Vec<Poly<F>>> = vec![vec![Poly::one()]; NVARS];
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for i in 0..NVARS {
                let e = m[i] as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul_raw(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul_raw(&cache[i][e]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Exchange the two groups of variables (x <-> y).
    pub fn swap_factors(&self) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term([m[3], m[4], m[5], m[0], m[1], m[2]], c.clone());
        }
        reduce(&r)
    }
}

impl BiPoly {
    pub fn from_int_linear(off: usize, coeffs: &[i64]) -> Self {
        let cs: Vec<Scalar> = coeffs.iter().map(|c| q(*c)).collect();
        Self::linear(off, &cs)
    }

    pub fn to_field<G: Field>(&self) -> Option<Poly<G>> {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(*m, G::from_scalar(c)?);
        }
        Some(r)
    }
}

fn fmt_mono(m: &Mono, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    const NAMES: [&str; NVARS] = ["x0", "x1", "x2", "y0", "y1", "y2"];
    let mut first = true;
    for (i, e) in m.iter().enumerate() {
        if *e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if *e == 1 {
            write!(f, "{}", NAMES[i])?;
        } else {
            write!(f, "{}^{}", NAMES[i], e)?;
        }
    }
    if first {
        write!(f, "1")?;
    }
    Ok(())
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?})*", c)?;
            fmt_mono(m, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let s = scalar_to_string(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.iter().all(|e| *e == 0);
            if mag != "1" || is_const {
                write!(f, "{}", mag)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            if !is_const {
                fmt_mono(m, f)?;
            }
        }
        Ok(())
    }
}

/// Result of dividing by the flag quadric: `p = Q·quotient + remainder`.
pub struct Division<F: Field> {
    pub quotient: Poly<F>,
    pub remainder: Poly<F>,
}

/// The flag quadric x0y0 + x1y1 + x2y2.
pub fn flag_quadric<F: Field>() -> Poly<F> {
    let mut p = Poly::zero();
    p.add_term([1, 0, 0, 1, 0, 0], F::one());
    p.add_term([0, 1, 0, 0, 1, 0], F::one());
    p.add_term([0, 0, 1, 0, 0, 1], F::one());
    p
}

/// Normal form and quotient with respect to the flag quadric.
pub fn divide<F: Field>(p: &Poly<F>) -> Division<F> {
    let mut quotient = Poly::zero();
    let mut remainder = Poly::zero();
    let mut work = p.clone();
    let tail: Poly<F> = {
        let mut t = Poly::zero();
        t.add_term([0, 1, 0, 0, 1, 0], F::one());
        t.add_term([0, 0, 1, 0, 0, 1], F::one());
        t
    };
    // Each pass strictly lowers the x0 exponent of the terms it rewrites.
    while let Some((m, c)) = work.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
        work.terms.remove(&m);
        if m[0] > 0 && m[3] > 0 {
            let mut rest = m;
            rest[0] -= 1;
            rest[3] -= 1;
            quotient.add_term(rest, c.clone());
            work = work.sub(&tail.mul_mono(&rest, &c));
        } else {
            remainder.add_term(m, c);
        }
    }
    Division { quotient, remainder }
}

/// Normal form modulo the flag quadric.
pub fn reduce<F: Field>(p: &Poly<F>) -> Poly<F> {
    if p.terms.keys().all(|m| m[0] == 0 || m[3] == 0) {
        return p.clone();
    }
    divide(p).remainder
}

/// Normal-form monomials of bidegree `d`, in increasing monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub degree: Bidegree,
    pub monomials: Vec<Mono>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }

    /// Coordinates of a normal-form polynomial of this bidegree.
    pub fn coordinates<F: Field>(&self, p: &Poly<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.len()];
        for (m, c) in p.terms() {
            let i = self.index_of(m).expect("polynomial outside graded piece");
            v[i] = c.clone();
        }
        v
    }

    pub fn poly<F: Field>(&self, coords: &[F]) -> Poly<F> {
        let mut p = Poly::zero();
        for (m, c) in self.monomials.iter().zip(coords) {
            p.add_term(*m, c.clone());
        }
        p
    }
}

/// Exponent vectors of `n` variables summing to `d`.
pub fn compositions(n: usize, d: i32) -> Vec<Vec<u16>> {
    if d < 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![vec![d as u16]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in compositions(n - 1, d - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

pub fn graded_basis(d: Bidegree) -> GradedBasis {
    let mut monomials = Vec::new();
    for ex in compositions(3, d.a) {
        for ey in compositions(3, d.b) {
            if ex[0] > 0 && ey[0] > 0 {
                continue;
            }
            monomials.push([ex[0], ex[1], ex[2], ey[0], ey[1], ey[2]]);
        }
    }
    monomials.sort();
    GradedBasis { degree: d, monomials }
}

/// Serialized form of a polynomial: terms plus bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub bidegree: Option<Bidegree>,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: [u16; NVARS],
    pub coeff: String,
}

impl From<&BiPoly> for PolyRecord {
    fn from(p: &BiPoly) -> Self {
        PolyRecord {
            bidegree: p.bidegree(),
            terms: p
                .terms()
                .map(|(m, c)| TermRecord { exponents: *m, coeff: scalar_to_string(c) })
                .collect(),
        }
    }
}

impl TryFrom<&PolyRecord> for BiPoly {
    type Error = String;
    fn try_from(r: &PolyRecord) -> Result<Self, String> {
        let mut p = BiPoly::zero();
        for t in &r.terms {
            let c = parse_scalar(&t.coeff).ok_or_else(|| format!("bad coefficient {:?}", t.coeff))?;
            p.add_term(t.exponents, c);
        }
        Ok(p)
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRecord::deserialize(d)?;
        BiPoly::try_from(&r).map_err(serde::de::Error::custom)
    }
}

/// Parse a polynomial like `x0*y1 - 2*x2^2 + 3/4`.
pub fn parse_poly(src: &str) -> Result<BiPoly, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = BiPoly::zero();
    let mut chunks = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with(['^', '*']) {
            chunks.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    chunks.push(cur);
    for chunk in chunks {
        let (sign, body) = match chunk.strip_prefix('-') {
            Some(r) => (-1, r.to_string()),
            None => (1, chunk.trim_start_matches('+').to_string()),
        };
        let mut coeff = q(sign);
        let mut m = [0u16; NVARS];
        for factor in body.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u16>().map_err(|_| format!("bad exponent in {factor}"))?),
                None => (factor, 1),
            };
            let idx = match base {
                "x0" => Some(0),
                "x1" => Some(1),
                "x2" => Some(2),
                "y0" => Some(3),
                "y1" => Some(4),
                "y2" => Some(5),
                _ => None,
            };
            match idx {
                Some(i) => m[i] += exp,
                None => {
                    let c = parse_scalar(base).ok_or_else(|| format!("bad factor {factor:?}"))?;
                    for _ in 0..exp {
                        coeff = &coeff * &c;
                    }
                }
            }
        }
        out.add_term(m, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> BiPoly {
        BiPoly::var(i)
    }
    fn y(i: usize) -> BiPoly {
        BiPoly::var(3 + i)
    }

    #[test]
    fn quadric_reduces_to_zero() {
        assert!(reduce(&flag_quadric::<Scalar>()).is_zero());
    }

    #[test]
    fn single_substitution_step() {
        let p = x(0).mul_raw(&y(0)).mul_raw(&x(2));
        let expect = x(2).mul_raw(&x(1).mul_raw(&y(1)).add(&x(2).mul_raw(&y(2)))).neg();
        assert_eq!(reduce(&p), expect);
        assert_eq!(reduce(&x(1).mul_raw(&y(1))), x(1).mul_raw(&y(1)));
    }

    #[test]
    fn division_identity() {
        let p = parse_poly("x0^3*y0^2 - 2*x0*x1*y0*y2 + x2*y1").unwrap();
        let d = divide(&p);
        let back = flag_quadric::<Scalar>().mul_raw(&d.quotient).add(&d.remainder);
        assert_eq!(back, p);
        assert!(d.remainder.terms().all(|(m, _)| m[0] == 0 || m[3] == 0));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(graded_basis(Bidegree::new(1, 0)).len(), 3);
        assert_eq!(graded_basis(Bidegree::new(0, 0)).len(), 1);
        assert_eq!(graded_basis(Bidegree::new(1, 1)).len(), 8);
        assert!(graded_basis(Bidegree::new(-1, 2)).is_empty());
    }

    #[test]
    fn parse_and_print() {
        let p = parse_poly("x0*y1 - 2*x2^2 + 3/4").unwrap();
        assert_eq!(p.to_string(), "x0*y1 - 2*x2^2 + 3/4");
        assert_eq!(parse_poly("-y0").unwrap(), y(0).neg());
    }

    #[test]
    fn serde_round_trip() {
        let p = parse_poly("x0*y1 - 2/3*x2*y2").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: BiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
