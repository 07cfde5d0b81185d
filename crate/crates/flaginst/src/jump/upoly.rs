//! Dense univariate polynomials, coefficients low to high.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::field::{Field, Fp, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly<F: Field> {
    pub c: Vec<F>,
}

impl<F: Field> UPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn constant(v: F) -> Self {
        UPoly::new(vec![v])
    }

    /// u − r
    pub fn linear_root(r: &F) -> Self {
        UPoly::new(vec![r.neg(), F::one()])
    }

    pub fn x() -> Self {
        UPoly::new(vec![F::zero(), F::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, u: &F) -> F {
        self.c.iter().rev().fold(F::zero(), |acc, v| acc.mul(u).add(v))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = F::zero();
        UPoly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z).add(o.c.get(i).unwrap_or(&z))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(|v| v.neg()).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        UPoly::new(self.c.iter().map(|v| v.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.c.clone();
        let dn = d.c.len();
        if r.len() < dn {
            return (UPoly::zero(), self.clone());
        }
        let inv = d.lead().inv();
        let mut quo = vec![F::zero(); r.len() - dn + 1];
        for i in (0..quo.len()).rev() {
            let f = r[i + dn - 1].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] = r[i + j].sub(&f.mul(dj));
            }
            quo[i] = f;
        }
        r.truncate(dn - 1);
        (UPoly::new(quo), UPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(i, v)| v.mul(&F::from_i64(i as i64))).collect())
    }

    /// In characteristic 0 or above the degree: self / gcd(self, self').
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Divide out (u − r) as often as it divides; returns the multiplicity.
    pub fn remove_root(&mut self, r: &F) -> usize {
        let lin = UPoly::linear_root(r);
        let mut m = 0;
        while !self.is_zero() && self.eval(r).is_zero() {
            *self = self.divrem(&lin).0;
            m += 1;
        }
        m
    }

    /// The polynomial of degree < n through (x_i, y_i).
    pub fn interpolate(xs: &[F], ys: &[F]) -> Self {
        let mut out = UPoly::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = UPoly::constant(F::one());
            let mut denom = F::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UPoly::linear_root(xj));
                    denom = denom.mul(&xi.sub(xj));
                }
            }
            out = out.add(&basis.scale(&yi.div(&denom)));
        }
        out
    }

    /// self^e mod m
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = UPoly::constant(F::one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<UPoly<G>> {
        Some(UPoly::new(self.c.iter().map(f).collect::<Option<Vec<G>>>()?))
    }
}

fn sign(v: &Scalar) -> Ordering {
    v.cmp(&<Scalar as Field>::zero())
}

/// Sturm chain of a square-free polynomial.
pub fn sturm_chain(h: &UPoly<Scalar>) -> Vec<UPoly<Scalar>> {
    let mut chain = vec![h.clone(), h.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(chain: &[UPoly<Scalar>], u: &Scalar) -> usize {
    let signs: Vec<Ordering> = chain.iter().map(|p| sign(&p.eval(u))).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in (a, b].
pub fn sturm_count(chain: &[UPoly<Scalar>], a: &Scalar, b: &Scalar) -> usize {
    sign_changes(chain, a) - sign_changes(chain, b)
}

/// Cauchy bound: every root has |u| < 1 + max |c_i / c_n|.
pub fn root_bound(h: &UPoly<Scalar>) -> Scalar {
    let lead = h.lead().abs();
    let m = h.c[..h.c.len() - 1].iter().map(|v| v.abs() / &lead).max().unwrap_or_default();
    Scalar::from_integer(m.ceil().to_integer() + 1)
}

/// Smallest-denominator rational in [lo, hi].
pub fn simplest_between(lo: &Scalar, hi: &Scalar) -> Scalar {
    let zero = <Scalar as Field>::zero();
    if lo <= &zero && &zero <= hi {
        return zero;
    }
    if hi < &zero {
        return simplest_between(&-hi, &-lo).neg();
    }
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let f = lo.floor();
    let inner = simplest_between(&(hi - &f).recip(), &(lo - &f).recip());
    f + inner.recip()
}

/// Integer primitive multiple of a rational polynomial.
pub fn primitive_integer(h: &UPoly<Scalar>) -> Vec<BigInt> {
    let den = h.c.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = h.c.iter().map(|v| (v * Scalar::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::from(0), |acc, v| acc.gcd(v));
    ints.into_iter().map(|v| v / &g).collect()
}

/// Isolating intervals (a, b] of the real roots of a square-free h, then each
/// refined until it can hold at most one rational whose denominator divides
/// the leading coefficient; the simplest rational inside is tested exactly.
pub fn rational_roots(h: &UPoly<Scalar>) -> Vec<Scalar> {
    if h.degree() < 1 {
        return vec![];
    }
    let chain = sturm_chain(h);
    let b = root_bound(h);
    let mut stack = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match sturm_count(&chain, &a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let mid = (&a + &b) / Scalar::from_integer(2.into());
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    let lead = primitive_integer(h).last().cloned().unwrap().abs();
    let width = Scalar::new(1.into(), &lead * &lead);
    let mut roots = Vec::new();
    for (mut a, mut b) in isolated {
        if h.eval(&b).is_zero() {
            roots.push(b);
            continue;
        }
        while &b - &a >= width {
            let mid = (&a + &b) / Scalar::from_integer(2.into());
            if h.eval(&mid).is_zero() {
                a = mid.clone();
                b = mid;
                break;
            }
            if sturm_count(&chain, &a, &mid) == 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        let r = simplest_between(&a, &b);
        if h.eval(&r).is_zero() {
            roots.push(r);
        }
    }
    roots.sort();
    roots
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(mut n: u64) -> u64 {
    n += 1;
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// Distinct roots in F_p of a squarefree polynomial (current prime), by
/// gcd with u^p − u followed by Cantor–Zassenhaus splitting.
pub fn roots_mod_p<R: Rng>(h: &UPoly<Fp>, rng: &mut R) -> Vec<Fp> {
    let p = Fp::prime();
    if h.degree() < 1 {
        return vec![];
    }
    let h = h.monic();
    let split = UPoly::x().powmod(p, &h).sub(&UPoly::x()).gcd(&h);
    let mut out = Vec::new();
    let mut work = vec![split];
    while let Some(f) = work.pop() {
        match f.degree() {
            d if d < 1 => {}
            1 => out.push(f.c[0].neg().div(&f.c[1])),
            _ => loop {
                let a = Fp::new(rng.gen_range(0..p));
                let shifted = UPoly::new(vec![a, Fp::one()]);
                let g = shifted.powmod((p - 1) / 2, &f).sub(&UPoly::constant(Fp::one())).gcd(&f);
                if g.degree() > 0 && g.degree() < f.degree() {
                    work.push(f.divrem(&g).0.monic());
                    work.push(g);
                    break;
                }
            },
        }
    }
    out.sort_by_key(|v| v.0);
    out
}

/// Decimal approximation for reports.
pub fn approx(v: &Scalar) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
