//! Coefficient fields.
//!
//! Everything exact runs over [`Scalar`] (big rationals). The prime field
//! [`Fp`] backs the probabilistic fiberwise checks and the modular
//! validation of irrational pencil roots; its modulus is scoped per thread
//! through [`Fp::with_prime`].

use std::cell::Cell;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Scalar = BigRational;

pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    /// Image of a rational number, `None` when the denominator is not invertible.
    fn from_scalar(q: &Scalar) -> Option<Self>;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn from_scalar(q: &Scalar) -> Option<Self> {
        Some(q.clone())
    }
}

/// Default prime for probabilistic checks.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

thread_local! {
    static PRIME: Cell<u64> = const { Cell::new(DEFAULT_PRIME) };
}

/// Element of the prime field whose modulus is the current thread's scoped prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(pub u64);

impl Fp {
    pub fn prime() -> u64 {
        PRIME.with(|p| p.get())
    }

    /// Run `f` with `p` as the modulus of every [`Fp`] operation on this thread.
    pub fn with_prime<R>(p: u64, f: impl FnOnce() -> R) -> R {
        assert!(p > 2 && p < (1 << 62), "prime out of range");
        let old = PRIME.with(|c| c.replace(p));
        struct Restore(u64);
        impl Drop for Restore {
            fn drop(&mut self) {
                PRIME.with(|c| c.set(self.0));
            }
        }
        let _guard = Restore(old);
        f()
    }

    pub fn new(v: u64) -> Self {
        Fp(v % Self::prime())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let p = Self::prime() as u128;
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(v: i64) -> Self {
        let p = Self::prime() as i128;
        Fp((v as i128).rem_euclid(p) as u64)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let p = Self::prime();
        let s = self.0 + o.0;
        Fp(if s >= p { s - p } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        let p = Self::prime();
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + p - o.0 })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % Self::prime() as u128) as u64)
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(Self::prime() - self.0)
        }
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(Self::prime() - 2)
    }
    fn from_scalar(q: &Scalar) -> Option<Self> {
        let p = BigInt::from(Self::prime());
        let n = q.numer().mod_floor(&p).to_u64()?;
        let d = q.denom().mod_floor(&p).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(Fp(n).div(&Fp(d)))
    }
}

/// Rational from an integer.
pub fn q(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

/// Rational `n/d`.
pub fn qf(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical "num/den" rendering (denominator omitted when 1).
pub fn scalar_to_string(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Square root of a perfect square, `None` otherwise.
pub fn integer_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|c| *c >= 0 && c * c == n)
}
