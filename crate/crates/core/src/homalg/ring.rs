//! Coefficient rings: ℤ (arbitrary precision), ℚ and 𝔽ₚ.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::str::FromStr;

use dashu_int::ops::{DivRem, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::Serialize;

use crate::error::{Error, Result};

/// A Euclidean domain with the operations elimination needs.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Inverse of a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Euclidean size comparison, used to pick pivots.
    fn cmp_size(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;
    /// `a = q·b + r` with `r` smaller than `b`.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Unit `u` such that `u·a` is the canonical associate of `a`.
    fn normalizing_unit(&self, a: &Self::Elem) -> Self::Elem;
    fn is_field(&self) -> bool;
    /// Canonical non-negative integer for an invariant factor (0 when not representable).
    fn to_order(&self, a: &Self::Elem) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    /// Reduction of `a` modulo `d` (identity when `d` is zero).
    fn reduce(&self, a: &Self::Elem, d: &Self::Elem) -> Self::Elem {
        if self.is_zero(d) {
            a.clone()
        } else {
            self.div_rem(a, d).1
        }
    }
}

/// ℤ with arbitrary precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = IBig;

    fn zero(&self) -> IBig {
        IBig::ZERO
    }
    fn one(&self) -> IBig {
        IBig::ONE
    }
    fn from_i64(&self, v: i64) -> IBig {
        IBig::from(v)
    }
    fn add(&self, a: &IBig, b: &IBig) -> IBig {
        a + b
    }
    fn sub(&self, a: &IBig, b: &IBig) -> IBig {
        a - b
    }
    fn mul(&self, a: &IBig, b: &IBig) -> IBig {
        a * b
    }
    fn neg(&self, a: &IBig) -> IBig {
        -a
    }
    fn is_zero(&self, a: &IBig) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &IBig) -> bool {
        a.is_one() || *a == IBig::NEG_ONE
    }
    fn unit_inverse(&self, a: &IBig) -> Option<IBig> {
        self.is_unit(a).then(|| a.clone())
    }
    fn cmp_size(&self, a: &IBig, b: &IBig) -> Ordering {
        a.unsigned_abs().cmp(&b.unsigned_abs())
    }
    fn div_rem(&self, a: &IBig, b: &IBig) -> (IBig, IBig) {
        a.clone().div_rem(b.clone())
    }
    fn normalizing_unit(&self, a: &IBig) -> IBig {
        if *a < IBig::ZERO {
            IBig::NEG_ONE
        } else {
            IBig::ONE
        }
    }
    fn is_field(&self) -> bool {
        false
    }
    fn to_order(&self, a: &IBig) -> u64 {
        u64::try_from(a.unsigned_abs()).unwrap_or(0)
    }
}

/// The prime field 𝔽ₚ with `p < 2³¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn cmp_size(&self, a: &u64, b: &u64) -> Ordering {
        (*a != 0).cmp(&(*b != 0))
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        let inv = self.unit_inverse(b).expect("division by zero in F_p");
        (self.mul(a, &inv), 0)
    }
    fn normalizing_unit(&self, a: &u64) -> u64 {
        self.unit_inverse(a).unwrap_or(1)
    }
    fn is_field(&self) -> bool {
        true
    }
    fn to_order(&self, a: &u64) -> u64 {
        u64::from(*a != 0)
    }
}

/// ℚ with exact rationals.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = RBig;

    fn zero(&self) -> RBig {
        RBig::ZERO
    }
    fn one(&self) -> RBig {
        RBig::ONE
    }
    fn from_i64(&self, v: i64) -> RBig {
        RBig::from_parts(IBig::from(v), UBig::ONE)
    }
    fn add(&self, a: &RBig, b: &RBig) -> RBig {
        a + b
    }
    fn sub(&self, a: &RBig, b: &RBig) -> RBig {
        a - b
    }
    fn mul(&self, a: &RBig, b: &RBig) -> RBig {
        a * b
    }
    fn neg(&self, a: &RBig) -> RBig {
        -a
    }
    fn is_zero(&self, a: &RBig) -> bool {
        a.numerator().is_zero()
    }
    fn is_unit(&self, a: &RBig) -> bool {
        !self.is_zero(a)
    }
    fn unit_inverse(&self, a: &RBig) -> Option<RBig> {
        (!self.is_zero(a)).then(|| RBig::ONE / a)
    }
    fn cmp_size(&self, a: &RBig, b: &RBig) -> Ordering {
        (!self.is_zero(a)).cmp(&!self.is_zero(b))
    }
    fn div_rem(&self, a: &RBig, b: &RBig) -> (RBig, RBig) {
        (a / b, RBig::ZERO)
    }
    fn normalizing_unit(&self, a: &RBig) -> RBig {
        self.unit_inverse(a).unwrap_or(RBig::ONE)
    }
    fn is_field(&self) -> bool {
        true
    }
    fn to_order(&self, a: &RBig) -> u64 {
        u64::from(!self.is_zero(a))
    }
}

/// Runtime selection of a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Z,
    Q,
    Fp(u64),
}

impl CoeffRing {
    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffRing::Z)
    }

    /// Name used in JSON output: `Z`, `Q` or `Fp`.
    pub fn name(&self) -> &'static str {
        match self {
            CoeffRing::Z => "Z",
            CoeffRing::Q => "Q",
            CoeffRing::Fp(_) => "Fp",
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            CoeffRing::Fp(p) => Some(*p),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> RingDescriptor {
        RingDescriptor { ring: self.name(), p: self.prime() }
    }
}

impl FromStr for CoeffRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "ZZ" | "z" => Ok(CoeffRing::Z),
            "Q" | "QQ" | "q" => Ok(CoeffRing::Q),
            other => {
                let rest = other
                    .strip_prefix("Fp:")
                    .or_else(|| other.strip_prefix("F"))
                    .ok_or_else(|| Error::Domain(format!("unknown ring '{other}' (expected Z, Q or Fp:<p>)")))?;
                let p: u64 = rest.parse().map_err(|_| Error::Domain(format!("bad prime in '{other}'")))?;
                PrimeField::new(p)?;
                Ok(CoeffRing::Fp(p))
            }
        }
    }
}

impl std::fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoeffRing::Fp(p) => write!(f, "Fp:{p}"),
            other => write!(f, "{}", other.name()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RingDescriptor {
    pub ring: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

/// Runs `$body` with `$r` bound to the concrete ring behind a [`CoeffRing`].
#[macro_export]
macro_rules! with_ring {
    ($ring:expr, |$r:ident| $body:expr) => {
        match $ring {
            $crate::homalg::CoeffRing::Z => {
                let $r = $crate::homalg::ring::Integers;
                $body
            }
            $crate::homalg::CoeffRing::Q => {
                let $r = $crate::homalg::ring::Rationals;
                $body
            }
            $crate::homalg::CoeffRing::Fp(p) => {
                let $r = $crate::homalg::ring::PrimeField::new(p).expect("validated prime");
                $body
            }
        }
    };
}
