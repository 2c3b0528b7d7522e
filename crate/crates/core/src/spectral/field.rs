use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// An exact field. Elements are small enough to clone freely in the prime
/// case; the rational case pays for exactness with allocation.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn name() -> String;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero; callers only invert pivots.
    fn inv(&self) -> Self;
    fn parse(s: &str) -> Result<Self>;
    fn format(&self) -> String;
}

/// The prime field `F_P` for `P` in {2, 3, 5, 7}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp<const P: u8>(u8);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

impl<const P: u8> Fp<P> {
    const PRIME: () = assert!(P == 2 || P == 3 || P == 5 || P == 7, "supported primes are 2, 3, 5, 7");

    pub fn new(n: i64) -> Self {
        let () = Self::PRIME;
        Fp(n.rem_euclid(P as i64) as u8)
    }

    pub fn value(&self) -> u8 {
        self.0
    }
}

impl<const P: u8> Field for Fp<P> {
    fn name() -> String {
        format!("F{P}")
    }

    fn zero() -> Self {
        Fp::new(0)
    }

    fn one() -> Self {
        Fp::new(1)
    }

    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn add(&self, other: &Self) -> Self {
        Fp(((self.0 as u16 + other.0 as u16) % P as u16) as u8)
    }

    #[inline]
    fn sub(&self, other: &Self) -> Self {
        Fp(((self.0 as u16 + P as u16 - other.0 as u16) % P as u16) as u8)
    }

    #[inline]
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u16 * other.0 as u16) % P as u16) as u8)
    }

    fn neg(&self) -> Self {
        Fp((P - self.0) % P)
    }

    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F{P}");
        (1..P).map(Fp).find(|y| self.mul(y).0 == 1).expect("prime field")
    }

    fn parse(s: &str) -> Result<Self> {
        let n: i64 = s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?;
        Ok(Fp::new(n))
    }

    fn format(&self) -> String {
        self.0.to_string()
    }
}

impl Field for Q {
    fn name() -> String {
        "Q".to_string()
    }

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(n: i64) -> Self {
        crate::rational::q(n)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Self {
        self.recip()
    }

    fn parse(s: &str) -> Result<Self> {
        parse_q(s)
    }

    fn format(&self) -> String {
        fmt_q(self)
    }
}
