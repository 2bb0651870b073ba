//! Scalar fields: prime fields `F_p` and the rationals.
//!
//! A field is a small value object; elements are plain data and every
//! arithmetic operation goes through the field so that `F_p` elements can
//! stay bare `u64`s.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::LinalgError;

/// Serializable description of a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSpec {
    PrimeField(u64),
    Rationals,
}

impl FieldSpec {
    /// Parses `"F_101"`, `"101"` or `"Q"`.
    pub fn parse(s: &str) -> Result<Self, LinalgError> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix("GF"))
            .unwrap_or(t);
        let p: u64 = digits
            .parse()
            .map_err(|_| LinalgError::Parse(format!("unknown field `{s}`")))?;
        PrimeField::new(p)?;
        Ok(FieldSpec::PrimeField(p))
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

pub trait Field: Clone + PartialEq + Eq + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Uniform element for `F_p`; a small integer in `[-9, 9]` for `Q`.
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Canonical decimal string (`0..p-1`, or `num/den` in lowest terms).
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, LinalgError>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    /// `acc += a * b`
    fn add_mul(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
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

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, LinalgError> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = self.parse(n)?;
            let d = self.parse(d)?;
            let di = self
                .inv(&d)
                .ok_or_else(|| LinalgError::Parse(format!("zero denominator in `{s}`")))?;
            return Ok(self.mul(&n, &di));
        }
        let v: i64 = t
            .parse()
            .map_err(|_| LinalgError::Parse(format!("bad scalar `{s}`")))?;
        Ok(self.reduce_i64(v))
    }
    fn add_mul(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.gen_range(-9..=9))
    }
    fn format(&self, a: &BigRational) -> String {
        // BigRational is always normalised with a positive denominator.
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, LinalgError> {
        let t = s.trim();
        let bad = || LinalgError::Parse(format!("bad scalar `{s}`"));
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        let r = BigRational::new(n, d);
        debug_assert!(!r.denom().is_negative());
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            let i = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &i), 1);
        }
        assert!(f.inv(&0).is_none());
        assert!(PrimeField::new(100).is_err());
    }

    #[test]
    fn scalar_strings_are_canonical() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.format(&f.parse("-1").unwrap()), "100");
        assert_eq!(f.parse("1/2").unwrap(), 51);
        let q = Rationals;
        assert_eq!(q.format(&q.parse("4/-6").unwrap()), "-2/3");
        assert_eq!(q.format(&q.parse("6/3").unwrap()), "2");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(
            FieldSpec::parse("F_101").unwrap(),
            FieldSpec::PrimeField(101)
        );
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert!(FieldSpec::parse("F_9").is_err());
    }
}
