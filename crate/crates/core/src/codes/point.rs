use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{ApproxComplex, CycInt};
use crate::error::{Error, Result};

/// A number type at which weight enumerators can be evaluated.
///
/// Methods take `&self` as a template so that context-carrying types (such
/// as the working precision of [`ApproxComplex`]) can build constants.
pub trait EnumeratorPoint: Clone {
    fn lift(&self, count: &BigUint) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `self^e`; negative `e` requires an invertible value.
    fn pow_signed(&self, e: i64) -> Result<Self>;
}

fn zero_inverse() -> Error {
    Error::Domain("cannot raise 0 to a negative power".into())
}

impl EnumeratorPoint for BigRational {
    fn lift(&self, count: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(count.clone()))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow_signed(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(zero_inverse());
        }
        Ok(num_traits::Pow::pow(self, e as i32))
    }
}

impl EnumeratorPoint for BigInt {
    fn lift(&self, count: &BigUint) -> Self {
        BigInt::from(count.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            return Ok(num_traits::pow(self.clone(), e as usize));
        }
        if self.is_zero() {
            return Err(zero_inverse());
        }
        if self.abs().is_one() {
            return Ok(if e % 2 == 0 { BigInt::one() } else { self.clone() });
        }
        Err(Error::Domain(format!(
            "integer {self} has no integer inverse; use a rational point"
        )))
    }
}

impl EnumeratorPoint for CycInt {
    fn lift(&self, count: &BigUint) -> Self {
        CycInt::from(count.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn pow_signed(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(zero_inverse());
        }
        CycInt::pow_signed(self, e)
    }
}

impl EnumeratorPoint for ApproxComplex {
    fn lift(&self, count: &BigUint) -> Self {
        ApproxComplex::from_integers(BigInt::from(count.clone()), 0, self.precision())
    }
    fn add(&self, other: &Self) -> Self {
        ApproxComplex::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ApproxComplex::mul(self, other)
    }
    fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            return Ok(self.pow(e as u64));
        }
        ApproxComplex::one(self.precision())
            .div(self)
            .map(|inv| inv.pow(e.unsigned_abs()))
            .map_err(|_| zero_inverse())
    }
}
