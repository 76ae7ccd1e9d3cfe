//! Exact arithmetic in Z[ω] with ω = e^{iπ/4}.
//!
//! Elements are stored in the power basis {1, ω, ω², ω³}; products are
//! reduced with ω⁴ = −1, so every value has a unique representation.

mod approx;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use approx::{log2_abs_one_plus_omega, ApproxComplex, ApproxReal};

use crate::error::{Error, Result};

/// `c[0] + c[1]·ω + c[2]·ω² + c[3]·ω³`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycInt {
    c: [BigInt; 4],
}

impl CycInt {
    pub fn new(c0: impl Into<BigInt>, c1: impl Into<BigInt>, c2: impl Into<BigInt>, c3: impl Into<BigInt>) -> Self {
        CycInt {
            c: [c0.into(), c1.into(), c2.into(), c3.into()],
        }
    }

    pub fn from_coefficients(c: [BigInt; 4]) -> Self {
        CycInt { c }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(BigInt::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        CycInt::new(n.into(), 0, 0, 0)
    }

    pub fn omega() -> Self {
        CycInt::new(0, 1, 0, 0)
    }

    pub fn coefficients(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Returns the value as an ordinary integer when the ω, ω², ω³
    /// coefficients vanish.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    /// Multiplies by ω^k; a signed cyclic shift of the coefficients.
    pub fn mul_omega_pow(&self, k: i64) -> CycInt {
        let k = k.rem_euclid(8) as usize;
        let mut out: [BigInt; 4] = Default::default();
        for (i, ci) in self.c.iter().enumerate() {
            let e = i + k;
            let (slot, negate) = ((e % 4), (e / 4) % 2 == 1);
            out[slot] = if negate { -ci } else { ci.clone() };
        }
        CycInt { c: out }
    }

    pub fn scale(&self, factor: &BigInt) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| x * factor),
        }
    }

    pub fn shl(&self, bits: usize) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| x << bits),
        }
    }

    /// Divides by 2^bits if that is exact in Z[ω].
    pub fn div_pow2_exact(&self, bits: usize) -> Option<CycInt> {
        let d = BigInt::one() << bits;
        let mut out: [BigInt; 4] = Default::default();
        for (o, x) in out.iter_mut().zip(&self.c) {
            let (q, r) = x.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            *o = q;
        }
        Some(CycInt { c: out })
    }

    /// Complex conjugate: ω ↦ ω⁻¹ = −ω³.
    pub fn conj(&self) -> CycInt {
        let [c0, c1, c2, c3] = &self.c;
        CycInt::new(c0.clone(), -c3, -c2, -c1)
    }

    pub fn pow(&self, mut e: u64) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// If the value is `±ω^j`, returns `j` in `0..8`.
    pub fn unit_exponent(&self) -> Option<u32> {
        let nonzero: Vec<usize> = (0..4).filter(|&i| !self.c[i].is_zero()).collect();
        if nonzero.len() != 1 {
            return None;
        }
        let i = nonzero[0];
        if self.c[i].abs() != BigInt::one() {
            return None;
        }
        let j = if self.c[i].sign() == Sign::Minus { i + 4 } else { i };
        Some(j as u32)
    }

    /// Integer power with negative exponents allowed for units `±ω^j`.
    pub fn pow_signed(&self, e: i64) -> Result<CycInt> {
        if e >= 0 {
            return Ok(self.pow(e as u64));
        }
        match self.unit_exponent() {
            Some(j) => Ok(omega_pow(-(j as i64) * e.unsigned_abs() as i64)),
            None => Err(Error::Domain(format!(
                "{self} is not a unit of Z[ω]; cannot raise it to the power {e}"
            ))),
        }
    }

    /// |value|² as an element of Z[√2] = Z + Z·√2, returned as (a, b) with
    /// |value|² = a + b√2.
    pub fn norm_squared(&self) -> (BigInt, BigInt) {
        let p = self * &self.conj();
        // p is real: p = p0 + p1 ω + p2 ω² + p3 ω³ with p2 = 0, p3 = −p1,
        // and ω − ω³ = √2.
        debug_assert!(p.c[2].is_zero() && p.c[3] == -p.c[1].clone());
        (p.c[0].clone(), p.c[1].clone())
    }

    pub fn to_complex(&self, precision_bits: u32) -> ApproxComplex {
        ApproxComplex::from_cyc(self, precision_bits)
    }

    /// Encloses `self / √2^half_power`.
    pub fn to_complex_over_sqrt2_pow(&self, half_power: u64, precision_bits: u32) -> ApproxComplex {
        if half_power % 2 == 0 {
            self.to_complex(precision_bits).scale_pow2(-((half_power / 2) as i64))
        } else {
            let sqrt2 = CycInt::new(0, 1, 0, -1);
            (self * &sqrt2)
                .to_complex(precision_bits)
                .scale_pow2(-(half_power.div_ceil(2) as i64))
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        let [c0, c1, c2, c3] = &self.c;
        (f(c0) + h * (f(c1) - f(c3)), f(c2) + h * (f(c1) + f(c3)))
    }
}

/// ω^(k mod 8) in canonical form.
pub fn omega_pow(k: i64) -> CycInt {
    CycInt::one().mul_omega_pow(k)
}

impl Add<&CycInt> for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| &self.c[i] + &rhs.c[i]),
        }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}

impl Sub<&CycInt> for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| &self.c[i] - &rhs.c[i]),
        }
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| -&self.c[i]),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl Mul<&CycInt> for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        let mut out: [BigInt; 4] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                if i + j < 4 {
                    out[i + j] += prod;
                } else {
                    out[i + j - 4] -= prod;
                }
            }
        }
        CycInt { c: out }
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl From<i64> for CycInt {
    fn from(n: i64) -> Self {
        CycInt::from_integer(n)
    }
}

impl From<BigUint> for CycInt {
    fn from(n: BigUint) -> Self {
        CycInt::from_integer(BigInt::from(n))
    }
}

/// Renders `a+b*w+c*w^2+d*w^3`, always with all four terms.
impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SUFFIX: [&str; 4] = ["", "*w", "*w^2", "*w^3"];
        write!(f, "{}", self.c[0])?;
        for i in 1..4 {
            let ci = &self.c[i];
            if ci.is_negative() {
                write!(f, "-{}{}", ci.abs(), SUFFIX[i])?;
            } else {
                write!(f, "+{}{}", ci, SUFFIX[i])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt({self})")
    }
}

/// Accepts any sum of terms `c`, `c*w`, `c*w^e` (e ≥ 0, reduced mod 8), as
/// well as bare `w` / `-w^3`.
impl FromStr for CycInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Format("empty Z[ω] literal".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = CycInt::zero();
        for term in terms {
            acc += &parse_term(term)?;
        }
        Ok(acc)
    }
}

fn parse_term(term: &str) -> Result<CycInt> {
    let bad = || Error::Format(format!("cannot parse Z[ω] term '{term}'"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1, &term[1..]),
        Some(b'+') => (1, &term[1..]),
        _ => (1, term),
    };
    let (coef, power) = match body.find('w') {
        None => (body, 0i64),
        Some(pos) => {
            let coef = body[..pos].trim_end_matches('*');
            let rest = &body[pos + 1..];
            let power = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
            };
            (coef, power)
        }
    };
    let coef: BigInt = if coef.is_empty() {
        BigInt::one()
    } else {
        coef.parse().map_err(|_| bad())?
    };
    Ok(omega_pow(power).scale(&(coef * sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(a: i64, b: i64, cc: i64, d: i64) -> CycInt {
        CycInt::new(a, b, cc, d)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&CycInt::omega() * &omega_pow(3), c(-1, 0, 0, 0));
        let one_plus = c(1, 1, 0, 0);
        let one_minus = c(1, -1, 0, 0);
        assert_eq!(&one_plus * &one_minus, c(1, 0, -1, 0));
        assert_eq!(one_plus.pow(2), c(1, 2, 1, 0));
    }

    #[test]
    fn omega_powers() {
        assert_eq!(omega_pow(0), CycInt::one());
        assert_eq!(omega_pow(4), c(-1, 0, 0, 0));
        assert_eq!(omega_pow(-1), c(0, 0, 0, -1));
        assert_eq!(omega_pow(8), CycInt::one());
        for k in 0..8 {
            assert_eq!(&omega_pow(k) * &omega_pow((8 - k) % 8), CycInt::one());
            assert_eq!(omega_pow(k).unit_exponent(), Some(k as u32));
        }
    }

    #[test]
    fn negative_powers_only_for_units() {
        assert_eq!(CycInt::omega().pow_signed(-3).unwrap(), omega_pow(5));
        assert_eq!(c(0, 0, -1, 0).pow_signed(-1).unwrap(), omega_pow(2));
        assert!(matches!(c(1, 1, 0, 0).pow_signed(-1), Err(Error::Domain(_))));
        assert!(CycInt::zero().pow_signed(-1).is_err());
    }

    #[test]
    fn text_round_trip() {
        let v = c(1, -2, 3, 0);
        assert_eq!(v.to_string(), "1-2*w+3*w^2+0*w^3");
        assert_eq!(v.to_string().parse::<CycInt>().unwrap(), v);
        assert_eq!("w".parse::<CycInt>().unwrap(), CycInt::omega());
        assert_eq!("1+3*w^2".parse::<CycInt>().unwrap(), c(1, 0, 3, 0));
        assert_eq!("-w^5".parse::<CycInt>().unwrap(), c(0, 1, 0, 0));
        assert!("1+x".parse::<CycInt>().is_err());
    }

    #[test]
    fn norm_of_one_plus_omega() {
        // |1+ω|² = 2 + √2
        let (a, b) = c(1, 1, 0, 0).norm_squared();
        assert_eq!((a, b), (BigInt::from(2), BigInt::from(1)));
    }

    #[test]
    fn conj_matches_complex_conjugate() {
        let v = c(3, -1, 4, 2);
        let (re, im) = v.to_f64_pair();
        let (cre, cim) = v.conj().to_f64_pair();
        assert!((re - cre).abs() < 1e-12 && (im + cim).abs() < 1e-12);
    }

    fn small() -> impl Strategy<Value = CycInt> {
        prop::array::uniform4(-3i64..=3).prop_map(|[a, b, cc, d]| c(a, b, cc, d))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small(), b in small(), d in small()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
            prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
        }

        #[test]
        fn complex_embedding_is_multiplicative(a in small(), b in small()) {
            let p = 64;
            let prod = (&a * &b).to_complex(p);
            let lhs = a.to_complex(p).mul(&b.to_complex(p));
            let gap = prod.sub(&lhs);
            prop_assert!(gap.center_modulus_f64() <= gap.error_bound_f64());
            prop_assert!(gap.modulus_upper_f64() < 1e-15);
        }
    }
}
