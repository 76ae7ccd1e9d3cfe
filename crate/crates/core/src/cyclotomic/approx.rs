//! Fixed-point complex and real balls.
//!
//! An [`ApproxComplex`] stores a center `(re + i·im)·2^-prec` and a radius
//! `err·2^-prec` such that the exact quantity lies in the closed disc around
//! the center. Every operation widens the radius by a rigorous bound on the
//! propagated and rounding error, so a radius reported at the end of a
//! computation is a proof of accuracy rather than an estimate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CycInt;
use crate::error::{Error, Result};

/// Round-to-nearest division by 2^bits (ties away from zero is fine here;
/// the radius absorbs the half ulp).
fn round_shr(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (bits - 1);
    (x + half).div_floor(&(BigInt::one() << bits))
}

fn ceil_shr(x: &BigUint, bits: u32) -> BigUint {
    if bits == 0 {
        return x.clone();
    }
    let d = BigUint::one() << bits;
    x.div_ceil(&d)
}

/// Converts `m·2^exp` to f64 without intermediate overflow.
pub(crate) fn scaled_to_f64(m: &BigInt, exp: i64) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits() as i64;
    let shift = (bits - 62).max(0);
    let top = (m >> shift as usize).to_f64().unwrap_or(0.0);
    let e = exp + shift;
    // Apply 2^e in two halves to dodge intermediate overflow/underflow.
    let half = (e / 2) as i32;
    top * 2f64.powi(half) * 2f64.powi((e - e / 2) as i32)
}

fn biguint_to_f64_scaled(m: &BigUint, exp: i64) -> f64 {
    scaled_to_f64(&BigInt::from(m.clone()), exp)
}

/// Exact `(mantissa, exponent)` decomposition of a finite f64.
fn decompose_f64(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    (BigInt::from(mant as i64 * sign), exp)
}

/// Upper bound on `sqrt(a² + b²)`, all in integer units.
fn modulus_upper(re: &BigInt, im: &BigInt) -> BigUint {
    let sq = (re * re + im * im).to_biguint().expect("sum of squares");
    let r = sq.sqrt();
    if &r * &r == sq {
        r
    } else {
        r + 1u32
    }
}

fn modulus_lower(re: &BigInt, im: &BigInt) -> BigUint {
    let sq = (re * re + im * im).to_biguint().expect("sum of squares");
    sq.sqrt()
}

/// `floor(√2/2 · 2^prec)`; the true value lies in `[h, h+1)`.
fn half_sqrt2_floor(prec: u32) -> BigUint {
    if prec == 0 {
        return BigUint::zero();
    }
    (BigUint::one() << (2 * prec as usize - 1)).sqrt()
}

/// A complex number known to lie within `err·2^-prec` of
/// `(re + i·im)·2^-prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct ApproxComplex {
    re: BigInt,
    im: BigInt,
    prec: u32,
    err: BigUint,
}

impl ApproxComplex {
    /// Exact Gaussian integer `re + i·im`.
    pub fn from_integers(re: impl Into<BigInt>, im: impl Into<BigInt>, prec: u32) -> Self {
        ApproxComplex {
            re: re.into() << prec as usize,
            im: im.into() << prec as usize,
            prec,
            err: BigUint::zero(),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_integers(0, 0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_integers(1, 0, prec)
    }

    /// `(re + i·im)·2^-prec` with error radius `err·2^-prec`.
    pub fn from_raw(re: BigInt, im: BigInt, prec: u32, err: BigUint) -> Self {
        ApproxComplex { re, im, prec, err }
    }

    /// `(x + i·y)·2^scale`, rounded to `prec` fractional bits.
    pub fn from_f64_scaled(x: f64, y: f64, scale: i64, prec: u32) -> Self {
        let mut rounding = BigUint::zero();
        let mut conv = |v: f64| {
            let (m, e) = decompose_f64(v);
            let shift = e + scale + prec as i64;
            if shift >= 0 {
                m << shift as usize
            } else {
                let r = round_shr(&m, (-shift) as u32);
                if (&r << (-shift) as usize) != m {
                    rounding = BigUint::one();
                }
                r
            }
        };
        let re = conv(x);
        let im = conv(y);
        ApproxComplex {
            re,
            im,
            prec,
            err: rounding,
        }
    }

    /// Evaluates an element of Z[ω] at ω = (√2/2)(1 + i).
    pub fn from_cyc(a: &CycInt, prec: u32) -> Self {
        let [c0, c1, c2, c3] = a.coefficients();
        let h = BigInt::from(half_sqrt2_floor(prec));
        let dr = c1 - c3;
        let di = c1 + c3;
        let re = (c0 << prec as usize) + &dr * &h;
        let im = (c2 << prec as usize) + &di * &h;
        // Each unit of h is short by less than one ulp.
        let err = dr.magnitude() + di.magnitude();
        ApproxComplex { re, im, prec, err }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn re_raw(&self) -> &BigInt {
        &self.re
    }

    pub fn im_raw(&self) -> &BigInt {
        &self.im
    }

    pub fn err_raw(&self) -> &BigUint {
        &self.err
    }

    pub fn re_f64(&self) -> f64 {
        scaled_to_f64(&self.re, -(self.prec as i64))
    }

    pub fn im_f64(&self) -> f64 {
        scaled_to_f64(&self.im, -(self.prec as i64))
    }

    pub fn error_bound_f64(&self) -> f64 {
        biguint_to_f64_scaled(&self.err, -(self.prec as i64))
    }

    /// `log₂` of the error radius (−∞ when exact).
    pub fn error_bound_log2(&self) -> f64 {
        log2_of(&self.err) - self.prec as f64
    }

    /// Modulus of the center, as f64.
    pub fn center_modulus_f64(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }

    /// Upper bound on the modulus of any point of the ball.
    pub fn modulus_upper_f64(&self) -> f64 {
        biguint_to_f64_scaled(&(modulus_upper(&self.re, &self.im) + &self.err), -(self.prec as i64))
    }

    /// Re-expresses the ball at another precision. Lowering the precision
    /// rounds the center and widens the radius accordingly.
    pub fn with_precision(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (prec - self.prec) as usize;
                ApproxComplex {
                    re: &self.re << s,
                    im: &self.im << s,
                    prec,
                    err: &self.err << s,
                }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                ApproxComplex {
                    re: round_shr(&self.re, s),
                    im: round_shr(&self.im, s),
                    prec,
                    err: ceil_shr(&self.err, s) + 1u32,
                }
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.with_precision(p), other.with_precision(p))
    }

    /// Widens the radius by `extra·2^-prec`.
    pub fn widen_raw(&self, extra: &BigUint) -> Self {
        let mut out = self.clone();
        out.err += extra;
        out
    }

    /// Widens the radius by another ball's upper modulus bound; used to fold
    /// a bounded but unknown term into the uncertainty.
    pub fn widen_by(&self, bound: &ApproxComplex) -> Self {
        let (a, b) = self.aligned(bound);
        let extra = modulus_upper(&b.re, &b.im) + &b.err;
        a.widen_raw(&extra)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        ApproxComplex {
            re: a.re + b.re,
            im: a.im + b.im,
            prec: a.prec,
            err: a.err + b.err,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ApproxComplex {
            re: -&self.re,
            im: -&self.im,
            prec: self.prec,
            err: self.err.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        ApproxComplex {
            re: self.re.clone(),
            im: -&self.im,
            prec: self.prec,
            err: self.err.clone(),
        }
    }

    /// Multiplies by 2^k exactly (k may be negative).
    pub fn scale_pow2(&self, k: i64) -> Self {
        if k >= 0 {
            ApproxComplex {
                re: &self.re << k as usize,
                im: &self.im << k as usize,
                prec: self.prec,
                err: &self.err << k as usize,
            }
        } else {
            ApproxComplex {
                re: self.re.clone(),
                im: self.im.clone(),
                prec: self.prec + k.unsigned_abs() as u32,
                err: self.err.clone(),
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let re2 = &a.re * &b.re - &a.im * &b.im;
        let im2 = &a.re * &b.im + &a.im * &b.re;
        let ma = modulus_upper(&a.re, &a.im);
        let mb = modulus_upper(&b.re, &b.im);
        let prop = &ma * &b.err + &mb * &a.err + &a.err * &b.err;
        let err = ceil_shr(&prop, p) + 1u32;
        ApproxComplex {
            re: round_shr(&re2, p),
            im: round_shr(&im2, p),
            prec: p,
            err,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = ApproxComplex::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Ball quotient. Fails if the divisor ball may contain zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other);
        let p = a.prec as usize;
        let low = modulus_lower(&b.re, &b.im);
        if low <= b.err {
            return Err(Error::Domain(
                "division by an approximate value whose error disc contains zero".into(),
            ));
        }
        let den = &b.re * &b.re + &b.im * &b.im;
        let num_re = (&a.re * &b.re + &a.im * &b.im) << p;
        let num_im = (&a.im * &b.re - &a.re * &b.im) << p;
        let round_div = |n: &BigInt| -> BigInt {
            let twice: BigInt = n * 2 + &den;
            twice.div_floor(&(&den * 2))
        };
        let re = round_div(&num_re);
        let im = round_div(&num_im);
        let mc = modulus_upper(&re, &im) + 1u32;
        let b_low = low - &b.err;
        let numer: BigUint = (&a.err << p) + &mc * &b.err;
        let err = numer.div_ceil(&b_low) + 1u32;
        Ok(ApproxComplex {
            re,
            im,
            prec: a.prec,
            err,
        })
    }

    /// `|z|` as a real ball; the modulus is 1-Lipschitz, so the radius only
    /// grows by the square-root truncation.
    pub fn modulus(&self) -> Self {
        ApproxComplex {
            re: BigInt::from(modulus_lower(&self.re, &self.im)),
            im: BigInt::zero(),
            prec: self.prec,
            err: &self.err + 1u32,
        }
    }

    /// `z / |z|`.
    pub fn normalized(&self) -> Result<Self> {
        self.div(&self.modulus())
    }

    /// Nearest Gaussian integer to the center.
    pub fn round_to_gaussian(&self) -> (BigInt, BigInt) {
        (round_shr(&self.re, self.prec), round_shr(&self.im, self.prec))
    }

    /// Upper bound on the distance from every point of the ball to the
    /// Gaussian integer `(re, im)`, as f64.
    pub fn distance_upper_to(&self, re: &BigInt, im: &BigInt) -> f64 {
        let dr = &self.re - (re << self.prec as usize);
        let di = &self.im - (im << self.prec as usize);
        biguint_to_f64_scaled(&(modulus_upper(&dr, &di) + &self.err), -(self.prec as i64))
    }

    /// Distance from the center to `(re, im)`, as f64.
    pub fn center_distance_to(&self, re: &BigInt, im: &BigInt) -> f64 {
        let dr = &self.re - (re << self.prec as usize);
        let di = &self.im - (im << self.prec as usize);
        biguint_to_f64_scaled(&modulus_lower(&dr, &di), -(self.prec as i64))
    }
}

fn log2_of(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0);
    let top = (x >> shift as usize).to_f64().unwrap_or(1.0);
    top.log2() + shift as f64
}

impl fmt::Debug for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ApproxComplex({:.12e} + {:.12e}i ± {:.3e}, prec={})",
            self.re_f64(),
            self.im_f64(),
            self.error_bound_f64(),
            self.prec
        )
    }
}

/// A real number known to lie within `err·2^-prec` of `mant·2^-prec`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ApproxReal {
    mant: BigInt,
    prec: u32,
    err: BigUint,
}

impl ApproxReal {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.mant, -(self.prec as i64))
    }

    pub fn error_bound_f64(&self) -> f64 {
        biguint_to_f64_scaled(&self.err, -(self.prec as i64))
    }

    /// Decimal rendering rounded to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10u32).pow(digits as u32);
        self.render(round_shr(&(&self.mant * &ten), self.prec), &ten, digits)
    }

    /// Decimal rendering truncated toward zero after `digits` places.
    pub fn to_decimal_truncated(&self, digits: usize) -> String {
        let ten = BigInt::from(10u32).pow(digits as u32);
        let prod = &self.mant * &ten;
        let d = BigInt::one() << self.prec as usize;
        let scaled = if prod.is_negative() {
            -((-prod) / &d)
        } else {
            prod / &d
        };
        self.render(scaled, &ten, digits)
    }

    fn render(&self, scaled: BigInt, ten: &BigInt, digits: usize) -> String {
        let neg = scaled.sign() == Sign::Minus;
        let (int, frac) = scaled.abs().div_rem(ten);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
        }
    }
}

/// `log₂|1+ω| = ½·log₂(2+√2)` to `precision_bits` fractional bits.
pub fn log2_abs_one_plus_omega(precision_bits: u32) -> ApproxReal {
    let guard = 32;
    let w = precision_bits + guard;
    let wu = w as usize;
    // y = (2 + √2)/2 = 1 + √2/2 ∈ [1, 2), truncated to w bits.
    let one = BigUint::one() << wu;
    let two = BigUint::from(2u32) << wu;
    let mut y = &one + half_sqrt2_floor(w);
    // log₂(2+√2) = 1 + log₂(y); extract the bits of log₂(y) by squaring.
    let steps = precision_bits as usize + 8;
    let mut bits = BigUint::zero();
    for _ in 0..steps {
        y = (&y * &y) >> wu;
        bits <<= 1;
        if y >= two {
            bits |= BigUint::one();
            y >>= 1;
        }
    }
    // bits / 2^steps approximates log₂(y) from below within 2^-steps plus
    // the guard-absorbed rounding; add 1 and halve.
    let total = (BigUint::one() << steps) + bits;
    // value = total / 2^(steps+1); bring to precision_bits.
    let shift = (steps + 1 - precision_bits as usize) as u32;
    let mant = round_shr(&BigInt::from(total), shift);
    ApproxReal {
        mant,
        prec: precision_bits,
        err: BigUint::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{omega_pow, CycInt};

    #[test]
    fn omega_embedding() {
        let w = CycInt::omega().to_complex(64);
        assert!((w.re_f64() - 0.7071067811865476).abs() < 1e-15);
        assert!((w.im_f64() - 0.7071067811865476).abs() < 1e-15);
        assert!(w.error_bound_f64() < 2f64.powi(-60));

        let one_plus_i = CycInt::new(1, 0, 1, 0).to_complex(64);
        assert_eq!(one_plus_i.error_bound_f64(), 0.0);
        assert_eq!((one_plus_i.re_f64(), one_plus_i.im_f64()), (1.0, 1.0));

        let v = CycInt::new(1, 1, 0, 0).to_complex(64);
        assert!((v.re_f64() - 1.7071067811865475).abs() < 1e-12);
        assert!((v.im_f64() - 0.7071067811865476).abs() < 1e-12);
    }

    #[test]
    fn unit_circle_for_all_omega_powers() {
        for k in 0..8 {
            let z = omega_pow(k).to_complex(80);
            assert!((z.center_modulus_f64() - 1.0).abs() <= z.error_bound_f64() + 1e-15);
        }
    }

    #[test]
    fn alpha_zero_constant() {
        let a = log2_abs_one_plus_omega(64);
        assert_eq!(a.to_decimal_truncated(2), "0.88");
        assert_eq!(a.to_decimal(2), "0.89");
        assert_eq!(a.to_decimal_truncated(5), "0.88577");
        let expected = (2.0 * (std::f64::consts::PI / 8.0).cos()).log2();
        assert!((a.to_f64() - expected).abs() < 1e-15);
        let modulus = 2f64.powf(a.to_f64());
        assert_eq!(format!("{modulus:.5}"), "1.84776");
        assert!((modulus - 2.0 * (std::f64::consts::PI / 8.0).cos()).abs() < 2f64.powi(-40));
        assert!(a.error_bound_f64() <= 2f64.powi(-64));
    }

    #[test]
    fn high_precision_constant_is_stable() {
        let lo = log2_abs_one_plus_omega(64);
        let hi = log2_abs_one_plus_omega(256);
        let lo_again = hi_to(&hi, 64);
        assert!((&lo.mant - &lo_again).magnitude() <= &BigUint::from(2u32));
    }

    fn hi_to(a: &ApproxReal, prec: u32) -> BigInt {
        round_shr(&a.mant, a.prec - prec)
    }

    #[test]
    fn division_tracks_error() {
        let p = 96;
        let a = CycInt::new(3, 1, -2, 5).to_complex(p);
        let b = CycInt::new(1, 1, 0, 0).to_complex(p);
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        let gap = back.sub(&a);
        assert!(gap.center_modulus_f64() <= gap.error_bound_f64());
        assert!(gap.error_bound_f64() < 1e-25);
    }

    #[test]
    fn division_by_ball_around_zero_fails() {
        let p = 32;
        let z = ApproxComplex::from_raw(BigInt::from(1), BigInt::zero(), p, BigUint::from(5u32));
        assert!(ApproxComplex::one(p).div(&z).is_err());
    }

    #[test]
    fn f64_scaled_import() {
        let v = ApproxComplex::from_f64_scaled(0.75, -1.5, 10, 8);
        assert_eq!(v.re_f64(), 768.0);
        assert_eq!(v.im_f64(), -1536.0);
        assert_eq!(v.error_bound_f64(), 0.0);
        let tiny = ApproxComplex::from_f64_scaled(0.1, 0.0, -20, 40);
        assert!(tiny.error_bound_f64() > 0.0);
        assert!((tiny.re_f64() - 0.1 * 2f64.powi(-20)).abs() <= tiny.error_bound_f64());
    }

    #[test]
    fn lowering_precision_keeps_enclosure() {
        let x = CycInt::new(1, 1, 1, 1).to_complex(200);
        let y = x.with_precision(20);
        let gap = y.sub(&x);
        assert!(gap.center_modulus_f64() <= gap.error_bound_f64());
    }

    #[test]
    fn scale_pow2_is_exact_upwards() {
        let x = CycInt::new(1, 0, 1, 0).to_complex(16);
        let y = x.scale_pow2(-3);
        assert_eq!(y.re_f64(), 0.125);
        assert_eq!(y.error_bound_f64(), 0.0);
    }
}
