//! Exact recovery of weight-enumerator data from oracles that only answer
//! within an additive error of 2^{α·L}.
//!
//! [`recover_coefficients`] pads the code with an identity block, which
//! multiplies the enumerator by (1+q)^k while the error grows only like
//! 2^{αk}, and then interpolates at n+1 points near 1.
//! [`recover_value_at_omega`] uses the wreath codes C(a,k) = pad(C, a) ≀ I_k
//! at ω, whose enumerator splits into four residue classes.

mod coefficients;
mod omega;
mod oracle;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use coefficients::{recover_coefficients, CoefficientRecovery};
pub use omega::{recover_value_at_omega, OmegaRecovery};
pub use oracle::{NoiseMode, NoisyOracle, OracleQuery, SimulatedOracle};

use crate::codes::{LinearCode, Semantics};
use crate::cyclotomic::{omega_pow, ApproxComplex, CycInt};
use crate::error::{Error, Result};

/// log₂|1+ω| = log₂(2cos(π/8)) ≈ 0.885777.
pub fn alpha0() -> f64 {
    (2.0 * (std::f64::consts::PI / 8.0).cos()).log2()
}

/// log₂ tan(π/8) = log₂(√2 − 1).
pub(crate) fn log2_tan_pi_8() -> f64 {
    (std::f64::consts::SQRT_2 - 1.0).log2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryParams {
    pub alpha: f64,
    /// Disc radius around 1 for the interpolation points.
    pub r: Option<f64>,
    /// Fixed padding or wreath size; chosen automatically when absent.
    pub k: Option<usize>,
    /// Working precision; chosen automatically when absent.
    pub precision_bits: Option<u32>,
    /// Bound on the per-equation error used when choosing k at ω.
    pub target_residual: f64,
}

impl RecoveryParams {
    pub fn new(alpha: f64) -> Self {
        RecoveryParams {
            alpha,
            r: None,
            k: None,
            precision_bits: None,
            target_residual: 0.05,
        }
    }

    /// (2 − 2^α)/2, halfway to the largest radius with β < 1.
    pub fn default_r(alpha: f64) -> f64 {
        (2.0 - alpha.exp2()) / 2.0
    }
}

/// The four partial sums M_j = Σ_{|w| ≡ j (mod 4)} ω^{|w|}, each of the form
/// m_j·ω^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueDecomposition {
    pub m: [BigInt; 4],
}

impl ResidueDecomposition {
    pub fn from_code(c: &LinearCode) -> Result<Self> {
        let dist = c.weight_distribution(Semantics::Codeword)?;
        let mut m: [BigInt; 4] = Default::default();
        for (w, a) in dist.counts().iter().enumerate() {
            // ω^w = ±ω^{w mod 4}
            let sign = if (w / 4) % 2 == 0 { 1 } else { -1 };
            m[w % 4] += BigInt::from(a.clone()) * sign;
        }
        Ok(ResidueDecomposition { m })
    }

    pub fn part(&self, j: usize) -> CycInt {
        CycInt::from_integer(self.m[j].clone()).mul_omega_pow(j as i64)
    }

    pub fn parts(&self) -> [CycInt; 4] {
        std::array::from_fn(|j| self.part(j))
    }

    pub fn total(&self) -> CycInt {
        let mut acc = CycInt::zero();
        for j in 0..4 {
            acc += &self.part(j);
        }
        acc
    }

    /// Σ_j M_j (1 + ω^{n₁−2j})^k, which equals w_{pad(C,a) ≀ I_k}(ω) with
    /// n₁ = n + a whenever k ≡ 1 (mod 8).
    pub fn wreath_identity(&self, n1: usize, k: u64) -> CycInt {
        let mut acc = CycInt::zero();
        for j in 0..4 {
            let base = CycInt::one() + omega_pow(n1 as i64 - 2 * j as i64);
            acc += &(self.part(j as usize) * base.pow(k));
        }
        acc
    }
}

/// Smallest a ≥ 1 with n + a ≡ 1 + 2s (mod 8).
pub fn pad_for_residue(n: usize, s: usize) -> usize {
    let target = (1 + 2 * s) % 8;
    let a = (target + 8 - n % 8) % 8;
    if a == 0 {
        8
    } else {
        a
    }
}

/// The error bound used by [`choose_k`], as log₂.
pub fn omega_bound_log2(n: usize, d: usize, alpha: f64, a_max: usize, k: usize) -> f64 {
    let noise = alpha * (n + a_max) as f64 + k as f64 * (alpha - alpha0());
    let decay = (d + 1) as f64 + k as f64 * log2_tan_pi_8();
    log2_sum(noise, decay)
}

fn log2_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Smallest k ≡ 1 (mod 8) with
/// 2^{α(n+a_max)}·(2^α/|1+ω|)^k + 2^{d+1}·tan(π/8)^k < target.
pub fn choose_k(n: usize, d: usize, alpha: f64, a_max: usize, target_residual: f64) -> Result<usize> {
    check_alpha_omega(alpha)?;
    if !(target_residual > 0.0) {
        return Err(Error::Contract(format!("target residual {target_residual} must be positive")));
    }
    let goal = target_residual.log2();
    let mut k = 1usize;
    while k <= 1 << 24 {
        if omega_bound_log2(n, d, alpha, a_max, k) < goal {
            return Ok(k);
        }
        k += 8;
    }
    Err(Error::resource(format!(
        "no k ≤ 2^24 meets the residual target {target_residual} at alpha {alpha}"
    )))
}

pub(crate) fn check_alpha_omega(alpha: f64) -> Result<()> {
    let a0 = alpha0();
    if !(alpha > 0.0 && alpha < a0) {
        return Err(Error::Contract(format!(
            "alpha = {alpha} must lie in (0, log2|1+ω| ≈ {a0:.6}); at or above the threshold the value at ω is not recoverable"
        )));
    }
    Ok(())
}

/// An upper bound on 2^x in ulps of precision `prec`, padded by a relative
/// 2^-40 to absorb f64 rounding in `x`.
pub(crate) fn pow2_upper_ulps(x: f64, prec: u32) -> BigUint {
    let e = x + prec as f64;
    if e < -1.0 {
        return BigUint::one();
    }
    let fl = e.floor();
    let frac = e - fl;
    let mant = (frac.exp2() * (1.0 + 2f64.powi(-40)) * 2f64.powi(52)).ceil() as u64;
    let shift = fl as i64 - 52;
    if shift >= 0 {
        BigUint::from(mant) << shift as usize
    } else {
        (BigUint::from(mant) >> (-shift) as usize) + 1u32
    }
}

/// Decimal scientific rendering of `m·2^exp2`, valid far beyond f64 range.
pub(crate) fn format_scaled(m: &BigInt, exp2: i64) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let sign = if m.is_negative() { "-" } else { "" };
    let mag = m.magnitude();
    let bits = mag.bits() as i64;
    let shift = (bits - 60).max(0);
    let top = (mag >> shift as usize).to_f64().unwrap_or(1.0);
    let log10 = (top.log2() + (shift + exp2) as f64) * std::f64::consts::LOG10_2;
    let e = log10.floor();
    let mantissa = 10f64.powf(log10 - e);
    format!("{sign}{mantissa:.12}e{}", e as i64)
}

/// A ball rendered for reports: center and radius in decimal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallReport {
    pub re: String,
    pub im: String,
    pub radius: String,
}

impl BallReport {
    pub fn from_ball(b: &ApproxComplex) -> Self {
        let p = -(b.precision() as i64);
        BallReport {
            re: format_scaled(b.re_raw(), p),
            im: format_scaled(b.im_raw(), p),
            radius: format_scaled(&BigInt::from(b.err_raw().clone()), p),
        }
    }
}

/// Rounds a ball to the nearest rational integer and returns it with a
/// rigorous upper bound on the distance to it.
pub(crate) fn nearest_integer(b: &ApproxComplex) -> (BigInt, f64) {
    let (re, _) = b.round_to_gaussian();
    let dist = b.distance_upper_to(&re, &BigInt::zero());
    (re, dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{pad_zeros, trivial_code, wreath_sum};
    use proptest::prelude::*;

    #[test]
    fn threshold_constant() {
        assert!((alpha0() - 0.885_776_65).abs() < 1e-8);
        assert!((log2_tan_pi_8().exp2() - 0.414_213_56).abs() < 1e-8);
    }

    #[test]
    fn ratio_identities() {
        let p = 80;
        let one_plus_w = (CycInt::one() + CycInt::omega()).to_complex(p);
        let check = |num: CycInt, expect: Option<CycInt>, modulus: f64| {
            let r = num.to_complex(p).div(&one_plus_w).unwrap();
            assert!((r.center_modulus_f64() - modulus).abs() < 1e-12);
            if let Some(e) = expect {
                let d = r.sub(&e.to_complex(p));
                assert!(d.center_modulus_f64() < 1e-12);
            }
        };
        let t = std::f64::consts::SQRT_2 - 1.0;
        // 1 − iω = 1 − ω³ and 1 + ω^{−1} coincide.
        check(CycInt::new(1, 0, 0, -1), Some(omega_pow(-1)), 1.0);
        check(CycInt::one() + omega_pow(-1), Some(omega_pow(-1)), 1.0);
        check(CycInt::new(1, -1, 0, 0), None, t);
        check(CycInt::new(1, 0, 0, 1), None, t);
    }

    #[test]
    fn residue_examples() {
        let c = LinearCode::from_rows(&["110", "011"]).unwrap();
        let r = ResidueDecomposition::from_code(&c).unwrap();
        assert_eq!(r.parts(), [CycInt::one(), CycInt::zero(), CycInt::new(0, 0, 3, 0), CycInt::zero()]);
        assert_eq!(r.total(), CycInt::new(1, 0, 3, 0));
        let rep = LinearCode::from_rows(&["111"]).unwrap();
        let r = ResidueDecomposition::from_code(&rep).unwrap();
        assert_eq!(r.total(), CycInt::new(1, 0, 0, 1));
        assert_eq!(r.total(), rep.evaluate_at_omega().unwrap());
    }

    #[test]
    fn pads() {
        for n in 0..20 {
            for s in 0..4 {
                let a = pad_for_residue(n, s);
                assert!((1..=8).contains(&a));
                assert_eq!((n + a) % 8, 1 + 2 * s);
            }
        }
    }

    #[test]
    fn choose_k_examples() {
        let k = choose_k(1, 1, 1e-9, 8, 0.05).unwrap();
        assert!(k == 9 || k == 17, "{k}");
        let mut prev = 0;
        for alpha in [0.5, 0.7, 0.8, 0.85, 0.87] {
            let k = choose_k(3, 2, alpha, 8, 0.05).unwrap();
            assert_eq!(k % 8, 1);
            assert!(k >= prev);
            assert!(omega_bound_log2(3, 2, alpha, 8, k) < 0.05f64.log2());
            if k > 8 {
                assert!(omega_bound_log2(3, 2, alpha, 8, k - 8) >= 0.05f64.log2());
            }
            prev = k;
        }
        assert!(choose_k(3, 2, 0.87, 8, 0.05).unwrap() > 4 * choose_k(3, 2, 0.5, 8, 0.05).unwrap());
        assert!(matches!(choose_k(3, 2, 0.9, 8, 0.05), Err(Error::Contract(_))));
        let k6 = choose_k(3, 2, 0.8, 6, 0.05).unwrap();
        assert!((100..=200).contains(&k6), "{k6}");
    }

    #[test]
    fn bounds_helpers() {
        let u = pow2_upper_ulps(3.0, 4);
        assert!(u >= BigUint::from(128u32) && u <= BigUint::from(129u32));
        assert_eq!(format_scaled(&BigInt::from(3), 0), "3.000000000000e0");
        assert!(format_scaled(&BigInt::from(1), 5000).ends_with("e1505"));
    }

    fn arb_code(max_n: usize, max_k: usize) -> impl Strategy<Value = LinearCode> {
        (1usize..=max_n, 0usize..=max_k).prop_flat_map(|(n, k)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), k).prop_map(move |rows| {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
                    .collect();
                if rows.is_empty() {
                    LinearCode::empty(n)
                } else {
                    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
                    LinearCode::from_rows(&refs).unwrap()
                }
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn residues_sum_to_value(c in arb_code(12, 6)) {
            let r = ResidueDecomposition::from_code(&c).unwrap();
            prop_assert_eq!(r.total(), c.evaluate_at_omega().unwrap());
        }

        #[test]
        fn wreath_identity_small(c in arb_code(4, 3), s in 0usize..4) {
            let base = c.basis();
            let a = pad_for_residue(base.length(), s);
            let k = 9;
            let w = wreath_sum(&pad_zeros(&base, a), &trivial_code(k)).unwrap();
            let r = ResidueDecomposition::from_code(&base).unwrap();
            prop_assert_eq!(w.evaluate_at_omega().unwrap(), r.wreath_identity(base.length() + a, k as u64));
        }
    }
}
