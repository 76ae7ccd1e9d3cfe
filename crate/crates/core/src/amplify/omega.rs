use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{
    check_alpha_omega, choose_k, log2_tan_pi_8, nearest_integer, pad_for_residue, pow2_upper_ulps,
    BallReport, NoisyOracle, OracleQuery, RecoveryParams,
};
use crate::cyclotomic::{omega_pow, ApproxComplex, CycInt};
use crate::error::{Error, Result};

/// Result of [`recover_value_at_omega`] with everything needed to audit it.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaRecovery {
    #[serde(serialize_with = "cyc_as_text")]
    pub value: CycInt,
    pub k: usize,
    pub pads: [usize; 4],
    pub precision_bits: u32,
    /// `pad(C, a) ≀ I_k` for each query.
    pub queried_codes: Vec<String>,
    pub answers: Vec<BallReport>,
    /// The integers m_s with M_s = m_s·ω^s.
    #[serde(serialize_with = "ints_as_text")]
    pub residue_coefficients: Vec<BigInt>,
    /// Certified distance from each m_s estimate to its rounded value.
    pub certified_residuals: Vec<f64>,
}

fn cyc_as_text<S: Serializer>(v: &CycInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ints_as_text<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Recovers w_C(ω) for a hidden [n, d] code from four noisy wreath queries.
///
/// With n + a_s ≡ 1 + 2s (mod 8) and k ≡ 1 (mod 8),
/// w_{C(a_s,k)}(ω)/(1+ω)^k = M_s + ω^{−1}·M_{s+1} + (terms of modulus
/// ≤ 2^d·tan(π/8)^k); the cyclic system is inverted by
/// M_s = ½ Σ_t (ω³)^t μ_{s+t}.
pub fn recover_value_at_omega(
    n: usize,
    d: usize,
    oracle: &dyn NoisyOracle,
    params: &RecoveryParams,
) -> Result<OmegaRecovery> {
    check_alpha_omega(params.alpha)?;
    if oracle.code_length() != n {
        return Err(Error::input(format!(
            "the oracle holds a code of length {}, not {n}",
            oracle.code_length()
        )));
    }
    let pads: [usize; 4] = std::array::from_fn(|s| pad_for_residue(n, s));
    let a_max = *pads.iter().max().expect("four pads");
    let k = match params.k {
        Some(k) if k % 8 != 1 => {
            return Err(Error::Contract(format!("k = {k} must be ≡ 1 (mod 8)")));
        }
        Some(k) => k,
        None => choose_k(n, d, params.alpha, a_max, params.target_residual)?,
    };
    let prec = params
        .precision_bits
        .unwrap_or(96 + d as u32 + (usize::BITS - k.leading_zeros()));

    let den = CycInt::new(1, 1, 0, 0).pow(k as u64).to_complex(prec);
    let decay_log2 = (d + 1) as f64 + k as f64 * log2_tan_pi_8() + 1e-9;

    let answers: Vec<ApproxComplex> = pads
        .par_iter()
        .map(|&pad| oracle.query(&OracleQuery::WreathAtOmega { pad, k }, prec))
        .collect::<Result<_>>()?;
    let mut mu = Vec::with_capacity(4);
    for (s, w) in answers.iter().enumerate() {
        let q = OracleQuery::WreathAtOmega { pad: pads[s], k };
        let w = match oracle.error_bound_log2(&q) {
            Some(e) => w.widen_raw(&pow2_upper_ulps(e, w.precision())),
            None => w.clone(),
        };
        let m = w.div(&den)?;
        mu.push(m.widen_raw(&pow2_upper_ulps(decay_log2, m.precision())));
    }

    let mut coeffs = Vec::with_capacity(4);
    let mut residuals = Vec::with_capacity(4);
    let mut value = CycInt::zero();
    for s in 0..4 {
        let mut acc = ApproxComplex::zero(prec);
        for (t, m) in mu.iter().cycle().skip(s).take(4).enumerate() {
            let unit = omega_pow(3 * t as i64 - s as i64).to_complex(prec);
            acc = acc.add(&unit.mul(m));
        }
        let x = acc.scale_pow2(-1);
        let (ms, dist) = nearest_integer(&x);
        if dist > 0.25 {
            return Err(Error::Certification(format!(
                "residue class {s}: certified residual {dist:.3e} exceeds 1/4 (k = {k}, precision {prec})"
            )));
        }
        value += &CycInt::from_integer(ms.clone()).mul_omega_pow(s as i64);
        coeffs.push(ms);
        residuals.push(dist);
    }

    Ok(OmegaRecovery {
        value,
        k,
        pads,
        precision_bits: prec,
        queried_codes: pads.iter().map(|a| format!("pad(C,{a}) wreath I_{k}")).collect(),
        answers: answers.iter().map(BallReport::from_ball).collect(),
        residue_coefficients: coeffs,
        certified_residuals: residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{NoiseMode, SimulatedOracle};
    use super::*;
    use crate::codes::LinearCode;

    fn run(rows: &[&str], alpha: f64, mode: NoiseMode, seed: u64) -> OmegaRecovery {
        let c = LinearCode::from_rows(rows).unwrap();
        let o = SimulatedOracle::new(&c, alpha, mode, seed).unwrap().omega_only();
        recover_value_at_omega(c.length(), c.dimension(), &o, &RecoveryParams::new(alpha)).unwrap()
    }

    #[test]
    fn examples() {
        let r = run(&["110", "011"], 0.8, NoiseMode::Adversarial, 1);
        assert_eq!(r.value, CycInt::new(1, 0, 3, 0));
        assert_eq!(r.k % 8, 1);
        let r = run(&["111"], 0.8, NoiseMode::Adversarial, 2);
        assert_eq!(r.value, CycInt::new(1, 0, 0, 1));
        let r = run(&["1011", "0110"], 0.5, NoiseMode::Uniform, 3);
        assert_eq!(r.value, LinearCode::from_rows(&["1011", "0110"]).unwrap().evaluate_at_omega().unwrap());
    }

    #[test]
    fn contracts() {
        let c = LinearCode::from_rows(&["11"]).unwrap();
        let o = SimulatedOracle::new(&c, 0.9, NoiseMode::Adversarial, 0).unwrap();
        assert!(matches!(
            recover_value_at_omega(2, 1, &o, &RecoveryParams::new(0.9)),
            Err(Error::Contract(_))
        ));
        let mut p = RecoveryParams::new(0.5);
        p.k = Some(8);
        assert!(matches!(recover_value_at_omega(2, 1, &o, &p), Err(Error::Contract(_))));
        assert!(matches!(
            recover_value_at_omega(3, 1, &o, &RecoveryParams::new(0.5)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn too_small_k_fails_loudly() {
        let c = LinearCode::from_rows(&["1100", "0111"]).unwrap();
        let o = SimulatedOracle::new(&c, 0.8, NoiseMode::Adversarial, 5).unwrap();
        let mut p = RecoveryParams::new(0.8);
        p.k = Some(1);
        assert!(matches!(recover_value_at_omega(4, 2, &o, &p), Err(Error::Certification(_))));
    }
}
