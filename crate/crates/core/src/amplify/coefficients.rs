use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::{nearest_integer, pow2_upper_ulps, BallReport, NoisyOracle, OracleQuery, RecoveryParams};
use crate::codes::{Semantics, WeightDistribution};
use crate::cyclotomic::{ApproxComplex, CycInt};
use crate::error::{Error, Result};

const MAX_PRECISION: u32 = 1 << 16;
const MAX_K: usize = 1 << 20;
const ATTEMPTS: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRecovery {
    pub distribution: WeightDistribution,
    pub k: usize,
    pub precision_bits: u32,
    pub r: f64,
    /// The points are ζ^j with ζ = e^{iπ/2^angle_exponent}.
    pub angle_exponent: u32,
    pub point_indices: Vec<i64>,
    pub answers: Vec<BallReport>,
    /// Certified distance from each coefficient estimate to its integer.
    pub certified_residuals: Vec<f64>,
    pub attempts: usize,
}

/// e^{iπ/2^m} for m ≥ 2 by repeated half-angles from ω.
fn root_of_unity(m: u32, prec: u32) -> Result<ApproxComplex> {
    let guard = prec + 2 * m + 16;
    let mut z = CycInt::omega().to_complex(guard);
    for _ in 2..m {
        z = ApproxComplex::one(guard).add(&z).normalized()?;
    }
    Ok(z.with_precision(prec))
}

/// The n+1 point indices j ∈ [−⌊n/2⌋, ⌈n/2⌉] and the angle exponent m: the
/// smallest m ≥ 2 keeping every ζ^j within r of 1.
fn choose_points(n: usize, r: f64) -> Result<(Vec<i64>, u32)> {
    let lo = -((n / 2) as i64);
    let hi = n.div_ceil(2) as i64;
    let idx: Vec<i64> = (lo..=hi).collect();
    let chord = |angle: f64| 2.0 * (angle / 2.0).sin();
    let mut m = 2u32;
    while chord(hi as f64 * std::f64::consts::PI / (m as f64).exp2()) >= r * (1.0 - 1e-9) {
        m += 1;
        if m > 60 {
            return Err(Error::Contract(format!("radius r = {r} is too small for {} points", n + 1)));
        }
    }
    let spacing = chord(std::f64::consts::PI / (m as f64).exp2());
    if idx.len() > 1 && spacing <= r / (2.0 * (n + 1) as f64) {
        return Err(Error::Internal(format!(
            "point spacing {spacing} does not exceed r/(2(n+1)) = {}",
            r / (2.0 * (n + 1) as f64)
        )));
    }
    Ok((idx, m))
}

fn points_at(idx: &[i64], m: u32, prec: u32) -> Result<Vec<ApproxComplex>> {
    let zeta = root_of_unity(m, prec)?;
    Ok(idx
        .iter()
        .map(|&j| {
            let p = zeta.pow(j.unsigned_abs());
            if j < 0 {
                p.conj()
            } else {
                p
            }
        })
        .collect())
}

/// `lag[j][i]`: coefficient of q^i in the Lagrange basis polynomial of
/// point j, so w_i = Σ_j lag[j][i]·w(q_j).
fn lagrange(points: &[ApproxComplex]) -> Result<Vec<Vec<ApproxComplex>>> {
    let prec = points.first().map_or(64, ApproxComplex::precision);
    let mut out = Vec::with_capacity(points.len());
    for (j, qj) in points.iter().enumerate() {
        let mut poly = vec![ApproxComplex::one(prec)];
        let mut denom = ApproxComplex::one(prec);
        for (l, ql) in points.iter().enumerate() {
            if l == j {
                continue;
            }
            let mut next = vec![ApproxComplex::zero(prec); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(ql));
            }
            poly = next;
            denom = denom.mul(&qj.sub(ql));
        }
        out.push(poly.iter().map(|c| c.div(&denom)).collect::<Result<Vec<_>>>()?);
    }
    Ok(out)
}

fn log2_upper(b: &ApproxComplex) -> f64 {
    b.modulus_upper_f64().log2()
}

/// Smallest k with max_i Σ_j |lag[j][i]|·2^{err(k)}/|1+q_j|^k < 1/4.
fn plan_k(
    oracle: &dyn NoisyOracle,
    lag: &[Vec<ApproxComplex>],
    points: &[ApproxComplex],
) -> Result<usize> {
    let lag_log: Vec<Vec<f64>> = lag.iter().map(|row| row.iter().map(log2_upper).collect()).collect();
    let one_plus_log: Vec<f64> = points
        .iter()
        .map(|q| {
            let one = ApproxComplex::one(q.precision()).add(q);
            (one.center_modulus_f64() - one.error_bound_f64()).log2()
        })
        .collect();
    let ncoef = lag.first().map_or(0, Vec::len);
    let est = |k: usize| -> Option<f64> {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..ncoef {
            let mut total = 0.0f64;
            for (j, q) in points.iter().enumerate() {
                let e = oracle.error_bound_log2(&OracleQuery::PaddedDirectSum { k, point: q.clone() })?;
                total += (lag_log[j][i] + e - k as f64 * one_plus_log[j]).exp2();
            }
            worst = worst.max(total.log2());
        }
        Some(worst)
    };
    let mut k = 0;
    while k <= MAX_K {
        match est(k) {
            None => return Ok(0),
            Some(v) if v < -2.0 => return Ok(k),
            _ => {}
        }
        k += 1;
    }
    Err(Error::resource(format!("no padding k ≤ {MAX_K} brings the interpolation error below 1/4")))
}

/// Recovers the weight distribution of a hidden length-n code from noisy
/// evaluations of C ⊕ I_k at n+1 points near 1.
pub fn recover_coefficients(
    n: usize,
    oracle: &dyn NoisyOracle,
    params: &RecoveryParams,
) -> Result<CoefficientRecovery> {
    let alpha = params.alpha;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Contract(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    if oracle.code_length() != n {
        return Err(Error::input(format!(
            "the oracle holds a code of length {}, not {n}",
            oracle.code_length()
        )));
    }
    let r = params.r.unwrap_or_else(|| RecoveryParams::default_r(alpha));
    let beta = alpha.exp2() / (2.0 - r);
    if !(r > 0.0 && r < 1.0) || beta >= 1.0 {
        return Err(Error::Contract(format!(
            "need 0 < r < 1 with beta = 2^alpha/(2-r) < 1; got r = {r}, beta = {beta}"
        )));
    }
    let (idx, m) = choose_points(n, r)?;

    let plan_prec = 128 + 8 * n as u32;
    let plan_points = points_at(&idx, m, plan_prec)?;
    let plan_lag = lagrange(&plan_points)?;
    let mut k = match params.k {
        Some(k) => k,
        None => plan_k(oracle, &plan_lag, &plan_points)?,
    };
    let lag_bits = plan_lag
        .iter()
        .flatten()
        .map(log2_upper)
        .fold(0.0f64, f64::max)
        .ceil() as u32;
    let mut prec = params.precision_bits.unwrap_or_else(|| {
        96 + n as u32 + lag_bits + (usize::BITS - (k + 1).leading_zeros()) + (usize::BITS - n.leading_zeros())
    });

    let mut worst = f64::INFINITY;
    for attempt in 1..=ATTEMPTS {
        let points = points_at(&idx, m, prec)?;
        let lag = lagrange(&points)?;
        let queries: Vec<OracleQuery> = points
            .iter()
            .map(|q| OracleQuery::PaddedDirectSum { k, point: q.clone() })
            .collect();
        let answers: Vec<ApproxComplex> = queries
            .par_iter()
            .map(|q| oracle.query(q, prec))
            .collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(points.len());
        for ((q, a), query) in points.iter().zip(&answers).zip(&queries) {
            let a = match oracle.error_bound_log2(query) {
                Some(e) => a.widen_raw(&pow2_upper_ulps(e, a.precision())),
                None => a.clone(),
            };
            let den = ApproxComplex::one(prec).add(q).pow(k as u64);
            values.push(a.div(&den)?);
        }
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut residuals = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut acc = ApproxComplex::zero(prec);
            for (j, y) in values.iter().enumerate() {
                acc = acc.add(&lag[j][i].mul(y));
            }
            let (c, dist) = nearest_integer(&acc);
            coeffs.push(c);
            residuals.push(dist);
        }
        worst = residuals.iter().cloned().fold(0.0, f64::max);
        if worst < 0.5 {
            if let Some(neg) = coeffs.iter().position(|c| c.is_negative()) {
                return Err(Error::Certification(format!(
                    "coefficient {neg} certified as {}, which is negative; the oracle broke its guarantee",
                    coeffs[neg]
                )));
            }
            let counts = coeffs.iter().map(|c| c.magnitude().clone()).collect();
            return Ok(CoefficientRecovery {
                distribution: WeightDistribution::new(counts, Semantics::Codeword),
                k,
                precision_bits: prec,
                r,
                angle_exponent: m,
                point_indices: idx,
                answers: answers.iter().map(BallReport::from_ball).collect(),
                certified_residuals: residuals,
                attempts: attempt,
            });
        }
        if attempt == ATTEMPTS || prec >= MAX_PRECISION {
            break;
        }
        prec = (prec * 2).min(MAX_PRECISION);
        if params.k.is_none() && k > 0 {
            k += k / 4 + 8;
        }
    }
    Err(Error::resource(format!(
        "coefficients not certified within budget (k = {k}, precision {prec}); worst certified residual {worst:.3e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::super::{NoiseMode, SimulatedOracle};
    use super::*;
    use crate::codes::LinearCode;

    fn recovered(rows: &[&str], alpha: f64, mode: NoiseMode) -> Vec<String> {
        let c = LinearCode::from_rows(rows).unwrap();
        let o = SimulatedOracle::new(&c, alpha, mode, 3).unwrap();
        let r = recover_coefficients(c.length(), &o, &RecoveryParams::new(alpha)).unwrap();
        assert!(r.certified_residuals.iter().all(|&x| x < 0.5));
        r.distribution.to_decimal_strings()
    }

    #[test]
    fn examples() {
        assert_eq!(recovered(&["1"], 0.9, NoiseMode::Adversarial), ["1", "1"]);
        assert_eq!(recovered(&["110", "011"], 0.9, NoiseMode::Adversarial), ["1", "0", "3", "0"]);
        assert_eq!(recovered(&["1011", "0111"], 0.6, NoiseMode::Uniform), ["1", "0", "1", "2", "0"]);
    }

    #[test]
    fn noiseless_plain_interpolation() {
        let c = LinearCode::from_rows(&["11000", "01110", "00011"]).unwrap();
        let o = SimulatedOracle::new(&c, 0.9, NoiseMode::Noiseless, 0).unwrap();
        let mut p = RecoveryParams::new(0.9);
        p.k = Some(0);
        let r = recover_coefficients(5, &o, &p).unwrap();
        assert_eq!(r.k, 0);
        assert_eq!(r.distribution, c.weight_distribution(Semantics::Codeword).unwrap());
    }

    #[test]
    fn refusals() {
        let c = LinearCode::from_rows(&["11"]).unwrap();
        let o = SimulatedOracle::new(&c, 0.9, NoiseMode::Adversarial, 0).unwrap().omega_only();
        assert!(matches!(
            recover_coefficients(2, &o, &RecoveryParams::new(0.9)),
            Err(Error::Capability(_))
        ));
        let o = SimulatedOracle::new(&c, 0.9, NoiseMode::Adversarial, 0).unwrap();
        let mut p = RecoveryParams::new(0.9);
        p.r = Some(0.5);
        assert!(matches!(recover_coefficients(2, &o, &p), Err(Error::Contract(_))));
    }

    #[test]
    fn points_near_one() {
        for n in 0..12 {
            let (idx, m) = choose_points(n, 0.067).unwrap();
            assert_eq!(idx.len(), n + 1);
            let pts = points_at(&idx, m, 80).unwrap();
            for p in &pts {
                assert!((p.center_modulus_f64() - 1.0).abs() < 1e-15);
                assert!(p.sub(&ApproxComplex::one(80)).center_modulus_f64() < 0.067);
            }
        }
        let z = root_of_unity(5, 100).unwrap();
        let theta = std::f64::consts::PI / 32.0;
        assert!((z.re_f64() - theta.cos()).abs() < 1e-15 && (z.im_f64() - theta.sin()).abs() < 1e-15);
        assert!(z.error_bound_f64() < 1e-25);
    }
}
