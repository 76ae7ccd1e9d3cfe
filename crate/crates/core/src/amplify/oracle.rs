use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::codes::{wreath_closed_form_from_distribution, LinearCode, Semantics, WeightDistribution};
use crate::cyclotomic::{ApproxComplex, CycInt};
use crate::error::{Error, Result};

/// A question about a code derived from the oracle's hidden base code C of
/// length n.
#[derive(Clone, Debug)]
pub enum OracleQuery {
    /// w_{C ⊕ I_k}(q) at a point q on the unit circle.
    PaddedDirectSum { k: usize, point: ApproxComplex },
    /// w_{C(a,k)}(ω) with C(a,k) = pad_zeros(C, a) ≀ I_k.
    WreathAtOmega { pad: usize, k: usize },
}

impl OracleQuery {
    /// The length L in the error guarantee 2^{α·L}: n+k for padded direct
    /// sums, n+a+k for wreath codes.
    pub fn guarantee_length(&self, n: usize) -> usize {
        match self {
            OracleQuery::PaddedDirectSum { k, .. } => n + k,
            OracleQuery::WreathAtOmega { pad, k } => n + pad + k,
        }
    }
}

/// An estimator whose answers lie within 2^{α·L} of the exact enumerator.
pub trait NoisyOracle: Sync {
    /// Length n of the hidden base code.
    fn code_length(&self) -> usize;

    fn alpha(&self) -> f64;

    /// log₂ of the guaranteed error radius, or `None` for exact answers.
    fn error_bound_log2(&self, query: &OracleQuery) -> Option<f64>;

    fn query(&self, query: &OracleQuery, precision_bits: u32) -> Result<ApproxComplex>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// Error of magnitude 0.99·2^{αL} in a seed-chosen direction.
    Adversarial,
    /// Error uniform in the disc of radius 0.99·2^{αL}.
    Uniform,
    /// Exact answers.
    Noiseless,
}

impl std::str::FromStr for NoiseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adversarial" | "adversarial_boundary" => Ok(NoiseMode::Adversarial),
            "uniform" | "uniform_random" => Ok(NoiseMode::Uniform),
            "none" | "noiseless" => Ok(NoiseMode::Noiseless),
            other => Err(Error::input(format!(
                "unknown noise mode '{other}'; expected adversarial, uniform or none"
            ))),
        }
    }
}

/// Test double: exact values from closed forms plus seeded bounded noise.
#[derive(Clone, Debug)]
pub struct SimulatedOracle {
    n: usize,
    dist: WeightDistribution,
    alpha: f64,
    mode: NoiseMode,
    seed: u64,
    omega_only: bool,
}

const NOISE_FRACTION: f64 = 0.99;

impl SimulatedOracle {
    /// Holds `code` reduced to an independent basis.
    pub fn new(code: &LinearCode, alpha: f64, mode: NoiseMode, seed: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Contract(format!("oracle alpha {alpha} must lie in (0, 1)")));
        }
        let dist = code.basis().weight_distribution(Semantics::Codeword)?;
        Ok(SimulatedOracle {
            n: code.length(),
            dist,
            alpha,
            mode,
            seed,
            omega_only: false,
        })
    }

    /// Restricts the oracle to wreath queries at ω.
    pub fn omega_only(mut self) -> Self {
        self.omega_only = true;
        self
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    /// The exact value w_{C(a,k)}(ω).
    pub fn exact_wreath_at_omega(&self, pad: usize, k: usize) -> Result<CycInt> {
        let mut counts = self.dist.counts().to_vec();
        counts.resize(self.n + pad + 1, 0u32.into());
        let padded = WeightDistribution::new(counts, Semantics::Codeword);
        wreath_closed_form_from_distribution(&padded, &WeightDistribution::binomial(k), &CycInt::omega())
    }

    /// w_C(q)·(1+q)^k enclosed at the point ball.
    pub fn exact_padded_direct_sum(&self, k: usize, point: &ApproxComplex) -> ApproxComplex {
        let w = self.dist.evaluate(point);
        let one_plus = ApproxComplex::one(point.precision()).add(point);
        w.mul(&one_plus.pow(k as u64))
    }

    fn stream(&self, query: &OracleQuery) -> u64 {
        match query {
            OracleQuery::WreathAtOmega { pad, k } => (1 << 63) | ((*pad as u64) << 40) | *k as u64,
            OracleQuery::PaddedDirectSum { k, point } => {
                let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ *k as u64;
                let p = point.with_precision(64);
                for x in [p.re_raw(), p.im_raw()] {
                    for b in x.to_signed_bytes_le() {
                        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
                    }
                }
                h & !(1 << 63)
            }
        }
    }

    fn noise(&self, query: &OracleQuery, precision_bits: u32) -> ApproxComplex {
        let Some(e) = self.error_bound_log2(query) else {
            return ApproxComplex::zero(precision_bits);
        };
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream(query));
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let radius = match self.mode {
            NoiseMode::Adversarial => NOISE_FRACTION,
            NoiseMode::Uniform => NOISE_FRACTION * rng.gen::<f64>().sqrt(),
            NoiseMode::Noiseless => 0.0,
        };
        let scale = e.floor();
        let mag = radius * (e - scale).exp2();
        ApproxComplex::from_f64_scaled(mag * theta.cos(), mag * theta.sin(), scale as i64, precision_bits)
    }
}

impl NoisyOracle for SimulatedOracle {
    fn code_length(&self) -> usize {
        self.n
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn error_bound_log2(&self, query: &OracleQuery) -> Option<f64> {
        match self.mode {
            NoiseMode::Noiseless => None,
            _ => Some(self.alpha * query.guarantee_length(self.n) as f64),
        }
    }

    fn query(&self, query: &OracleQuery, precision_bits: u32) -> Result<ApproxComplex> {
        let exact = match query {
            OracleQuery::WreathAtOmega { pad, k } => self
                .exact_wreath_at_omega(*pad, *k)?
                .to_complex(precision_bits),
            OracleQuery::PaddedDirectSum { k, point } => {
                if self.omega_only {
                    return Err(Error::Capability(
                        "this oracle only answers wreath queries at ω, not arbitrary points".into(),
                    ));
                }
                self.exact_padded_direct_sum(*k, &point.with_precision(precision_bits))
            }
        };
        Ok(exact.add(&self.noise(query, precision_bits)))
    }
}
