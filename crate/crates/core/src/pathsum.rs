//! Sum-over-paths compilation of {CNOT, H, T, T†} circuits into linear codes.
//!
//! Each Hadamard introduces a path variable u. Its phase (−1)^{b·u} is
//! linearized with i^{b⊕u} = i^b·i^u·(−1)^{bu}, i = ω², into the terms
//! (2, b⊕u), (6, b), (6, u). Requiring every final qubit form to vanish
//! restricts the sum to paths ending in |0…0⟩, after which
//!
//! ⟨0|U|0⟩ = 2^{−N/2} · ω^g · 2^m · w_C(ω).

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::circuits::{Circuit, Gate};
use crate::codes::LinearCode;
use crate::cyclotomic::{ApproxComplex, CycInt};
use crate::error::{Error, Result};
use crate::gf2::{self, AffineForm, BitMatrix, BitVector};

pub const MAX_BRUTEFORCE_PATH_VARS: usize = 24;

/// Phase bookkeeping while walking the circuit.
#[derive(Clone, Debug)]
pub struct PathState {
    pub qubit_forms: Vec<AffineForm>,
    /// (multiplier in 1..=7, form); the term contributes ω^{multiplier·form}.
    pub phase_terms: Vec<(u8, AffineForm)>,
    pub hadamard_count: usize,
    pub variable_count: usize,
}

impl PathState {
    /// Walks an expanded circuit; forms are over one variable per Hadamard.
    pub fn trace(circuit: &Circuit) -> Result<Self> {
        if !circuit.is_expanded() {
            return Err(Error::Precondition(
                "circuit contains PZ macros; run expand_macros first".into(),
            ));
        }
        let d = circuit.hadamard_count();
        let mut st = PathState {
            qubit_forms: vec![AffineForm::zero(d); circuit.width()],
            phase_terms: Vec::new(),
            hadamard_count: 0,
            variable_count: 0,
        };
        for g in circuit.gates() {
            match *g {
                Gate::Cnot { control, target } => {
                    let c = st.qubit_forms[control].clone();
                    st.qubit_forms[target].xor_assign(&c);
                }
                Gate::T(q) => st.push_term(1, st.qubit_forms[q].clone()),
                Gate::Tdg(q) => st.push_term(7, st.qubit_forms[q].clone()),
                Gate::H(q) => {
                    let b = st.qubit_forms[q].clone();
                    let u = AffineForm::variable(d, st.variable_count);
                    let mut bu = b.clone();
                    bu.xor_assign(&u);
                    st.push_term(2, bu);
                    st.push_term(6, b);
                    st.push_term(6, u.clone());
                    st.qubit_forms[q] = u;
                    st.variable_count += 1;
                    st.hadamard_count += 1;
                }
                Gate::PhaseZ(_) => unreachable!("checked above"),
            }
        }
        Ok(st)
    }

    fn push_term(&mut self, mult: u8, form: AffineForm) {
        self.phase_terms.push((mult, form));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompiledAmplitude {
    #[serde(rename = "N")]
    pub hadamard_count: usize,
    #[serde(rename = "g")]
    pub global_phase: u8,
    #[serde(rename = "m")]
    pub multiplicity_exponent: usize,
    pub zero: bool,
    #[serde(serialize_with = "code_as_text")]
    pub code: LinearCode,
}

fn code_as_text<S: Serializer>(code: &LinearCode, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&code.to_text())
}

impl CompiledAmplitude {
    /// `(ω^g · 2^m · w_code(ω), N)`, the amplitude being value / 2^{N/2}.
    pub fn evaluate(&self) -> Result<(CycInt, u64)> {
        let n = self.hadamard_count as u64;
        if self.zero {
            return Ok((CycInt::zero(), n));
        }
        let w = self.code.evaluate_at_omega()?;
        Ok((w.shl(self.multiplicity_exponent).mul_omega_pow(self.global_phase as i64), n))
    }
}

/// Compiles with equal-form merging enabled.
pub fn compile(circuit: &Circuit) -> Result<CompiledAmplitude> {
    compile_with(circuit, true)
}

pub fn compile_with(circuit: &Circuit, merge_terms: bool) -> Result<CompiledAmplitude> {
    let st = PathState::trace(circuit)?;
    let d = st.variable_count;
    let n = st.hadamard_count;

    let constraints = BitMatrix::from_rows(
        st.qubit_forms.iter().map(|f| f.coefficients.clone()).collect(),
        d,
    )?;
    let rhs = BitVector::from_bools(&st.qubit_forms.iter().map(|f| f.constant).collect::<Vec<_>>());
    let sol = gf2::solve_affine(&constraints, &rhs)?;
    if !sol.feasible {
        return Ok(CompiledAmplitude {
            hadamard_count: n,
            global_phase: 0,
            multiplicity_exponent: 0,
            zero: true,
            code: LinearCode::empty(0),
        });
    }

    // u = p ⊕ Σ_j t_j k_j turns λ·u ⊕ c into (λ·p ⊕ c) ⊕ Σ_j t_j (λ·k_j).
    let free = sol.dimension();
    let mut g: u32 = 0;
    let mut terms: Vec<(u8, BitVector)> = Vec::new();
    let mut index: HashMap<BitVector, usize> = HashMap::new();
    for (c, form) in &st.phase_terms {
        let kappa = form.coefficients.dot(&sol.particular) ^ form.constant;
        let lambda = BitVector::from_bools(
            &sol.kernel_basis
                .iter()
                .map(|k| form.coefficients.dot(k))
                .collect::<Vec<_>>(),
        );
        let mut c = *c;
        if lambda.is_zero() {
            if kappa {
                g += c as u32;
            }
            continue;
        }
        if kappa {
            g += c as u32;
            c = (8 - c) % 8;
        }
        if merge_terms {
            match index.get(&lambda) {
                Some(&i) => terms[i].0 = (terms[i].0 + c) % 8,
                None => {
                    index.insert(lambda.clone(), terms.len());
                    terms.push((c, lambda));
                }
            }
        } else {
            terms.push((c, lambda));
        }
    }
    terms.retain(|(c, _)| *c != 0);

    let length: usize = terms.iter().map(|(c, _)| *c as usize).sum();
    let mut rows = vec![BitVector::zeros(length); free];
    let mut col = 0;
    for (c, lambda) in &terms {
        for _ in 0..*c {
            for j in lambda.iter_ones() {
                rows[j].set(col, true);
            }
            col += 1;
        }
    }
    let generator = BitMatrix::from_rows(rows, length)?;
    let rank = gf2::rank(&generator);
    Ok(CompiledAmplitude {
        hadamard_count: n,
        global_phase: (g % 8) as u8,
        multiplicity_exponent: free - rank,
        zero: false,
        code: LinearCode::new(generator)?,
    })
}

/// `(value, N)` with ⟨0|U|0⟩ = value / 2^{N/2}, exact in Z[ω].
pub fn amplitude_exact(circuit: &Circuit) -> Result<(CycInt, u64)> {
    compile(circuit)?.evaluate()
}

/// Path sum evaluated by classically simulating every assignment of the
/// path variables; returns `(value, N)` like [`amplitude_exact`].
pub fn path_sum_bruteforce(circuit: &Circuit) -> Result<(CycInt, u64)> {
    if !circuit.is_expanded() {
        return Err(Error::Precondition(
            "circuit contains PZ macros; run expand_macros first".into(),
        ));
    }
    let d = circuit.hadamard_count();
    if d > MAX_BRUTEFORCE_PATH_VARS {
        return Err(Error::resource(format!(
            "{d} path variables exceed the brute-force limit {MAX_BRUTEFORCE_PATH_VARS}"
        )));
    }
    let width = circuit.width();
    let gates = circuit.gates();
    let counts = (0..1u64 << d)
        .into_par_iter()
        .fold(
            || [0u64; 8],
            |mut acc, u| {
                let mut bits = vec![false; width];
                let mut phase = 0u32;
                let mut j = 0;
                for g in gates {
                    match *g {
                        Gate::Cnot { control, target } => bits[target] ^= bits[control],
                        Gate::T(q) => phase += bits[q] as u32,
                        Gate::Tdg(q) => phase += 7 * bits[q] as u32,
                        Gate::H(q) => {
                            let uj = u >> j & 1 == 1;
                            if bits[q] && uj {
                                phase += 4;
                            }
                            bits[q] = uj;
                            j += 1;
                        }
                        Gate::PhaseZ(_) => unreachable!("checked above"),
                    }
                }
                if bits.iter().all(|b| !b) {
                    acc[(phase % 8) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || [0u64; 8],
            |mut a, b| {
                for i in 0..8 {
                    a[i] += b[i];
                }
                a
            },
        );
    let mut value = CycInt::zero();
    for (k, &cnt) in counts.iter().enumerate() {
        value += &CycInt::from(BigUint::from(cnt)).mul_omega_pow(k as i64);
    }
    Ok((value, d as u64))
}

/// Independent oracle for the amplitude, enclosed at the given precision.
pub fn amplitude_bruteforce_paths(circuit: &Circuit, precision_bits: u32) -> Result<ApproxComplex> {
    let (value, n) = path_sum_bruteforce(circuit)?;
    Ok(value.to_complex_over_sqrt2_pow(n, precision_bits))
}

/// Whether `(a, ha)` and `(b, hb)` denote the same number a/√2^ha = b/√2^hb.
pub fn same_scaled_value(a: &CycInt, ha: u64, b: &CycInt, hb: u64) -> bool {
    let (lo, hl, hi, hh) = if ha <= hb { (a, ha, b, hb) } else { (b, hb, a, ha) };
    let diff = hh - hl;
    let mut scaled = lo.scale(&(BigInt::from(1) << (diff / 2)));
    if diff % 2 == 1 {
        scaled = scaled * CycInt::new(0, 1, 0, -1);
    }
    &scaled == hi
}
