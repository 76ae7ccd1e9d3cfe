//! Dense exact simulation over Z[ω].
//!
//! Hadamards are applied unnormalized; the state after `h` of them equals
//! `amps / √2^h`. Coefficients are i128 and overflow is reported rather
//! than wrapped.

use num_bigint::BigInt;

use super::{Circuit, Gate};
use crate::cyclotomic::{ApproxComplex, CycInt};
use crate::error::{Error, Result};

pub const MAX_STATEVECTOR_WIDTH: usize = 14;

type Amp = [i128; 4];

fn omega_shift(a: &Amp, k: usize) -> Amp {
    let mut out = [0i128; 4];
    for (i, &c) in a.iter().enumerate() {
        let e = (i + k) % 8;
        if e < 4 {
            out[e] = c;
        } else {
            out[e - 4] = -c;
        }
    }
    out
}

fn overflow() -> Error {
    Error::resource("statevector coefficients exceed the 127-bit budget")
}

fn add(a: &Amp, b: &Amp) -> Result<Amp> {
    let mut out = [0i128; 4];
    for i in 0..4 {
        out[i] = a[i].checked_add(b[i]).ok_or_else(overflow)?;
    }
    Ok(out)
}

fn sub(a: &Amp, b: &Amp) -> Result<Amp> {
    let mut out = [0i128; 4];
    for i in 0..4 {
        out[i] = a[i].checked_sub(b[i]).ok_or_else(overflow)?;
    }
    Ok(out)
}

/// A full state vector `amps / √2^hadamards`.
#[derive(Clone, Debug)]
pub struct ExactState {
    width: usize,
    amps: Vec<Amp>,
    hadamards: u64,
}

impl ExactState {
    pub fn basis(width: usize, index: usize) -> Result<Self> {
        if width > MAX_STATEVECTOR_WIDTH {
            return Err(Error::resource(format!(
                "statevector width {width} exceeds the limit {MAX_STATEVECTOR_WIDTH}"
            )));
        }
        let dim = 1usize << width;
        if index >= dim {
            return Err(Error::input(format!("basis index {index} out of range for width {width}")));
        }
        let mut amps = vec![[0i128; 4]; dim];
        amps[index] = [1, 0, 0, 0];
        Ok(ExactState {
            width,
            amps,
            hadamards: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn hadamards(&self) -> u64 {
        self.hadamards
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::H(q) => {
                let bit = 1usize << q;
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | bit]);
                        self.amps[i] = add(&a, &b)?;
                        self.amps[i | bit] = sub(&a, &b)?;
                    }
                }
                self.hadamards += 1;
            }
            Gate::T(q) | Gate::Tdg(q) => {
                let k = if matches!(gate, Gate::T(_)) { 1 } else { 7 };
                let bit = 1usize << q;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a = omega_shift(a, k);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let (cb, tb) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
            Gate::PhaseZ(js) => {
                let mask = js.iter().fold(0usize, |m, &j| m | (1 << j));
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = omega_shift(a, 4);
                    }
                }
            }
        }
        Ok(())
    }

    /// The unnormalized coefficient at `index`; the amplitude is this divided
    /// by `√2^hadamards`.
    pub fn coefficient(&self, index: usize) -> CycInt {
        let a = &self.amps[index];
        CycInt::new(
            BigInt::from(a[0]),
            BigInt::from(a[1]),
            BigInt::from(a[2]),
            BigInt::from(a[3]),
        )
    }

    pub fn amplitude(&self, index: usize, precision_bits: u32) -> ApproxComplex {
        self.coefficient(index)
            .to_complex_over_sqrt2_pow(self.hadamards, precision_bits)
    }

    /// Whether both states are equal as vectors (not merely up to phase).
    pub fn same_vector(&self, other: &ExactState) -> bool {
        if self.width != other.width {
            return false;
        }
        let (lo, hi) = if self.hadamards <= other.hadamards {
            (self, other)
        } else {
            (other, self)
        };
        let diff = hi.hadamards - lo.hadamards;
        if diff % 2 != 0 {
            // One side would carry an extra √2 = ω − ω³ factor.
            let sqrt2 = CycInt::new(0, 1, 0, -1);
            let scale = BigInt::from(1) << (diff / 2);
            return (0..lo.amps.len()).all(|i| {
                lo.coefficient(i).scale(&scale) * sqrt2.clone() == hi.coefficient(i)
            });
        }
        let scale = BigInt::from(1) << (diff / 2);
        (0..lo.amps.len()).all(|i| lo.coefficient(i).scale(&scale) == hi.coefficient(i))
    }
}

/// Runs `circuit` on the basis state `index`.
pub fn simulate_basis(circuit: &Circuit, index: usize) -> Result<ExactState> {
    let mut st = ExactState::basis(circuit.width(), index)?;
    for g in circuit.gates() {
        st.apply(g)?;
    }
    Ok(st)
}

/// ⟨0…0|C|0…0⟩ enclosed at the given precision.
pub fn statevector_amplitude(circuit: &Circuit, precision_bits: u32) -> Result<ApproxComplex> {
    Ok(simulate_basis(circuit, 0)?.amplitude(0, precision_bits))
}
