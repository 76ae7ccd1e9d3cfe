//! Counting gaps of {⊕, ∧} Boolean circuits, the phase polynomial F_x whose
//! signed sum encodes the gap, and the end-to-end route through U(F) and
//! the weight-enumerator representation of its amplitude.
//!
//! Sign convention: output 0 counts as accepting, so
//! gap = #(output 0) − #(output 1).

mod polynomial;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

pub use polynomial::PhasePolynomial;

use crate::circuits::{build_u_of_f, expand_macros};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::pathsum::amplitude_exact;

pub const MAX_GAP_GUESSES: usize = 24;
pub const MAX_DELTA_VARS: usize = 22;
pub const MAX_PIPELINE_VARS: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    /// Fixed input bit `x_{i+1}`.
    Input(usize),
    /// Guess variable `u_{i+1}`.
    Guess(usize),
    /// Output of gate `g_{i+1}`.
    Gate(usize),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Input(i) => write!(f, "x{}", i + 1),
            Operand::Guess(i) => write!(f, "u{}", i + 1),
            Operand::Gate(i) => write!(f, "g{}", i + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoolGate {
    pub op: BoolOp,
    pub lhs: Operand,
    pub rhs: Operand,
}

/// A straight-line circuit over {⊕, ∧}; the last gate is the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolCircuit {
    inputs: BitVector,
    guesses: usize,
    gates: Vec<BoolGate>,
}

impl BoolCircuit {
    pub fn new(inputs: BitVector, guesses: usize, gates: Vec<BoolGate>) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::input("a Boolean circuit needs at least one gate"));
        }
        for (k, g) in gates.iter().enumerate() {
            for op in [g.lhs, g.rhs] {
                let ok = match op {
                    Operand::Input(i) => i < inputs.len(),
                    Operand::Guess(i) => i < guesses,
                    Operand::Gate(i) => i < k,
                };
                if !ok {
                    return Err(Error::input(format!(
                        "gate g{} refers to {op}, which is not defined before it",
                        k + 1
                    )));
                }
            }
        }
        Ok(BoolCircuit {
            inputs,
            guesses,
            gates,
        })
    }

    pub fn inputs(&self) -> &BitVector {
        &self.inputs
    }

    pub fn guess_count(&self) -> usize {
        self.guesses
    }

    pub fn gates(&self) -> &[BoolGate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Number of selector variables v₀..v_s in F.
    pub fn selector_count(&self) -> usize {
        self.gates.len() + 1
    }

    /// Evaluates the output on the guess assignment whose bit `i` is `u_{i+1}`.
    pub fn eval(&self, u: u64) -> bool {
        let mut vals = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let get = |op: Operand| match op {
                Operand::Input(i) => self.inputs.get(i),
                Operand::Guess(i) => u >> i & 1 == 1,
                Operand::Gate(i) => vals[i],
            };
            let (a, b) = (get(g.lhs), get(g.rhs));
            vals.push(match g.op {
                BoolOp::And => a & b,
                BoolOp::Xor => a ^ b,
            });
        }
        *vals.last().expect("at least one gate")
    }

    /// Parses `inputs <bits>`, `guesses q`, then `AND a b` / `XOR a b`
    /// with operands `x<i>`, `u<i>`, `g<i>` counted from 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut inputs = None;
        let mut guesses = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| Error::Format(format!("line {lineno}: {msg}"));
            match parts[0].to_ascii_lowercase().as_str() {
                "inputs" => {
                    let bits = match parts.len() {
                        1 => BitVector::zeros(0),
                        2 => BitVector::parse01(parts[1]).map_err(|_| bad("input bits must be 0/1"))?,
                        _ => return Err(bad("expected 'inputs <bitstring>'")),
                    };
                    inputs = Some(bits);
                }
                "guesses" => {
                    let q = parts
                        .get(1)
                        .filter(|_| parts.len() == 2)
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| bad("expected 'guesses q'"))?;
                    guesses = Some(q);
                }
                "and" | "xor" => {
                    if parts.len() != 3 {
                        return Err(bad("a gate takes two operands"));
                    }
                    let op = if parts[0].eq_ignore_ascii_case("and") {
                        BoolOp::And
                    } else {
                        BoolOp::Xor
                    };
                    let lhs = parse_operand(parts[1]).ok_or_else(|| bad("bad operand"))?;
                    let rhs = parse_operand(parts[2]).ok_or_else(|| bad("bad operand"))?;
                    gates.push(BoolGate { op, lhs, rhs });
                }
                other => return Err(bad(&format!("unknown directive '{other}'"))),
            }
        }
        let inputs = inputs.unwrap_or_else(|| BitVector::zeros(0));
        let guesses = guesses.unwrap_or(0);
        BoolCircuit::new(inputs, guesses, gates).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("inputs {}\nguesses {}\n", self.inputs, self.guesses);
        for g in &self.gates {
            let op = match g.op {
                BoolOp::And => "AND",
                BoolOp::Xor => "XOR",
            };
            s.push_str(&format!("{op} {} {}\n", g.lhs, g.rhs));
        }
        s
    }
}

fn parse_operand(s: &str) -> Option<Operand> {
    let (kind, idx) = s.split_at_checked(1)?;
    let i: usize = idx.parse().ok()?;
    let i = i.checked_sub(1)?;
    match kind {
        "x" | "X" => Some(Operand::Input(i)),
        "u" | "U" => Some(Operand::Guess(i)),
        "g" | "G" => Some(Operand::Gate(i)),
        _ => None,
    }
}

/// Σ_u (−1)^{output(x,u)} over all 2^q guesses.
pub fn gap_bruteforce(c: &BoolCircuit) -> Result<BigInt> {
    let q = c.guess_count();
    if q > MAX_GAP_GUESSES {
        return Err(Error::resource(format!(
            "{q} guesses exceed the brute-force limit {MAX_GAP_GUESSES}"
        )));
    }
    let total: i64 = (0..1u64 << q)
        .into_par_iter()
        .map(|u| if c.eval(u) { -1 } else { 1 })
        .sum();
    Ok(BigInt::from(total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaMode {
    F0,
    F1,
    Combined,
}

enum Term {
    Const(bool),
    Var(usize),
}

/// Builds F⁰, F¹ or F = (1+w)F⁰ + w(1+F¹).
///
/// Variables, in order: u1..uq, z1..zs, v0..vs and, in combined mode, w.
/// F^ζ = Σ_{k=1..s} v_k·(z_k + a_k ∗ b_k) + v₀·(z_s + ζ).
pub fn build_f(c: &BoolCircuit, mode: ZetaMode) -> PhasePolynomial {
    let (q, s) = (c.guess_count(), c.gate_count());
    let mut names: Vec<String> = (1..=q).map(|i| format!("u{i}")).collect();
    names.extend((1..=s).map(|k| format!("z{k}")));
    names.extend((0..=s).map(|k| format!("v{k}")));
    if mode == ZetaMode::Combined {
        names.push("w".into());
    }
    let z = |k: usize| q + k;
    let v = |k: usize| q + s + k;
    let term = |op: Operand| match op {
        Operand::Input(i) => Term::Const(c.inputs().get(i)),
        Operand::Guess(i) => Term::Var(i),
        Operand::Gate(i) => Term::Var(z(i)),
    };

    let f_zeta = |zeta: bool| {
        let mut p = PhasePolynomial::new(names.clone());
        let mut add = |m: &[usize]| p.add_monomial(m).expect("indices in range");
        for (k, g) in c.gates().iter().enumerate() {
            let vk = v(k + 1);
            add(&[vk, z(k)]);
            let (a, b) = (term(g.lhs), term(g.rhs));
            match g.op {
                BoolOp::And => {
                    let mut m = vec![vk];
                    let mut zero = false;
                    for t in [a, b] {
                        match t {
                            Term::Const(bit) => zero |= !bit,
                            Term::Var(x) => m.push(x),
                        }
                    }
                    if !zero {
                        add(&m);
                    }
                }
                BoolOp::Xor => {
                    for t in [a, b] {
                        match t {
                            Term::Const(true) => add(&[vk]),
                            Term::Const(false) => {}
                            Term::Var(x) => add(&[vk, x]),
                        }
                    }
                }
            }
        }
        add(&[v(0), z(s - 1)]);
        if zeta {
            add(&[v(0)]);
        }
        p
    };

    match mode {
        ZetaMode::F0 => f_zeta(false),
        ZetaMode::F1 => f_zeta(true),
        ZetaMode::Combined => {
            let w = names.len() - 1;
            let f0 = f_zeta(false);
            let f1 = f_zeta(true);
            let mut f = f0.clone();
            f.add_assign(&f0.times_var(w).expect("w in range")).expect("same variables");
            f.add_monomial(&[w]).expect("w in range");
            f.add_assign(&f1.times_var(w).expect("w in range")).expect("same variables");
            f
        }
    }
}

/// Σ_x (−1)^{f(x)} over all assignments.
pub fn delta_bruteforce(f: &PhasePolynomial) -> Result<BigInt> {
    let n = f.num_vars();
    if n > MAX_DELTA_VARS {
        return Err(Error::resource(format!(
            "{n} variables exceed the brute-force limit {MAX_DELTA_VARS}"
        )));
    }
    let masks = f.masks();
    let total: i64 = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let odd = masks.iter().filter(|&&m| x & m == m).count() % 2 == 1;
            if odd {
                -1
            } else {
                1
            }
        })
        .sum();
    Ok(BigInt::from(total))
}

/// ΔF recovered from the compiled amplitude of U(F):
/// ⟨0|U(F)|0⟩ = 2^{−N}·ΔF, all in exact arithmetic.
pub fn delta_via_weight_enumerator(f: &PhasePolynomial) -> Result<BigInt> {
    let n = f.num_vars();
    let u = build_u_of_f(f)?;
    let expanded = expand_macros(&u)?;
    let (value, half_power) = amplitude_exact(&expanded)?;
    // value / √2^half_power · 2^N
    let (value, halves) = if half_power % 2 == 1 {
        (value * CycInt::new(0, 1, 0, -1), half_power + 1)
    } else {
        (value, half_power)
    };
    let shift = n as i64 - (halves / 2) as i64;
    let scaled = if shift >= 0 {
        value.shl(shift as usize)
    } else {
        value.div_pow2_exact((-shift) as usize).ok_or_else(|| {
            Error::Internal("2^N times the amplitude of U(F) is not an algebraic integer".into())
        })?
    };
    scaled
        .as_integer()
        .cloned()
        .ok_or_else(|| Error::Internal(format!("2^N times the amplitude of U(F) is {scaled}, not an integer")))
}

/// gap via F → U(F) → expanded circuit → code → ΔF / 2^{s'}.
pub fn gap_via_weight_enumerator(c: &BoolCircuit) -> Result<BigInt> {
    let f = build_f(c, ZetaMode::Combined);
    if f.num_vars() > MAX_PIPELINE_VARS {
        return Err(Error::resource(format!(
            "F has {} variables; the pipeline limit is {MAX_PIPELINE_VARS}",
            f.num_vars()
        )));
    }
    let delta = delta_via_weight_enumerator(&f)?;
    let sp = c.selector_count();
    let unit = BigInt::from(1) << sp;
    if !(&delta % &unit).is_zero() {
        return Err(Error::Internal(format!("ΔF = {delta} is not divisible by 2^{sp}")));
    }
    Ok(delta / unit)
}
