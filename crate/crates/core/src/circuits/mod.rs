//! Quantum circuits over {CNOT, H, T} with T† and multi-controlled Z macros.
//!
//! Gate lists are in application order: the first gate acts first on
//! |0…0⟩. Qubit `q` corresponds to bit `q` of a computational basis index.

mod macros;
mod statevector;

use std::fmt;

pub use macros::{build_u_of_f, expand_macros, MAX_PHASE_ARITY};
pub use statevector::{simulate_basis, statevector_amplitude, ExactState, MAX_STATEVECTOR_WIDTH};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    H(usize),
    T(usize),
    Tdg(usize),
    /// Λ^J(−1): negates basis states whose bits in `J` are all 1. The empty
    /// set is the global phase −1.
    PhaseZ(Vec<usize>),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::H(q) | Gate::T(q) | Gate::Tdg(q) => vec![*q],
            Gate::PhaseZ(js) => js.clone(),
        }
    }

    pub fn is_macro(&self) -> bool {
        matches!(self, Gate::PhaseZ(_))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::T(q) => write!(f, "T {q}"),
            Gate::Tdg(q) => write!(f, "TDG {q}"),
            Gate::PhaseZ(js) => {
                f.write_str("PZ")?;
                for j in js {
                    write!(f, " {j}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends a gate after checking that its qubits are distinct and in range.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.width {
                return Err(Error::input(format!(
                    "gate '{gate}' uses qubit {q} but the circuit has width {}",
                    self.width
                )));
            }
            if qs[..i].contains(&q) {
                return Err(Error::input(format!("gate '{gate}' repeats qubit {q}")));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push(Gate::H(q)).expect("valid H");
        self
    }

    pub fn t(&mut self, q: usize) -> &mut Self {
        self.push(Gate::T(q)).expect("valid T");
        self
    }

    pub fn tdg(&mut self, q: usize) -> &mut Self {
        self.push(Gate::Tdg(q)).expect("valid TDG");
        self
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(Gate::Cnot { control, target }).expect("valid CNOT");
        self
    }

    pub fn is_expanded(&self) -> bool {
        !self.gates.iter().any(Gate::is_macro)
    }

    pub fn hadamard_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::H(_))).count()
    }

    /// Parses the circuit text format: `qubits W` followed by one gate per
    /// line (`H q`, `T q`, `TDG q`, `CNOT c t`, `PZ q…`); `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Format("circuit text is empty; expected 'qubits W'".into()))?;
        let width = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["qubits", w] => w
                .parse::<usize>()
                .map_err(|_| Error::Format(format!("bad qubit count in header '{header}'")))?,
            _ => return Err(Error::Format(format!("expected header 'qubits W', got '{header}'"))),
        };
        let mut c = Circuit::new(width);
        for (lineno, line) in lines {
            let mut parts = line.split_whitespace();
            let op = parts.next().expect("nonempty line").to_ascii_uppercase();
            let args = parts
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| Error::Format(format!("line {lineno}: bad qubit index '{p}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            let arity = |n: usize| -> Result<()> {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(Error::Format(format!(
                        "line {lineno}: {op} takes {n} qubit(s), got {}",
                        args.len()
                    )))
                }
            };
            let gate = match op.as_str() {
                "H" => arity(1).map(|_| Gate::H(args[0]))?,
                "T" => arity(1).map(|_| Gate::T(args[0]))?,
                "TDG" => arity(1).map(|_| Gate::Tdg(args[0]))?,
                "CNOT" => arity(2).map(|_| Gate::Cnot {
                    control: args[0],
                    target: args[1],
                })?,
                "PZ" => Gate::PhaseZ(args),
                other => return Err(Error::Format(format!("line {lineno}: unknown gate '{other}'"))),
            };
            c.push(gate)
                .map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
        }
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.width);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}
