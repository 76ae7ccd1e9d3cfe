//! Exact expansion of Λ^J(−1) into {CNOT, H, T, T†}.
//!
//! For |J| ≤ 3 the phase (−1)^{x_J} = ω^{4·x_J} is written as a sum of
//! parity phases using 4·x_J = 2^{3−|J|} Σ_{∅≠S⊆J} (−1)^{|S|+1} ⊕_S x.
//! Each parity is computed into the last qubit of S by CNOTs, phased by a
//! power of T, and uncomputed. |J| = 4 uses one ancilla and two Toffolis.

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::gapred::PhasePolynomial;

pub const MAX_PHASE_ARITY: usize = 4;

fn push_t_power(out: &mut Vec<Gate>, q: usize, mult: u8) {
    let mult = mult % 8;
    if mult <= 4 {
        out.extend(std::iter::repeat_n(Gate::T(q), mult as usize));
    } else {
        out.extend(std::iter::repeat_n(Gate::Tdg(q), (8 - mult) as usize));
    }
}

/// ω^{mult·(⊕_{s∈S} x_s)}.
fn parity_phase(out: &mut Vec<Gate>, support: &[usize], mult: u8) {
    let (&target, rest) = support.split_last().expect("nonempty support");
    for &c in rest {
        out.push(Gate::Cnot { control: c, target });
    }
    push_t_power(out, target, mult);
    for &c in rest.iter().rev() {
        out.push(Gate::Cnot { control: c, target });
    }
}

fn small_phase(out: &mut Vec<Gate>, js: &[usize]) {
    let j = js.len();
    let unit = 1u8 << (3 - j);
    for mask in 1u32..(1 << j) {
        let support: Vec<usize> = (0..j).filter(|&i| mask >> i & 1 == 1).map(|i| js[i]).collect();
        let mult = if support.len() % 2 == 1 { unit } else { 8 - unit };
        parity_phase(out, &support, mult);
    }
}

fn global_minus_one(out: &mut Vec<Gate>, q: usize) {
    // Z X Z X = −I.
    for _ in 0..2 {
        out.push(Gate::H(q));
        push_t_power(out, q, 4);
        out.push(Gate::H(q));
        push_t_power(out, q, 4);
    }
}

fn expand_one(out: &mut Vec<Gate>, js: &[usize], ancilla: Option<usize>) -> Result<()> {
    match js.len() {
        0 => global_minus_one(out, 0),
        1..=3 => small_phase(out, js),
        4 => {
            let anc = ancilla.expect("ancilla allocated for arity 4");
            let toffoli = |out: &mut Vec<Gate>| {
                out.push(Gate::H(anc));
                small_phase(out, &[js[0], js[1], anc]);
                out.push(Gate::H(anc));
            };
            toffoli(out);
            small_phase(out, &[anc, js[2], js[3]]);
            toffoli(out);
        }
        n => {
            return Err(Error::input(format!(
                "PZ on {n} qubits is unsupported; at most {MAX_PHASE_ARITY} are allowed"
            )))
        }
    }
    Ok(())
}

/// Replaces every PZ macro by {CNOT, H, T, TDG} gates implementing the same
/// unitary, appending one clean ancilla (index = old width) when some
/// macro has four qubits. The ancilla starts and ends in |0⟩.
pub fn expand_macros(circuit: &Circuit) -> Result<Circuit> {
    let needs_ancilla = circuit
        .gates()
        .iter()
        .any(|g| matches!(g, Gate::PhaseZ(js) if js.len() == 4));
    let ancilla = needs_ancilla.then_some(circuit.width());
    let has_empty = circuit
        .gates()
        .iter()
        .any(|g| matches!(g, Gate::PhaseZ(js) if js.is_empty()));
    let width = circuit.width() + usize::from(needs_ancilla);
    if has_empty && width == 0 {
        return Err(Error::input("PZ with no qubits needs a circuit of width at least 1"));
    }
    let mut gates = Vec::with_capacity(circuit.gates().len());
    for g in circuit.gates() {
        match g {
            Gate::PhaseZ(js) => expand_one(&mut gates, js, ancilla)?,
            other => gates.push(other.clone()),
        }
    }
    Circuit::with_gates(width, gates)
}

/// U(F) = H^{⊗N} (Π_{monomials J} Λ^J(−1)) H^{⊗N}, so that
/// ⟨0|U(F)|0⟩ = 2^{−N} Σ_x (−1)^{F(x)}. Gates are macro form.
pub fn build_u_of_f(f: &PhasePolynomial) -> Result<Circuit> {
    if f.degree() > MAX_PHASE_ARITY {
        return Err(Error::input(format!(
            "phase polynomial has degree {}; at most {MAX_PHASE_ARITY} is supported",
            f.degree()
        )));
    }
    let n = f.num_vars();
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.h(q);
    }
    for m in f.monomials() {
        c.push(Gate::PhaseZ(m.to_vec()))?;
    }
    for q in 0..n {
        c.h(q);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::super::simulate_basis;
    use super::*;
    use proptest::prelude::*;

    fn t_count(c: &Circuit) -> usize {
        c.gates()
            .iter()
            .filter(|g| matches!(g, Gate::T(_) | Gate::Tdg(_)))
            .count()
    }

    fn assert_same_unitary(macro_form: &Circuit) {
        let expanded = expand_macros(macro_form).unwrap();
        assert!(expanded.is_expanded());
        let w = macro_form.width();
        let extra = expanded.width() - w;
        for x in 0..(1usize << w) {
            let reference = simulate_basis(macro_form, x).unwrap();
            let got = simulate_basis(&expanded, x).unwrap();
            if extra == 0 {
                assert!(reference.same_vector(&got), "input {x}");
            } else {
                let padded = {
                    let mut c = Circuit::new(expanded.width());
                    for g in macro_form.gates() {
                        c.push(g.clone()).unwrap();
                    }
                    simulate_basis(&c, x).unwrap()
                };
                assert!(padded.same_vector(&got), "input {x}");
            }
        }
    }

    #[test]
    fn gadget_shapes() {
        let cz = expand_macros(&Circuit::with_gates(2, [Gate::PhaseZ(vec![0, 1])]).unwrap()).unwrap();
        assert_eq!(t_count(&cz), 6);
        let z = expand_macros(&Circuit::with_gates(1, [Gate::PhaseZ(vec![0])]).unwrap()).unwrap();
        assert_eq!(z.gates(), &[Gate::T(0), Gate::T(0), Gate::T(0), Gate::T(0)]);
        let ccz = expand_macros(&Circuit::with_gates(3, [Gate::PhaseZ(vec![0, 1, 2])]).unwrap()).unwrap();
        assert_eq!(t_count(&ccz), 7);
        let c4 = expand_macros(&Circuit::with_gates(4, [Gate::PhaseZ(vec![0, 1, 2, 3])]).unwrap()).unwrap();
        assert_eq!(c4.width(), 5);
    }

    #[test]
    fn each_arity_matches_reference() {
        assert_same_unitary(&Circuit::with_gates(1, [Gate::PhaseZ(vec![])]).unwrap());
        assert_same_unitary(&Circuit::with_gates(2, [Gate::PhaseZ(vec![1])]).unwrap());
        assert_same_unitary(&Circuit::with_gates(3, [Gate::PhaseZ(vec![2, 0])]).unwrap());
        assert_same_unitary(&Circuit::with_gates(3, [Gate::PhaseZ(vec![1, 2, 0])]).unwrap());
        assert_same_unitary(&Circuit::with_gates(5, [Gate::PhaseZ(vec![4, 0, 2, 1])]).unwrap());
    }

    #[test]
    fn arity_limit() {
        let c = Circuit::with_gates(5, [Gate::PhaseZ(vec![0, 1, 2, 3, 4])]).unwrap();
        assert!(matches!(expand_macros(&c), Err(Error::Input(_))));
        let empty = Circuit::with_gates(0, [Gate::PhaseZ(vec![])]).unwrap();
        assert!(expand_macros(&empty).is_err());
    }

    fn arb_macro_circuit() -> impl Strategy<Value = Circuit> {
        (1usize..=5).prop_flat_map(|w| {
            let gate = prop_oneof![
                (0..w).prop_map(Gate::H),
                (0..w).prop_map(Gate::T),
                (0..w).prop_map(Gate::Tdg),
                proptest::sample::subsequence((0..w).collect::<Vec<_>>(), 0..=w.min(4))
                    .prop_shuffle()
                    .prop_map(Gate::PhaseZ),
            ];
            proptest::collection::vec(gate, 0..12)
                .prop_map(move |gs| Circuit::with_gates(w, gs).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn expansion_preserves_unitary(c in arb_macro_circuit()) {
            assert_same_unitary(&c);
        }
    }
}
