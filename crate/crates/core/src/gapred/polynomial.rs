use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A multilinear polynomial over F₂ stored as its set of monomials.
///
/// Each monomial is a sorted list of variable indices; the empty list is the
/// constant 1. Adding a monomial that is already present cancels it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PhasePolynomial {
    names: Vec<String>,
    monomials: BTreeSet<Vec<usize>>,
}

impl PhasePolynomial {
    pub fn new(names: Vec<String>) -> Self {
        PhasePolynomial {
            names,
            monomials: BTreeSet::new(),
        }
    }

    /// Variables named `x1..xn`.
    pub fn with_vars(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("x{i}")).collect())
    }

    pub fn from_monomials(n: usize, monomials: &[&[usize]]) -> Result<Self> {
        let mut p = Self::with_vars(n);
        for m in monomials {
            p.add_monomial(m)?;
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// XORs the product of `vars` into the polynomial. Repeated variables
    /// collapse since x² = x.
    pub fn add_monomial(&mut self, vars: &[usize]) -> Result<()> {
        let mut m = vars.to_vec();
        m.sort_unstable();
        m.dedup();
        if let Some(&v) = m.last() {
            if v >= self.names.len() {
                return Err(Error::input(format!(
                    "variable index {v} out of range for {} variables",
                    self.names.len()
                )));
            }
        }
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &PhasePolynomial) -> Result<()> {
        for m in &other.monomials {
            self.add_monomial(m)?;
        }
        Ok(())
    }

    /// Multiplies every monomial by variable `v`.
    pub fn times_var(&self, v: usize) -> Result<PhasePolynomial> {
        let mut out = PhasePolynomial::new(self.names.clone());
        for m in &self.monomials {
            let mut m2 = m.clone();
            m2.push(v);
            out.add_monomial(&m2)?;
        }
        Ok(out)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &[usize]> {
        self.monomials.iter().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, vars: &[usize]) -> bool {
        let mut m = vars.to_vec();
        m.sort_unstable();
        m.dedup();
        self.monomials.contains(&m)
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Evaluates at the assignment whose bit `i` is variable `i`.
    pub fn eval_mask(&self, x: u64) -> bool {
        self.monomials
            .iter()
            .fold(false, |acc, m| acc ^ m.iter().all(|&v| x >> v & 1 == 1))
    }

    /// Monomials as bitmasks, for fast repeated evaluation on ≤ 64 variables.
    pub(crate) fn masks(&self) -> Vec<u64> {
        self.monomials
            .iter()
            .map(|m| m.iter().fold(0u64, |a, &v| a | (1 << v)))
            .collect()
    }

    /// The monomial as variable names, e.g. `v1*z1`; the constant is `1`.
    pub fn monomial_name(&self, m: &[usize]) -> String {
        if m.is_empty() {
            "1".to_string()
        } else {
            m.iter().map(|&v| self.names[v].as_str()).collect::<Vec<_>>().join("*")
        }
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.monomials().map(|m| self.monomial_name(m)).collect();
        f.write_str(&terms.join(" + "))
    }
}
