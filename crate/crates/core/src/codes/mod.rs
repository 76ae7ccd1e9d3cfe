//! Binary linear codes given by generator matrices, and their weight
//! enumerators `w_C(q) = Σ_{x∈C} q^{|x|}`.
//!
//! A generator matrix may have dependent rows. [`Semantics::Codeword`] sums
//! over the distinct codewords of the row space; [`Semantics::Multiset`] sums
//! over all `2^k` row combinations, so each codeword is counted
//! `2^(k − rank)` times.

mod combine;
mod enumerate;
mod pack;
mod point;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

pub use combine::{direct_sum, pad_zeros, trivial_code, wreath_enumerator_closed_form, wreath_sum};
pub(crate) use combine::wreath_closed_form_from_distribution;
pub use enumerate::{weight_counts_gray, weight_counts_naive, MAX_ENUM_DIM};
pub use pack::{pack_eval, unpack_coefficients};
pub use point::EnumeratorPoint;

use crate::cyclotomic::{omega_pow, CycInt};
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};

/// Upper limit on code length accepted by constructors and parsers.
pub const MAX_LENGTH: usize = 1_000_000;

/// Whether dependent generator rows collapse onto distinct codewords.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Codeword,
    Multiset,
}

/// A binary linear code of length `n` described by a `k × n` generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    generator: BitMatrix,
}

impl LinearCode {
    pub fn new(generator: BitMatrix) -> Result<Self> {
        if generator.num_cols() > MAX_LENGTH {
            return Err(Error::resource(format!(
                "code length {} exceeds the maximum of {MAX_LENGTH} columns",
                generator.num_cols()
            )));
        }
        Ok(LinearCode { generator })
    }

    /// The code with no generator rows and `length` coordinates.
    pub fn empty(length: usize) -> Self {
        LinearCode {
            generator: BitMatrix::zeros(0, length),
        }
    }

    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let vecs = rows.iter().map(|r| BitVector::parse01(r)).collect::<Result<Vec<_>>>()?;
        let n = vecs.first().map_or(0, BitVector::len);
        LinearCode::new(BitMatrix::from_rows(vecs, n)?)
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Number of coordinates `n`.
    pub fn length(&self) -> usize {
        self.generator.num_cols()
    }

    /// Number of generator rows `k` (the dimension when rows are independent).
    pub fn dimension(&self) -> usize {
        self.generator.num_rows()
    }

    pub fn rank(&self) -> usize {
        gf2::rank(&self.generator)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dimension()
    }

    /// The same code with a reduced, independent generator.
    pub fn basis(&self) -> LinearCode {
        let (rows, _) = self.generator.row_echelon();
        LinearCode {
            generator: BitMatrix::from_rows(rows, self.length()).expect("echelon rows keep length"),
        }
    }

    pub fn weight_distribution(&self, semantics: Semantics) -> Result<WeightDistribution> {
        let rows = match semantics {
            Semantics::Codeword => self.generator.row_echelon().0,
            Semantics::Multiset => self.generator.rows().to_vec(),
        };
        let counts = weight_counts_gray(&rows, self.length())?;
        Ok(WeightDistribution {
            counts: counts.into_iter().map(BigUint::from).collect(),
            semantics,
        })
    }

    /// `Σ_i A_i q^i` over distinct codewords.
    pub fn evaluate<P: EnumeratorPoint>(&self, q: &P) -> Result<P> {
        Ok(self.weight_distribution(Semantics::Codeword)?.evaluate(q))
    }

    /// `w_C(ω)` as an exact element of Z[ω].
    pub fn evaluate_at_omega(&self) -> Result<CycInt> {
        Ok(self.weight_distribution(Semantics::Codeword)?.evaluate_at_omega())
    }

    /// Parses the generator text format: a header line `n k`, then `k` rows
    /// of `n` characters from {0,1}. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("generator matrix text is empty; expected header 'n k'".into()))?;
        let mut fields = header.split_whitespace();
        let mut next_num = |what: &str| -> Result<usize> {
            fields
                .next()
                .ok_or_else(|| Error::Format(format!("header '{header}' is missing {what}")))?
                .parse::<usize>()
                .map_err(|_| Error::Format(format!("header '{header}' has a non-numeric {what}")))
        };
        let n = next_num("length n")?;
        let k = next_num("row count k")?;
        if n > MAX_LENGTH {
            return Err(Error::resource(format!(
                "code length {n} exceeds the maximum of {MAX_LENGTH} columns"
            )));
        }
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            if n == 0 {
                rows.push(BitVector::zeros(0));
                continue;
            }
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("expected {k} rows but found only {i}")))?;
            let row: String = line.chars().filter(|c| !c.is_whitespace()).collect();
            if row.len() != n {
                return Err(Error::Format(format!(
                    "row {i} has {} entries but the header declares n = {n}",
                    row.len()
                )));
            }
            rows.push(BitVector::parse01(&row)?);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Format(format!(
                "unexpected content after {k} rows: '{extra}'"
            )));
        }
        LinearCode::new(BitMatrix::from_rows(rows, n)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.length(), self.dimension());
        for row in self.generator.rows() {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[{}, {}] {:?}", self.length(), self.dimension(), self.generator)
    }
}

/// Coefficients `A_0..A_n` of a weight enumerator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightDistribution {
    counts: Vec<BigUint>,
    semantics: Semantics,
}

impl WeightDistribution {
    pub fn new(counts: Vec<BigUint>, semantics: Semantics) -> Self {
        WeightDistribution { counts, semantics }
    }

    pub fn from_u64(counts: &[u64], semantics: Semantics) -> Self {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect(), semantics)
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// The code length `n` (one less than the number of coefficients).
    pub fn length(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn evaluate<P: EnumeratorPoint>(&self, q: &P) -> P {
        let mut acc = q.lift(&BigUint::zero());
        for c in self.counts.iter().rev() {
            acc = acc.mul(q).add(&q.lift(c));
        }
        acc
    }

    pub fn evaluate_at_omega(&self) -> CycInt {
        let mut acc = CycInt::zero();
        for (i, c) in self.counts.iter().enumerate() {
            if !c.is_zero() {
                acc += &omega_pow(i as i64).scale(&c.clone().into());
            }
        }
        acc
    }

    /// Coefficients of the polynomial product, as for a direct sum.
    pub fn product(&self, other: &WeightDistribution) -> WeightDistribution {
        let mut out = vec![BigUint::zero(); self.counts.len() + other.counts.len() - 1];
        for (i, a) in self.counts.iter().enumerate() {
            for (j, b) in other.counts.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        WeightDistribution::new(out, self.semantics)
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.counts.iter().map(ToString::to_string).collect()
    }

    /// `(1 + q)^k` as a distribution: binomial coefficients.
    pub fn binomial(k: usize) -> WeightDistribution {
        let mut row = vec![BigUint::one()];
        for _ in 0..k {
            let mut next = vec![BigUint::zero(); row.len() + 1];
            for (i, c) in row.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c;
            }
            row = next;
        }
        WeightDistribution::new(row, Semantics::Codeword)
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.counts.len()))?;
        for c in &self.counts {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn dist(c: &LinearCode, s: Semantics) -> Vec<u64> {
        c.weight_distribution(s)
            .unwrap()
            .counts()
            .iter()
            .map(|x| u64::try_from(x.clone()).unwrap())
            .collect()
    }

    #[test]
    fn distribution_examples() {
        let c = LinearCode::from_rows(&["110", "011"]).unwrap();
        assert_eq!(dist(&c, Semantics::Codeword), vec![1, 0, 3, 0]);
        assert_eq!(dist(&trivial_code(2), Semantics::Codeword), vec![1, 2, 1]);
        let dup = LinearCode::from_rows(&["11", "11"]).unwrap();
        assert_eq!(dist(&dup, Semantics::Multiset), vec![2, 0, 2]);
        assert_eq!(dist(&dup, Semantics::Codeword), vec![1, 0, 1]);
    }

    #[test]
    fn evaluation_examples() {
        let c = LinearCode::from_rows(&["110", "011"]).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        assert_eq!(c.evaluate(&two).unwrap(), BigRational::from_integer(BigInt::from(13)));
        let one = BigRational::from_integer(BigInt::from(1));
        let dup = LinearCode::from_rows(&["11", "11", "01"]).unwrap();
        assert_eq!(dup.evaluate(&one).unwrap(), BigRational::from_integer(BigInt::from(4)));
        let q = BigRational::new(BigInt::from(3), BigInt::from(7));
        let expect = (BigRational::from_integer(BigInt::from(1)) + &q).pow(4);
        assert_eq!(trivial_code(4).evaluate(&q).unwrap(), expect);
    }

    #[test]
    fn omega_examples() {
        let c = LinearCode::from_rows(&["110", "011"]).unwrap();
        assert_eq!(c.evaluate_at_omega().unwrap(), CycInt::new(1, 0, 3, 0));
        assert_eq!(trivial_code(1).evaluate_at_omega().unwrap(), CycInt::new(1, 1, 0, 0));
        let rep = LinearCode::from_rows(&["111"]).unwrap();
        assert_eq!(rep.evaluate_at_omega().unwrap(), CycInt::new(1, 0, 0, 1));
    }

    #[test]
    fn text_format() {
        let text = "# comment\n3 2\n110  # first\n011\n";
        let c = LinearCode::parse(text).unwrap();
        assert_eq!(c, LinearCode::from_rows(&["110", "011"]).unwrap());
        assert_eq!(LinearCode::parse(&c.to_text()).unwrap(), c);
        assert!(matches!(LinearCode::parse("3 2\n110\n"), Err(Error::Format(_))));
        assert!(matches!(LinearCode::parse("3 1\n1101\n"), Err(Error::Format(_))));
        assert!(matches!(LinearCode::parse("3 1\n1a1\n"), Err(Error::Format(_))));
        assert!(matches!(LinearCode::parse(""), Err(Error::Format(_))));
        assert_eq!(LinearCode::parse("0 0\n").unwrap().length(), 0);
    }

    #[test]
    fn basis_keeps_codewords() {
        let c = LinearCode::from_rows(&["1100", "0110", "1010", "0000"]).unwrap();
        let b = c.basis();
        assert_eq!(b.dimension(), 2);
        assert_eq!(
            b.weight_distribution(Semantics::Multiset).unwrap(),
            WeightDistribution::new(
                c.weight_distribution(Semantics::Codeword).unwrap().counts().to_vec(),
                Semantics::Multiset
            )
        );
    }

    #[test]
    fn over_budget_is_resource_error() {
        let c = LinearCode::new(BitMatrix::identity(MAX_ENUM_DIM + 1)).unwrap();
        let err = c.weight_distribution(Semantics::Codeword).unwrap_err();
        match err {
            Error::Resource(msg) => assert!(msg.contains("2^29")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
