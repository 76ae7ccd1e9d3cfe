//! Code combinators: direct sums, wreath sums, zero padding.

use super::{EnumeratorPoint, LinearCode, Semantics, WeightDistribution};
use crate::error::Result;
use crate::gf2::{BitMatrix, BitVector};

/// The `[k, k]` code with identity generator; `w(q) = (1+q)^k`.
pub fn trivial_code(k: usize) -> LinearCode {
    LinearCode::new(BitMatrix::identity(k)).expect("identity fits")
}

/// Block-diagonal generator `[[G_A, 0], [0, G_B]]`.
pub fn direct_sum(a: &LinearCode, b: &LinearCode) -> Result<LinearCode> {
    let (n1, n2) = (a.length(), b.length());
    let n = n1 + n2;
    let mut rows = Vec::with_capacity(a.dimension() + b.dimension());
    for r in a.generator().rows() {
        rows.push(r.extended(n2));
    }
    for r in b.generator().rows() {
        let mut v = BitVector::zeros(n);
        for j in r.iter_ones() {
            v.set(n1 + j, true);
        }
        rows.push(v);
    }
    LinearCode::new(BitMatrix::from_rows(rows, n)?)
}

/// Wreath sum `A ≀ B`, of length `n₁·n₂`.
///
/// Column `(l₁, l₂)` sits at index `l₁·n₂ + l₂`. A row of `A` becomes the
/// row with bit `(l₁, l₂)` equal to `A[l₁]`; a row of `B` is repeated in
/// every block `l₁`. The pair `(a, b)` therefore yields the word whose block
/// `l₁` is `a_{l₁}·1 ⊕ b`.
pub fn wreath_sum(a: &LinearCode, b: &LinearCode) -> Result<LinearCode> {
    let (n1, n2) = (a.length(), b.length());
    let n = n1 * n2;
    let mut rows = Vec::with_capacity(a.dimension() + b.dimension());
    for r in a.generator().rows() {
        let mut v = BitVector::zeros(n);
        for l1 in r.iter_ones() {
            for l2 in 0..n2 {
                v.set(l1 * n2 + l2, true);
            }
        }
        rows.push(v);
    }
    for r in b.generator().rows() {
        let mut v = BitVector::zeros(n);
        for l2 in r.iter_ones() {
            for l1 in 0..n1 {
                v.set(l1 * n2 + l2, true);
            }
        }
        rows.push(v);
    }
    LinearCode::new(BitMatrix::from_rows(rows, n)?)
}

/// Appends `a` zero coordinates to every codeword.
pub fn pad_zeros(c: &LinearCode, a: usize) -> LinearCode {
    let rows = c.generator().rows().iter().map(|r| r.extended(a)).collect();
    LinearCode::new(BitMatrix::from_rows(rows, c.length() + a).expect("padded rows agree"))
        .expect("padding within length limit")
}

/// `Σ_{a∈A} q^{n₂|a|} · w_B(q^{n₁−2|a|})`, the enumerator of `A ≀ B` in
/// multiset semantics, computed from the weight distribution of `A` and the
/// enumerator of `B` without building the wreath code.
pub fn wreath_enumerator_closed_form<P: EnumeratorPoint>(
    a: &LinearCode,
    b_enumerator: &WeightDistribution,
    q: &P,
) -> Result<P> {
    let a_dist = a.weight_distribution(Semantics::Multiset)?;
    wreath_closed_form_from_distribution(&a_dist, b_enumerator, q)
}

pub(crate) fn wreath_closed_form_from_distribution<P: EnumeratorPoint>(
    a_dist: &WeightDistribution,
    b_enumerator: &WeightDistribution,
    q: &P,
) -> Result<P> {
    let n1 = a_dist.length() as i64;
    let n2 = b_enumerator.length() as i64;
    let mut acc = q.lift(&0u32.into());
    for (i, count) in a_dist.counts().iter().enumerate() {
        if count.bits() == 0 {
            continue;
        }
        let i = i as i64;
        let inner = b_enumerator.evaluate(&q.pow_signed(n1 - 2 * i)?);
        let term = q.pow_signed(n2 * i)?.mul(&inner).mul(&q.lift(count));
        acc = acc.add(&term);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::weight_counts_naive;
    use crate::cyclotomic::CycInt;
    use crate::error::Error;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn counts(c: &LinearCode, s: Semantics) -> Vec<u64> {
        c.weight_distribution(s)
            .unwrap()
            .counts()
            .iter()
            .map(|x| u64::try_from(x.clone()).unwrap())
            .collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn direct_sum_examples() {
        let one = trivial_code(1);
        assert_eq!(direct_sum(&one, &one).unwrap(), trivial_code(2));
        let c = LinearCode::from_rows(&["110", "011"]).unwrap();
        let s = direct_sum(&c, &one).unwrap();
        // (1 + 3q²)(1 + q) = 1 + q + 3q² + 3q³
        assert_eq!(counts(&s, Semantics::Codeword), vec![1, 1, 3, 3, 0]);
        assert_eq!(direct_sum(&c, &LinearCode::empty(0)).unwrap(), c);
    }

    #[test]
    fn wreath_examples() {
        let a = LinearCode::from_rows(&["110"]).unwrap();
        let w = wreath_sum(&a, &trivial_code(1)).unwrap();
        assert_eq!(w, LinearCode::from_rows(&["110", "111"]).unwrap());
        assert_eq!(counts(&w, Semantics::Codeword), vec![1, 1, 1, 1]);

        let a = LinearCode::from_rows(&["11"]).unwrap();
        let w = wreath_sum(&a, &trivial_code(1)).unwrap();
        assert_eq!(w, LinearCode::from_rows(&["11", "11"]).unwrap());
        assert_eq!(counts(&w, Semantics::Multiset), vec![2, 0, 2]);
    }

    #[test]
    fn closed_form_examples() {
        let a = LinearCode::from_rows(&["11"]).unwrap();
        let b = trivial_code(1).weight_distribution(Semantics::Codeword).unwrap();
        let v = wreath_enumerator_closed_form(&a, &b, &rat(2, 1)).unwrap();
        assert_eq!(v, rat(10, 1));

        // A = single zero word of length 3, B = I_4: (1 + q³)^4.
        let a = LinearCode::from_rows(&["000"]).unwrap();
        let a = LinearCode::new(BitMatrix::zeros(0, a.length())).unwrap();
        let b = trivial_code(4).weight_distribution(Semantics::Codeword).unwrap();
        let q = rat(-2, 3);
        let expect = num_traits::Pow::pow(rat(1, 1) + num_traits::Pow::pow(&q, 3u32), 4u32);
        assert_eq!(wreath_enumerator_closed_form(&a, &b, &q).unwrap(), expect);
    }

    #[test]
    fn closed_form_matches_tiny_padded_wreath_at_omega() {
        let c = LinearCode::from_rows(&["110"]).unwrap();
        let padded = pad_zeros(&c, 6);
        let k = 9;
        let ik = trivial_code(k).weight_distribution(Semantics::Codeword).unwrap();
        let closed = wreath_enumerator_closed_form(&padded, &ik, &CycInt::omega()).unwrap();
        let direct = wreath_sum(&padded, &trivial_code(k)).unwrap().evaluate_at_omega().unwrap();
        assert_eq!(closed, direct);
    }

    #[test]
    fn negative_exponent_at_zero_is_domain_error() {
        let a = LinearCode::from_rows(&["11"]).unwrap();
        let b = trivial_code(1).weight_distribution(Semantics::Codeword).unwrap();
        let err = wreath_enumerator_closed_form(&a, &b, &rat(0, 1)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn padding() {
        assert_eq!(pad_zeros(&trivial_code(1), 2), LinearCode::from_rows(&["100"]).unwrap());
        let c = LinearCode::from_rows(&["1101", "0111"]).unwrap();
        assert_eq!(pad_zeros(&c, 0), c);
        let mut d = counts(&c, Semantics::Codeword);
        d.extend([0, 0, 0]);
        assert_eq!(counts(&pad_zeros(&c, 3), Semantics::Codeword), d);
    }

    #[test]
    fn trivial_codes() {
        assert_eq!(counts(&trivial_code(0), Semantics::Codeword), vec![1]);
        assert_eq!(counts(&trivial_code(1), Semantics::Codeword), vec![1, 1]);
        assert_eq!(trivial_code(3).evaluate(&rat(1, 1)).unwrap(), rat(8, 1));
    }

    fn arb_code(max_k: usize, max_n: usize) -> impl Strategy<Value = LinearCode> {
        (0..=max_k, 1..=max_n).prop_flat_map(|(k, n)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), k).prop_map(
                move |rows| LinearCode::new(BitMatrix::from_bool_rows(&rows, n).unwrap()).unwrap(),
            )
        })
    }

    proptest! {
        #[test]
        fn wreath_weight_relation(a in arb_code(3, 5), b in arb_code(3, 4)) {
            let w = wreath_sum(&a, &b).unwrap();
            let (n1, n2) = (a.length(), b.length());
            let (ka, kb) = (a.dimension(), b.dimension());
            for ma in 0u64..(1 << ka) {
                for mb in 0u64..(1 << kb) {
                    let sel_a = BitVector::from_words(vec![ma], ka);
                    let sel_b = BitVector::from_words(vec![mb], kb);
                    let wa = a.generator().combine_rows(&sel_a).weight();
                    let wb = b.generator().combine_rows(&sel_b).weight();
                    let mut sel = sel_a.extended(kb);
                    for j in sel_b.iter_ones() {
                        sel.set(ka + j, true);
                    }
                    let c = w.generator().combine_rows(&sel).weight();
                    prop_assert_eq!(c, wa * (n2 - wb) + wb * (n1 - wa));
                }
            }
        }

        #[test]
        fn direct_sum_multiplies(a in arb_code(6, 8), b in arb_code(6, 8)) {
            let s = direct_sum(&a, &b).unwrap();
            for sem in [Semantics::Codeword, Semantics::Multiset] {
                let lhs = s.weight_distribution(sem).unwrap();
                let rhs = a.weight_distribution(sem).unwrap().product(&b.weight_distribution(sem).unwrap());
                prop_assert_eq!(lhs.counts(), rhs.counts());
            }
        }

        #[test]
        fn wreath_closed_form_matches_enumeration(a in arb_code(5, 5), b in arb_code(5, 4),
                                                  num in -5i64..=5, den in 1i64..=4) {
            prop_assume!(num != 0);
            let w = wreath_sum(&a, &b).unwrap();
            let multiset = w.weight_distribution(Semantics::Multiset).unwrap();
            let b_dist = b.weight_distribution(Semantics::Multiset).unwrap();
            let q = rat(num, den);
            prop_assert_eq!(multiset.evaluate(&q), wreath_enumerator_closed_form(&a, &b_dist, &q).unwrap());
            prop_assert_eq!(
                multiset.evaluate_at_omega(),
                wreath_enumerator_closed_form(&a, &b_dist, &CycInt::omega()).unwrap()
            );
            let rows = w.generator().rows().to_vec();
            let naive = weight_counts_naive(&rows, w.length()).unwrap();
            let gray: Vec<u64> = multiset.counts().iter().map(|x| u64::try_from(x.clone()).unwrap()).collect();
            prop_assert_eq!(naive, gray);
        }
    }
}
