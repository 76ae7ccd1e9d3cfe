//! Exhaustive codeword enumeration in Gray-code order.
//!
//! Step `i` visits the row combination `g(i) = i ^ (i >> 1)`. Consecutive
//! indices differ in exactly one bit, namely `trailing_zeros(i)`, so each
//! step costs one row XOR and one popcount per machine word. The index range
//! is split into fixed-size chunks that seed their own start word, which makes
//! the result independent of how many threads run them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{words_for, BitVector};

/// Largest number of generator rows accepted for exhaustive enumeration.
pub const MAX_ENUM_DIM: usize = 28;

const CHUNK_BITS: usize = 16;

fn check_budget(k: usize) -> Result<()> {
    if k > MAX_ENUM_DIM {
        return Err(Error::resource(format!(
            "enumeration would visit 2^{k} row combinations; the limit is 2^{MAX_ENUM_DIM}"
        )));
    }
    Ok(())
}

fn flatten(rows: &[BitVector], words: usize) -> Vec<u64> {
    let mut flat = Vec::with_capacity(rows.len() * words);
    for r in rows {
        flat.extend_from_slice(r.words());
    }
    flat
}

/// Counts of each Hamming weight over all `2^k` combinations of `rows`.
pub fn weight_counts_gray(rows: &[BitVector], n: usize) -> Result<Vec<u64>> {
    let k = rows.len();
    check_budget(k)?;
    assert!(rows.iter().all(|r| r.len() == n), "row length mismatch");
    let total: u64 = 1 << k;
    let words = words_for(n);
    if words == 0 {
        let mut counts = vec![0; n + 1];
        counts[0] = total;
        return Ok(counts);
    }
    let flat = flatten(rows, words);
    let chunk_len: u64 = 1 << CHUNK_BITS.min(k);
    let chunks = total / chunk_len;
    let run = |c: u64| -> Vec<u64> {
        let start = c * chunk_len;
        if words == 1 {
            gray_chunk_single(&flat, n, start, chunk_len)
        } else {
            gray_chunk_multi(&flat, words, n, start, chunk_len)
        }
    };
    let counts = if chunks == 1 {
        run(0)
    } else {
        (0..chunks)
            .into_par_iter()
            .map(run)
            .reduce(|| vec![0; n + 1], |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            })
    };
    Ok(counts)
}

fn gray_chunk_single(rows: &[u64], n: usize, start: u64, len: u64) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let g = start ^ (start >> 1);
    let mut word = 0u64;
    for (j, &r) in rows.iter().enumerate() {
        if (g >> j) & 1 == 1 {
            word ^= r;
        }
    }
    counts[word.count_ones() as usize] += 1;
    for i in start + 1..start + len {
        word ^= rows[i.trailing_zeros() as usize];
        counts[word.count_ones() as usize] += 1;
    }
    counts
}

fn gray_chunk_multi(rows: &[u64], words: usize, n: usize, start: u64, len: u64) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let g = start ^ (start >> 1);
    let k = rows.len() / words;
    let mut cur = vec![0u64; words];
    for j in 0..k {
        if (g >> j) & 1 == 1 {
            for (c, r) in cur.iter_mut().zip(&rows[j * words..(j + 1) * words]) {
                *c ^= r;
            }
        }
    }
    let mut weight: i64 = cur.iter().map(|w| w.count_ones() as i64).sum();
    counts[weight as usize] += 1;
    for i in start + 1..start + len {
        let j = i.trailing_zeros() as usize;
        let row = &rows[j * words..(j + 1) * words];
        for (c, r) in cur.iter_mut().zip(row) {
            let before = c.count_ones() as i64;
            *c ^= r;
            weight += c.count_ones() as i64 - before;
        }
        counts[weight as usize] += 1;
    }
    counts
}

/// Reference enumerator that rebuilds every combination from scratch.
pub fn weight_counts_naive(rows: &[BitVector], n: usize) -> Result<Vec<u64>> {
    let k = rows.len();
    check_budget(k)?;
    let mut counts = vec![0u64; n + 1];
    for mask in 0u64..(1 << k) {
        let mut acc = BitVector::zeros(n);
        for (j, r) in rows.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                acc.xor_assign(r);
            }
        }
        counts[acc.weight()] += 1;
    }
    Ok(counts)
}
