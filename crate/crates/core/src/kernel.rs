//! Character-sum kernel shared by single curves, fibre products and search.
//!
//! For polynomials f_1..f_k over F_q it accumulates, in one pass over the
//! field, S_I = Σ_x χ(f_I(x)) for every non-empty subset I (bit i-1 of the
//! mask selects f_i). χ is multiplicative, so χ(f_I(x)) is the product of
//! the per-polynomial characters.

use rayon::prelude::*;

use crate::field::FieldSpec;
use crate::poly::eval_slice;

const PARALLEL_THRESHOLD: u64 = 1 << 15;
const CHUNK: u64 = 1 << 12;

/// `sums[mask]` holds S_I; `sums[0]` is unused and stays zero.
pub(crate) fn subset_char_sums(spec: &FieldSpec, polys: &[&[u64]]) -> Vec<i64> {
    let k = polys.len();
    let q = spec.q();
    let table = spec.char_table().ok();
    let range_sums = |lo: u64, hi: u64| {
        let mut sums = vec![0i64; 1 << k];
        let mut prods = vec![0i8; 1 << k];
        let mut chis = vec![0i8; k];
        for x in lo..hi {
            for (c, f) in chis.iter_mut().zip(polys) {
                let v = eval_slice(spec, f, x);
                *c = match table {
                    Some(t) => t[v as usize],
                    None => spec.chi_raw(v),
                };
            }
            accumulate(&chis, &mut prods, &mut sums);
        }
        sums
    };
    if q < PARALLEL_THRESHOLD {
        return range_sums(0, q);
    }
    let chunks: Vec<u64> = (0..q.div_ceil(CHUNK)).collect();
    chunks
        .par_iter()
        .map(|&c| range_sums(c * CHUNK, ((c + 1) * CHUNK).min(q)))
        .reduce(
            || vec![0i64; 1 << k],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Same sums from precomputed character rows `rows[i][x] = χ(f_i(x))`.
/// `prods` and `sums` must have length 2^k; `sums` is overwritten.
pub(crate) fn subset_char_sums_from_rows(rows: &[&[i8]], prods: &mut [i8], sums: &mut [i64]) {
    let k = rows.len();
    let q = rows[0].len();
    sums.iter_mut().for_each(|s| *s = 0);
    if k == 2 {
        // Hot path for pairs.
        let (mut s1, mut s2, mut s12) = (0i64, 0i64, 0i64);
        for (&a, &b) in rows[0].iter().zip(rows[1]) {
            s1 += a as i64;
            s2 += b as i64;
            s12 += (a * b) as i64;
        }
        sums[1] = s1;
        sums[2] = s2;
        sums[3] = s12;
        return;
    }
    let mut chis = [0i8; 64];
    for x in 0..q {
        for (c, row) in chis.iter_mut().zip(rows) {
            *c = row[x];
        }
        accumulate(&chis[..k], prods, sums);
    }
}

#[inline]
fn accumulate(chis: &[i8], prods: &mut [i8], sums: &mut [i64]) {
    prods[0] = 1;
    for mask in 1..prods.len() {
        let low = mask.trailing_zeros() as usize;
        let v = prods[mask & (mask - 1)] * chis[low];
        prods[mask] = v;
        sums[mask] += v as i64;
    }
}

/// χ(f(x)) for every x in enumeration order, written into `out`.
pub(crate) fn char_row(spec: &FieldSpec, table: &[i8], f: &[u64], out: &mut Vec<i8>) {
    out.clear();
    out.extend((0..spec.q()).map(|x| table[eval_slice(spec, f, x) as usize]));
}
