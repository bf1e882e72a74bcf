//! The nerve of a finite group: `n`-simplices are tuples `(g_1, .., g_n)`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// `g_ij = g_{i+1} ⋯ g_j` for `i <= j`, stored at `i * (n + 1) + j`.
pub fn edge_products(g: &FiniteGroup, tuple: &[usize]) -> Vec<usize> {
    let n = tuple.len();
    let mut out = vec![0; (n + 1) * (n + 1)];
    for i in 0..=n {
        let mut acc = 0;
        for j in i + 1..=n {
            acc = g.mul(acc, tuple[j - 1]);
            out[i * (n + 1) + j] = acc;
        }
    }
    out
}

/// `d_i`: drop the first entry (`i = 0`), the last (`i = n`), or multiply
/// entries `i` and `i + 1` together.
pub fn face(g: &FiniteGroup, tuple: &[usize], i: usize) -> Result<Vec<usize>> {
    let n = tuple.len();
    if n == 0 || i > n {
        return Err(Error::NotMonotone(vec![i]));
    }
    Ok(if i == 0 {
        tuple[1..].to_vec()
    } else if i == n {
        tuple[..n - 1].to_vec()
    } else {
        let mut out = tuple[..i - 1].to_vec();
        out.push(g.mul(tuple[i - 1], tuple[i]));
        out.extend_from_slice(&tuple[i + 1..]);
        out
    })
}

/// `s_i`: insert the identity at position `i`.
pub fn degeneracy(tuple: &[usize], i: usize) -> Result<Vec<usize>> {
    if i > tuple.len() {
        return Err(Error::NotMonotone(vec![i]));
    }
    let mut out = tuple.to_vec();
    out.insert(i, 0);
    Ok(out)
}

pub fn all_tuples(order: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        out = out.iter().flat_map(|t| (0..order).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// The degenerate `n`-simplices, computed as the union of the images of all
/// degeneracy maps out of level `n - 1`.
pub fn degenerate_simplices(g: &FiniteGroup, n: usize) -> BTreeSet<Vec<usize>> {
    if n == 0 {
        return BTreeSet::new();
    }
    all_tuples(g.order(), n - 1)
        .iter()
        .flat_map(|t| (0..n).map(move |i| degeneracy(t, i).expect("index in range")))
        .collect()
}
