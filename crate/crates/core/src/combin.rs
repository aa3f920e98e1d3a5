//! Small combinatorial enumerations: colex ranking of k-subsets and integer
//! vectors with a fixed modulus.

use crate::numeric::binomial_u64;

fn binom(n: usize, k: usize) -> usize {
    binomial_u64(n, k).expect("binomial overflow") as usize
}

/// Colex rank of a strictly increasing subset.
pub fn rank_subset(sorted: &[usize]) -> usize {
    sorted
        .iter()
        .enumerate()
        .map(|(j, &c)| binom(c, j + 1))
        .sum()
}

/// Inverse of [`rank_subset`] for subsets of size `k`.
pub fn unrank_subset(mut rank: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for j in (1..=k).rev() {
        let mut c = j - 1;
        while binom(c + 1, j) <= rank {
            c += 1;
        }
        out[j - 1] = c;
        rank -= binom(c, j);
    }
    out
}

/// All vectors `α` with `0 <= α_i <= caps[i]` and `|α| = total`, in
/// lexicographically decreasing order (the greedy left-to-right fill first).
pub fn bounded_compositions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut suffix_cap = vec![0usize; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        suffix_cap[i] = suffix_cap[i + 1].saturating_add(caps[i]);
    }
    let mut current = vec![0; caps.len()];
    fill(0, total, caps, &suffix_cap, &mut current, &mut out);
    out
}

fn fill(
    i: usize,
    remaining: usize,
    caps: &[usize],
    suffix_cap: &[usize],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == caps.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    if suffix_cap[i] < remaining {
        return;
    }
    let hi = caps[i].min(remaining);
    for v in (0..=hi).rev() {
        current[i] = v;
        fill(i + 1, remaining - v, caps, suffix_cap, current, out);
    }
    current[i] = 0;
}

/// All `k`-subsets of `0..n` in colex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    (0..binom(n, k)).map(|r| unrank_subset(r, k)).collect()
}

/// All vectors of `parts` non-negative integers summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    bounded_compositions(total, &vec![total; parts])
}
