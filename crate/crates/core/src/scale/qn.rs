//! The Qn scale estimator: the `k`-th smallest of the `n(n−1)/2` pairwise
//! absolute differences with `k = C(⌊n/2⌋+1, 2)`.
//!
//! [`qn`] never materialises the differences. After sorting the sample the
//! differences `y[j] − y[i]`, `i < j`, form a matrix whose rows and columns
//! are sorted, and the `k`-th element is found by repeatedly splitting at the
//! weighted median of the row medians of the remaining candidates.

use super::check_sample;
use crate::Result;

fn qn_rank(n: usize) -> usize {
    let h = n / 2 + 1;
    h * (h - 1) / 2
}

/// Reference O(n²) implementation.
pub fn qn_naive(sample: &[f64]) -> Result<f64> {
    check_sample(sample, 2)?;
    let n = sample.len();
    let mut diffs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            diffs.push((sample[i] - sample[j]).abs());
        }
    }
    let k = qn_rank(n);
    let (_, kth, _) = diffs.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}

/// Qn in O(n log n) time and O(n) memory; returns exactly the value of
/// [`qn_naive`].
pub fn qn(sample: &[f64]) -> Result<f64> {
    check_sample(sample, 2)?;
    let mut y = sample.to_vec();
    y.sort_unstable_by(f64::total_cmp);
    Ok(kth_pairwise_difference(&y, qn_rank(y.len())))
}

/// `k`-th smallest (1-based) of `y[j] − y[i]`, `i < j`, for sorted `y`.
fn kth_pairwise_difference(y: &[f64], k: usize) -> f64 {
    let n = y.len();
    debug_assert!(k >= 1 && k <= n * (n - 1) / 2);
    let diff = |i: usize, j: usize| y[j] - y[i];

    // Row i holds columns i+1..n; its candidates are columns lo[i]..hi[i].
    let mut lo: Vec<usize> = (0..n).map(|i| i + 1).collect();
    let mut hi: Vec<usize> = vec![n; n];
    // Entries known to lie strictly left of the candidates, and up to their
    // right end.
    let mut below = 0usize;
    let mut upto = n * (n - 1) / 2;

    let mut work: Vec<(f64, usize)> = Vec::with_capacity(n);
    let mut less = vec![0usize; n];
    let mut less_eq = vec![0usize; n];

    while upto - below > n {
        work.clear();
        for i in 0..n {
            if lo[i] < hi[i] {
                let width = hi[i] - lo[i];
                work.push((diff(i, lo[i] + width / 2), width));
            }
        }
        let trial = weighted_median(&mut work);

        // less[i]: first column of row i whose difference is >= trial;
        // less_eq[i]: first column whose difference is > trial. Both are
        // nondecreasing in i because the rounded differences shrink as the
        // row index grows.
        let mut count_less = 0usize;
        let mut count_less_eq = 0usize;
        let mut j = 1usize;
        let mut j_eq = 1usize;
        for i in 0..n {
            j = j.max(i + 1);
            while j < n && diff(i, j) < trial {
                j += 1;
            }
            less[i] = j;
            count_less += j - (i + 1);

            j_eq = j_eq.max(j);
            while j_eq < n && diff(i, j_eq) <= trial {
                j_eq += 1;
            }
            less_eq[i] = j_eq;
            count_less_eq += j_eq - (i + 1);
        }

        if k <= count_less {
            hi.copy_from_slice(&less);
            upto = count_less;
        } else if k > count_less_eq {
            lo.copy_from_slice(&less_eq);
            below = count_less_eq;
        } else {
            return trial;
        }
    }

    let mut rest: Vec<f64> = Vec::with_capacity(upto - below);
    for i in 0..n {
        rest.extend((lo[i]..hi[i]).map(|j| diff(i, j)));
    }
    let (_, kth, _) = rest.select_nth_unstable_by(k - below - 1, f64::total_cmp);
    *kth
}

/// Smallest value whose cumulative weight reaches half the total weight.
fn weighted_median(items: &mut [(f64, usize)]) -> f64 {
    let total: usize = items.iter().map(|x| x.1).sum();
    let mut target = total.div_ceil(2);
    let (mut lo, mut hi) = (0usize, items.len());
    loop {
        let part = &mut items[lo..hi];
        if part.len() == 1 {
            return part[0].0;
        }
        let mid = part.len() / 2;
        part.select_nth_unstable_by(mid, |a, b| a.0.total_cmp(&b.0));
        let left: usize = part[..mid].iter().map(|x| x.1).sum();
        if left >= target {
            hi = lo + mid;
        } else if left + part[mid].1 >= target {
            return part[mid].0;
        } else {
            target -= left + part[mid].1;
            lo += mid + 1;
        }
    }
}
