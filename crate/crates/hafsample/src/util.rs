//! Small combinatorial and summation helpers.

/// Binomial coefficient C(n, k) as u64; saturates on overflow (callers
/// compare against budgets far below the saturation point).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Double factorial (2m-1)!! = 1·3·5···(2m-1), the number of perfect
/// matchings of 2m labelled points.
pub fn double_factorial_odd(m: usize) -> u64 {
    (0..m).fold(1u64, |acc, i| acc.saturating_mul(2 * i as u64 + 1))
}

/// The `rank`-th k-subset of {0,..,n-1} in lexicographic order.
///
/// Lexicographic over the ascending vertex lists: rank 0 is {0,1,..,k-1},
/// the last rank is {n-k,..,n-1}.
pub fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    debug_assert!(rank < binomial(n, k));
    let mut out = Vec::with_capacity(k);
    let mut v = 0usize;
    for slot in 0..k {
        loop {
            // subsets that put v in this slot
            let here = binomial(n - 1 - v, k - 1 - slot);
            if rank < here {
                break;
            }
            rank -= here;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    out
}

/// Pairwise (cascade) summation in fixed order: deterministic for a given
/// slice and more accurate than a running sum on long inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 64;
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
