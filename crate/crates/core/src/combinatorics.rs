//! Binomial coefficients and combination (un)ranking.
//!
//! Vertex sets are 1-indexed everywhere in the crate; the helpers here work
//! on 0-based positions and leave the shift to callers.

/// Exact `C(n, k)` if it fits in a `u128`.
pub fn binom_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binom_u64(n: u64, k: u64) -> Option<u64> {
    binom_u128(n, k).and_then(|v| u64::try_from(v).ok())
}

/// Natural log of `C(n, k)`; `-inf` when `k > n`.
pub fn ln_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

/// `C(n, k)` as a float: exact integer arithmetic while it fits below
/// 2^63, the log-domain product beyond that.
pub fn binom_f64(n: u64, k: u64) -> f64 {
    match binom_u128(n, k) {
        Some(v) if v < (1u128 << 63) => v as f64,
        _ => ln_binom(n, k).exp(),
    }
}

/// The `rank`-th `k`-subset of `{0..n}` in colexicographic order, ascending.
///
/// Panics if `rank >= C(n, k)`.
pub fn unrank_colex(mut rank: u64, n: u64, k: usize) -> Vec<u64> {
    let total = binom_u64(n, k as u64).expect("C(n, k) must fit in u64");
    assert!(rank < total, "rank {rank} out of range for C({n}, {k})");
    let mut out = vec![0u64; k];
    let mut upper = n; // exclusive bound for the next element
    for i in (1..=k).rev() {
        // Largest c < upper with C(c, i) <= rank.
        let (mut lo, mut hi) = (i as u64 - 1, upper - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if binom_u64(mid, i as u64).unwrap() <= rank {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        rank -= binom_u64(lo, i as u64).unwrap();
        out[i - 1] = lo;
        upper = lo;
    }
    out
}

/// Lexicographic iterator over the `k`-subsets of `{1..=n}`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: u32,
    current: Option<Vec<u32>>,
}

impl Combinations {
    pub fn new(n: u32, k: usize) -> Self {
        let current = if k as u64 <= n as u64 {
            Some((1..=k as u32).collect())
        } else {
            None
        };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut next = cur.clone();
        // Find the rightmost slot that can still move up.
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - (k - 1 - i) as u32 {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(cur);
            }
        }
        // `cur` was the last combination (or k == 0).
        Some(cur)
    }
}
