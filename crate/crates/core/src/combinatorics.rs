//! Binomial coefficients and k-subset enumeration.
//!
//! Enumeration is colexicographic: `{0,1,2} < {0,1,3} < {0,2,3} < {1,2,3} < {0,1,4} ...`.
//! The colex rank of a sorted set `c_0 < ... < c_{k-1}` is `sum_i C(c_i, i + 1)`, which
//! does not depend on `n`, so ranks are stable when the vertex count grows.

/// `C(n, k)` as `u128`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Falling factorial `n (n-1) ... (n-r+1)`, saturating.
pub fn falling_factorial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128))
}

/// Falling factorial as a float, for expectations.
pub fn falling_factorial_f64(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).map(|i| (n - i) as f64).product()
}

/// Dense table of `C(v, i)` for `v < n`, `i <= k`, used for colex ranking.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    k: usize,
    rows: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let mut rows = vec![0u64; n.max(1) * (k + 1)];
        for v in 0..n {
            for i in 0..=k {
                rows[v * (k + 1) + i] = u64::try_from(binomial(v, i)).unwrap_or(u64::MAX);
            }
        }
        BinomialTable { k, rows }
    }

    #[inline]
    pub fn get(&self, v: usize, i: usize) -> u64 {
        self.rows[v * (self.k + 1) + i]
    }

    /// Colex rank of a strictly increasing slice.
    #[inline]
    pub fn colex_rank(&self, sorted: &[usize]) -> u64 {
        sorted
            .iter()
            .enumerate()
            .map(|(i, &c)| self.get(c, i + 1))
            .sum()
    }
}

/// Calls `f` on every k-subset of `0..n` in colex order. `f` returns `false` to stop early.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !f(&c) {
            return;
        }
        // find the smallest position that can be bumped
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { c[i + 1] } else { n };
            if c[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == k {
            return;
        }
        c[i] += 1;
        for (j, slot) in c.iter_mut().enumerate().take(i) {
            *slot = j;
        }
    }
}

/// Calls `f` on every k-subset of `0..n` in lexicographic order. `f` returns `false` to stop.
pub fn for_each_combination_lex(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !f(&c) {
            return;
        }
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Calls `f` on every `r`-subset of `items` (as sorted index picks into `items`), colex order.
pub fn for_each_subset_of<T: Copy>(items: &[T], r: usize, mut f: impl FnMut(&[T]) -> bool) {
    let mut buf = Vec::with_capacity(r);
    for_each_combination(items.len(), r, |idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        f(&buf)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(20, 3), 1140);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn colex_order_and_rank_agree() {
        let table = BinomialTable::new(7, 3);
        let mut expected = 0u64;
        let mut count = 0;
        for_each_combination(7, 3, |c| {
            assert_eq!(table.colex_rank(c), expected);
            expected += 1;
            count += 1;
            true
        });
        assert_eq!(count, 35);
    }

    #[test]
    fn colex_first_sets() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, |c| {
            seen.push(c.to_vec());
            seen.len() < 5
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 2, 3],
                vec![1, 2, 3],
                vec![0, 1, 4]
            ]
        );
    }

    #[test]
    fn lex_order_is_sorted_and_complete() {
        let mut all = Vec::new();
        for_each_combination_lex(6, 3, |c| {
            all.push(c.to_vec());
            true
        });
        assert_eq!(all.len(), 20);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let mut empty = 0;
        for_each_combination_lex(3, 0, |c| {
            assert!(c.is_empty());
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(4, 3), 24);
        assert_eq!(falling_factorial(3, 4), 0);
        assert_eq!(falling_factorial(9, 0), 1);
        assert_eq!(falling_factorial_f64(18, 3), 4896.0);
    }
}
