//! Binomial coefficients and k-subset enumeration.

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binom(n: u64, k: u64) -> u64 {
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

/// Iterator over the `k`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Subsets {
    n: u32,
    cur: Vec<u32>,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        Subsets {
            n: n as u32,
            cur: (0..k as u32).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - (k - i) as u32 {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Subsets {
    Subsets::new(n, k)
}

/// All `k`-subsets of the given (sorted) items, lexicographic by position.
pub fn subsets_of<T: Copy>(items: &[T], k: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    Subsets::new(items.len(), k).map(move |idx| idx.iter().map(|&i| items[i as usize]).collect())
}

/// Colexicographic rank of a sorted set: `sum_i C(s_i, i + 1)`.
pub fn colex_rank(set: &[u32]) -> usize {
    set.iter()
        .enumerate()
        .map(|(i, &s)| binom(s as u64, i as u64 + 1) as usize)
        .sum()
}

/// Inverse of [`colex_rank`] for sets of size `k`.
pub fn colex_unrank(mut rank: usize, k: usize) -> Vec<u32> {
    let mut out = vec![0u32; k];
    for i in (0..k).rev() {
        // largest s with C(s, i+1) <= rank
        let mut s = i as u64;
        while binom(s + 1, i as u64 + 1) as usize <= rank {
            s += 1;
        }
        out[i] = s as u32;
        rank -= binom(s, i as u64 + 1) as usize;
    }
    out
}

/// Calls `f` on every `d`-subset of a sorted slice (lexicographic by position).
pub fn for_each_subset_of(items: &[u32], d: usize, mut f: impl FnMut(&[u32])) {
    if d > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    let mut buf = vec![0u32; d];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i];
        }
        f(&buf);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < items.len() - (d - i) {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 3), 20);
        assert_eq!(binom(10, 0), 1);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(60, 30), 118264581564861424);
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let all: Vec<_> = subsets(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets(3, 0).count(), 1);
        assert_eq!(subsets(2, 3).count(), 0);
    }

    #[test]
    fn colex_round_trip() {
        for (r, s) in (0..binom(7, 3) as usize).map(|r| (r, colex_unrank(r, 3))) {
            assert_eq!(colex_rank(&s), r);
        }
        let mut seen = vec![false; binom(8, 2) as usize];
        for s in subsets(8, 2) {
            seen[colex_rank(&s)] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn subset_callback_matches_iterator() {
        let items = [1u32, 4, 6, 9];
        let mut got = Vec::new();
        for_each_subset_of(&items, 2, |s| got.push(s.to_vec()));
        let want: Vec<_> = subsets_of(&items, 2).collect();
        assert_eq!(got, want);
        let mut empty = 0;
        for_each_subset_of(&items, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }
}
