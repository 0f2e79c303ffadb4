//! Graphicality tests.
//!
//! Both functions take a degree list in nonincreasing order and decide
//! whether some simple undirected graph realizes it. They are independent
//! algorithms and are cross-checked against each other in tests.

/// Erdős–Gallai: the sum is even and for every `k`,
/// `sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)`.
///
/// Runs in `O(n)` after the caller's sort.
pub fn is_graphical_erdos_gallai(degrees: &[usize]) -> bool {
    debug_assert!(degrees.windows(2).all(|w| w[0] >= w[1]));
    let n = degrees.len();
    let total: u128 = degrees.iter().map(|&d| d as u128).sum();
    if total % 2 == 1 {
        return false;
    }
    let mut suffix = vec![0u128; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + degrees[i] as u128;
    }
    // `at_least` = number of entries >= k; shrinks as k grows.
    let mut at_least = n;
    let mut lhs = 0u128;
    for k in 1..=n {
        lhs += degrees[k - 1] as u128;
        while at_least > 0 && degrees[at_least - 1] < k {
            at_least -= 1;
        }
        // Entries after position k: those >= k contribute k, the rest themselves.
        let capped = at_least.saturating_sub(k);
        let boundary = at_least.max(k);
        let rhs = (k as u128) * (k as u128 - 1) + (k as u128) * capped as u128 + suffix[boundary];
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Havel–Hakimi: repeatedly remove the largest degree `d_1` and decrement the
/// next `d_1` largest entries; fail if that would drive an entry negative.
///
/// Degrees are kept in counting buckets so each round touches only the
/// buckets it decrements.
pub fn is_graphical_havel_hakimi(degrees: &[usize]) -> bool {
    let Some(&max) = degrees.iter().max() else {
        return true;
    };
    if max >= degrees.len() {
        return false;
    }
    let mut count = vec![0usize; max + 1];
    for &d in degrees {
        count[d] += 1;
    }
    let mut top = max;
    let mut moves: Vec<(usize, usize)> = Vec::new();
    loop {
        while top > 0 && count[top] == 0 {
            top -= 1;
        }
        if top == 0 {
            return true;
        }
        count[top] -= 1;
        let mut need = top;
        let mut v = top;
        moves.clear();
        while need > 0 {
            if v == 0 {
                return false;
            }
            let take = count[v].min(need);
            if take > 0 {
                moves.push((v, take));
                need -= take;
            }
            v -= 1;
        }
        for &(v, take) in &moves {
            count[v] -= take;
            count[v - 1] += take;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        for (seq, expected) in [
            (vec![2, 2, 2], true),
            (vec![3, 3, 2], false),
            (vec![3, 1, 1, 1], true),
            (vec![], true),
            (vec![1], false),
            (vec![1, 1], true),
            (vec![3, 3, 3, 1], false),
            (vec![4, 4, 4, 4, 4], true),
        ] {
            assert_eq!(is_graphical_erdos_gallai(&seq), expected, "EG {seq:?}");
            assert_eq!(is_graphical_havel_hakimi(&seq), expected, "HH {seq:?}");
        }
    }

    #[test]
    fn zero_entries_are_allowed() {
        assert!(is_graphical_erdos_gallai(&[1, 1, 0]));
        assert!(is_graphical_havel_hakimi(&[1, 1, 0]));
        assert!(!is_graphical_erdos_gallai(&[2, 0, 0]));
        assert!(!is_graphical_havel_hakimi(&[2, 0, 0]));
    }
}
