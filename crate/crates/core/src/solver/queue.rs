//! Exact argmax over a changing residual, with lazy invalidation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy)]
struct Entry {
    value: f64,
    node: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Larger value first; among equal values the smaller node id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Max-priority queue keyed by residual value.
///
/// Every time a node's residual changes to a positive value the caller
/// pushes `(node, value)`. Older entries for the node stay in the heap and
/// are discarded when popped, because their value no longer matches the
/// residual. As long as every current positive value has been pushed, the
/// pop is an exact maximum.
#[derive(Debug, Default)]
pub struct ResidualQueue {
    heap: BinaryHeap<Entry>,
}

impl ResidualQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: usize, value: f64) {
        debug_assert!(value > 0.0);
        self.heap.push(Entry {
            value,
            node: node as u32,
        });
    }

    /// Removes and returns the largest current entry of `residual`.
    pub fn pop_max(&mut self, residual: &[f64]) -> Option<(usize, f64)> {
        while let Some(e) = self.heap.pop() {
            let current = residual[e.node as usize];
            if current > 0.0 && current.to_bits() == e.value.to_bits() {
                return Some((e.node as usize, current));
            }
        }
        None
    }

    /// Heap entries including stale ones.
    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Drops stale entries by rebuilding from the live positive values.
    pub fn rebuild(&mut self, live: impl Iterator<Item = (usize, f64)>) {
        self.heap.clear();
        self.heap.extend(live.filter(|(_, v)| *v > 0.0).map(|(node, value)| Entry {
            value,
            node: node as u32,
        }));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn linear_argmax(r: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in r.iter().enumerate() {
            if v > 0.0 && best.map_or(true, |(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best
    }

    #[test]
    fn tie_goes_to_smallest_id() {
        let (a, b, c) = (4, 9, 2);
        let mut r = vec![0.0; 10];
        r[a] = 0.3;
        r[b] = 0.3;
        r[c] = 0.1;
        let mut q = ResidualQueue::new();
        for &i in &[b, c, a] {
            q.push(i, r[i]);
        }
        assert_eq!(q.pop_max(&r), Some((a, 0.3)));
        r[a] = 0.0;
        assert_eq!(q.pop_max(&r), Some((b, 0.3)));
    }

    #[test]
    fn stale_entries_are_skipped() {
        let mut r = vec![0.5, 0.2];
        let mut q = ResidualQueue::new();
        q.push(0, 0.5);
        q.push(1, 0.2);
        r[1] = 0.7;
        q.push(1, 0.7);
        r[0] = 0.0;
        assert_eq!(q.pop_max(&r), Some((1, 0.7)));
        assert_eq!(q.pop_max(&r), None);
    }

    #[test]
    fn matches_linear_scan_under_random_updates() {
        let n = 300;
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let mut r = vec![0.0f64; n];
        let mut q = ResidualQueue::new();
        for _ in 0..50 {
            let i = rng.gen_range(0..n);
            // Coarse values make ties common.
            r[i] += rng.gen_range(1..5) as f64 * 0.125;
            q.push(i, r[i]);
        }
        for step in 0..10_000 {
            let expected = linear_argmax(&r);
            let got = q.pop_max(&r);
            assert_eq!(got, expected, "step {step}");
            let Some((j, _)) = got else { break };
            r[j] = 0.0;
            for _ in 0..rng.gen_range(1..4) {
                let i = rng.gen_range(0..n);
                r[i] += rng.gen_range(1..5) as f64 * 0.125;
                q.push(i, r[i]);
            }
            if step % 997 == 0 {
                q.rebuild(r.iter().copied().enumerate());
            }
        }
    }
}
