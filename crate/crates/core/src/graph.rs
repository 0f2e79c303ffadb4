//! Immutable simple graphs in compressed-row layout.
//!
//! A [`Graph`] stores sorted neighbour lists back to back. The random-walk
//! operator `P = A D^-1` is never materialized: [`Graph::apply_walk`] spreads
//! each node's mass uniformly over its neighbours.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// Counts of what [`GraphBuilder::build`] discarded while cleaning its input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct BuildStats {
    pub self_loops: usize,
    pub duplicates: usize,
    pub isolated_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    directed: bool,
    original_ids: Vec<u64>,
}

/// Accumulates raw edges and produces a cleaned [`Graph`].
///
/// Self-loops and repeated edges are dropped. Nodes left without neighbours
/// are removed and the survivors renumbered densely in original-id order.
/// For directed graphs removal repeats until every node has an out-neighbour.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    directed: bool,
    original_ids: Vec<u64>,
    edges: Vec<(u32, u32)>,
    self_loops: usize,
}

impl GraphBuilder {
    /// A builder over nodes `0..n` whose original ids are their indices.
    pub fn new(n: usize, directed: bool) -> Self {
        Self::with_original_ids((0..n as u64).collect(), directed)
    }

    /// `original_ids[i]` is reported for dense node `i`; it must be increasing.
    pub fn with_original_ids(original_ids: Vec<u64>, directed: bool) -> Self {
        debug_assert!(original_ids.windows(2).all(|w| w[0] < w[1]));
        assert!(original_ids.len() <= u32::MAX as usize, "node count exceeds u32 range");
        Self {
            directed,
            original_ids,
            edges: Vec::new(),
            self_loops: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        let n = self.node_count();
        assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
        if u == v {
            self.self_loops += 1;
            return;
        }
        let (u, v) = if self.directed || u < v { (u, v) } else { (v, u) };
        self.edges.push((u as u32, v as u32));
    }

    pub fn build(mut self) -> Result<(Graph, BuildStats)> {
        let raw = self.edges.len();
        self.edges.sort_unstable();
        self.edges.dedup();
        let duplicates = raw - self.edges.len();

        let mut n = self.node_count();
        let mut original_ids = self.original_ids;
        let mut edges = self.edges;
        let mut isolated_removed = 0;
        loop {
            let mut keep = vec![false; n];
            for &(u, v) in &edges {
                keep[u as usize] = true;
                if !self.directed {
                    keep[v as usize] = true;
                }
            }
            let kept = keep.iter().filter(|k| **k).count();
            if kept == n {
                break;
            }
            isolated_removed += n - kept;
            let mut remap = vec![u32::MAX; n];
            let mut next = 0u32;
            for i in 0..n {
                if keep[i] {
                    remap[i] = next;
                    next += 1;
                }
            }
            original_ids = original_ids
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(id, _)| *id)
                .collect();
            edges = edges
                .into_iter()
                .filter(|&(u, v)| keep[u as usize] && keep[v as usize])
                .map(|(u, v)| (remap[u as usize], remap[v as usize]))
                .collect();
            n = kept;
            if !self.directed {
                // Undirected removal cannot isolate anyone else.
                break;
            }
        }

        if n == 0 {
            return Err(Error::InvalidGraph("no edges remain after cleaning".into()));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            if !self.directed {
                degree[v as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in &edges {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            if !self.directed {
                targets[cursor[v as usize]] = u;
                cursor[v as usize] += 1;
            }
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }

        let graph = Graph {
            offsets,
            targets,
            directed: self.directed,
            original_ids,
        };
        let stats = BuildStats {
            self_loops: self.self_loops,
            duplicates,
            isolated_removed,
        };
        Ok((graph, stats))
    }
}

impl Graph {
    /// Builds a graph over `0..n` from an edge list, cleaning as [`GraphBuilder`] does.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        directed: bool,
    ) -> Result<(Graph, BuildStats)> {
        let mut b = GraphBuilder::new(n, directed);
        for (u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    /// Assembles a graph from raw compressed-row arrays, checking every invariant.
    pub fn from_csr(offsets: Vec<usize>, targets: Vec<u32>, directed: bool) -> Result<Graph> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if offsets.is_empty() || offsets[0] != 0 {
            return bad("offsets must start at 0".into());
        }
        let n = offsets.len() - 1;
        if n == 0 {
            return bad("graph has no nodes".into());
        }
        if n > u32::MAX as usize {
            return bad("node count exceeds u32 range".into());
        }
        if *offsets.last().unwrap() != targets.len() {
            return bad("offsets do not cover the adjacency array".into());
        }
        for i in 0..n {
            if offsets[i + 1] <= offsets[i] {
                return bad(format!("node {i} has degree 0 or negative extent"));
            }
            let adj = &targets[offsets[i]..offsets[i + 1]];
            for (k, &j) in adj.iter().enumerate() {
                if j as usize >= n {
                    return bad(format!("node {i} lists neighbour {j} out of range"));
                }
                if j as usize == i {
                    return bad(format!("self-loop at node {i}"));
                }
                if k > 0 && adj[k - 1] >= j {
                    return bad(format!("neighbours of node {i} not strictly increasing"));
                }
            }
        }
        let g = Graph {
            offsets,
            targets,
            directed,
            original_ids: (0..n as u64).collect(),
        };
        if !directed && !g.is_symmetric() {
            return bad("undirected adjacency is not symmetric".into());
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Stored adjacency entries; twice the edge count for undirected graphs.
    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }

    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.targets.len()
        } else {
            self.targets.len() / 2
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn original_id(&self, i: usize) -> u64 {
        self.original_ids[i]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    /// The node of maximum degree, ties broken by smallest id.
    pub fn max_degree_node(&self) -> usize {
        let mut best = 0;
        for i in 1..self.node_count() {
            if self.degree(i) > self.degree(best) {
                best = i;
            }
        }
        best
    }

    /// Each edge once: `u < v` for undirected graphs, every arc for directed ones.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(move |&v| (u, v as usize))
                .filter(move |&(u, v)| self.directed || u < v)
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.node_count())
            .all(|u| self.neighbors(u).iter().all(|&v| self.has_edge(v as usize, u)))
    }

    /// `w = P v`: every node `i` sends `v_i / deg(i)` to each neighbour.
    pub fn apply_walk(&self, v: &SparseVector) -> SparseVector {
        let mut w = SparseVector::new();
        for (i, x) in v.iter() {
            if x == 0.0 {
                continue;
            }
            let share = x / self.degree(i) as f64;
            for &j in self.neighbors(i) {
                w.add(j as usize, share);
            }
        }
        w
    }

    /// Dense `out = P x`.
    pub fn apply_walk_dense(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let share = xi / self.degree(i) as f64;
            for &j in self.neighbors(i) {
                out[j as usize] += share;
            }
        }
    }

    /// Component label per node (labels in order of first node visited) and sizes.
    pub fn connected_components(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let c = sizes.len();
            label[s] = c;
            queue.push_back(s);
            let mut size = 0;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if label[v] == usize::MAX {
                        label[v] = c;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        (label, sizes)
    }

    /// Induced subgraph on the largest component plus the fraction of nodes kept.
    ///
    /// Ties go to the component holding the smallest original id. Treats the
    /// adjacency as undirected.
    pub fn largest_connected_component(&self) -> (Graph, f64) {
        let n = self.node_count();
        let (label, sizes) = self.connected_components();
        // Labels are assigned by scanning nodes in order, and original ids are
        // increasing, so the lowest label among the largest wins the tie.
        let biggest = sizes.iter().copied().max().unwrap_or(0);
        let chosen = sizes.iter().position(|&s| s == biggest).unwrap_or(0);
        let fraction = biggest as f64 / n as f64;
        if biggest == n {
            return (self.clone(), 1.0);
        }

        let mut remap = vec![u32::MAX; n];
        let mut original_ids = Vec::with_capacity(biggest);
        for i in 0..n {
            if label[i] == chosen {
                remap[i] = original_ids.len() as u32;
                original_ids.push(self.original_ids[i]);
            }
        }
        let mut offsets = Vec::with_capacity(biggest + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for i in (0..n).filter(|&i| label[i] == chosen) {
            targets.extend(self.neighbors(i).iter().map(|&j| remap[j as usize]));
            offsets.push(targets.len());
        }
        let g = Graph {
            offsets,
            targets,
            directed: self.directed,
            original_ids,
        };
        (g, fraction)
    }

    /// Triangles counted once each, by intersecting sorted neighbour lists.
    pub fn triangle_count(&self) -> u64 {
        let mut count = 0u64;
        for u in 0..self.node_count() {
            let nu = self.neighbors(u);
            for &v in nu.iter().filter(|&&v| v as usize > u) {
                let nv = self.neighbors(v as usize);
                // Count common neighbours w > v.
                let (mut a, mut b) = (
                    nu.partition_point(|&w| w <= v),
                    nv.partition_point(|&w| w <= v),
                );
                while a < nu.len() && b < nv.len() {
                    match nu[a].cmp(&nv[b]) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            count += 1;
                            a += 1;
                            b += 1;
                        }
                    }
                }
            }
        }
        count
    }

    pub fn wedge_count(&self) -> u64 {
        (0..self.node_count())
            .map(|i| {
                let d = self.degree(i) as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum()
    }

    /// `3 * triangles / wedges`, or 0 when there are no wedges.
    pub fn global_clustering_coefficient(&self) -> f64 {
        let wedges = self.wedge_count();
        if wedges == 0 {
            return 0.0;
        }
        3.0 * self.triangle_count() as f64 / wedges as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied(), false).unwrap().0
    }

    fn triangle() -> Graph {
        graph(3, &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn builder_drops_loops_and_duplicates() {
        let (g, stats) = Graph::from_edges(2, [(0, 0), (0, 1), (1, 0), (0, 1)], false).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(stats.self_loops, 1);
        assert_eq!(stats.duplicates, 2);
        assert_eq!(g.degrees(), vec![1, 1]);
    }

    #[test]
    fn builder_removes_isolated_nodes() {
        let (g, stats) = Graph::from_edges(5, [(0, 3), (3, 4)], false).unwrap();
        assert_eq!(stats.isolated_removed, 2);
        assert_eq!(g.original_ids(), &[0, 3, 4]);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn directed_builder_prunes_until_no_sinks() {
        // 2 has no out-arc; once gone, 1 has none either.
        let (g, stats) = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3), (3, 0)], true).unwrap();
        assert_eq!(stats.isolated_removed, 2);
        assert_eq!(g.original_ids(), &[0, 3]);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn empty_graph_is_an_error() {
        assert!(Graph::from_edges(3, [(1, 1)], false).is_err());
    }

    #[test]
    fn from_csr_rejects_bad_input() {
        assert!(Graph::from_csr(vec![0, 1, 2], vec![1, 0], false).is_ok());
        assert!(Graph::from_csr(vec![0, 1, 1], vec![1], false).is_err());
        assert!(Graph::from_csr(vec![0, 1, 2], vec![1, 1], false).is_err());
        assert!(Graph::from_csr(vec![0, 2, 3], vec![1, 1, 0], false).is_err());
        assert!(Graph::from_csr(vec![0, 1, 2, 3], vec![1, 2, 0], false).is_err());
        assert!(Graph::from_csr(vec![0, 1, 2, 3], vec![1, 2, 0], true).is_ok());
    }

    #[test]
    fn largest_component_of_two_triangles_and_an_edge() {
        let g = graph(8, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 7)]);
        let (c, frac) = g.largest_connected_component();
        assert_eq!(c.node_count(), 3);
        assert_eq!(frac, 3.0 / 8.0);
        assert_eq!(c.original_ids(), &[0, 1, 2]);
    }

    #[test]
    fn largest_component_of_connected_star_is_identity() {
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let (c, frac) = g.largest_connected_component();
        assert_eq!(c, g);
        assert_eq!(frac, 1.0);
    }

    #[test]
    fn largest_component_tie_prefers_smallest_original_id() {
        // Components {1,3,5,7} and {0,2,4,6}; the latter holds id 0.
        let g = graph(8, &[(1, 3), (3, 5), (5, 7), (0, 2), (2, 4), (4, 6)]);
        let (c, frac) = g.largest_connected_component();
        assert_eq!(frac, 0.5);
        assert_eq!(c.original_ids(), &[0, 2, 4, 6]);
        assert!(c.is_symmetric());
    }

    #[test]
    fn walk_on_single_edge() {
        let g = graph(2, &[(0, 1)]);
        assert_eq!(g.apply_walk(&SparseVector::unit(0)), SparseVector::unit(1));
    }

    #[test]
    fn walk_from_star_center() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let w = g.apply_walk(&SparseVector::unit(0));
        for leaf in 1..4 {
            assert_eq!(w.get(leaf), 1.0 / 3.0);
        }
        assert_eq!(w.get(0), 0.0);
    }

    #[test]
    fn walk_on_triangle() {
        let w = triangle().apply_walk(&SparseVector::unit(0));
        assert_eq!(w.to_dense(3), vec![0.0, 0.5, 0.5]);
    }

    #[test]
    fn clustering_coefficients() {
        assert_eq!(triangle().global_clustering_coefficient(), 1.0);
        assert_eq!(graph(3, &[(0, 1), (1, 2)]).global_clustering_coefficient(), 0.0);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.triangle_count(), 4);
        assert_eq!(k4.wedge_count(), 12);
        assert_eq!(k4.global_clustering_coefficient(), 1.0);
        assert_eq!(graph(2, &[(0, 1)]).global_clustering_coefficient(), 0.0);
    }

    #[test]
    fn max_degree_node_breaks_ties_by_id() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.max_degree_node(), 1);
    }
}
