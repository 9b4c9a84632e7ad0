//! Shortest-augmenting-path (Dinic) maximum flow over exact integers.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Integer capacity usable by [`FlowGraph`].
pub(crate) trait Capacity: Clone + Ord + Zero + One + Add<Output = Self> + Sub<Output = Self> {
    fn to_bigint(&self) -> BigInt;
}

impl Capacity for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Capacity for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Converts scaled costs to `i128` when their sum leaves generous headroom.
pub(crate) fn narrow(costs: &[BigInt]) -> Option<Vec<i128>> {
    let total: BigInt = costs.iter().sum();
    if total.bits() > 120 {
        return None;
    }
    costs.iter().map(|c| c.to_i128()).collect()
}

/// Residual graph; arc `a ^ 1` is the reverse of arc `a`.
pub(crate) struct FlowGraph<C> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<C>,
}

impl<C: Capacity> FlowGraph<C> {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            residual: Vec::new(),
        }
    }

    fn push_pair(&mut self, u: usize, v: usize, forward: C, backward: C) {
        let a = self.to.len();
        self.to.push(v);
        self.residual.push(forward);
        self.to.push(u);
        self.residual.push(backward);
        self.adj[u].push(a);
        self.adj[v].push(a + 1);
    }

    /// Undirected edge: capacity `cap` in both directions.
    pub(crate) fn add_undirected(&mut self, u: usize, v: usize, cap: C) {
        self.push_pair(u, v, cap.clone(), cap);
    }

    pub(crate) fn add_arc(&mut self, u: usize, v: usize, cap: C) {
        self.push_pair(u, v, cap, C::zero());
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> C {
        let mut total = C::zero();
        if source == sink {
            return total;
        }
        loop {
            let level = self.levels(source);
            if level[sink] == usize::MAX {
                return total;
            }
            let mut next_arc = vec![0usize; self.adj.len()];
            while let Some(pushed) = self.augment(source, sink, &level, &mut next_arc) {
                total = total + pushed;
            }
        }
    }

    fn levels(&self, source: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if level[v] == usize::MAX && self.residual[a] > C::zero() {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// One augmenting path along the level graph, found iteratively.
    fn augment(&mut self, source: usize, sink: usize, level: &[usize], next_arc: &mut [usize]) -> Option<C> {
        let mut path: Vec<usize> = Vec::new();
        let mut u = source;
        loop {
            if u == sink {
                let bottleneck = path
                    .iter()
                    .map(|&a| self.residual[a].clone())
                    .min()
                    .expect("path to sink is non-empty");
                for &a in &path {
                    self.residual[a] = self.residual[a].clone() - bottleneck.clone();
                    self.residual[a ^ 1] = self.residual[a ^ 1].clone() + bottleneck.clone();
                }
                return Some(bottleneck);
            }
            let mut advanced = false;
            while next_arc[u] < self.adj[u].len() {
                let a = self.adj[u][next_arc[u]];
                let v = self.to[a];
                if self.residual[a] > C::zero() && level[v] == level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                next_arc[u] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the arc that led here
                let a = path.pop()?;
                u = self.to[a ^ 1];
                next_arc[u] += 1;
            }
        }
    }

    /// Vertices reachable from `source` in the residual graph.
    pub(crate) fn reachable_from(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if !seen[v] && self.residual[a] > C::zero() {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Vertices that can still reach `sink` in the residual graph.
    pub(crate) fn reaching(&self, sink: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[sink] = true;
        let mut queue = VecDeque::from([sink]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                // a: x -> y, so a ^ 1: y -> x
                let y = self.to[a];
                if !seen[y] && self.residual[a ^ 1] > C::zero() {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_directed_instance() {
        // CLRS example, max flow 23
        let mut g: FlowGraph<i128> = FlowGraph::new(6);
        for (u, v, c) in [(0, 1, 16), (0, 2, 13), (1, 3, 12), (2, 1, 4), (2, 4, 14), (3, 2, 9), (3, 5, 20), (4, 3, 7), (4, 5, 4)] {
            g.add_arc(u, v, c);
        }
        assert_eq!(g.max_flow(0, 5), 23);
        let side = g.reachable_from(0);
        assert!(side[0] && !side[5]);
    }

    #[test]
    fn undirected_matches_bigint() {
        let edges = [(0, 1, 3), (1, 2, 5), (0, 2, 1), (2, 3, 4), (1, 3, 2)];
        let mut small: FlowGraph<i128> = FlowGraph::new(4);
        let mut big: FlowGraph<BigInt> = FlowGraph::new(4);
        for (u, v, c) in edges {
            small.add_undirected(u, v, c);
            big.add_undirected(u, v, BigInt::from(c));
        }
        assert_eq!(small.max_flow(0, 3), 4);
        assert_eq!(big.max_flow(0, 3), BigInt::from(4));
    }
}
