//! Terminal networks with exact rational edge costs.
//!
//! A [`Network`] is an undirected multigraph on dense vertex ids `0..n` whose
//! edges carry strictly positive rational costs and whose terminals are an
//! ordered list `q1..qk`. Edge ids are positions in the edge list and never
//! change, so every matrix column and cut report can refer to them directly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact edge cost / cut value.
pub type Rational = BigRational;

/// Set of edge ids, ordered for deterministic output.
pub type EdgeSet = BTreeSet<usize>;

/// `num / den` as a [`Rational`].
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a [`Rational`].
pub fn whole(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: Rational,
}

impl Edge {
    pub fn new(u: usize, v: usize, cost: Rational) -> Self {
        Self { u, v, cost }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    n: usize,
    edges: Vec<Edge>,
    terminals: Vec<usize>,
}

impl Network {
    /// A k-terminal network; requires `1 <= k <= n`, distinct terminals and
    /// positive costs.
    pub fn new(n: usize, edges: Vec<Edge>, terminals: Vec<usize>) -> Result<Self> {
        if terminals.is_empty() {
            return Err(Error::InvalidNetwork("a network needs at least one terminal".into()));
        }
        Self::build(n, edges, terminals)
    }

    /// A network without terminals (used for dual graphs).
    pub fn unterminated(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::build(n, edges, Vec::new())
    }

    fn build(n: usize, edges: Vec<Edge>, terminals: Vec<usize>) -> Result<Self> {
        if terminals.len() > n {
            return Err(Error::InvalidNetwork(format!(
                "{} terminals but only {n} vertices",
                terminals.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for &t in &terminals {
            if t >= n {
                return Err(Error::InvalidNetwork(format!("terminal {t} out of range")));
            }
            if !seen.insert(t) {
                return Err(Error::InvalidNetwork(format!("terminal {t} listed twice")));
            }
        }
        for (id, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidNetwork(format!("edge {id} has an endpoint out of range")));
            }
            if !e.cost.is_positive() {
                return Err(Error::InvalidNetwork(format!("edge {id} has non-positive cost {}", e.cost)));
            }
        }
        Ok(Self { n, edges, terminals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Result<&Edge> {
        self.edges.get(id).ok_or(Error::InvalidEdge(id))
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// Position of `v` in the terminal list, if it is a terminal.
    pub fn terminal_index(&self, v: usize) -> Option<usize> {
        self.terminals.iter().position(|&t| t == v)
    }

    pub fn costs(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.cost.clone()).collect()
    }

    pub fn total_cost(&self) -> Rational {
        self.edges.iter().fold(Rational::zero(), |acc, e| acc + &e.cost)
    }

    /// Same graph and terminals with new edge costs.
    pub fn with_costs(&self, costs: Vec<Rational>) -> Result<Self> {
        if costs.len() != self.edges.len() {
            return Err(Error::InvalidNetwork(format!(
                "expected {} costs, got {}",
                self.edges.len(),
                costs.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(costs)
            .map(|(e, cost)| Edge::new(e.u, e.v, cost))
            .collect();
        Self::build(self.n, edges, self.terminals.clone())
    }

    /// `adjacency()[v]` lists `(neighbour, edge id)`; a self-loop appears twice.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        adj
    }

    /// Costs scaled to integers by the least common denominator.
    pub fn scaled_costs(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .edges
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.cost.denom()));
        let scaled = self
            .edges
            .iter()
            .map(|e| e.cost.numer() * (&den / e.cost.denom()))
            .collect();
        (scaled, den)
    }

    /// Cost of the cut `delta(side)`, where `side[v]` marks one side.
    pub fn cut_cost(&self, side: &[bool]) -> Rational {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .fold(Rational::zero(), |acc, e| acc + &e.cost)
    }

    /// Edge ids crossing the vertex bipartition `side`.
    pub fn cutset(&self, side: &[bool]) -> EdgeSet {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| side[e.u] != side[e.v])
            .map(|(id, _)| id)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || connected_components(self, &EdgeSet::new()).is_ok_and(|c| c.len() == 1)
    }
}

/// A nontrivial split of the terminal set, stored canonically: bit `i` set
/// means `q_{i+1}` lies in `S`, and bit 0 is always clear so `q1` sits on
/// the complement side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    k: usize,
    mask: u64,
}

/// Largest terminal count accepted where bipartitions are enumerated.
pub const MAX_TERMINALS: usize = 32;

impl Bipartition {
    pub fn from_mask(k: usize, mask: u64) -> Result<Self> {
        if !(2..=MAX_TERMINALS).contains(&k) {
            return Err(Error::InvalidTerminalCount(k));
        }
        let full = (1u64 << k) - 1;
        if mask & !full != 0 || mask & 1 != 0 || mask == 0 {
            return Err(Error::InvalidBipartition { k, mask });
        }
        Ok(Self { k, mask })
    }

    /// Canonical bipartition for an arbitrary terminal subset (either side).
    pub fn from_subset(k: usize, subset: &[usize]) -> Result<Self> {
        if !(2..=MAX_TERMINALS).contains(&k) {
            return Err(Error::InvalidTerminalCount(k));
        }
        let mut mask = 0u64;
        for &i in subset {
            if i >= k {
                return Err(Error::InvalidParameter(format!("terminal index {i} out of range for k = {k}")));
            }
            mask |= 1 << i;
        }
        Self::from_any_mask(k, mask)
    }

    /// Canonicalizes a mask over terminal indices by complementing if bit 0 is set.
    pub fn from_any_mask(k: usize, mask: u64) -> Result<Self> {
        if !(2..=MAX_TERMINALS).contains(&k) {
            return Err(Error::InvalidTerminalCount(k));
        }
        let full = (1u64 << k) - 1;
        if mask & !full != 0 || mask == 0 || mask == full {
            return Err(Error::InvalidBipartition { k, mask });
        }
        let canonical = if mask & 1 == 1 { full & !mask } else { mask };
        Self::from_mask(k, canonical)
    }

    /// The bipartition at position `index` of [`enumerate_bipartitions`].
    pub fn from_index(k: usize, index: usize) -> Result<Self> {
        Self::from_mask(k, 2 * (index as u64 + 1))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Row index in the canonical enumeration.
    pub fn index(&self) -> usize {
        (self.mask / 2 - 1) as usize
    }

    /// Whether terminal index `i` lies in `S`.
    pub fn in_s(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Terminal indices of `S` (never contains index 0).
    pub fn s_side(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| self.in_s(i)).collect()
    }

    /// Terminal indices of the complement (always contains index 0).
    pub fn complement_side(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| !self.in_s(i)).collect()
    }
}

/// All `2^(k-1) - 1` canonical bipartitions in ascending mask order.
pub fn enumerate_bipartitions(k: usize) -> Result<Vec<Bipartition>> {
    if !(2..=MAX_TERMINALS).contains(&k) {
        return Err(Error::InvalidTerminalCount(k));
    }
    let m = (1usize << (k - 1)) - 1;
    (0..m).map(|i| Bipartition::from_index(k, i)).collect()
}

/// Number of canonical bipartitions for `k` terminals.
pub fn bipartition_count(k: usize) -> usize {
    (1usize << (k - 1)) - 1
}

/// Connected components after deleting `removed`; each component is sorted
/// and components are ordered by their smallest vertex.
pub fn connected_components(net: &Network, removed: &EdgeSet) -> Result<Vec<Vec<usize>>> {
    if let Some(&bad) = removed.iter().find(|&&id| id >= net.edge_count()) {
        return Err(Error::InvalidEdge(bad));
    }
    let mut dsu = DisjointSets::new(net.n());
    for (id, e) in net.edges().iter().enumerate() {
        if !removed.contains(&id) {
            dsu.union(e.u, e.v);
        }
    }
    Ok(dsu.groups())
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Groups in order of smallest member.
    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = self.find(v);
            by_root.entry(r).or_default().push(v);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }
}

/// Assignment of vertices to contraction classes. Vertices without a class
/// are deleted by [`contract`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    class_of: Vec<Option<usize>>,
    classes: Vec<Vec<usize>>,
    terminal_of_class: Vec<Option<usize>>,
}

impl ContractionMap {
    /// Builds a map from disjoint classes; at most one terminal per class.
    pub fn from_classes(net: &Network, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut class_of = vec![None; net.n()];
        let mut terminal_of_class = vec![None::<usize>; classes.len()];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidParameter(format!("class {c} is empty")));
            }
            for &v in members {
                if v >= net.n() {
                    return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
                }
                if class_of[v].is_some() {
                    return Err(Error::InvalidParameter(format!("vertex {v} assigned twice")));
                }
                class_of[v] = Some(c);
                if let Some(t) = net.terminal_index(v) {
                    match terminal_of_class[c] {
                        Some(prev) => {
                            return Err(Error::TerminalCollision {
                                class: c,
                                first: prev.min(t),
                                second: prev.max(t),
                            })
                        }
                        None => terminal_of_class[c] = Some(t),
                    }
                }
            }
        }
        let mut classes = classes;
        for class in &mut classes {
            class.sort_unstable();
        }
        Ok(Self {
            class_of,
            classes,
            terminal_of_class,
        })
    }

    pub fn identity(net: &Network) -> Self {
        Self::from_classes(net, (0..net.n()).map(|v| vec![v]).collect())
            .expect("singleton classes never collide")
    }

    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.class_of.get(v).copied().flatten()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Terminal index contained in class `c`, if any.
    pub fn terminal_of_class(&self, c: usize) -> Option<usize> {
        self.terminal_of_class[c]
    }

    /// Whether every vertex belongs to some class.
    pub fn is_total(&self) -> bool {
        self.class_of.iter().all(Option::is_some)
    }
}

/// Contracts every class to one vertex. Crossing edges between the same pair
/// of classes merge into one edge carrying the summed cost; intra-class edges
/// vanish, as do edges touching deleted vertices.
pub fn contract(net: &Network, map: &ContractionMap) -> Result<Network> {
    if map.class_of.len() != net.n() {
        return Err(Error::InvalidParameter("contraction map does not match the network".into()));
    }
    let mut terminals = Vec::with_capacity(net.k());
    for (i, &q) in net.terminals().iter().enumerate() {
        let c = map.class_of(q).ok_or_else(|| {
            Error::InvalidParameter(format!("terminal q{} is deleted by the contraction", i + 1))
        })?;
        if map.terminal_of_class(c) != Some(i) {
            return Err(Error::Internal(format!("class {c} does not record terminal q{}", i + 1)));
        }
        terminals.push(c);
    }
    let mut merged: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for e in net.edges() {
        let (Some(a), Some(b)) = (map.class_of(e.u), map.class_of(e.v)) else {
            continue;
        };
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        *merged.entry(key).or_insert_with(Rational::zero) += &e.cost;
    }
    let edges = merged.into_iter().map(|((a, b), cost)| Edge::new(a, b, cost)).collect();
    if net.k() == 0 {
        Network::unterminated(map.class_count(), edges)
    } else {
        Network::new(map.class_count(), edges, terminals)
    }
}
