//! Minimum terminal cuts via maximum flow.
//!
//! The terminals on the `q1` side are joined to a super-source and the others
//! to a super-sink. After the flow, the residual-reachable set from the
//! super-source is the inclusion-minimal source side, which is the canonical
//! cut reported everywhere in this crate.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::flow::{narrow, Capacity, FlowGraph};
use crate::network::{Bipartition, EdgeSet, Network, Rational};
use crate::oracle;

/// A minimum separating cut. `side` is the canonical side, the one holding
/// the source terminals (for bipartitions: the side containing `q1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub value: Rational,
    pub cutset: EdgeSet,
    pub side: BTreeSet<usize>,
}

/// Gap between the two smallest S-separating cut costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapValue {
    Finite(Rational),
    /// Only one S-separating cutset exists.
    Unbounded,
    /// Beyond oracle capacity; only uniqueness is known.
    Unavailable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub delta: GapValue,
    pub min_value: Rational,
    pub second_best: Option<Rational>,
    pub unique: bool,
}

enum Scaled {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

struct FlowCut {
    value: BigInt,
    min_side: Vec<bool>,
    max_side: Vec<bool>,
}

/// Reusable min-cut engine for one network.
pub struct CutSolver<'a> {
    net: &'a Network,
    scaled: Scaled,
    denominator: BigInt,
}

impl<'a> CutSolver<'a> {
    pub fn new(net: &'a Network) -> Self {
        let (costs, denominator) = net.scaled_costs();
        let scaled = match narrow(&costs) {
            Some(small) => Scaled::Small(small),
            None => Scaled::Big(costs),
        };
        Self {
            net,
            scaled,
            denominator,
        }
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    fn check(&self, bp: &Bipartition) -> Result<()> {
        if bp.k() != self.net.k() {
            return Err(Error::InvalidParameter(format!(
                "bipartition is for k = {}, network has k = {}",
                bp.k(),
                self.net.k()
            )));
        }
        Ok(())
    }

    fn run(&self, sources: &[usize], sinks: &[usize]) -> FlowCut {
        match &self.scaled {
            Scaled::Small(c) => self.run_with(c, sources, sinks),
            Scaled::Big(c) => self.run_with(c, sources, sinks),
        }
    }

    fn run_with<C: Capacity>(&self, costs: &[C], sources: &[usize], sinks: &[usize]) -> FlowCut {
        let n = self.net.n();
        let (s, t) = (n, n + 1);
        let mut graph = FlowGraph::new(n + 2);
        let mut infinity = C::zero();
        for (e, c) in self.net.edges().iter().zip(costs) {
            infinity = infinity + c.clone();
            if !e.is_loop() {
                graph.add_undirected(e.u, e.v, c.clone());
            }
        }
        // strictly larger than any cut, so terminal arcs are never saturated
        let infinity = infinity + C::one();
        for &i in sources {
            graph.add_arc(s, self.net.terminals()[i], infinity.clone());
        }
        for &i in sinks {
            graph.add_arc(self.net.terminals()[i], t, infinity.clone());
        }
        let value = graph.max_flow(s, t).to_bigint();
        let reach = graph.reachable_from(s);
        let reaching = graph.reaching(t);
        FlowCut {
            value,
            min_side: reach[..n].to_vec(),
            max_side: reaching[..n].iter().map(|r| !r).collect(),
        }
    }

    fn result_for(&self, side: Vec<bool>, flow_value: &BigInt) -> Result<CutResult> {
        let value = self.net.cut_cost(&side);
        let from_flow = Rational::new(flow_value.clone(), self.denominator.clone());
        if value != from_flow {
            return Err(Error::Internal(format!("flow value {from_flow} differs from cut cost {value}")));
        }
        Ok(CutResult {
            value,
            cutset: self.net.cutset(&side),
            side: side.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect(),
        })
    }

    /// Canonical minimum S-separating cut (source side = complement of S).
    pub fn min_cut(&self, bp: &Bipartition) -> Result<CutResult> {
        self.check(bp)?;
        let flow = self.run(&bp.complement_side(), &bp.s_side());
        self.result_for(flow.min_side, &flow.value)
    }

    /// Minimum cut separating terminal index sets `sources` and `sinks`;
    /// remaining terminals are unconstrained.
    pub fn min_cut_between(&self, sources: &[usize], sinks: &[usize]) -> Result<CutResult> {
        let k = self.net.k();
        if sources.is_empty() || sinks.is_empty() {
            return Err(Error::InvalidParameter("both terminal sets must be nonempty".into()));
        }
        let mut seen = vec![false; k];
        for &i in sources.iter().chain(sinks) {
            if i >= k || seen[i] {
                return Err(Error::InvalidParameter(format!("terminal sets are not disjoint indices below {k}")));
            }
            seen[i] = true;
        }
        let flow = self.run(sources, sinks);
        self.result_for(flow.min_side, &flow.value)
    }

    /// Whether the minimum S-separating cutset is unique: the source-minimal
    /// and source-maximal minimum cuts must have the same cutset.
    pub fn is_unique(&self, bp: &Bipartition) -> Result<bool> {
        self.check(bp)?;
        let flow = self.run(&bp.complement_side(), &bp.s_side());
        Ok(self.net.cutset(&flow.min_side) == self.net.cutset(&flow.max_side))
    }

    /// Flow value as a rational, without cut extraction.
    pub fn value(&self, bp: &Bipartition) -> Result<Rational> {
        self.check(bp)?;
        let flow = self.run(&bp.complement_side(), &bp.s_side());
        Ok(Rational::new(flow.value, self.denominator.clone()))
    }
}

pub fn min_separating_cut(net: &Network, bp: &Bipartition) -> Result<CutResult> {
    CutSolver::new(net).min_cut(bp)
}

pub fn uniqueness_by_flow(net: &Network, bp: &Bipartition) -> Result<bool> {
    CutSolver::new(net).is_unique(bp)
}

/// Gap for one bipartition. Within oracle capacity the exact gap is
/// returned; beyond it, only the uniqueness flag (from flow) is available.
pub fn gap(net: &Network, bp: &Bipartition) -> Result<GapReport> {
    match oracle::enumerate_cuts(net, bp) {
        Ok(cuts) => Ok(cuts.gap_report()),
        Err(Error::OracleCapacityExceeded { .. }) => {
            let solver = CutSolver::new(net);
            let cut = solver.min_cut(bp)?;
            Ok(GapReport {
                delta: GapValue::Unavailable,
                min_value: cut.value,
                second_best: None,
                unique: solver.is_unique(bp)?,
            })
        }
        Err(e) => Err(e),
    }
}

/// Like [`gap`] but fails instead of degrading when the exact gap is needed.
pub fn exact_gap(net: &Network, bp: &Bipartition) -> Result<GapReport> {
    Ok(oracle::enumerate_cuts(net, bp)?.gap_report())
}

impl GapReport {
    /// The gap as a number, treating an unbounded gap as `None`.
    pub fn finite_delta(&self) -> Option<&Rational> {
        match &self.delta {
            GapValue::Finite(d) => Some(d),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{whole, Edge};

    fn path_3_5() -> Network {
        Network::new(3, vec![Edge::new(0, 1, whole(3)), Edge::new(1, 2, whole(5))], vec![0, 2]).unwrap()
    }

    fn square() -> Network {
        // q1 = 0, a = 1, q2 = 2, b = 3
        let e = |u, v| Edge::new(u, v, whole(1));
        Network::new(4, vec![e(0, 1), e(1, 2), e(2, 3), e(3, 0)], vec![0, 2]).unwrap()
    }

    #[test]
    fn path_cut() {
        let net = path_3_5();
        let bp = Bipartition::from_mask(2, 0b10).unwrap();
        let cut = min_separating_cut(&net, &bp).unwrap();
        assert_eq!(cut.value, whole(3));
        assert_eq!(cut.cutset, EdgeSet::from([0]));
        assert_eq!(cut.side, BTreeSet::from([0]));
        assert!(uniqueness_by_flow(&net, &bp).unwrap());
    }

    #[test]
    fn disconnected_terminals() {
        let net = Network::new(2, vec![], vec![0, 1]).unwrap();
        let bp = Bipartition::from_mask(2, 0b10).unwrap();
        let cut = min_separating_cut(&net, &bp).unwrap();
        assert_eq!(cut.value, whole(0));
        assert!(cut.cutset.is_empty());
    }

    #[test]
    fn square_is_not_unique() {
        let net = square();
        let bp = Bipartition::from_mask(2, 0b10).unwrap();
        let cut = min_separating_cut(&net, &bp).unwrap();
        assert_eq!(cut.value, whole(2));
        // source-minimal: only q1 on the canonical side
        assert_eq!(cut.side, BTreeSet::from([0]));
        assert_eq!(cut.cutset, EdgeSet::from([0, 3]));
        assert!(!uniqueness_by_flow(&net, &bp).unwrap());
        let g = gap(&net, &bp).unwrap();
        assert_eq!(g.delta, GapValue::Finite(whole(0)));
        assert!(!g.unique);
    }

    #[test]
    fn path_gap() {
        let g = gap(&path_3_5(), &Bipartition::from_mask(2, 0b10).unwrap()).unwrap();
        assert_eq!(g.delta, GapValue::Finite(whole(2)));
        assert_eq!(g.second_best, Some(whole(5)));
        assert!(g.unique);
    }

    #[test]
    fn single_edge_gap_unbounded() {
        let net = Network::new(2, vec![Edge::new(0, 1, whole(7))], vec![0, 1]).unwrap();
        let g = gap(&net, &Bipartition::from_mask(2, 0b10).unwrap()).unwrap();
        assert_eq!(g.delta, GapValue::Unbounded);
        assert!(g.unique);
    }

    #[test]
    fn self_loops_and_parallel_edges() {
        let net = Network::new(
            2,
            vec![Edge::new(0, 0, whole(9)), Edge::new(0, 1, whole(2)), Edge::new(1, 0, whole(3))],
            vec![0, 1],
        )
        .unwrap();
        let cut = min_separating_cut(&net, &Bipartition::from_mask(2, 0b10).unwrap()).unwrap();
        assert_eq!(cut.value, whole(5));
        assert_eq!(cut.cutset, EdgeSet::from([1, 2]));
    }

    #[test]
    fn between_sets() {
        // star, centre 0, leaves 1..=3 are terminals
        let net = Network::new(4, (1..4).map(|l| Edge::new(0, l, whole(l as i64))).collect(), vec![1, 2, 3]).unwrap();
        let solver = CutSolver::new(&net);
        // q1 vs q2 with q3 free: cut the cheaper leaf edge
        assert_eq!(solver.min_cut_between(&[0], &[1]).unwrap().value, whole(1));
        assert!(solver.min_cut_between(&[0], &[0]).is_err());
        assert!(solver.min_cut_between(&[], &[1]).is_err());
    }
}
