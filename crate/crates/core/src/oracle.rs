//! Exhaustive cut enumeration, used as an independent check on the flow
//! solver and as the exact source of cut gaps.
//!
//! Every assignment of the free vertices to the two sides is visited in Gray
//! code order, so each step flips one vertex and updates the cut cost from
//! its incident edges only.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::flow::narrow;
use crate::mincut::{GapReport, GapValue};
use crate::network::{Bipartition, EdgeSet, Network, Rational};

/// Maximum number of free vertices the oracle will enumerate.
pub const ORACLE_CAPACITY: usize = 22;

/// Result of exhaustive enumeration for one terminal split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCuts {
    pub value: Rational,
    /// Every distinct cutset achieving `value`.
    pub min_cutsets: BTreeSet<EdgeSet>,
    /// Smallest cost of a cutset other than the minimum ones, if any exists.
    pub second_best: Option<Rational>,
}

impl OracleCuts {
    pub fn gap_report(&self) -> GapReport {
        let unique = self.min_cutsets.len() == 1;
        let (delta, second) = if !unique {
            (GapValue::Finite(Rational::from_integer(0.into())), Some(self.value.clone()))
        } else {
            match &self.second_best {
                Some(s) => (GapValue::Finite(s - &self.value), Some(s.clone())),
                None => (GapValue::Unbounded, None),
            }
        };
        GapReport {
            delta,
            min_value: self.value.clone(),
            second_best: second,
            unique,
        }
    }
}

/// Minimum value and all minimum cutsets of a bipartition.
pub fn min_cut_oracle(net: &Network, bp: &Bipartition) -> Result<(Rational, BTreeSet<EdgeSet>)> {
    let cuts = enumerate_cuts(net, bp)?;
    Ok((cuts.value, cuts.min_cutsets))
}

pub fn enumerate_cuts(net: &Network, bp: &Bipartition) -> Result<OracleCuts> {
    if bp.k() != net.k() {
        return Err(Error::InvalidParameter("bipartition does not match the network".into()));
    }
    enumerate_between(net, &bp.complement_side(), &bp.s_side())
}

/// Exhaustive minimum over cuts with terminal indices `sources` on one side
/// and `sinks` on the other; other terminals are free.
pub fn enumerate_between(net: &Network, sources: &[usize], sinks: &[usize]) -> Result<OracleCuts> {
    let n = net.n();
    let mut fixed = vec![None; n];
    for &i in sources {
        fixed[net.terminals()[i]] = Some(true);
    }
    for &i in sinks {
        fixed[net.terminals()[i]] = Some(false);
    }
    let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    if free.len() > ORACLE_CAPACITY {
        return Err(Error::OracleCapacityExceeded {
            free: free.len(),
            limit: ORACLE_CAPACITY,
        });
    }
    let (scaled, den) = net.scaled_costs();
    let costs = narrow(&scaled)
        .ok_or_else(|| Error::InvalidParameter("edge costs too large for the oracle".into()))?;

    let mut incident: Vec<Vec<(usize, i128)>> = vec![Vec::new(); free.len()];
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        slot[v] = i;
    }
    for (e, &c) in net.edges().iter().zip(&costs) {
        if e.is_loop() {
            continue;
        }
        if slot[e.u] != usize::MAX {
            incident[slot[e.u]].push((e.v, c));
        }
        if slot[e.v] != usize::MAX {
            incident[slot[e.v]].push((e.u, c));
        }
    }

    let mut side: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
    let mut cost: i128 = net
        .edges()
        .iter()
        .zip(&costs)
        .filter(|(e, _)| side[e.u] != side[e.v])
        .map(|(_, &c)| c)
        .sum();

    let mut best = cost;
    let mut best_masks: Vec<u32> = vec![0];
    let mut second: Option<i128> = None;
    let mut gray: u32 = 0;
    for step in 1u64..(1u64 << free.len()) {
        let bit = step.trailing_zeros() as usize;
        let v = free[bit];
        for &(w, c) in &incident[bit] {
            if side[v] != side[w] {
                cost -= c;
            } else {
                cost += c;
            }
        }
        side[v] = !side[v];
        gray ^= 1 << bit;
        if cost < best {
            second = Some(best);
            best = cost;
            best_masks.clear();
            best_masks.push(gray);
        } else if cost == best {
            best_masks.push(gray);
        } else if second.is_none_or(|s| cost < s) {
            second = Some(cost);
        }
    }

    let base: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
    let min_cutsets: BTreeSet<EdgeSet> = best_masks
        .iter()
        .map(|&mask| {
            let mut s = base.clone();
            for (i, &v) in free.iter().enumerate() {
                s[v] = mask >> i & 1 == 1;
            }
            net.cutset(&s)
        })
        .collect();
    let to_rational = |x: i128| Rational::new(BigInt::from(x), den.clone());
    Ok(OracleCuts {
        value: to_rational(best),
        min_cutsets,
        second_best: second.map(to_rational),
    })
}
