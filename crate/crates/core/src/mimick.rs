//! Mimicking-network constructions and their verification.
//!
//! Contraction: remove `E_hat`, the union of one canonical minimum cutset per
//! bipartition, and contract each remaining component. Every minimum cut
//! survives because none of its edges is contracted, and contraction never
//! lowers a cut, so all bipartition values are preserved.
//!
//! Signature: merge vertices that lie on the same side of every canonical
//! minimum cut. Classes need not be connected, so the result need not be a
//! minor.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mincut::CutSolver;
use crate::planar::{build_dual, check_component_bounds, dual_circuit_check, faces_of_subgraph, PlaneEmbedding};
use crate::report::{ClaimRecord, Report};
use crate::network::{
    connected_components, contract, enumerate_bipartitions, Bipartition, ContractionMap, DisjointSets, EdgeSet,
    Network, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    ComponentContraction,
    SignatureMerge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MimickStats {
    pub input_vertices: usize,
    pub input_edges: usize,
    pub vertices: usize,
    pub edges: usize,
    pub cut_union_size: usize,
    /// `k^2 * 4^k`, for comparison only.
    pub size_reference: u128,
}

impl MimickStats {
    pub fn within_reference(&self) -> bool {
        self.vertices as u128 <= self.size_reference
    }
}

#[derive(Clone, Debug)]
pub struct MimickingResult {
    pub network: Network,
    pub construction: Construction,
    pub map: ContractionMap,
    pub cut_union: EdgeSet,
    pub stats: MimickStats,
}

/// Union of the canonical minimum cutsets over all bipartitions.
pub fn terminal_cut_union(net: &Network) -> Result<EdgeSet> {
    if net.k() < 2 {
        return Err(Error::InvalidTerminalCount(net.k()));
    }
    let solver = CutSolver::new(net);
    let cuts = enumerate_bipartitions(net.k())?
        .par_iter()
        .map(|bp| solver.min_cut(bp).map(|c| c.cutset))
        .collect::<Result<Vec<_>>>()?;
    Ok(cuts.into_iter().flatten().collect())
}

fn finish(net: &Network, construction: Construction, map: ContractionMap, cut_union: EdgeSet) -> Result<MimickingResult> {
    let network = contract(net, &map)?;
    let k = net.k() as u128;
    let stats = MimickStats {
        input_vertices: net.n(),
        input_edges: net.edge_count(),
        vertices: network.n(),
        edges: network.edge_count(),
        cut_union_size: cut_union.len(),
        size_reference: k * k * 4u128.pow(net.k() as u32),
    };
    Ok(MimickingResult {
        network,
        construction,
        map,
        cut_union,
        stats,
    })
}

/// Contracts the components of `G \ E_hat`. Components of `G` without a
/// terminal are deleted.
pub fn build_by_contraction(net: &Network) -> Result<MimickingResult> {
    let cut_union = terminal_cut_union(net)?;
    let mut whole = DisjointSets::new(net.n());
    for e in net.edges() {
        whole.union(e.u, e.v);
    }
    let mut has_terminal = vec![false; net.n()];
    for &q in net.terminals() {
        let r = whole.find(q);
        has_terminal[r] = true;
    }
    let classes: Vec<Vec<usize>> = connected_components(net, &cut_union)?
        .into_iter()
        .filter(|c| has_terminal[whole.find(c[0])])
        .collect();
    let map = ContractionMap::from_classes(net, classes)?;
    finish(net, Construction::ComponentContraction, map, cut_union)
}

/// Merges vertices with equal side signatures over all canonical cuts.
pub fn build_by_signature(net: &Network) -> Result<MimickingResult> {
    if net.k() < 2 {
        return Err(Error::InvalidTerminalCount(net.k()));
    }
    let solver = CutSolver::new(net);
    let cuts = enumerate_bipartitions(net.k())?
        .par_iter()
        .map(|bp| solver.min_cut(bp))
        .collect::<Result<Vec<_>>>()?;
    let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for v in 0..net.n() {
        let signature = cuts.iter().map(|c| c.side.contains(&v)).collect();
        groups.entry(signature).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    let cut_union = cuts.into_iter().flat_map(|c| c.cutset).collect();
    let map = ContractionMap::from_classes(net, classes)?;
    finish(net, Construction::SignatureMerge, map, cut_union)
}

/// Upper bound on signature classes, `2^m`; `None` when it exceeds `u128`.
pub fn signature_class_bound(k: usize) -> Option<u128> {
    let m = crate::network::bipartition_count(k);
    (m < 128).then(|| 1u128 << m)
}

/// Whether every class of `map` is connected in `G \ removed`, which makes
/// the contraction a minor of `G`.
pub fn classes_connected(net: &Network, map: &ContractionMap, removed: &EdgeSet) -> Result<bool> {
    let comps = connected_components(net, removed)?;
    let mut comp_of = vec![0; net.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    Ok(map.classes().iter().all(|class| class.iter().all(|&v| comp_of[v] == comp_of[class[0]])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitionRow {
    pub bipartition: Bipartition,
    pub original: Rational,
    pub candidate: Rational,
}

impl BipartitionRow {
    pub fn equal(&self) -> bool {
        self.original == self.candidate
    }
}

/// A disjoint pair of terminal index sets; `sources` holds the smallest index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRow {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub original: Rational,
    pub candidate: Rational,
}

impl PairRow {
    pub fn equal(&self) -> bool {
        self.original == self.candidate
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub rows: Vec<BipartitionRow>,
    pub generalized: Option<Vec<PairRow>>,
    pub all_equal: bool,
}

impl VerificationReport {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.equal()).count()
            + self.generalized.iter().flatten().filter(|r| !r.equal()).count()
    }
}

fn check_pair(orig: &Network, cand: &Network) -> Result<()> {
    if orig.k() != cand.k() {
        return Err(Error::InvalidPair(format!("terminal counts differ: {} vs {}", orig.k(), cand.k())));
    }
    if orig.k() < 2 {
        return Err(Error::InvalidTerminalCount(orig.k()));
    }
    Ok(())
}

/// Compares every bipartition value exactly.
pub fn verify(orig: &Network, cand: &Network) -> Result<VerificationReport> {
    check_pair(orig, cand)?;
    let (a, b) = (CutSolver::new(orig), CutSolver::new(cand));
    let rows = enumerate_bipartitions(orig.k())?
        .par_iter()
        .map(|bp| {
            Ok(BipartitionRow {
                bipartition: *bp,
                original: a.value(bp)?,
                candidate: b.value(bp)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_equal = rows.iter().all(BipartitionRow::equal);
    Ok(VerificationReport {
        rows,
        generalized: None,
        all_equal,
    })
}

/// Unordered pairs of disjoint nonempty terminal index sets, each listed
/// once with the smallest used index in `sources`.
pub fn disjoint_pairs(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut pairs = Vec::new();
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let (mut s, mut t) = (Vec::new(), Vec::new());
        let mut c = code;
        for i in 0..k {
            match c % 3 {
                1 => s.push(i),
                2 => t.push(i),
                _ => {}
            }
            c /= 3;
        }
        if !s.is_empty() && !t.is_empty() && s[0] < t[0] {
            pairs.push((s, t));
        }
    }
    pairs
}

/// [`verify`] plus every disjoint pair `(S, T)` with the other terminals free.
pub fn verify_generalized(orig: &Network, cand: &Network) -> Result<VerificationReport> {
    let mut report = verify(orig, cand)?;
    let (a, b) = (CutSolver::new(orig), CutSolver::new(cand));
    let pairs = disjoint_pairs(orig.k())
        .into_par_iter()
        .map(|(sources, sinks)| {
            Ok(PairRow {
                original: a.min_cut_between(&sources, &sinks)?.value,
                candidate: b.min_cut_between(&sources, &sinks)?.value,
                sources,
                sinks,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    report.all_equal &= pairs.iter().all(PairRow::equal);
    report.generalized = Some(pairs);
    Ok(report)
}

/// Structural checks on a connected plane network: at most `k` components
/// after removing any canonical minimum cutset, the two-cutset component
/// bound and at most `6k` dual meeting vertices on `pair_samples` random
/// pairs, dual circuits for every cutset, and `|V(G')| = |CC(G - E_hat)|`
/// equal to the face count of the dual subgraph on `E_hat`.
pub fn structural_bounds(emb: &PlaneEmbedding, pair_samples: usize, seed: u64, instance: &str) -> Result<Report> {
    let net = emb.network();
    let dual = build_dual(emb)?;
    let solver = CutSolver::new(net);
    let cutsets = enumerate_bipartitions(net.k())?
        .iter()
        .map(|bp| solver.min_cut(bp).map(|c| c.cutset))
        .collect::<Result<Vec<_>>>()?;
    let mut one = 0;
    let mut not_circuit = 0;
    for cut in &cutsets {
        let r = check_component_bounds(emb, &dual, cut, None)?;
        one += usize::from(!r.one_cutset_holds());
        not_circuit += usize::from(dual_circuit_check(&dual, cut).map_or(true, |c| !c.even));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut two, mut meeting) = (0, 0);
    for _ in 0..pair_samples {
        let a = rng.gen_range(0..cutsets.len());
        let b = rng.gen_range(0..cutsets.len());
        let r = check_component_bounds(emb, &dual, &cutsets[a], Some(&cutsets[b]))?;
        two += usize::from(!r.two_cutsets_holds());
        meeting += usize::from(!r.meeting_holds());
    }
    let built = build_by_contraction(net)?;
    let components = connected_components(net, &built.cut_union)?.len();
    let faces = faces_of_subgraph(&dual.embedding, &built.cut_union)?.faces;

    let mut report = Report::new();
    report.push(ClaimRecord::equal("components after one cutset <= k (violations)", instance, 0, one));
    report.push(ClaimRecord::equal("dual of every cutset is a circuit (violations)", instance, 0, not_circuit));
    report.push(ClaimRecord::equal("two-cutset component bound (violations)", instance, 0, two));
    report.push(ClaimRecord::equal("meeting vertices <= 6k (violations)", instance, 0, meeting));
    report.push(ClaimRecord::equal(
        "|V(G')| = |CC(G - E_hat)| = dual faces of E_hat",
        instance,
        format!("{components} = {components} = {components}"),
        format!("{} = {components} = {faces}", built.network.n()),
    ));
    Ok(report)
}
