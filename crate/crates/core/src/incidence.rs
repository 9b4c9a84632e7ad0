//! Cutset-edge incidence matrices, exact rank, and cost perturbation.
//!
//! Row `i` of the matrix belongs to the `i`-th canonical bipartition and
//! marks the edges of its canonical minimum cutset; `phi` holds the cut
//! values, so `A * c = phi` for the cost vector `c`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mincut::{CutSolver, GapReport, GapValue};
use crate::network::{enumerate_bipartitions, Bipartition, EdgeSet, Network, Rational};
use crate::oracle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    bipartitions: Vec<Bipartition>,
    cols: usize,
    cutsets: Vec<EdgeSet>,
    phi: Vec<Rational>,
}

impl IncidenceMatrix {
    pub fn row_count(&self) -> usize {
        self.cutsets.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn bipartitions(&self) -> &[Bipartition] {
        &self.bipartitions
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.cutsets[row].contains(&col)
    }

    pub fn cutset(&self, row: usize) -> &EdgeSet {
        &self.cutsets[row]
    }

    pub fn phi(&self) -> &[Rational] {
        &self.phi
    }

    pub fn row_bits(&self, row: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.entry(row, c)).collect()
    }

    /// `A * costs`, row by row.
    pub fn apply(&self, costs: &[Rational]) -> Vec<Rational> {
        self.cutsets
            .iter()
            .map(|cut| cut.iter().fold(Rational::zero(), |acc, &e| acc + &costs[e]))
            .collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let all_rows: Vec<usize> = (0..self.row_count()).collect();
        self.rank_of_rows(&all_rows)
    }

    /// Rank of the submatrix formed by the given rows (all columns).
    pub fn rank_of_rows(&self, rows: &[usize]) -> usize {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.rank_of(rows, &cols)
    }

    /// Rank of the submatrix on `rows` x `cols`.
    pub fn rank_of(&self, rows: &[usize], cols: &[usize]) -> usize {
        let dense = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| if self.entry(r, c) { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        bareiss_rank(dense)
    }

    /// Plain-text export: `m ncols`, then `m` rows of 0/1 digits, then `m`
    /// lines `num/den` for the cut values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.row_count(), self.cols);
        for row in 0..self.row_count() {
            let line: String = (0..self.cols).map(|c| if self.entry(row, c) { '1' } else { '0' }).collect();
            out.push_str(&line);
            out.push('\n');
        }
        for v in &self.phi {
            let _ = writeln!(out, "{}/{}", v.numer(), v.denom());
        }
        out
    }

    /// Parses [`IncidenceMatrix::to_text`] output; `k` fixes the row labels.
    pub fn from_text(k: usize, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, message: &str| Error::Parse {
            line: line + 1,
            message: message.to_string(),
        };
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "empty matrix file"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(hl, "bad dimension")))
            .collect::<Result<_>>()?;
        let [m, cols] = dims[..] else {
            return Err(parse_err(hl, "expected `m ncols`"));
        };
        let bipartitions = enumerate_bipartitions(k)?;
        if bipartitions.len() != m {
            return Err(parse_err(hl, "row count does not match k"));
        }
        let mut cutsets = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(hl, "missing matrix row"))?;
            let line = line.trim();
            if line.len() != cols {
                return Err(parse_err(ln, "row length mismatch"));
            }
            let mut cut = EdgeSet::new();
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '1' => {
                        cut.insert(c);
                    }
                    '0' => {}
                    _ => return Err(parse_err(ln, "matrix entries must be 0 or 1")),
                }
            }
            cutsets.push(cut);
        }
        let mut phi = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(hl, "missing cut value"))?;
            phi.push(crate::format::parse_rational(line.trim()).map_err(|msg| parse_err(ln, &msg))?);
        }
        Ok(Self {
            bipartitions,
            cols,
            cutsets,
            phi,
        })
    }
}

/// Builds the incidence matrix from canonical minimum cuts and checks
/// `A * c = phi` before returning.
pub fn build_incidence(net: &Network) -> Result<IncidenceMatrix> {
    let bipartitions = enumerate_bipartitions(net.k())?;
    let solver = CutSolver::new(net);
    let cuts = bipartitions
        .par_iter()
        .map(|bp| solver.min_cut(bp))
        .collect::<Result<Vec<_>>>()?;
    let (cutsets, phi): (Vec<_>, Vec<_>) = cuts.into_iter().map(|c| (c.cutset, c.value)).unzip();
    let mat = IncidenceMatrix {
        bipartitions,
        cols: net.edge_count(),
        cutsets,
        phi,
    };
    if mat.apply(&net.costs()) != mat.phi {
        return Err(Error::Internal("A * c differs from the cut value vector".into()));
    }
    Ok(mat)
}

pub fn rank(mat: &IncidenceMatrix) -> usize {
    mat.rank()
}

/// Rank by fraction-free (Bareiss) elimination; every division is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..n {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Default sampling resolution: `w(e)` takes one of 2^40 grid values.
pub const DEFAULT_RESOLUTION: u64 = 1 << 40;

/// Which rows the perturbation must leave unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbScope {
    /// Every bipartition; requires all minimum cuts to be unique.
    AllRows,
    /// Only bipartitions whose minimum cut is unique; tied rows are ignored.
    UniqueRows,
}

#[derive(Clone, Debug)]
pub struct PerturbConfig {
    pub resolution: u64,
    pub max_attempts: u32,
    pub scope: PerturbScope,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            max_attempts: 8,
            scope: PerturbScope::AllRows,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PerturbedNetwork {
    pub base: Network,
    pub perturbed: Network,
    pub w: Vec<Rational>,
    pub seed: u64,
    /// Gap over the checked rows; `None` when no checked row has a competitor.
    pub delta: Option<Rational>,
    /// Exclusive upper bound on every `w(e)`.
    pub per_edge_bound: Rational,
    pub checked_rows: Vec<usize>,
    pub attempts: u32,
}

/// Exact gap of every bipartition, in canonical row order.
pub fn gap_profile(net: &Network) -> Result<Vec<GapReport>> {
    enumerate_bipartitions(net.k())?
        .par_iter()
        .map(|bp| Ok(oracle::enumerate_cuts(net, bp)?.gap_report()))
        .collect()
}

/// Rows and gap selected by `scope` from a gap profile.
pub fn select_rows(gaps: &[GapReport], scope: PerturbScope) -> Result<(Vec<usize>, Option<Rational>)> {
    let mut rows = Vec::new();
    let mut delta: Option<Rational> = None;
    for (i, g) in gaps.iter().enumerate() {
        match (&g.delta, scope) {
            (GapValue::Unavailable, _) => {
                return Err(Error::InvalidParameter("exact gaps are required for perturbation".into()))
            }
            (GapValue::Finite(d), PerturbScope::AllRows) if d.is_zero() => return Err(Error::NonUniqueCuts),
            (GapValue::Finite(d), PerturbScope::UniqueRows) if d.is_zero() => continue,
            (GapValue::Finite(d), _) => {
                rows.push(i);
                if delta.as_ref().is_none_or(|cur| d < cur) {
                    delta = Some(d.clone());
                }
            }
            (GapValue::Unbounded, _) => rows.push(i),
        }
    }
    Ok((rows, delta))
}

/// Samples `w` on the grid `t / D * bound` with `t` in `0..D`, where
/// `bound = min(delta, 1/delta) / |E|`, and validates that the checked rows
/// of the incidence matrix are unchanged. Deterministic in `seed`.
pub fn perturb(net: &Network, seed: u64, cfg: &PerturbConfig) -> Result<PerturbedNetwork> {
    let gaps = gap_profile(net)?;
    perturb_with_gaps(net, &gaps, seed, cfg)
}

/// [`perturb`] with a precomputed gap profile.
pub fn perturb_with_gaps(net: &Network, gaps: &[GapReport], seed: u64, cfg: &PerturbConfig) -> Result<PerturbedNetwork> {
    if cfg.resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let (checked_rows, delta) = select_rows(gaps, cfg.scope)?;
    let edges = net.edge_count().max(1);
    let scale = match &delta {
        Some(d) => {
            let inv = d.recip();
            if d < &inv {
                d.clone()
            } else {
                inv
            }
        }
        None => Rational::one(),
    };
    let per_edge_bound = scale / Rational::from_integer(BigInt::from(edges));
    let step = &per_edge_bound / Rational::from_integer(BigInt::from(cfg.resolution));

    let base_matrix = build_incidence(net)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=cfg.max_attempts {
        let w: Vec<Rational> = (0..net.edge_count())
            .map(|_| &step * Rational::from_integer(BigInt::from(rng.gen_range(0..cfg.resolution))))
            .collect();
        let costs: Vec<Rational> = net.costs().iter().zip(&w).map(|(c, x)| c + x).collect();
        let perturbed = net.with_costs(costs)?;
        let matrix = build_incidence(&perturbed)?;
        if checked_rows.iter().all(|&r| matrix.cutset(r) == base_matrix.cutset(r)) {
            return Ok(PerturbedNetwork {
                base: net.clone(),
                perturbed,
                w,
                seed,
                delta,
                per_edge_bound,
                checked_rows,
                attempts: attempt,
            });
        }
    }
    Err(Error::PerturbationFailed {
        attempts: cfg.max_attempts,
    })
}

/// Outcome of the rank lower-bound experiment on one network.
#[derive(Clone, Debug)]
pub struct RankBoundReport {
    pub rank: usize,
    pub rows_used: Vec<usize>,
    pub total_rows: usize,
    pub perturbed_phi: Vec<Rational>,
    pub seed: u64,
    pub candidate_edges: usize,
}

impl RankBoundReport {
    /// Minimum edge count of any mimicking network of the perturbed instance.
    pub fn edge_lower_bound(&self) -> usize {
        self.rank
    }

    /// Whether a candidate with `candidate_edges` edges is ruled out.
    pub fn candidate_ruled_out(&self) -> bool {
        self.candidate_edges < self.rank
    }

    pub fn claim(&self) -> String {
        format!(
            "every mimicking network of the perturbed instance needs >= {} edges (rank over {} of {} rows)",
            self.rank,
            self.rows_used.len(),
            self.total_rows
        )
    }
}

/// Perturbs `net`, then reports the rank of the incidence submatrix on the
/// rows whose cuts are preserved; that rank bounds the edge count of any
/// mimicking network of the perturbed costs.
pub fn rank_bound_experiment(
    net: &Network,
    candidate_edges: usize,
    seed: u64,
    cfg: &PerturbConfig,
) -> Result<RankBoundReport> {
    let perturbed = perturb(net, seed, cfg)?;
    let matrix = build_incidence(&perturbed.perturbed)?;
    Ok(RankBoundReport {
        rank: matrix.rank_of_rows(&perturbed.checked_rows),
        rows_used: perturbed.checked_rows,
        total_rows: matrix.row_count(),
        perturbed_phi: matrix.phi().to_vec(),
        seed,
        candidate_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{whole, Edge};
    use num_rational::BigRational;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Plain Gaussian elimination over the rationals.
    fn rational_rank(rows: Vec<Vec<BigInt>>) -> usize {
        let mut a: Vec<Vec<BigRational>> =
            rows.into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
        let m = a.len();
        let n = if m == 0 { 0 } else { a[0].len() };
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in 0..m {
                if i != r && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[r][c];
                    let pivot = a[r].clone();
                    for (x, p) in a[i].iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(bareiss_rank(ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(bareiss_rank(ints(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]])), 2);
        assert_eq!(bareiss_rank(ints(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(bareiss_rank(ints(&[&[0, 1, 1], &[0, 1, 1], &[0, 0, 1]])), 2);
        assert_eq!(bareiss_rank(vec![]), 0);
    }

    #[test]
    fn bareiss_matches_rational_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = rng.gen_range(1..7);
            let n = rng.gen_range(1..7);
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(0..2))).collect())
                .collect();
            assert_eq!(bareiss_rank(rows.clone()), rational_rank(rows));
        }
    }

    #[test]
    fn single_edge_matrix() {
        let net = Network::new(2, vec![Edge::new(0, 1, whole(7))], vec![0, 1]).unwrap();
        let mat = build_incidence(&net).unwrap();
        assert_eq!((mat.row_count(), mat.col_count()), (1, 1));
        assert!(mat.entry(0, 0));
        assert_eq!(mat.phi(), &[whole(7)]);
        assert_eq!(mat.rank(), 1);
    }

    #[test]
    fn star_matrix() {
        // centre 0, terminal leaves 1, 2, 3 via edges 0, 1, 2
        let net = Network::new(4, (1..4).map(|l| Edge::new(0, l, whole(1))).collect(), vec![1, 2, 3]).unwrap();
        let mat = build_incidence(&net).unwrap();
        // rows: S = {q2}, {q3}, {q2, q3}
        assert_eq!(mat.cutset(0), &EdgeSet::from([1]));
        assert_eq!(mat.cutset(1), &EdgeSet::from([2]));
        // {q2,q3} vs {q1}: cutting q1's edge costs 1, cheaper than both others
        assert_eq!(mat.cutset(2), &EdgeSet::from([0]));
        assert_eq!(mat.phi(), &[whole(1), whole(1), whole(1)]);
        assert_eq!(mat.rank(), 3);
    }

    #[test]
    fn text_round_trip() {
        let net = Network::new(4, (1..4).map(|l| Edge::new(0, l, whole(l as i64))).collect(), vec![1, 2, 3]).unwrap();
        let mat = build_incidence(&net).unwrap();
        let text = mat.to_text();
        assert!(text.starts_with("3 3\n"));
        assert_eq!(IncidenceMatrix::from_text(3, &text).unwrap(), mat);
        assert!(IncidenceMatrix::from_text(3, "3 3\n012\n").is_err());
    }

    #[test]
    fn zero_resolution_leaves_costs() {
        let net = Network::new(3, vec![Edge::new(0, 1, whole(3)), Edge::new(1, 2, whole(5))], vec![0, 2]).unwrap();
        let cfg = PerturbConfig {
            resolution: 1,
            ..PerturbConfig::default()
        };
        let p = perturb(&net, 5, &cfg).unwrap();
        assert!(p.w.iter().all(Zero::is_zero));
        assert_eq!(build_incidence(&p.perturbed).unwrap(), build_incidence(&net).unwrap());
    }

    #[test]
    fn path_perturbation_keeps_row() {
        let net = Network::new(3, vec![Edge::new(0, 1, whole(3)), Edge::new(1, 2, whole(5))], vec![0, 2]).unwrap();
        for seed in 0..20 {
            let p = perturb(&net, seed, &PerturbConfig::default()).unwrap();
            assert_eq!(p.delta, Some(whole(2)));
            // min(2, 1/2) / 2 edges
            assert_eq!(p.per_edge_bound, crate::network::ratio(1, 4));
            assert!(p.w.iter().all(|x| x < &p.per_edge_bound));
            assert_eq!(build_incidence(&p.perturbed).unwrap().cutset(0), &EdgeSet::from([0]));
        }
    }

    #[test]
    fn perturbation_is_deterministic() {
        let net = Network::new(3, vec![Edge::new(0, 1, whole(3)), Edge::new(1, 2, whole(5))], vec![0, 2]).unwrap();
        let a = perturb(&net, 99, &PerturbConfig::default()).unwrap();
        let b = perturb(&net, 99, &PerturbConfig::default()).unwrap();
        assert_eq!(a.w, b.w);
    }

    #[test]
    fn ties_need_unique_scope() {
        let e = |u, v| Edge::new(u, v, whole(1));
        let square = Network::new(4, vec![e(0, 1), e(1, 2), e(2, 3), e(3, 0)], vec![0, 2]).unwrap();
        assert_eq!(perturb(&square, 1, &PerturbConfig::default()).unwrap_err(), Error::NonUniqueCuts);
        let cfg = PerturbConfig {
            scope: PerturbScope::UniqueRows,
            ..PerturbConfig::default()
        };
        let p = perturb(&square, 1, &cfg).unwrap();
        assert!(p.checked_rows.is_empty());
    }

    #[test]
    fn single_edge_rank_bound() {
        let net = Network::new(2, vec![Edge::new(0, 1, whole(7))], vec![0, 1]).unwrap();
        let report = rank_bound_experiment(&net, 0, 3, &PerturbConfig::default()).unwrap();
        assert_eq!(report.edge_lower_bound(), 1);
        assert!(report.candidate_ruled_out());
        assert!(report.perturbed_phi[0] >= whole(7));
    }
}
