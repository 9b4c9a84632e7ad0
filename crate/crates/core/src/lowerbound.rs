//! Extremal families behind the lower bounds, and the experiments that check
//! their claimed cut structure at fixed `k`.
//!
//! Bipartite family: terminals `0..k` on one side, one vertex `u_t = k + t`
//! per terminal subset `S_t` of size `2k/3` (lexicographic order) on the
//! other. Edge `t * k + q` joins `u_t` to `q` and costs 1 if `q` is in `S_t`,
//! else `2 + 1/k`.
//!
//! Grid family: a `k x k` grid `u(i, j)` (column `i`, row `j`, both from 1)
//! with terminals `v_j` attached to `u(1, j)` and `h_i` attached to `u(i, 1)`.
//! Vertical edges `u(i, j) - u(i+1, j)` cost 1 and horizontal edges
//! `u(i, j) - u(i, j+1)` cost `1 - j/k^4`; those in the last row or column
//! and all attachments cost `k^4`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::incidence::{build_incidence, gap_profile, perturb_with_gaps, select_rows, PerturbConfig, PerturbScope};
use crate::mincut::CutSolver;
use crate::network::{ratio, whole, Bipartition, Edge, Network, Rational};
use crate::oracle::{self, ORACLE_CAPACITY};
use crate::planar::PlaneEmbedding;
use crate::report::{ClaimRecord, Report};

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] != i + n - r) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct BipartiteFamily {
    pub k: usize,
    pub l: usize,
    pub epsilon: Rational,
    pub subsets: Vec<Vec<usize>>,
    pub network: Network,
}

impl BipartiteFamily {
    pub fn u(&self, t: usize) -> usize {
        self.k + t
    }

    pub fn edge(&self, t: usize, q: usize) -> usize {
        t * self.k + q
    }

    /// Total cost from `u_t` to the terminals in `set`.
    pub fn cost_to(&self, t: usize, set: &[usize]) -> Rational {
        set.iter()
            .fold(Rational::zero(), |acc, &q| acc + &self.network.edges()[self.edge(t, q)].cost)
    }

    pub fn complement(&self, t: usize) -> Vec<usize> {
        (0..self.k).filter(|q| !self.subsets[t].contains(q)).collect()
    }
}

pub fn gen_bipartite(k: usize) -> Result<BipartiteFamily> {
    if k < 6 || !k.is_multiple_of(3) {
        return Err(Error::InvalidParameter(format!("bipartite family needs k >= 6 divisible by 3, got {k}")));
    }
    let subsets = combinations(k, 2 * k / 3);
    let epsilon = ratio(1, k as i64);
    let heavy = whole(2) + &epsilon;
    let mut edges = Vec::with_capacity(k * subsets.len());
    for (t, s) in subsets.iter().enumerate() {
        for q in 0..k {
            let cost = if s.contains(&q) { whole(1) } else { heavy.clone() };
            edges.push(Edge::new(k + t, q, cost));
        }
    }
    let network = Network::new(k + subsets.len(), edges, (0..k).collect())?;
    Ok(BipartiteFamily {
        k,
        l: subsets.len(),
        epsilon,
        subsets,
        network,
    })
}

/// Checks the claimed minimum cut of each listed subset index: the side of
/// `q1` matches `{u_t} + complement(S_t)`, the cut is unique, its value
/// matches the closed form, and the per-vertex inequalities behind the
/// claim hold.
pub fn verify_bipartite_lemma(fam: &BipartiteFamily, indices: &[usize]) -> Result<Report> {
    let k = fam.k;
    let solver = CutSolver::new(&fam.network);
    let two_thirds = whole(2 * k as i64 / 3);
    let threshold = &two_thirds + whole(1);
    let instance = format!("bipartite k={k}");
    let records = indices
        .par_iter()
        .map(|&i| {
            let s = &fam.subsets[i];
            let sbar = fam.complement(i);
            let bp = Bipartition::from_subset(k, s)?;
            let mut w: BTreeSet<usize> = sbar.iter().copied().collect();
            w.insert(fam.u(i));
            let expected_side: BTreeSet<usize> = if s.contains(&0) {
                (0..fam.network.n()).filter(|v| !w.contains(v)).collect()
            } else {
                w
            };
            let cut = solver.min_cut(&bp)?;
            let expected_value = (0..fam.l).fold(Rational::zero(), |acc, j| {
                acc + if j == i { fam.cost_to(j, s) } else { fam.cost_to(j, &sbar) }
            });
            let violations = (0..fam.l)
                .filter(|&j| {
                    let (to_s, to_sbar) = (fam.cost_to(j, s), fam.cost_to(j, &sbar));
                    if j == i {
                        !(to_s == two_thirds && to_s < to_sbar)
                    } else {
                        !(to_s > threshold && threshold > to_sbar)
                    }
                })
                .count();
            let tag = format!("{instance}, S={s:?}");
            Ok(vec![
                ClaimRecord::equal("minimum cut side is {u_S} + complement(S)", &tag, format!("{expected_side:?}"), format!("{:?}", cut.side)),
                ClaimRecord::equal("minimum cut is unique", &tag, true, solver.is_unique(&bp)?),
                ClaimRecord::equal("minimum cut value", &tag, expected_value, cut.value),
                ClaimRecord::equal("per-vertex side inequalities", &tag, 0, violations),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        records: records.into_iter().flatten().collect(),
    })
}

/// `count` distinct subset indices chosen by `seed`.
pub fn spot_check_indices(fam: &BipartiteFamily, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, fam.l, count.min(fam.l)).into_vec();
    picked.sort_unstable();
    picked
}

#[derive(Clone, Debug)]
pub struct GridFamily {
    pub k: usize,
    pub network: Network,
    pub coords: Vec<(i64, i64)>,
    /// `(i, j)` to the edge `u(i, j) - u(i+1, j)`.
    pub vertical: BTreeMap<(usize, usize), usize>,
    /// `(i, j)` to the edge `u(i, j) - u(i, j+1)`.
    pub horizontal: BTreeMap<(usize, usize), usize>,
}

impl GridFamily {
    /// Terminal `v_j`; also its terminal index.
    pub fn v(&self, j: usize) -> usize {
        j - 1
    }

    /// Terminal `h_i`; also its terminal index.
    pub fn h(&self, i: usize) -> usize {
        self.k + i - 1
    }

    pub fn u(&self, i: usize, j: usize) -> usize {
        2 * self.k + (i - 1) * self.k + (j - 1)
    }

    pub fn heavy(&self) -> Rational {
        whole((self.k as i64).pow(4))
    }

    pub fn epsilon(&self, _i: usize, j: usize) -> Rational {
        ratio(j as i64, (self.k as i64).pow(4))
    }

    /// Terminal indices of `S(i, j) = {h_1..h_i, v_1..v_j}`.
    pub fn s_ij(&self, i: usize, j: usize) -> Vec<usize> {
        (1..=j).map(|b| self.v(b)).chain((1..=i).map(|a| self.h(a))).collect()
    }

    /// `S(i, j)` plus the grid block `u(a, b)` with `a <= i`, `b <= j`.
    pub fn side_ij(&self, i: usize, j: usize) -> BTreeSet<usize> {
        let mut side: BTreeSet<usize> = self.s_ij(i, j).into_iter().collect();
        for a in 1..=i {
            for b in 1..=j {
                side.insert(self.u(a, b));
            }
        }
        side
    }

    pub fn min_cut_value(&self, i: usize, j: usize) -> Rational {
        let k4 = (self.k as i64).pow(4);
        whole((i + j) as i64) - ratio((i * j) as i64, k4)
    }

    pub fn embedding(&self) -> Result<PlaneEmbedding> {
        PlaneEmbedding::from_coordinates(self.network.clone(), &self.coords)
    }
}

pub fn gen_grid(k: usize) -> Result<GridFamily> {
    if !(3..=crate::network::MAX_TERMINALS / 2).contains(&k) {
        return Err(Error::InvalidParameter(format!("grid family needs 3 <= k <= 16, got {k}")));
    }
    let mut fam = GridFamily {
        k,
        network: Network::unterminated(0, Vec::new())?,
        coords: Vec::new(),
        vertical: BTreeMap::new(),
        horizontal: BTreeMap::new(),
    };
    let heavy = fam.heavy();
    let mut edges = Vec::new();
    for j in 1..=k {
        edges.push(Edge::new(fam.v(j), fam.u(1, j), heavy.clone()));
    }
    for i in 1..=k {
        edges.push(Edge::new(fam.h(i), fam.u(i, 1), heavy.clone()));
    }
    for i in 1..k {
        for j in 1..=k {
            let cost = if j == k { heavy.clone() } else { whole(1) };
            fam.vertical.insert((i, j), edges.len());
            edges.push(Edge::new(fam.u(i, j), fam.u(i + 1, j), cost));
        }
    }
    for i in 1..=k {
        for j in 1..k {
            let cost = if i == k { heavy.clone() } else { whole(1) - fam.epsilon(i, j) };
            fam.horizontal.insert((i, j), edges.len());
            edges.push(Edge::new(fam.u(i, j), fam.u(i, j + 1), cost));
        }
    }
    let n = 2 * k + k * k;
    let mut coords = vec![(0, 0); n];
    for j in 1..=k {
        coords[fam.v(j)] = (0, j as i64);
    }
    for i in 1..=k {
        coords[fam.h(i)] = (i as i64, 0);
        for j in 1..=k {
            coords[fam.u(i, j)] = (i as i64, j as i64);
        }
    }
    fam.network = Network::new(n, edges, (0..2 * k).collect())?;
    fam.coords = coords;
    Ok(fam)
}

/// For every `1 <= i, j < k`: value `i + j - ij/k^4`, side `side_ij`,
/// uniqueness, and exactly `i` horizontal plus `j` vertical interior edges.
/// Cross-checked by exhaustive enumeration when the grid is small enough.
pub fn verify_grid_lemma(fam: &GridFamily) -> Result<Report> {
    let k = fam.k;
    let solver = CutSolver::new(&fam.network);
    let use_oracle = k * k <= 16.min(ORACLE_CAPACITY);
    let pairs: Vec<(usize, usize)> = (1..k).flat_map(|i| (1..k).map(move |j| (i, j))).collect();
    let records = pairs
        .par_iter()
        .map(|&(i, j)| {
            let bp = Bipartition::from_subset(2 * k, &fam.s_ij(i, j))?;
            let cut = solver.min_cut(&bp)?;
            let tag = format!("grid k={k}, (i,j)=({i},{j})");
            let horizontal = cut.cutset.iter().filter(|e| fam.horizontal.values().any(|h| h == *e)).count();
            let vertical = cut.cutset.iter().filter(|e| fam.vertical.values().any(|v| v == *e)).count();
            let mut out = vec![
                ClaimRecord::equal("minimum cut value i + j - ij/k^4", &tag, fam.min_cut_value(i, j), cut.value.clone()),
                ClaimRecord::equal("minimum cut side", &tag, format!("{:?}", fam.side_ij(i, j)), format!("{:?}", cut.side)),
                ClaimRecord::equal("minimum cut is unique", &tag, true, solver.is_unique(&bp)?),
                ClaimRecord::equal("interior edges (horizontal, vertical)", &tag, format!("({i}, {j})"), format!("({horizontal}, {vertical})")),
            ];
            if use_oracle {
                let brute = oracle::enumerate_cuts(&fam.network, &bp)?;
                let agrees = brute.value == cut.value && brute.min_cutsets.len() == 1 && brute.min_cutsets.contains(&cut.cutset);
                out.push(ClaimRecord::new("exhaustive enumeration agrees", &tag, "same value and single cutset", format!("{} with {} cutset(s)", brute.value, brute.min_cutsets.len()), agrees));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        records: records.into_iter().flatten().collect(),
    })
}

pub fn verify_bipartite_rank(fam: &BipartiteFamily) -> Result<Report> {
    let mat = build_incidence(&fam.network)?;
    let rank = mat.rank();
    let mut report = Report::new();
    report.push(ClaimRecord::new(
        "rank of the incidence matrix is at least l",
        format!("bipartite k={}", fam.k),
        format!(">= {}", fam.l),
        rank,
        rank >= fam.l,
    ));
    Ok(report)
}

/// Rank at least `(k-1)^2`, and the submatrix on rows `S(i, j)` and columns
/// `horizontal(i, j)` (both row-major, `i, j < k`) is lower triangular with
/// unit diagonal, checked entry by entry.
pub fn verify_grid_rank(fam: &GridFamily) -> Result<Report> {
    let k = fam.k;
    let mat = build_incidence(&fam.network)?;
    let rank = mat.rank();
    let bound = (k - 1) * (k - 1);
    let instance = format!("grid k={k}");
    let cells: Vec<(usize, usize)> = (1..k).flat_map(|i| (1..k).map(move |j| (i, j))).collect();
    let rows = cells
        .iter()
        .map(|&(i, j)| Ok(Bipartition::from_subset(2 * k, &fam.s_ij(i, j))?.index()))
        .collect::<Result<Vec<_>>>()?;
    let cols: Vec<usize> = cells.iter().map(|c| fam.horizontal[c]).collect();
    let mut mismatches = 0;
    let mut triangular = true;
    for (r, &(i, j)) in cells.iter().enumerate() {
        for (c, &(a, b)) in cells.iter().enumerate() {
            let entry = mat.entry(rows[r], cols[c]);
            mismatches += usize::from(entry != (b == j && a <= i));
            triangular &= if c > r { !entry } else { c != r || entry };
        }
    }
    let mut report = Report::new();
    report.push(ClaimRecord::new("rank of the incidence matrix is at least (k-1)^2", &instance, format!(">= {bound}"), rank, rank >= bound));
    report.push(ClaimRecord::equal("submatrix entries match the cut structure", &instance, 0, mismatches));
    report.push(ClaimRecord::equal("submatrix is lower triangular with unit diagonal", &instance, true, triangular));
    report.push(ClaimRecord::equal("submatrix rank", &instance, bound, mat.rank_of(&rows, &cols)));
    Ok(report)
}

/// Perturbs `net` once per seed and checks that the selected rows of the
/// incidence matrix are unchanged and that their cut values move up by less
/// than the gap.
pub fn perturbation_campaign(net: &Network, instance: &str, seeds: &[u64], scope: PerturbScope) -> Result<Report> {
    let gaps = gap_profile(net)?;
    let (rows, delta) = select_rows(&gaps, scope)?;
    let base = build_incidence(net)?;
    let cfg = PerturbConfig {
        scope,
        ..PerturbConfig::default()
    };
    let mut failures = 0;
    let mut out_of_range = 0;
    for &seed in seeds {
        let p = perturb_with_gaps(net, &gaps, seed, &cfg)?;
        let mat = build_incidence(&p.perturbed)?;
        failures += usize::from(rows.iter().any(|&r| mat.cutset(r) != base.cutset(r)) || p.attempts != 1);
        let shift: Rational = p.w.iter().sum();
        out_of_range += rows
            .iter()
            .filter(|&&r| {
                let (old, new) = (&base.phi()[r], &mat.phi()[r]);
                new < old || (new - old) > shift
            })
            .count();
        out_of_range += usize::from(delta.as_ref().is_some_and(|d| &shift >= d));
    }
    let mut report = Report::new();
    let tag = format!(
        "{instance}, {} of {} rows, gap {}",
        rows.len(),
        base.row_count(),
        delta.map_or("unbounded".to_string(), |d| d.to_string())
    );
    report.push(ClaimRecord::equal("incidence rows unchanged on first sample", &tag, 0, failures));
    report.push(ClaimRecord::equal("cut values shift by less than the gap", &tag, 0, out_of_range));
    Ok(report)
}

/// Costs `w in {0, 1/(6 k^2 l)}` on `l` columns that are independent within
/// the uniquely-cut rows must keep those rows' cutsets and give pairwise
/// distinct cut-value vectors.
pub fn tc_collision_family(fam: &BipartiteFamily, samples: usize, seed: u64) -> Result<Report> {
    let net = &fam.network;
    let instance = format!("bipartite k={}, seed {seed}", fam.k);
    let gaps = gap_profile(net)?;
    let (unique_rows, delta) = select_rows(&gaps, PerturbScope::UniqueRows)?;
    let base = build_incidence(net)?;
    let mut report = Report::new();

    let mut columns: Vec<usize> = Vec::new();
    for c in 0..net.edge_count() {
        if columns.len() == fam.l {
            break;
        }
        columns.push(c);
        if base.rank_of(&unique_rows, &columns) < columns.len() {
            columns.pop();
        }
    }
    report.push(ClaimRecord::equal("independent columns found", &instance, fam.l, columns.len()));
    if columns.len() < fam.l {
        return Ok(report);
    }

    let step = Rational::new(BigInt::from(1), BigInt::from(6 * fam.k * fam.k * fam.l));
    let total = &step * whole(fam.l as i64);
    let below_gap = delta.as_ref().is_none_or(|d| &total < d);
    report.push(ClaimRecord::new(
        "largest total perturbation is below the gap",
        &instance,
        format!("< {}", delta.map_or("unbounded".into(), |d| d.to_string())),
        &total,
        below_gap,
    ));

    let mut cache: HashMap<Vec<bool>, Vec<Rational>> = HashMap::new();
    let mut row_changes = 0;
    let mut phi_of = |bits: &Vec<bool>| -> Result<Vec<Rational>> {
        if let Some(phi) = cache.get(bits) {
            return Ok(phi.clone());
        }
        let mut costs = net.costs();
        for (b, &c) in bits.iter().zip(&columns) {
            if *b {
                costs[c] += &step;
            }
        }
        let mat = build_incidence(&net.with_costs(costs)?)?;
        row_changes += unique_rows.iter().filter(|&&r| mat.cutset(r) != base.cutset(r)).count();
        cache.insert(bits.clone(), mat.phi().to_vec());
        Ok(mat.phi().to_vec())
    };

    let zero = vec![false; fam.l];
    let same = phi_of(&zero)? == phi_of(&zero)?;
    let mut single_bit_collisions = 0;
    for j in 0..fam.l {
        let mut bits = zero.clone();
        bits[j] = true;
        single_bit_collisions += usize::from(phi_of(&bits)? == phi_of(&zero)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut collisions = 0;
    for _ in 0..samples {
        let (a, b) = loop {
            let a: Vec<bool> = (0..fam.l).map(|_| rng.gen_bool(0.5)).collect();
            let b: Vec<bool> = (0..fam.l).map(|_| rng.gen_bool(0.5)).collect();
            if a != b {
                break (a, b);
            }
        };
        collisions += usize::from(phi_of(&a)? == phi_of(&b)?);
    }
    report.push(ClaimRecord::equal("w = w' = 0 gives equal cut values", &instance, true, same));
    report.push(ClaimRecord::equal("single-column changes are distinguished", &instance, 0, single_bit_collisions));
    report.push(ClaimRecord::equal(format!("{samples} sampled pairs are distinguished"), &instance, 0, collisions));
    report.push(ClaimRecord::equal("uniquely-cut incidence rows unchanged", &instance, 0, row_changes));
    Ok(report)
}

/// Exhaustive gap check behind the perturbation range: `true` when every
/// minimum cut of `net` is unique.
pub fn all_cuts_unique(net: &Network) -> Result<bool> {
    let gaps = gap_profile(net)?;
    Ok(gaps.iter().all(|g| g.unique))
}
