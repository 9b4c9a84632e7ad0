//! Small fixed instances and random straight-line planar networks.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{ratio, whole, DisjointSets, Edge, Network, Rational};
use crate::planar::PlaneEmbedding;

/// A plane network together with the positions that induced its rotations.
#[derive(Clone, Debug)]
pub struct PlanarInstance {
    pub embedding: PlaneEmbedding,
    pub coords: Vec<(i64, i64)>,
}

impl PlanarInstance {
    pub fn network(&self) -> &Network {
        self.embedding.network()
    }

    fn from_parts(net: Network, coords: Vec<(i64, i64)>) -> Result<Self> {
        Ok(Self {
            embedding: PlaneEmbedding::from_coordinates(net, &coords)?,
            coords,
        })
    }
}

/// Centre 0 with terminal leaves `1..=k`; edge `i` joins the centre to leaf `i + 1`.
pub fn star(k: usize) -> Result<PlanarInstance> {
    if k < 2 {
        return Err(Error::InvalidParameter("a star needs at least 2 leaves".into()));
    }
    let edges = (1..=k).map(|l| Edge::new(0, l, whole(1))).collect();
    let net = Network::new(k + 1, edges, (1..=k).collect())?;
    let coords = std::iter::once((0, 0)).chain((0..k as i64).map(|i| (1, i))).collect();
    PlanarInstance::from_parts(net, coords)
}

/// `q1 - a - q2` with costs `first` and `second`.
pub fn path(first: Rational, second: Rational) -> Result<PlanarInstance> {
    let net = Network::new(3, vec![Edge::new(0, 1, first), Edge::new(1, 2, second)], vec![0, 2])?;
    PlanarInstance::from_parts(net, vec![(0, 0), (1, 0), (2, 1)])
}

/// Unit triangle with terminals 0 and 1.
pub fn triangle() -> Result<PlanarInstance> {
    let e = |u, v| Edge::new(u, v, whole(1));
    let net = Network::new(3, vec![e(0, 1), e(1, 2), e(2, 0)], vec![0, 1])?;
    PlanarInstance::from_parts(net, vec![(0, 0), (1, 0), (0, 1)])
}

pub fn single_edge(cost: Rational) -> Result<PlanarInstance> {
    let net = Network::new(2, vec![Edge::new(0, 1, cost)], vec![0, 1])?;
    PlanarInstance::from_parts(net, vec![(0, 0), (1, 0)])
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    (b.0 - a.0) as i128 * (c.1 - a.1) as i128 - (b.1 - a.1) as i128 * (c.0 - a.0) as i128
}

/// `p` lies strictly inside segment `ab`.
fn inside_segment(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> bool {
    orient(a, b, p) == 0
        && p != a
        && p != b
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Segments without a shared endpoint cross properly.
fn crosses(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let sign = |x: i128| x.signum();
    sign(orient(a, b, c)) * sign(orient(a, b, d)) < 0 && sign(orient(c, d, a)) * sign(orient(c, d, b)) < 0
}

/// Random connected planar network on `n` distinct lattice points.
///
/// Straight segments are inserted greedily in random order while they cross
/// nothing and pass through no other point, which triangulates the point
/// set. A random spanning tree is kept plus each remaining edge with
/// probability 1/2. Costs are `a/b` with `a` in 1..=1000, `b` in 1..=12.
pub fn random_planar(n: usize, k: usize, seed: u64) -> Result<PlanarInstance> {
    if k < 2 || n < k {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got n = {n}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 3 * n as i64 + 3;
    let mut coords: Vec<(i64, i64)> = Vec::with_capacity(n);
    while coords.len() < n {
        let p = (rng.gen_range(0..side), rng.gen_range(0..side));
        if !coords.contains(&p) {
            coords.push(p);
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut segments: Vec<(usize, usize)> = Vec::new();
    for (u, v) in pairs {
        let (a, b) = (coords[u], coords[v]);
        if coords.iter().any(|&p| inside_segment(a, b, p)) {
            continue;
        }
        let blocked = segments.iter().any(|&(x, y)| {
            x != u && x != v && y != u && y != v && crosses(a, b, coords[x], coords[y])
        });
        if !blocked {
            segments.push((u, v));
        }
    }

    segments.shuffle(&mut rng);
    let mut dsu = DisjointSets::new(n);
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for &(u, v) in &segments {
        if dsu.union(u, v) || rng.gen_bool(0.5) {
            kept.push((u, v));
        }
    }
    kept.sort_unstable();
    let edges = kept
        .into_iter()
        .map(|(u, v)| Edge::new(u, v, ratio(rng.gen_range(1..=1000), rng.gen_range(1..=12))))
        .collect();
    let terminals = index::sample(&mut rng, n, k).into_vec();
    PlanarInstance::from_parts(Network::new(n, edges, terminals)?, coords)
}

/// Instance `index` of the standard random campaign: `k = 2 + index % 4`,
/// `n` uniform in `k+1..=30`, all drawn from `seed = index`.
pub fn campaign_instance(index: u64) -> Result<PlanarInstance> {
    let k = 2 + (index % 4) as usize;
    let n = ChaCha8Rng::seed_from_u64(index).gen_range(k + 1..=30);
    random_planar(n, k, index)
}

pub fn campaign(count: u64) -> Result<Vec<PlanarInstance>> {
    (0..count).map(campaign_instance).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_planar_is_connected_and_embedded() {
        for seed in 0..30 {
            let inst = random_planar(5 + (seed as usize % 20), 3, seed).unwrap();
            let net = inst.network();
            assert!(net.is_connected());
            assert_eq!(net.k(), 3);
            let f = inst.embedding.face_count();
            assert_eq!(net.n() + f, net.edge_count() + 2);
        }
    }

    #[test]
    fn random_planar_is_deterministic() {
        let a = random_planar(20, 4, 1).unwrap();
        let b = random_planar(20, 4, 1).unwrap();
        assert_eq!(a.network(), b.network());
        assert_eq!(a.coords, b.coords);
    }

    #[test]
    fn segment_predicates() {
        assert!(crosses((0, 0), (2, 2), (0, 2), (2, 0)));
        assert!(!crosses((0, 0), (1, 1), (2, 0), (3, 1)));
        assert!(inside_segment((0, 0), (4, 2), (2, 1)));
        assert!(!inside_segment((0, 0), (4, 2), (4, 2)));
        assert!(!inside_segment((0, 0), (4, 2), (6, 3)));
    }

    #[test]
    fn star_shape() {
        let s = star(4).unwrap();
        assert_eq!(s.network().n(), 5);
        assert_eq!(s.network().terminals(), &[1, 2, 3, 4]);
    }
}
