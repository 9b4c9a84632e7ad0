//! Rotation-system embeddings, face tracing and planar duality.
//!
//! Dart `2e` leaves edge `e` at `u`, dart `2e + 1` leaves it at `v`. The
//! rotation gives the counterclockwise successor `sigma` of each dart around
//! its tail; faces are the orbits of `phi(d) = sigma(d ^ 1)`.
//!
//! The dual reuses the dart ids: its rotation is `phi` and its faces are the
//! `sigma` orbits, i.e. the primal vertices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::network::{connected_components, DisjointSets, Edge, EdgeSet, Network};

/// Vertex a dart leaves from.
pub fn dart_tail(net: &Network, dart: usize) -> usize {
    let e = &net.edges()[dart / 2];
    if dart & 1 == 0 {
        e.u
    } else {
        e.v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneEmbedding {
    network: Network,
    rotation: Vec<Vec<usize>>,
    succ: Vec<usize>,
}

impl PlaneEmbedding {
    /// Validates that every dart appears once, at its tail, and that each
    /// connected component satisfies `V - E + F = 2`.
    pub fn new(network: Network, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let darts = 2 * network.edge_count();
        if rotation.len() != network.n() {
            return Err(Error::InvalidEmbedding(format!(
                "{} rotations for {} vertices",
                rotation.len(),
                network.n()
            )));
        }
        let mut succ = vec![usize::MAX; darts];
        for (v, order) in rotation.iter().enumerate() {
            for (i, &d) in order.iter().enumerate() {
                if d >= darts {
                    return Err(Error::InvalidEmbedding(format!("dart {d} does not exist")));
                }
                if dart_tail(&network, d) != v {
                    return Err(Error::InvalidEmbedding(format!("dart {d} listed at vertex {v}, not at its tail")));
                }
                if succ[d] != usize::MAX {
                    return Err(Error::InvalidEmbedding(format!("dart {d} listed twice")));
                }
                succ[d] = order[(i + 1) % order.len()];
            }
        }
        if let Some(d) = succ.iter().position(|&s| s == usize::MAX) {
            return Err(Error::InvalidEmbedding(format!("dart {d} missing from the rotation system")));
        }
        let emb = Self {
            network,
            rotation,
            succ,
        };
        emb.check_genus()?;
        Ok(emb)
    }

    /// Embedding from straight-line vertex positions.
    pub fn from_coordinates(network: Network, coords: &[(i64, i64)]) -> Result<Self> {
        let rotation = rotation_from_coordinates(&network, coords)?;
        Self::new(network, rotation)
    }

    fn check_genus(&self) -> Result<()> {
        let net = &self.network;
        let mut dsu = DisjointSets::new(net.n());
        for e in net.edges() {
            dsu.union(e.u, e.v);
        }
        let mut vertices: BTreeMap<usize, i64> = BTreeMap::new();
        let mut edges: BTreeMap<usize, i64> = BTreeMap::new();
        let mut faces: BTreeMap<usize, i64> = BTreeMap::new();
        for v in 0..net.n() {
            *vertices.entry(dsu.find(v)).or_default() += 1;
        }
        for e in net.edges() {
            *edges.entry(dsu.find(e.u)).or_default() += 1;
        }
        for face in self.traced_faces() {
            let root = dsu.find(dart_tail(net, face[0]));
            *faces.entry(root).or_default() += 1;
        }
        for (root, &e) in &edges {
            let (v, f) = (vertices[root], faces.get(root).copied().unwrap_or(0));
            if v - e + f != 2 {
                return Err(Error::InvalidEmbedding(format!(
                    "component of vertex {root} has V - E + F = {} (not genus 0)",
                    v - e + f
                )));
            }
        }
        Ok(())
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn dart_count(&self) -> usize {
        self.succ.len()
    }

    /// Next dart counterclockwise around the tail of `dart`.
    pub fn successor(&self, dart: usize) -> usize {
        self.succ[dart]
    }

    /// Next dart along the boundary of the face left of `dart`.
    pub fn face_successor(&self, dart: usize) -> usize {
        self.succ[dart ^ 1]
    }

    /// Face boundaries as dart orbits, ordered by their smallest dart; one
    /// orbit per face of each component, so the outer face of a
    /// disconnected embedding appears once per component.
    pub fn traced_faces(&self) -> Vec<Vec<usize>> {
        trace(&self.succ, |_| true)
    }

    /// Faces of the plane drawing, counting the shared outer face once.
    pub fn face_count(&self) -> usize {
        let components = self.edge_components();
        self.traced_faces().len() + 1 - components.max(1)
    }

    fn edge_components(&self) -> usize {
        let mut dsu = DisjointSets::new(self.network.n());
        for e in self.network.edges() {
            dsu.union(e.u, e.v);
        }
        let roots: BTreeSet<usize> = self.network.edges().iter().map(|e| dsu.find(e.u)).collect();
        roots.len()
    }
}

/// Orbits of `d -> succ[d ^ 1]` over darts accepted by `present`.
fn trace(succ: &[usize], present: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut faces = Vec::new();
    for start in 0..succ.len() {
        if seen[start] || !present(start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = start;
        loop {
            seen[d] = true;
            orbit.push(d);
            d = succ[d ^ 1];
            if d == start {
                break;
            }
        }
        faces.push(orbit);
    }
    faces
}

/// Counterclockwise rotations from integer positions. Straight-line edges
/// leaving a vertex must point in distinct directions.
pub fn rotation_from_coordinates(net: &Network, coords: &[(i64, i64)]) -> Result<Vec<Vec<usize>>> {
    if coords.len() != net.n() {
        return Err(Error::InvalidEmbedding(format!("{} positions for {} vertices", coords.len(), net.n())));
    }
    let mut rotation: Vec<Vec<(usize, (i64, i64))>> = vec![Vec::new(); net.n()];
    for (id, e) in net.edges().iter().enumerate() {
        if e.is_loop() {
            return Err(Error::InvalidEmbedding(format!("edge {id} is a loop; no straight-line drawing")));
        }
        let (a, b) = (coords[e.u], coords[e.v]);
        rotation[e.u].push((2 * id, (b.0 - a.0, b.1 - a.1)));
        rotation[e.v].push((2 * id + 1, (a.0 - b.0, a.1 - b.1)));
    }
    rotation
        .into_iter()
        .enumerate()
        .map(|(v, mut darts)| {
            darts.sort_by(|x, y| angle_cmp(x.1, y.1));
            if darts.windows(2).any(|w| angle_cmp(w[0].1, w[1].1) == Ordering::Equal) {
                return Err(Error::InvalidEmbedding(format!("overlapping edges at vertex {v}")));
            }
            Ok(darts.into_iter().map(|(d, _)| d).collect())
        })
        .collect()
}

/// Exact counterclockwise order of directions starting from the positive x-axis.
fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    let half = |(x, y): (i64, i64)| if y > 0 || (y == 0 && x > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

/// Face structure of an edge-induced plane subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphFaces {
    pub faces: usize,
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
}

/// Faces of the subgraph induced by `edges` under the inherited rotations.
/// Untouched vertices are dropped; the empty subgraph has one face. The
/// traced count is cross-checked against Euler's formula.
pub fn faces_of_subgraph(emb: &PlaneEmbedding, edges: &EdgeSet) -> Result<SubgraphFaces> {
    let net = emb.network();
    if let Some(&bad) = edges.iter().find(|&&e| e >= net.edge_count()) {
        return Err(Error::InvalidEdge(bad));
    }
    if edges.is_empty() {
        return Ok(SubgraphFaces {
            faces: 1,
            vertices: 0,
            edges: 0,
            components: 0,
        });
    }
    let present = |d: usize| edges.contains(&(d / 2));
    let mut succ = vec![usize::MAX; emb.dart_count()];
    for order in emb.rotation() {
        let kept: Vec<usize> = order.iter().copied().filter(|&d| present(d)).collect();
        for (i, &d) in kept.iter().enumerate() {
            succ[d] = kept[(i + 1) % kept.len()];
        }
    }
    let traced = trace(&succ, present).len();

    let mut dsu = DisjointSets::new(net.n());
    let mut touched = BTreeSet::new();
    for &id in edges {
        let e = &net.edges()[id];
        dsu.union(e.u, e.v);
        touched.insert(e.u);
        touched.insert(e.v);
    }
    let components = touched.iter().map(|&v| dsu.find(v)).collect::<BTreeSet<_>>().len();
    let faces = traced + 1 - components;
    let euler = edges.len() + 1 + components - touched.len();
    if faces != euler {
        return Err(Error::Internal(format!("traced {faces} faces but Euler's formula gives {euler}")));
    }
    Ok(SubgraphFaces {
        faces,
        vertices: touched.len(),
        edges: edges.len(),
        components,
    })
}

/// Dual of a connected plane network. Dual edge `e` crosses primal edge `e`
/// and has the same cost; dual vertex `f` is primal face `f` in the order of
/// [`PlaneEmbedding::traced_faces`].
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub dual: Network,
    pub embedding: PlaneEmbedding,
    pub primal_faces: Vec<Vec<usize>>,
    pub face_of_dart: Vec<usize>,
}

impl DualGraph {
    /// Dual edge paired with primal edge `e`.
    pub fn dual_edge(&self, e: usize) -> usize {
        e
    }
}

pub fn build_dual(emb: &PlaneEmbedding) -> Result<DualGraph> {
    let net = emb.network();
    if !net.is_connected() {
        return Err(Error::InvalidEmbedding("the dual needs a connected primal".into()));
    }
    let mut faces = emb.traced_faces();
    if faces.is_empty() {
        // a single vertex without edges has one (outer) face
        faces.push(Vec::new());
    }
    let mut face_of_dart = vec![0; emb.dart_count()];
    for (f, orbit) in faces.iter().enumerate() {
        for &d in orbit {
            face_of_dart[d] = f;
        }
    }
    let edges = net
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| Edge::new(face_of_dart[2 * id], face_of_dart[2 * id + 1], e.cost.clone()))
        .collect();
    let dual = Network::unterminated(faces.len(), edges)?;
    let embedding = PlaneEmbedding::new(dual.clone(), faces.clone())?;
    Ok(DualGraph {
        dual,
        embedding,
        primal_faces: faces,
        face_of_dart,
    })
}

/// Degree structure of the dual image of a primal edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitReport {
    pub edge_set: EdgeSet,
    pub vertex_degrees: BTreeMap<usize, usize>,
    pub meeting_vertices: Vec<usize>,
    pub faces: usize,
    pub components: usize,
    /// Every degree is even, so the edges split into edge-disjoint cycles.
    pub even: bool,
}

fn dual_degrees(dual: &DualGraph, edges: &EdgeSet) -> Result<BTreeMap<usize, usize>> {
    let mut deg = BTreeMap::new();
    for &e in edges {
        let edge = dual.dual.edge(dual.dual_edge(e))?;
        *deg.entry(edge.u).or_insert(0) += 1;
        *deg.entry(edge.v).or_insert(0) += 1;
    }
    Ok(deg)
}

/// Checks that the dual of `primal_cutset` is a circuit: no vertex of the
/// induced dual subgraph has degree one.
pub fn dual_circuit_check(dual: &DualGraph, primal_cutset: &EdgeSet) -> Result<CircuitReport> {
    let vertex_degrees = dual_degrees(dual, primal_cutset)?;
    if let Some((&vertex, &degree)) = vertex_degrees.iter().find(|(_, &d)| d < 2) {
        return Err(Error::NotACircuit { vertex, degree });
    }
    let sub = faces_of_subgraph(&dual.embedding, primal_cutset)?;
    Ok(CircuitReport {
        edge_set: primal_cutset.clone(),
        meeting_vertices: vertex_degrees.iter().filter(|(_, &d)| d > 2).map(|(&v, _)| v).collect(),
        even: vertex_degrees.values().all(|d| d % 2 == 0),
        vertex_degrees,
        faces: sub.faces,
        components: sub.components,
    })
}

/// Component and meeting-vertex counts for one or two minimum cutsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub k: usize,
    pub components_s: usize,
    pub components_t: Option<usize>,
    pub components_union: Option<usize>,
    pub meeting_vertices: usize,
}

impl BoundReport {
    /// At most `k` components after removing one minimum cutset.
    pub fn one_cutset_holds(&self) -> bool {
        self.components_s <= self.k && self.components_t.is_none_or(|t| t <= self.k)
    }

    pub fn two_cutsets_holds(&self) -> bool {
        match (self.components_t, self.components_union) {
            (Some(t), Some(u)) => u <= self.components_s + t + self.k,
            _ => true,
        }
    }

    /// At most `6k` dual vertices of degree above two.
    pub fn meeting_holds(&self) -> bool {
        self.meeting_vertices <= 6 * self.k
    }

    pub fn holds(&self) -> bool {
        self.one_cutset_holds() && self.two_cutsets_holds() && self.meeting_holds()
    }
}

pub fn check_component_bounds(
    emb: &PlaneEmbedding,
    dual: &DualGraph,
    es: &EdgeSet,
    et: Option<&EdgeSet>,
) -> Result<BoundReport> {
    let net = emb.network();
    let components_s = connected_components(net, es)?.len();
    let mut all = es.clone();
    let (components_t, components_union) = match et {
        Some(et) => {
            all.extend(et.iter().copied());
            (
                Some(connected_components(net, et)?.len()),
                Some(connected_components(net, &all)?.len()),
            )
        }
        None => (None, None),
    };
    let meeting_vertices = dual_degrees(dual, &all)?.values().filter(|&&d| d > 2).count();
    Ok(BoundReport {
        k: net.k(),
        components_s,
        components_t,
        components_union,
        meeting_vertices,
    })
}
