//! Worked examples for each operation, pinned to exact values.

use std::collections::BTreeSet;

use mimick_core::generate::{path, random_planar, single_edge, star, triangle};
use mimick_core::incidence::{rank_bound_experiment, PerturbScope};
use mimick_core::lowerbound::{gen_bipartite, gen_grid, tc_collision_family};
use mimick_core::mimick::{terminal_cut_union, verify_generalized};
use mimick_core::mincut::gap;
use mimick_core::network::bipartition_count;
use mimick_core::oracle::{enumerate_between, enumerate_cuts};
use mimick_core::planar::{dual_circuit_check, faces_of_subgraph};
use mimick_core::tcscheme::preprocess;
use mimick_core::{
    build_by_contraction, build_by_signature, build_dual, build_incidence, connected_components, contract,
    enumerate_bipartitions, perturb, ratio, uniqueness_by_flow, verify, whole, Bipartition, ContractionMap, CutSolver,
    Edge, EdgeSet, GapValue, Network, PerturbConfig, PlaneEmbedding, Rational,
};

fn set(items: &[usize]) -> EdgeSet {
    items.iter().copied().collect()
}

fn path35() -> Network {
    path(whole(3), whole(5)).unwrap().network().clone()
}

/// q1, a, q2, b around a unit 4-cycle.
fn square() -> Network {
    let e = |u, v| Edge::new(u, v, whole(1));
    Network::new(4, vec![e(0, 1), e(1, 2), e(2, 3), e(3, 0)], vec![0, 2]).unwrap()
}

#[test]
fn bipartition_counts() {
    let two = enumerate_bipartitions(2).unwrap();
    assert_eq!(two.iter().map(Bipartition::mask).collect::<Vec<_>>(), vec![0b10]);
    let three: Vec<Vec<usize>> = enumerate_bipartitions(3).unwrap().iter().map(Bipartition::s_side).collect();
    assert_eq!(three, vec![vec![1], vec![2], vec![1, 2]]);
    assert_eq!(enumerate_bipartitions(6).unwrap().len(), 31);
}

#[test]
fn components_and_contraction() {
    let p = path35();
    assert_eq!(connected_components(&p, &set(&[0])).unwrap(), vec![vec![0], vec![1, 2]]);
    assert_eq!(connected_components(&p, &set(&[])).unwrap(), vec![vec![0, 1, 2]]);
    let sq = square();
    let mut halves = connected_components(&sq, &set(&[0, 2])).unwrap();
    halves.sort();
    assert_eq!(halves, vec![vec![0, 3], vec![1, 2]]);

    let tri = triangle().unwrap().network().clone();
    let merged = contract(&tri, &ContractionMap::from_classes(&tri, vec![vec![0, 2], vec![1]]).unwrap()).unwrap();
    assert_eq!((merged.n(), merged.edge_count()), (2, 1));
    assert_eq!(merged.edges()[0].cost, whole(2));

    let s4 = star(4).unwrap().network().clone();
    assert_eq!(contract(&s4, &ContractionMap::identity(&s4)).unwrap(), s4);
}

#[test]
fn separating_cuts() {
    let p = path35();
    let bp = Bipartition::from_subset(2, &[1]).unwrap();
    let cut = CutSolver::new(&p).min_cut(&bp).unwrap();
    assert_eq!((cut.value, cut.cutset), (whole(3), set(&[0])));

    let apart = Network::new(4, vec![Edge::new(0, 1, whole(2)), Edge::new(2, 3, whole(2))], vec![0, 2]).unwrap();
    let cut = CutSolver::new(&apart).min_cut(&bp).unwrap();
    assert_eq!((cut.value, cut.cutset), (whole(0), set(&[])));

    let grid = gen_grid(4).unwrap();
    let s23 = Bipartition::from_subset(8, &grid.s_ij(2, 3)).unwrap();
    assert_eq!(CutSolver::new(&grid.network).value(&s23).unwrap(), ratio(637, 128));
    let s11 = Bipartition::from_subset(8, &grid.s_ij(1, 1)).unwrap();
    assert_eq!(CutSolver::new(&grid.network).value(&s11).unwrap(), ratio(511, 256));
    assert!(uniqueness_by_flow(&grid.network, &s11).unwrap());
}

#[test]
fn oracle_examples() {
    let p = path35();
    let bp = Bipartition::from_subset(2, &[1]).unwrap();
    let brute = enumerate_cuts(&p, &bp).unwrap();
    assert_eq!((brute.value.clone(), brute.min_cutsets.len()), (whole(3), 1));

    let brute = enumerate_cuts(&square(), &bp).unwrap();
    assert_eq!(brute.value, whole(2));
    // a and b each lose one of their two edges independently
    let expected: BTreeSet<EdgeSet> = [set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3])].into();
    assert_eq!(brute.min_cutsets, expected);

    // the lemma's cut {u_S} + complement(S) is the only minimum for |S| = 4
    let fam = gen_bipartite(6).unwrap();
    let net = &fam.network;
    for t in [0, 7, 14] {
        let mut side = vec![false; net.n()];
        side[fam.u(t)] = true;
        for q in fam.complement(t) {
            side[net.terminals()[q]] = true;
        }
        let bp = Bipartition::from_subset(6, &fam.subsets[t]).unwrap();
        let brute = enumerate_cuts(net, &bp).unwrap();
        assert_eq!(brute.min_cutsets, [net.cutset(&side)].into());
        assert!(uniqueness_by_flow(net, &bp).unwrap());
    }
}

#[test]
fn gaps() {
    let bp = Bipartition::from_subset(2, &[1]).unwrap();
    let g = gap(&path35(), &bp).unwrap();
    assert_eq!((g.delta, g.unique), (GapValue::Finite(whole(2)), true));
    let g = gap(&square(), &bp).unwrap();
    assert_eq!((g.delta, g.unique), (GapValue::Finite(whole(0)), false));
    assert!(!uniqueness_by_flow(&square(), &bp).unwrap());
}

#[test]
fn incidence_examples() {
    let edge7 = single_edge(whole(7)).unwrap().network().clone();
    let a = build_incidence(&edge7).unwrap();
    assert_eq!((a.row_count(), a.col_count(), a.row_bits(0), a.phi().to_vec()), (1, 1, vec![true], vec![whole(7)]));

    // rows {q2}, {q3}, {q2,q3}; the last is cheapest by cutting q1's edge alone
    let s3 = star(3).unwrap().network().clone();
    let a = build_incidence(&s3).unwrap();
    let rows: Vec<Vec<bool>> = (0..3).map(|r| a.row_bits(r)).collect();
    assert_eq!(rows, vec![vec![false, true, false], vec![false, false, true], vec![true, false, false]]);
    assert_eq!(a.phi().to_vec(), vec![whole(1); 3]);
    assert_eq!(a.rank(), 3);

    assert_eq!(build_incidence(&gen_grid(4).unwrap().network).unwrap().row_count(), 127);
}

#[test]
fn perturbation_examples() {
    let p = path35();
    let none = PerturbConfig { resolution: 1, ..PerturbConfig::default() };
    let zero = perturb(&p, 3, &none).unwrap();
    assert!(zero.w.iter().all(|w| *w == whole(0)));
    assert_eq!(zero.perturbed, p);
    for seed in 0..20 {
        let moved = perturb(&p, seed, &PerturbConfig::default()).unwrap();
        assert_eq!(build_incidence(&moved.perturbed).unwrap().cutset(0), &set(&[0]));
    }
    let unique = PerturbConfig { scope: PerturbScope::UniqueRows, ..PerturbConfig::default() };
    let fam = gen_bipartite(6).unwrap();
    let moved = perturb(&fam.network, 42, &unique).unwrap();
    let (before, after) = (build_incidence(&moved.base).unwrap(), build_incidence(&moved.perturbed).unwrap());
    assert!(moved.checked_rows.iter().all(|&r| before.cutset(r) == after.cutset(r)));
}

#[test]
fn rank_bounds() {
    let unique = PerturbConfig { scope: PerturbScope::UniqueRows, ..PerturbConfig::default() };
    let r = rank_bound_experiment(&gen_bipartite(6).unwrap().network, 14, 1, &unique).unwrap();
    assert!(r.edge_lower_bound() >= 15 && r.candidate_ruled_out());
    let r = rank_bound_experiment(&gen_grid(4).unwrap().network, 8, 1, &unique).unwrap();
    assert!(r.edge_lower_bound() >= 9);
    let r = rank_bound_experiment(single_edge(whole(2)).unwrap().network(), 1, 1, &PerturbConfig::default()).unwrap();
    assert_eq!(r.edge_lower_bound(), 1);
    assert!(!r.candidate_ruled_out());
}

#[test]
fn duals() {
    let tri = build_dual(&triangle().unwrap().embedding).unwrap();
    assert_eq!((tri.dual.n(), tri.dual.edge_count()), (2, 3));
    assert!(tri.dual.edges().iter().all(|e| e.u != e.v));

    let edge = build_dual(&single_edge(whole(1)).unwrap().embedding).unwrap();
    assert_eq!((edge.dual.n(), edge.dual.edge_count()), (1, 1));
    assert!(edge.dual.edges()[0].is_loop());
    let loop_circuit = dual_circuit_check(&edge, &set(&[0])).unwrap();
    assert_eq!(loop_circuit.vertex_degrees.values().copied().collect::<Vec<_>>(), vec![2]);

    let sq = square();
    let emb = PlaneEmbedding::from_coordinates(sq, &[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
    let d = build_dual(&emb).unwrap();
    assert_eq!((d.dual.n(), d.dual.edge_count()), (2, 4));
}

#[test]
fn circuits_and_faces() {
    let inst = triangle().unwrap();
    let dual = build_dual(&inst.embedding).unwrap();
    let bp = Bipartition::from_subset(2, &[0]).unwrap();
    let cut = CutSolver::new(inst.network()).min_cut(&bp).unwrap();
    assert_eq!(cut.cutset.len(), 2);
    let c = dual_circuit_check(&dual, &cut.cutset).unwrap();
    assert_eq!((c.components, c.faces, c.even), (1, 2, true));

    let empty = faces_of_subgraph(&inst.embedding, &set(&[])).unwrap();
    assert_eq!((empty.faces, empty.vertices), (1, 0));
    assert_eq!(faces_of_subgraph(&inst.embedding, &set(&[0, 1, 2])).unwrap().faces, 2);

    // a three-terminal plane instance: every minimum cutset dualizes to cycles
    // and the dual of the cut union has one face per primal component
    let three = random_planar(12, 3, 4).unwrap();
    let net = three.network();
    let dual = build_dual(&three.embedding).unwrap();
    let solver = CutSolver::new(net);
    for bp in enumerate_bipartitions(3).unwrap() {
        assert!(dual_circuit_check(&dual, &solver.min_cut(&bp).unwrap().cutset).unwrap().even);
    }
    let union = terminal_cut_union(net).unwrap();
    assert_eq!(
        faces_of_subgraph(&dual.embedding, &union).unwrap().faces,
        connected_components(net, &union).unwrap().len()
    );
}

#[test]
fn constructions() {
    let edge = single_edge(whole(1)).unwrap().network().clone();
    assert_eq!(terminal_cut_union(&edge).unwrap(), set(&[0]));
    assert_eq!(build_by_contraction(&edge).unwrap().network, edge);
    assert_eq!(build_by_signature(&edge).unwrap().network, edge);
    assert_eq!(terminal_cut_union(star(3).unwrap().network()).unwrap(), set(&[0, 1, 2]));

    let p = path35();
    assert_eq!(terminal_cut_union(&p).unwrap(), set(&[0]));
    let built = build_by_contraction(&p).unwrap();
    assert_eq!(built.map.classes(), &[vec![0], vec![1, 2]]);
    assert_eq!((built.network.n(), built.network.edge_count()), (2, 1));
    assert_eq!(built.network.edges()[0].cost, whole(3));

    let s4 = star(4).unwrap().network().clone();
    let built = build_by_contraction(&s4).unwrap();
    assert_eq!(built.network.n(), 5);
    assert!(verify(&s4, &built.network).unwrap().all_equal);

    let near = path(whole(3), whole(3) + ratio(1, 7)).unwrap().network().clone();
    let merged = build_by_signature(&near).unwrap();
    assert_eq!(merged.map.class_of(1), merged.map.class_of(2));
    assert!(verify(&near, &merged.network).unwrap().all_equal);
}

#[test]
fn verification() {
    let p = path35();
    assert!(verify(&p, &p).unwrap().all_equal);
    let e3 = single_edge(whole(3)).unwrap().network().clone();
    assert!(verify(&p, &e3).unwrap().all_equal);
    let e4 = single_edge(whole(4)).unwrap().network().clone();
    let bad = verify(&p, &e4).unwrap();
    assert_eq!((bad.all_equal, bad.mismatches()), (false, 1));

    let s3 = star(3).unwrap().network().clone();
    let built = build_by_contraction(&s3).unwrap();
    assert_eq!(enumerate_between(&s3, &[0], &[1]).unwrap().value, whole(1));
    let report = verify_generalized(&s3, &built.network).unwrap();
    assert!(report.all_equal);
    let pair = report.generalized.unwrap().into_iter().find(|r| r.sources == [0] && r.sinks == [1]).unwrap();
    assert_eq!((pair.original, pair.candidate), (whole(1), whole(1)));
}

#[test]
fn families() {
    let six = gen_bipartite(6).unwrap();
    assert_eq!((six.network.n(), six.network.edge_count(), six.l), (21, 90, 15));
    assert_eq!(gen_bipartite(9).unwrap().l, 84);
    let grid = gen_grid(4).unwrap();
    assert_eq!((grid.network.k(), grid.network.n()), (8, 24));
    assert_eq!(grid.epsilon(2, 3), ratio(3, 256));
    assert_eq!(gen_grid(3).unwrap().heavy(), whole(81));
    let collisions = tc_collision_family(&six, 100, 7).unwrap();
    assert!(collisions.passed());
}

#[test]
fn terminal_cut_tables() {
    let store = preprocess(single_edge(whole(7)).unwrap().network()).unwrap();
    assert_eq!(store.query(&[1]).unwrap(), whole(7));
    assert_eq!(store.storage_report().value_words, 1);

    let store = preprocess(star(3).unwrap().network()).unwrap();
    assert_eq!((0..3).map(|i| store.value_at(i)).collect::<Vec<Rational>>(), vec![whole(1); 3]);

    let fam = gen_bipartite(6).unwrap();
    let store = preprocess(&fam.network).unwrap();
    let report = store.storage_report();
    assert_eq!(report.value_words, 31);
    assert!(report.within_bound());
    let solver = CutSolver::new(&fam.network);
    for s in &fam.subsets {
        let bp = Bipartition::from_subset(6, s).unwrap();
        assert_eq!(store.query(s).unwrap(), solver.value(&bp).unwrap());
        assert_eq!(store.query(&bp.complement_side()).unwrap(), store.query(&bp.s_side()).unwrap());
    }
    assert_eq!(bipartition_count(10), 511);
}
