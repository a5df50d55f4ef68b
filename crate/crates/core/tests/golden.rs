use container_lab_core::containers::{build_container, AlgorithmParams, Branch, BuildOptions};
use container_lab_core::rational::{int, ratio};
use container_lab_core::{Hypergraph, VertexSet};

fn complete_graph(n: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push([a, b]);
        }
    }
    Hypergraph::from_lists(n, edges).unwrap()
}

fn star(leaves: usize) -> Hypergraph {
    Hypergraph::from_lists(leaves + 1, (1..=leaves).map(|v| [0, v])).unwrap()
}

#[test]
fn k100_cover_trace_for_empty_input() {
    let h = complete_graph(100);
    let p = ratio(1, 32);
    let run =
        build_container(&h, &AlgorithmParams::cover(p.clone()), &VertexSet::new(), &BuildOptions::checked()).unwrap();
    assert!(run.report.all_passed(), "{:?}", run.report);
    let out = run.output;
    assert_eq!(out.rounds, 35);
    assert_eq!(out.trace.len(), 35);
    assert!(out.s.is_empty());
    assert_eq!(out.c, (35..100).collect::<VertexSet>());
    // Each round discards one vertex: the tested singleton is outside I.
    for (k, step) in out.trace.iter().enumerate() {
        assert_eq!(step.round, k);
        assert_eq!(step.chosen, VertexSet::singleton(k));
        assert_eq!(step.branch, Branch::OutsideI);
    }
    let g = out.g.unwrap();
    let w = g.weight(&p).unwrap();
    assert_eq!(w, ratio(65, 32));
    assert_eq!(w, &p * int(65));
    assert_eq!(g.edges(), h.restrict(&out.c).edges());
}

#[test]
fn star_hardcore_goldens() {
    let h = star(3);
    let params = AlgorithmParams::hardcore(ratio(1, 2), ratio(1, 2));
    let opts = BuildOptions::checked();
    let centre = build_container(&h, &params, &VertexSet::singleton(0), &opts).unwrap();
    assert_eq!((centre.output.s, centre.output.c), (VertexSet::singleton(0), VertexSet::singleton(0)));
    let empty = build_container(&h, &params, &VertexSet::new(), &opts).unwrap();
    assert_eq!((empty.output.s, empty.output.c), (VertexSet::new(), VertexSet::from([1, 2, 3])));
    let leaves = build_container(&h, &params, &VertexSet::from([1, 3]), &opts).unwrap();
    assert_eq!(leaves.output.c, VertexSet::from([1, 2, 3]));
}

#[test]
fn triangle_hypergraph_of_k4_is_its_own_container() {
    // Vertices are the six edges of K_4, hyperedges its four triangles.
    let h = Hypergraph::from_lists(6, [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]]).unwrap();
    let run =
        build_container(&h, &AlgorithmParams::cover(ratio(1, 72)), &VertexSet::from([0, 1]), &BuildOptions::checked())
            .unwrap();
    assert_eq!(run.output.rounds, 0);
    assert!(run.output.s.is_empty());
    assert_eq!(run.output.c, (0..6).collect::<VertexSet>());
}
