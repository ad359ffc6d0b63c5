mod common;

use std::collections::BTreeSet;

use cover_kit::graph::{ball, Graph};
use cover_kit::instances::develop_euclidean;
use cover_kit::local::dk_ball;
use cover_kit::tessellation::generate;
use proptest::prelude::*;

#[test]
fn square_grid_distances_are_l1_norms() {
    let g = generate(4, 4, 8).unwrap();
    let dev = develop_euclidean(&g).unwrap();
    let dist = g.graph.distances_from(g.root).unwrap();
    let mut seen = 0;
    for (&v, &(x, y)) in &dev.coords {
        let l1 = (x.abs() + y.abs()) as usize;
        if l1 <= 8 {
            assert_eq!(dist[&v], l1, "vertex {v} at ({x},{y})");
            seen += 1;
        }
    }
    // Lattice points with |x| + |y| <= 8.
    assert_eq!(seen, 2 * 8 * 8 + 2 * 8 + 1);
}

#[test]
fn euclidean_ball_sizes() {
    type Size = fn(usize) -> usize;
    let cases: [(usize, usize, Size); 3] = [
        (4, 4, |i| 2 * i * i + 2 * i + 1),
        (6, 3, |i| 1 + 3 * i * (i + 1) / 2),
        (3, 6, |i| 1 + 3 * i * (i + 1)),
    ];
    for (p, q, size) in cases {
        let g = generate(p, q, 7).unwrap();
        for i in 0..=7 {
            let b = ball(&g.graph, g.root, i).unwrap();
            assert_eq!(b.len(), size(i), "{{{p},{q}}} radius {i}");
            let oracle = common::bfs_within(&g.graph, g.root, i);
            let vs: BTreeSet<usize> = oracle.keys().copied().collect();
            assert_eq!(b.graph.edge_count(), common::induced_edge_count(&g.graph, &vs));
        }
    }
}

#[test]
fn hyperbolic_sphere_growth_is_exponential() {
    let g = generate(4, 5, 5).unwrap();
    let sizes: Vec<usize> = (0..=4)
        .map(|i| ball(&g.graph, g.root, i).unwrap().len())
        .collect();
    let spheres: Vec<usize> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(spheres.windows(2).all(|w| w[1] * 2 > w[0] * 3), "{spheres:?}");
}

fn random_connected_graph() -> impl Strategy<Value = Graph> {
    (3usize..14)
        .prop_flat_map(|n| {
            let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
            let extra = proptest::collection::vec((0..n, 0..n), 0..2 * n);
            (Just(n), tree, extra)
        })
        .prop_map(|(n, tree, extra)| {
            let mut edges = BTreeSet::new();
            for (i, parent) in tree.iter().enumerate() {
                let v = i + 1;
                let u = parent.index(v);
                edges.insert((u, v));
            }
            for (a, b) in extra {
                if a != b {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
            Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balls_nest_and_saturate(g in random_connected_graph(), pick in any::<prop::sample::Index>()) {
        let o = g.vertices()[pick.index(g.len())];
        let ecc = g.eccentricity(o).unwrap().unwrap();
        let mut previous: Option<BTreeSet<usize>> = None;
        for i in 0..=ecc + 1 {
            let b = ball(&g, o, i).unwrap();
            let vs: BTreeSet<usize> = b.graph.vertices().iter().copied().collect();
            let oracle: BTreeSet<usize> = common::bfs_within(&g, o, i).keys().copied().collect();
            prop_assert_eq!(&vs, &oracle);
            if let Some(prev) = &previous {
                prop_assert!(prev.is_subset(&vs));
                let inner: BTreeSet<usize> =
                    b.dist.iter().filter(|(_, &d)| d < i).map(|(&v, _)| v).collect();
                prop_assert_eq!(&inner, prev);
            }
            if i >= ecc {
                prop_assert_eq!(vs.len(), g.len());
            }
            previous = Some(vs);
        }
    }

    #[test]
    fn tessellation_balls_nest(which in 0usize..5, i in 0usize..3, pick in any::<prop::sample::Index>()) {
        let (p, q) = [(4, 4), (6, 3), (3, 6), (4, 5), (5, 4)][which];
        let g = generate(p, q, 3).unwrap();
        let o = g.graph.vertices()[pick.index(g.graph.len())];
        let small = ball(&g.graph, o, i).unwrap();
        let large = ball(&g.graph, o, i + 1).unwrap();
        prop_assert!(small.len() <= large.len());
        prop_assert!(small.graph.vertices().iter().all(|&v| large.contains(v)));
        for (a, b) in small.graph.edges() {
            prop_assert!(large.graph.has_edge(a, b));
        }
    }
}

#[test]
fn d_balls_nest() {
    for (p, q, r, k_max) in [(4, 4, 10, 3), (6, 3, 10, 2), (3, 6, 8, 3), (4, 5, 5, 2)] {
        let g = generate(p, q, r).unwrap();
        let mut prev: Option<BTreeSet<usize>> = None;
        for k in 1..=k_max {
            let d = dk_ball(&g, g.root, k).unwrap();
            let vs: BTreeSet<usize> = d.graph.vertices().iter().copied().collect();
            if let Some(prev) = &prev {
                assert!(prev.is_subset(&vs), "{{{p},{q}}} level {k}");
            }
            // Every root face lies inside D_1.
            for f in g.faces_at(g.root) {
                assert!(f.cycle().iter().all(|v| vs.contains(v)));
            }
            prev = Some(vs);
        }
    }
}
