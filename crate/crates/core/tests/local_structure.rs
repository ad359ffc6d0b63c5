mod common;

use std::collections::{BTreeMap, BTreeSet};

use cover_kit::graph::Graph;
use cover_kit::instances::{make_quotient, QuotientSpec};
use cover_kit::local::{
    dk_ball, face_boundaries_at, is_r_locally, peripheral_cycles_through, BallKind,
    PeripheralSpace,
};
use cover_kit::tessellation::{generate, FaceBoundary};

/// The four unit squares at `(i, j)` of `C_m × C_n`.
fn grid_squares(m: usize, n: usize, i: usize, j: usize) -> BTreeSet<FaceBoundary> {
    let id = |a: i64, b: i64| (a.rem_euclid(m as i64) * n as i64 + b.rem_euclid(n as i64)) as usize;
    let (i, j) = (i as i64, j as i64);
    [(0, 0), (-1, 0), (0, -1), (-1, -1)]
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (i + a, j + b);
            FaceBoundary::new(vec![id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1)])
        })
        .collect()
}

/// Whether `(x, y) ↦ (i + x, j + y)` carries the lattice ball of radius `r`
/// isomorphically onto its image in `C_m × C_n`, edges and non-edges alike.
fn lattice_ball_embeds(g: &Graph, m: usize, n: usize, i: usize, j: usize, r: i64) -> bool {
    let id = |a: i64, b: i64| {
        ((i as i64 + a).rem_euclid(m as i64) * n as i64 + (j as i64 + b).rem_euclid(n as i64)) as usize
    };
    let pts: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|(x, y)| x.abs() + y.abs() <= r)
        .collect();
    let images: BTreeSet<usize> = pts.iter().map(|&(x, y)| id(x, y)).collect();
    if images.len() != pts.len() {
        return false;
    }
    pts.iter().enumerate().all(|(k, &p)| {
        pts[k + 1..].iter().all(|&q| {
            let lattice_edge = (p.0 - q.0).abs() + (p.1 - q.1).abs() == 1;
            lattice_edge == g.has_edge(id(p.0, p.1), id(q.0, q.1))
        })
    })
}

#[test]
fn torus_d2_peripheral_cycles_are_the_grid_faces() {
    let g = common::grid_torus(5, 7);
    let space = PeripheralSpace::new(&g, 4);
    for v in [0, 9, 17, 34] {
        let d2 = dk_ball(&space, v, 2).unwrap();
        let found: BTreeSet<FaceBoundary> =
            peripheral_cycles_through(&d2.graph, v, 4).unwrap().into_iter().collect();
        let oracle = common::brute_peripheral_through(&d2.graph, v, 4);
        assert_eq!(found, oracle, "vertex {v}");
        assert_eq!(found, grid_squares(5, 7, v / 7, v % 7), "vertex {v}");
    }
}

#[test]
fn klein_bottle_faces_are_projected_squares() {
    let spec = QuotientSpec::klein(6, 6);
    let q = make_quotient(spec).unwrap();
    let space = PeripheralSpace::new(&q.graph, 4);
    for v in 0..36 {
        let (x, y) = spec.representative(v);
        let oracle: BTreeSet<FaceBoundary> = [(0, 0), (-1, 0), (0, -1), (-1, -1)]
            .into_iter()
            .map(|(a, b)| {
                let corners = [(0, 0), (1, 0), (1, 1), (0, 1)];
                FaceBoundary::new(
                    corners
                        .iter()
                        .map(|&(c, d)| spec.project((x + a + c, y + b + d)).unwrap())
                        .collect(),
                )
            })
            .collect();
        let found: BTreeSet<FaceBoundary> =
            face_boundaries_at(&space, v).unwrap().into_iter().collect();
        assert_eq!(found, oracle, "vertex {v}");
    }
}

#[test]
fn truncated_square_torus_faces_match_brute_force() {
    let h = common::truncated_square_torus(4, 5);
    let space = PeripheralSpace::new(&h, 8);
    for v in [0, 1, 2, 3, 41] {
        let d2 = dk_ball(&space, v, 2).unwrap();
        let oracle = common::brute_peripheral_through(&d2.graph, v, 8);
        let found: BTreeSet<FaceBoundary> =
            face_boundaries_at(&space, v).unwrap().into_iter().collect();
        assert_eq!(found, oracle, "vertex {v}");
        let mut lens: Vec<usize> = found.iter().map(|f| f.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![4, 8, 8]);
    }
}

#[test]
fn metric_locality_of_square_tori() {
    let g = generate(4, 4, 10).unwrap();
    // 9 vertices cannot hold a 13-vertex ball.
    let small = make_quotient(QuotientSpec::torus(3, 3)).unwrap();
    assert!(!is_r_locally(&small.graph, &g, 2, BallKind::Metric).unwrap().ok);
    for (m, n) in [(5, 7), (6, 7), (7, 6), (8, 8)] {
        let t = common::grid_torus(m, n);
        let oracle = (0..m * n).all(|v| lattice_ball_embeds(&t, m, n, v / n, v % n, 2));
        let report = is_r_locally(&t, &g, 2, BallKind::Metric).unwrap();
        assert_eq!(report.ok, oracle, "{m}x{n}");
        assert_eq!(report.ok, report.failures.is_empty());
    }
    // Width 5 wraps the 2-ball: (2,0) and (-2,0) become adjacent.
    let t = common::grid_torus(5, 7);
    assert!(t.has_edge(2 * 7, 3 * 7));
    assert!(!is_r_locally(&t, &g, 2, BallKind::Metric).unwrap().ok);
    assert!(is_r_locally(&common::grid_torus(6, 7), &g, 2, BallKind::Metric).unwrap().ok);
}

#[test]
fn facial_locality_needs_room_for_the_d2_ball() {
    let g = generate(4, 4, 10).unwrap();
    // D_2 of the square grid is the metric 4-ball.
    assert_eq!(dk_ball(&g, g.root, 2).unwrap().radius, 4);
    for (m, n) in [(9, 11), (10, 11)] {
        let t = common::grid_torus(m, n);
        let oracle = lattice_ball_embeds(&t, m, n, 0, 0, 4);
        let report = is_r_locally(&t, &g, 2, BallKind::Facial).unwrap();
        assert_eq!(report.ok, oracle, "{m}x{n}");
    }
    assert!(is_r_locally(&common::grid_torus(10, 11), &g, 2, BallKind::Facial).unwrap().ok);
}

#[test]
fn hex_torus_is_locally_hexagonal() {
    let g = generate(6, 3, 10).unwrap();
    let q = make_quotient(QuotientSpec::hex_torus(5, 5)).unwrap();
    assert!(is_r_locally(&q.graph, &g, 2, BallKind::Metric).unwrap().ok);
    let space = PeripheralSpace::new(&q.graph, 6);
    let mut lengths = BTreeMap::new();
    for v in 0..q.graph.len() {
        for f in face_boundaries_at(&space, v).unwrap() {
            *lengths.entry(f.len()).or_insert(0) += 1;
        }
    }
    // Each of the 25 hexagons is seen from its 6 corners.
    assert_eq!(lengths, BTreeMap::from([(6, 150)]));
}

#[test]
fn rewired_torus_is_not_locally_square() {
    let g = generate(4, 4, 10).unwrap();
    let h = common::rewired_torus();
    let report = is_r_locally(&h, &g, 2, BallKind::Metric).unwrap();
    assert!(!report.ok);
    assert!(report.failures.contains(&(2 * 7 + 3)));
}
