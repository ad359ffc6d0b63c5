//! Helpers shared by the integration tests: a vertex-transitive tiling that
//! is not flag-transitive, and brute-force oracles written independently of
//! the library's search code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use cover_kit::graph::Graph;
use cover_kit::io::{GraphFile, PatchFile};
use cover_kit::tessellation::{import_patch, FaceBoundary, PlanePatch};

/// Corner `d` (east, north, west, south) of the small square at `(x, y)`.
fn corner_pos(x: i64, y: i64, d: i64) -> (f64, f64) {
    let e = 0.3;
    let (x, y) = (x as f64, y as f64);
    match d {
        0 => (x + e, y),
        1 => (x, y + e),
        2 => (x - e, y),
        _ => (x, y - e),
    }
}

/// The truncated square tiling (one square and two octagons at each
/// vertex) over `[-r, r]²`, imported through its planar rotation.
pub fn truncated_square_patch(r: i64) -> PlanePatch {
    let w = 2 * r + 1;
    let id = |x: i64, y: i64, d: i64| (((x + r) * w + (y + r)) * 4 + d) as usize;
    let mut around: BTreeMap<usize, Vec<(f64, usize)>> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut add = |a: (i64, i64, i64), b: (i64, i64, i64)| {
        let (ia, ib) = (id(a.0, a.1, a.2), id(b.0, b.1, b.2));
        edges.push([ia.min(ib), ia.max(ib)]);
        let (pa, pb) = (corner_pos(a.0, a.1, a.2), corner_pos(b.0, b.1, b.2));
        around.entry(ia).or_default().push(((pb.1 - pa.1).atan2(pb.0 - pa.0), ib));
        around.entry(ib).or_default().push(((pa.1 - pb.1).atan2(pa.0 - pb.0), ia));
    };
    for x in -r..=r {
        for y in -r..=r {
            for d in 0..4 {
                add((x, y, d), (x, y, (d + 1) % 4));
            }
            if x < r {
                add((x, y, 0), (x + 1, y, 2));
            }
            if y < r {
                add((x, y, 1), (x, y + 1, 3));
            }
        }
    }
    let rotation = around
        .into_iter()
        .map(|(v, mut ns)| {
            ns.sort_by(|a, b| a.0.total_cmp(&b.0));
            (v, ns.into_iter().map(|p| p.1).collect())
        })
        .collect();
    let file = PatchFile {
        graph: GraphFile {
            n: (w * w * 4) as usize,
            edges,
            rotation: Some(rotation),
            labels: None,
        },
        root: id(0, 0, 0),
        faces: Vec::new(),
        complete_radius: BTreeMap::new(),
        outer: Vec::new(),
        schlafli: None,
    };
    import_patch(&file).expect("truncated square patch")
}

/// The truncated square tiling modulo the translations `(m,0)` and `(0,n)`.
pub fn truncated_square_torus(m: i64, n: i64) -> Graph {
    let id = |x: i64, y: i64, d: i64| ((x.rem_euclid(m) * n + y.rem_euclid(n)) * 4 + d) as usize;
    let mut edges = Vec::new();
    for x in 0..m {
        for y in 0..n {
            for d in 0..4 {
                edges.push((id(x, y, d), id(x, y, (d + 1) % 4)));
            }
            edges.push((id(x, y, 0), id(x + 1, y, 2)));
            edges.push((id(x, y, 1), id(x, y + 1, 3)));
        }
    }
    let edges: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    Graph::from_edges((m * n * 4) as usize, &edges).expect("simple quotient")
}

/// `C_m × C_n` with vertex `i*n + j`, built without the instances module.
pub fn grid_torus(m: usize, n: usize) -> Graph {
    let id = |i: usize, j: usize| (i % m) * n + j % n;
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n {
            for (a, b) in [(id(i, j), id(i + 1, j)), (id(i, j), id(i, j + 1))] {
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    Graph::from_edges(m * n, &edges).expect("simple torus")
}

/// `C_5 × C_7` with the edge `(2,3)-(2,4)` replaced by `(2,3)-(4,0)`.
pub fn rewired_torus() -> Graph {
    let id = |i: usize, j: usize| i * 7 + j;
    let (a, b) = (id(2, 3), id(2, 4));
    let mut edges: Vec<(usize, usize)> = grid_torus(5, 7)
        .edges()
        .filter(|&e| e != (a.min(b), a.max(b)))
        .collect();
    edges.push((a.min(id(4, 0)), a.max(id(4, 0))));
    Graph::from_edges(35, &edges).expect("simple graph")
}

/// Every simple cycle of length `3..=l_max` through `v`, each once.
pub fn all_cycles_through(g: &Graph, v: usize, l_max: usize) -> BTreeSet<FaceBoundary> {
    fn dfs(
        g: &Graph,
        path: &mut Vec<usize>,
        l_max: usize,
        out: &mut BTreeSet<FaceBoundary>,
    ) {
        let last = *path.last().expect("non-empty");
        for &u in g.neighbors(last) {
            if u == path[0] && path.len() >= 3 {
                out.insert(FaceBoundary::new(path.clone()));
            } else if !path.contains(&u) && path.len() < l_max {
                path.push(u);
                dfs(g, path, l_max, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    dfs(g, &mut vec![v], l_max, &mut out);
    out
}

/// No edge joins two vertices of the cycle except its own edges.
pub fn brute_induced(g: &Graph, c: &FaceBoundary) -> bool {
    let vs = c.cycle();
    vs.iter().enumerate().all(|(i, &a)| {
        vs[i + 1..]
            .iter()
            .all(|&b| !g.has_edge(a, b) || c.contains_edge(a, b))
    })
}

/// Removing the cycle's vertices leaves a connected (possibly empty) graph.
pub fn brute_non_separating(g: &Graph, c: &FaceBoundary) -> bool {
    let removed: BTreeSet<usize> = c.cycle().iter().copied().collect();
    let rest: Vec<usize> = g.vertices().iter().copied().filter(|v| !removed.contains(v)).collect();
    let Some(&start) = rest.first() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if !removed.contains(&y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len() == rest.len()
}

pub fn brute_peripheral_through(g: &Graph, v: usize, l_max: usize) -> BTreeSet<FaceBoundary> {
    all_cycles_through(g, v, l_max)
        .into_iter()
        .filter(|c| brute_induced(g, c) && brute_non_separating(g, c))
        .collect()
}

/// Vertices at distance at most `r`, by a plain BFS.
pub fn bfs_within(g: &Graph, o: usize, r: usize) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::from([(o, 0)]);
    let mut queue = VecDeque::from([o]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == r {
            continue;
        }
        for &y in g.neighbors(x) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Number of edges of `g` with both ends in `s`.
pub fn induced_edge_count(g: &Graph, s: &BTreeSet<usize>) -> usize {
    g.edges().filter(|(a, b)| s.contains(a) && s.contains(b)).count()
}
