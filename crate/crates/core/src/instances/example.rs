//! A graph built from two copies of the Cayley graph of `Z × Z/k`, and the
//! finite graphs `K(l,k)` it covers. `K(l,k)` has isomorphic balls of large
//! radius around all vertices without being vertex-transitive.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{ball, Graph};
use crate::io::GraphFile;
use crate::local::{isomorphisms, rooted_isomorphisms, SearchOptions};
use crate::verify::{Check, VerificationReport};

/// `K(l,k)`: an untwisted `l × k` toroidal grid (the `x` part), a copy with
/// the edges between levels 0 and 1 shifted by one (the `y` part), and every
/// `x` vertex of level `i` joined to every `y` vertex of level `i`.
#[derive(Debug, Clone)]
pub struct ExampleK {
    pub l: usize,
    pub k: usize,
    pub graph: Graph,
    pub labels: BTreeMap<usize, String>,
    /// The `y` edges `(y_0^j, y_1^{j+1})` that replace `(y_0^j, y_1^j)`.
    pub rerouted: Vec<(usize, usize)>,
}

impl ExampleK {
    pub fn x(&self, i: usize, j: usize) -> usize {
        (i % self.l) * self.k + j % self.k
    }

    pub fn y(&self, i: usize, j: usize) -> usize {
        self.l * self.k + self.x(i, j)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile::from_graph(&self.graph, None).with_labels(self.labels.clone())
    }
}

pub fn make_example_k(l: usize, k: usize) -> Result<ExampleK> {
    if l < 3 || k < 3 {
        return Err(Error::input(format!("K(l,k) needs l, k >= 3, got ({l},{k})")));
    }
    let x = |i: usize, j: usize| (i % l) * k + j % k;
    let y = |i: usize, j: usize| l * k + x(i, j);
    let mut edges = Vec::new();
    let mut rerouted = Vec::new();
    for i in 0..l {
        for j in 0..k {
            edges.push((x(i, j), x(i + 1, j)));
            edges.push((x(i, j), x(i, j + 1)));
            edges.push((y(i, j), y(i, j + 1)));
            if i == 0 {
                edges.push((y(0, j), y(1, j + 1)));
                rerouted.push((y(0, j), y(1, j + 1)));
            } else {
                edges.push((y(i, j), y(i + 1, j)));
            }
            for b in 0..k {
                edges.push((x(i, j), y(i, b)));
            }
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    let graph = Graph::from_edges(2 * l * k, &edges)?;
    let mut labels = BTreeMap::new();
    for i in 0..l {
        for j in 0..k {
            labels.insert(x(i, j), format!("x_{i}^{j}"));
            labels.insert(y(i, j), format!("y_{i}^{j}"));
        }
    }
    Ok(ExampleK {
        l,
        k,
        graph,
        labels,
        rerouted,
    })
}

/// Two copies of the `Z × Z/k` grid over heights `z_min..=z_max`, with
/// every vertex joined to the `k` vertices of the other copy at its height.
#[derive(Debug, Clone)]
pub struct ExampleG {
    pub k: usize,
    pub z_min: i64,
    pub z_max: i64,
    pub graph: Graph,
}

impl ExampleG {
    fn levels(&self) -> usize {
        (self.z_max - self.z_min + 1) as usize
    }

    /// Vertex `(z, j)` of copy 0 or 1.
    pub fn vertex(&self, copy: usize, z: i64, j: usize) -> usize {
        copy * self.levels() * self.k + (z - self.z_min) as usize * self.k + j % self.k
    }

    /// Inverse of [`ExampleG::vertex`].
    pub fn coords(&self, v: usize) -> (usize, i64, usize) {
        let per_copy = self.levels() * self.k;
        let (copy, rest) = (v / per_copy, v % per_copy);
        (copy, self.z_min + (rest / self.k) as i64, rest % self.k)
    }

    pub fn height(&self, v: usize) -> i64 {
        self.coords(v).1
    }

    pub fn is_interior(&self, v: usize) -> bool {
        let z = self.height(v);
        self.z_min < z && z < self.z_max
    }
}

pub fn make_example_g_patch(k: usize, z_min: i64, z_max: i64) -> Result<ExampleG> {
    if k < 3 || z_max <= z_min {
        return Err(Error::input("need k >= 3 and a non-trivial height range"));
    }
    let mut g = ExampleG {
        k,
        z_min,
        z_max,
        graph: Graph::from_edges(0, &[])?,
    };
    let mut edges = Vec::new();
    for z in z_min..=z_max {
        for j in 0..k {
            for copy in 0..2 {
                let v = g.vertex(copy, z, j);
                edges.push((v, g.vertex(copy, z, j + 1)));
                if z < z_max {
                    edges.push((v, g.vertex(copy, z + 1, j)));
                }
            }
            for b in 0..k {
                edges.push((g.vertex(0, z, j), g.vertex(1, z, b)));
            }
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    g.graph = Graph::from_edges(2 * g.levels() * k, &edges)?;
    Ok(g)
}

/// The covering projection of the two-copy graph onto `K(l,k)`: copy 0 goes
/// straight onto the `x` grid and copy 1 winds around the `y` grid, gaining
/// one unit of twist each time it crosses from level 0 to level 1.
pub fn example_cover_formula(g: &ExampleG, kk: &ExampleK) -> BTreeMap<usize, usize> {
    let l = kk.l as i64;
    let k = kk.k as i64;
    let mut map = BTreeMap::new();
    for &v in g.graph.vertices() {
        let (copy, z, j) = g.coords(v);
        let i = z.rem_euclid(l) as usize;
        let image = if copy == 0 {
            kk.x(i, j)
        } else {
            // Number of multiples of l in [1, z] for z > 0, minus those in
            // [z + 1, 0] for z <= 0: the ceiling of z / l.
            let twist = -((-z).div_euclid(l));
            kk.y(i, (j as i64 + twist).rem_euclid(k) as usize)
        };
        map.insert(v, image);
    }
    map
}

/// Whether some automorphism maps `v0` to each vertex, by exhaustive search.
pub fn is_vertex_transitive(g: &Graph) -> Result<bool> {
    const LIMIT: usize = 600;
    if g.len() > LIMIT {
        return Err(Error::TooLarge(format!(
            "transitivity search is limited to {LIMIT} vertices, graph has {}",
            g.len()
        )));
    }
    let Some(&v0) = g.vertices().first() else {
        return Ok(true);
    };
    let opts = SearchOptions {
        limit: Some(1),
        distance_profiles: true,
        ..SearchOptions::default()
    };
    Ok(g.vertices()
        .iter()
        .all(|&w| !isomorphisms(g, g, &[(v0, w)], &opts).is_empty()))
}

fn balls_all_isomorphic(g: &Graph, rho: usize) -> Result<Option<usize>> {
    let v0 = g.vertices()[0];
    let reference = ball(g, v0, rho)?;
    for &v in g.vertices() {
        let b = ball(g, v, rho)?;
        if b.len() != reference.len() || rooted_isomorphisms(&b, &reference, Some(1)).is_empty() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Checks that all balls of radius `diam(K) - 1 - floor(l/2)` in `K(l,k)` are
/// isomorphic, and reports the largest radius for which that holds.
pub fn check_k_ball_claim(kk: &ExampleK) -> Result<VerificationReport> {
    let g = &kk.graph;
    let diam = g
        .diameter()
        .ok_or_else(|| Error::input("K(l,k) is disconnected"))?;
    let rho = diam as i64 - 1 - (kk.l / 2) as i64;
    let mut report = VerificationReport::default();
    report.note(format!("diam = {diam}, rho = {rho}"));
    if rho < 0 {
        report.push(Check::fail("stated radius", format!("rho = {rho} is negative")));
        return Ok(report);
    }
    match balls_all_isomorphic(g, rho as usize)? {
        None => report.push(Check::pass("balls of the stated radius are isomorphic")),
        Some(v) => report.push(Check::fail(
            "balls of the stated radius are isomorphic",
            format!("ball at vertex {v} differs"),
        )),
    }
    let mut best = None;
    for r in 0..=diam {
        if balls_all_isomorphic(g, r)?.is_some() {
            break;
        }
        best = Some(r);
    }
    report.note(format!(
        "largest radius with all balls isomorphic: {}",
        best.map_or("none".to_string(), |r| r.to_string())
    ));
    report.max_isomorphic_radius = best;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_is_regular_and_connected() {
        let kk = make_example_k(6, 4).unwrap();
        assert_eq!(kk.graph.len(), 48);
        assert!(kk.graph.vertices().iter().all(|&v| kk.graph.degree(v) == 8));
        assert!(kk.graph.is_connected());
        assert_eq!(kk.labels[&kk.y(0, 3)], "y_0^3");
        assert!(kk.graph.has_edge(kk.y(0, 3), kk.y(1, 0)));
        assert!(!kk.graph.has_edge(kk.y(0, 3), kk.y(1, 3)));
    }

    #[test]
    fn g_patch_degrees_and_heights() {
        let g = make_example_g_patch(4, -8, 8).unwrap();
        for &v in g.graph.vertices() {
            if g.is_interior(v) {
                assert_eq!(g.graph.degree(v), 8);
            }
            let (c, z, _) = g.coords(v);
            for &w in g.graph.neighbors(v) {
                if g.coords(w).0 != c {
                    assert_eq!(g.height(w), z);
                }
            }
        }
    }

    #[test]
    fn cover_formula_maps_edges_to_edges() {
        let kk = make_example_k(6, 4).unwrap();
        let g = make_example_g_patch(4, -13, 13).unwrap();
        let map = example_cover_formula(&g, &kk);
        for (u, v) in g.graph.edges() {
            assert!(kk.graph.has_edge(map[&u], map[&v]), "{:?} {:?}", g.coords(u), g.coords(v));
        }
    }

    #[test]
    fn small_transitivity_cases() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_vertex_transitive(&p3).unwrap());
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert!(is_vertex_transitive(&c5).unwrap());
    }
}
