//! Face-boundaries and combinatorial face tracing over rotation systems.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A cycle of the underlying graph, stored in canonical rotation: the least
/// vertex first, its lesser cycle-neighbor second.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceBoundary {
    cycle: Vec<usize>,
}

impl FaceBoundary {
    /// Canonicalizes `cycle`. Callers are responsible for it being a cycle.
    pub fn new(cycle: Vec<usize>) -> FaceBoundary {
        FaceBoundary {
            cycle: canonical_cycle(&cycle),
        }
    }

    /// Checks that `cycle` is a simple cycle of `g` of length at least 3.
    pub fn checked(g: &Graph, cycle: Vec<usize>) -> Result<FaceBoundary> {
        let k = cycle.len();
        if k < 3 {
            return Err(Error::input(format!("cycle too short: {cycle:?}")));
        }
        let distinct: BTreeSet<_> = cycle.iter().collect();
        if distinct.len() != k {
            return Err(Error::input(format!("cycle repeats a vertex: {cycle:?}")));
        }
        for i in 0..k {
            if !g.has_edge(cycle[i], cycle[(i + 1) % k]) {
                return Err(Error::input(format!(
                    "cycle {:?} uses non-edge {}-{}",
                    cycle,
                    cycle[i],
                    cycle[(i + 1) % k]
                )));
            }
        }
        Ok(FaceBoundary::new(cycle))
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.cycle.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.cycle.iter().position(|&x| x == v)
    }

    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut vs = self.cycle.clone();
        vs.sort_unstable();
        vs
    }

    /// Edges as `(min, max)` pairs, in cycle order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.cycle.len();
        (0..k).map(move |i| edge_key(self.cycle[i], self.cycle[(i + 1) % k]))
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        let Some(i) = self.position(u) else {
            return false;
        };
        let k = self.cycle.len();
        self.cycle[(i + 1) % k] == v || self.cycle[(i + k - 1) % k] == v
    }

    /// The two cycle-neighbors of `v`, lesser first.
    pub fn neighbors_of(&self, v: usize) -> Option<(usize, usize)> {
        let i = self.position(v)?;
        let k = self.cycle.len();
        let a = self.cycle[(i + 1) % k];
        let b = self.cycle[(i + k - 1) % k];
        Some((a.min(b), a.max(b)))
    }

    /// The cycle read starting at `start` and continuing through `next`.
    pub fn oriented_from(&self, start: usize, next: usize) -> Option<Vec<usize>> {
        let i = self.position(start)?;
        let k = self.cycle.len();
        if self.cycle[(i + 1) % k] == next {
            Some((0..k).map(|j| self.cycle[(i + j) % k]).collect())
        } else if self.cycle[(i + k - 1) % k] == next {
            Some((0..k).map(|j| self.cycle[(i + k - j) % k]).collect())
        } else {
            None
        }
    }

    /// Image under a vertex map; `None` if some vertex is unmapped.
    pub fn map_with(&self, f: impl Fn(usize) -> Option<usize>) -> Option<FaceBoundary> {
        let mapped: Option<Vec<usize>> = self.cycle.iter().map(|&v| f(v)).collect();
        Some(FaceBoundary::new(mapped?))
    }
}

pub fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let k = cycle.len();
    if k == 0 {
        return Vec::new();
    }
    let (i, _) = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .expect("non-empty");
    let fwd = cycle[(i + 1) % k];
    let back = cycle[(i + k - 1) % k];
    if fwd <= back {
        (0..k).map(|j| cycle[(i + j) % k]).collect()
    } else {
        (0..k).map(|j| cycle[(i + k - j) % k]).collect()
    }
}

/// Cyclic order of neighbors at each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rotation(pub BTreeMap<usize, Vec<usize>>);

impl Rotation {
    pub fn at(&self, v: usize) -> &[usize] {
        self.0.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Neighbor following `u` in the cyclic order at `v`.
    pub fn successor(&self, v: usize, u: usize) -> Option<usize> {
        let list = self.0.get(&v)?;
        let i = list.iter().position(|&x| x == u)?;
        Some(list[(i + 1) % list.len()])
    }

    pub fn predecessor(&self, v: usize, u: usize) -> Option<usize> {
        let list = self.0.get(&v)?;
        let i = list.iter().position(|&x| x == u)?;
        Some(list[(i + list.len() - 1) % list.len()])
    }

    /// Every vertex has a cyclic order that is a permutation of its neighbors.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for &v in g.vertices() {
            let Some(list) = self.0.get(&v) else {
                return Err(Error::input(format!("missing rotation at vertex {v}")));
            };
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(v) {
                return Err(Error::input(format!(
                    "rotation at {v} is {list:?}, not a cyclic order of its neighbors {:?}",
                    g.neighbors(v)
                )));
            }
        }
        if let Some(extra) = self.0.keys().find(|&&v| !g.contains(v)) {
            return Err(Error::UnknownVertex(*extra));
        }
        Ok(())
    }
}

/// All orbits of the next-dart map `(u -> v) ↦ (v -> succ_v(u))`, each as the
/// list of dart tails. Orbits are discovered in lexicographic dart order.
pub fn trace_walks(g: &Graph, rotation: &Rotation) -> Result<Vec<Vec<usize>>> {
    rotation.validate(g)?;
    let darts: Vec<(usize, usize)> = g
        .vertices()
        .iter()
        .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .collect();
    let index: HashMap<(usize, usize), usize> =
        darts.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut seen = vec![false; darts.len()];
    let mut walks = Vec::new();
    for start in 0..darts.len() {
        if seen[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let (u, v) = darts[d];
            walk.push(u);
            let w = rotation.successor(v, u).expect("validated rotation");
            d = index[&(v, w)];
        }
        walks.push(walk);
    }
    Ok(walks)
}

pub fn is_simple_walk(walk: &[usize]) -> bool {
    walk.len() >= 3 && walk.iter().collect::<BTreeSet<_>>().len() == walk.len()
}

/// Result of face tracing: the face-boundaries and, for a finite patch, the
/// outer boundary walk (never treated as a face).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedFaces {
    pub faces: Vec<FaceBoundary>,
    pub outer: Option<Vec<usize>>,
    pub walk_count: usize,
}

/// Traces faces and separates the outer walk. With `outer_hint`, the walk
/// matching it is the outer one; otherwise the unique non-simple walk, or
/// failing that the longest walk when `expect_outer` is set.
pub fn trace_faces(
    g: &Graph,
    rotation: &Rotation,
    outer_hint: Option<&[usize]>,
    expect_outer: bool,
) -> Result<TracedFaces> {
    let walks = trace_walks(g, rotation)?;
    let walk_count = walks.len();
    let outer_idx = if let Some(hint) = outer_hint {
        let key = cyclic_key(hint);
        let found = walks.iter().position(|w| cyclic_key(w) == key);
        match found {
            Some(i) => Some(i),
            None => {
                return Err(Error::input(
                    "outer boundary does not match any traced walk",
                ))
            }
        }
    } else {
        let non_simple: Vec<usize> = (0..walks.len())
            .filter(|&i| !is_simple_walk(&walks[i]))
            .collect();
        match non_simple.len() {
            0 if expect_outer => (0..walks.len()).max_by_key(|&i| (walks[i].len(), usize::MAX - i)),
            0 => None,
            1 => Some(non_simple[0]),
            _ => {
                return Err(Error::input(format!(
                    "{} non-simple boundary walks; expected at most one",
                    non_simple.len()
                )))
            }
        }
    };
    let mut faces = Vec::new();
    let mut outer = None;
    for (i, w) in walks.into_iter().enumerate() {
        if Some(i) == outer_idx {
            outer = Some(w);
        } else {
            faces.push(FaceBoundary::checked(g, w)?);
        }
    }
    Ok(TracedFaces {
        faces,
        outer,
        walk_count,
    })
}

/// Rotation-invariant key of a closed walk, used to match walks.
fn cyclic_key(walk: &[usize]) -> Vec<usize> {
    let k = walk.len();
    (0..k)
        .map(|s| (0..k).map(|j| walk[(s + j) % k]).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}
