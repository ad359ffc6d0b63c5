//! Finite simple undirected graphs with stable vertex identifiers.
//!
//! A [`Graph`] keeps the identifiers it was built with: induced subgraphs and
//! balls carry the identifiers of their host, so vertex maps computed on a
//! ball can be read directly in host terms. Graphs are immutable once built.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    /// Sorted vertex identifiers.
    ids: Vec<usize>,
    /// Sorted neighbor identifiers, indexed by position in `ids`.
    adj: Vec<Vec<usize>>,
    dense: bool,
}

impl Graph {
    /// Graph on vertices `0..n` with the given undirected edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::input(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("parallel edge at vertex {v}")));
            }
        }
        Ok(Graph {
            ids: (0..n).collect(),
            adj,
            dense: true,
        })
    }

    /// Graph on arbitrary identifiers. `adjacency` must already be symmetric.
    pub fn from_adjacency(adjacency: BTreeMap<usize, Vec<usize>>) -> Result<Graph> {
        let ids: Vec<usize> = adjacency.keys().copied().collect();
        let mut adj = Vec::with_capacity(ids.len());
        for (&v, list) in &adjacency {
            let mut list = list.clone();
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("parallel edge at vertex {v}")));
            }
            for &w in &list {
                if w == v {
                    return Err(Error::input(format!("loop at vertex {v}")));
                }
                match adjacency.get(&w) {
                    Some(back) if back.contains(&v) => {}
                    Some(_) => {
                        return Err(Error::input(format!("asymmetric edge {v}-{w}")))
                    }
                    None => return Err(Error::UnknownVertex(w)),
                }
            }
            adj.push(list);
        }
        let dense = ids.iter().enumerate().all(|(i, &v)| i == v);
        Ok(Graph { ids, adj, dense })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.ids
    }

    /// Position of `v` in [`Graph::vertices`].
    pub fn index_of(&self, v: usize) -> Option<usize> {
        if self.dense {
            (v < self.ids.len()).then_some(v)
        } else {
            self.ids.binary_search(&v).ok()
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.index_of(v).is_some()
    }

    pub fn require(&self, v: usize) -> Result<usize> {
        self.index_of(v).ok_or(Error::UnknownVertex(v))
    }

    /// Neighbors of `v` in ascending order; empty for unknown vertices.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        match self.index_of(v) {
            Some(i) => &self.adj[i],
            None => &[],
        }
    }

    pub fn neighbors_at(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ids.iter().zip(&self.adj).flat_map(|(&u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// BFS from `o` up to depth `limit` (inclusive). Returns `(vertex, distance)`
    /// in BFS order, visiting neighbors in identifier order.
    pub fn bfs(&self, o: usize, limit: Option<usize>) -> Result<Vec<(usize, usize)>> {
        self.bfs_avoiding(o, limit, |_| false)
    }

    fn bfs_avoiding(
        &self,
        o: usize,
        limit: Option<usize>,
        blocked: impl Fn(usize) -> bool,
    ) -> Result<Vec<(usize, usize)>> {
        let start = self.require(o)?;
        let mut seen = vec![false; self.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back((start, 0usize));
        while let Some((i, d)) = queue.pop_front() {
            order.push((self.ids[i], d));
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for &w in &self.adj[i] {
                let j = self.index_of(w).expect("neighbor is a vertex");
                if !seen[j] && !blocked(w) {
                    seen[j] = true;
                    queue.push_back((j, d + 1));
                }
            }
        }
        Ok(order)
    }

    /// Distances from `o` to every reachable vertex.
    pub fn distances_from(&self, o: usize) -> Result<BTreeMap<usize, usize>> {
        Ok(self.bfs(o, None)?.into_iter().collect())
    }

    pub fn is_connected(&self) -> bool {
        match self.ids.first() {
            None => true,
            Some(&o) => self.bfs(o, None).map(|r| r.len()).unwrap_or(0) == self.len(),
        }
    }

    pub fn eccentricity(&self, o: usize) -> Result<Option<usize>> {
        let reached = self.bfs(o, None)?;
        if reached.len() != self.len() {
            return Ok(None);
        }
        Ok(reached.last().map(|&(_, d)| d))
    }

    /// Exact diameter by all-pairs BFS; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for &v in &self.ids {
            best = best.max(self.eccentricity(v).ok()??);
        }
        Some(best)
    }
}

/// The subgraph induced by the vertices within a given distance of a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    pub graph: Graph,
    pub root: usize,
    pub radius: usize,
    pub dist: BTreeMap<usize, usize>,
}

impl RootedBall {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.dist.contains_key(&v)
    }
}

/// `B_i(o; g)`: BFS to depth `i`, then the induced subgraph.
pub fn ball(g: &Graph, o: usize, i: usize) -> Result<RootedBall> {
    let reached = g.bfs(o, Some(i))?;
    let dist: BTreeMap<usize, usize> = reached.into_iter().collect();
    let set: BTreeSet<usize> = dist.keys().copied().collect();
    let graph = induced_subgraph(g, &set)?;
    Ok(RootedBall {
        graph,
        root: o,
        radius: i,
        dist,
    })
}

pub fn induced_subgraph(g: &Graph, s: &BTreeSet<usize>) -> Result<Graph> {
    let mut adjacency = BTreeMap::new();
    for &v in s {
        g.require(v)?;
        let list: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|w| s.contains(w))
            .collect();
        adjacency.insert(v, list);
    }
    Graph::from_adjacency(adjacency)
}

/// True iff `g` minus `removed` has at most one connected component.
pub fn is_connected_excluding(g: &Graph, removed: &BTreeSet<usize>) -> Result<bool> {
    for &v in removed {
        g.require(v)?;
    }
    let Some(&start) = g.vertices().iter().find(|v| !removed.contains(v)) else {
        return Ok(true);
    };
    let reached = g.bfs_avoiding(start, None, |w| removed.contains(&w))?;
    Ok(reached.len() == g.len() - removed.len())
}

/// No vertex set of size at most two disconnects `g`.
pub fn is_three_connected(g: &Graph) -> Result<bool> {
    if g.len() < 4 {
        return Err(Error::input(format!(
            "3-connectivity needs at least 4 vertices, got {}",
            g.len()
        )));
    }
    if !g.is_connected() {
        return Ok(false);
    }
    let vs = g.vertices();
    for (i, &a) in vs.iter().enumerate() {
        if !is_connected_excluding(g, &BTreeSet::from([a]))? {
            return Ok(false);
        }
        for &b in &vs[i + 1..] {
            if !is_connected_excluding(g, &BTreeSet::from([a, b]))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
