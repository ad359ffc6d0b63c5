//! Backtracking isomorphism search with pinned pairs and forward checking.
//!
//! Candidate sets start from vertex invariants (degree, the sorted degrees of
//! the neighbors, distances to every pinned vertex). Each assignment filters
//! every open candidate set by adjacency and non-adjacency to the new pair,
//! and the next vertex is the one with the fewest candidates left.
//!
//! With `modulo_twins`, vertices with identical neighborhoods in the source
//! must map in increasing order, which picks one isomorphism per coset of the
//! twin-swapping subgroup. Hyperbolic balls have many dangling twin pairs at
//! their boundary, and this keeps their enumeration finite in practice.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{Graph, RootedBall};

/// A vertex bijection between two graphs, in host identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isomorphism {
    pub map: BTreeMap<usize, usize>,
}

impl Isomorphism {
    pub fn identity(vertices: &[usize]) -> Isomorphism {
        Isomorphism {
            map: vertices.iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn apply(&self, v: usize) -> Option<usize> {
        self.map.get(&v).copied()
    }

    pub fn inverse(&self) -> Isomorphism {
        Isomorphism {
            map: self.map.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }

    /// `other ∘ self`, defined where both steps are.
    pub fn then(&self, other: &Isomorphism) -> Isomorphism {
        Isomorphism {
            map: self
                .map
                .iter()
                .filter_map(|(&a, &b)| other.apply(b).map(|c| (a, c)))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    /// Checks adjacency and non-adjacency are preserved both ways.
    pub fn is_isomorphism(&self, a: &Graph, b: &Graph) -> bool {
        if self.map.len() != a.len() || a.len() != b.len() {
            return false;
        }
        let mut images: Vec<usize> = self.map.values().copied().collect();
        images.sort_unstable();
        if images.as_slice() != b.vertices() {
            return false;
        }
        a.edge_count() == b.edge_count()
            && a.edges().all(|(u, v)| b.has_edge(self.map[&u], self.map[&v]))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub limit: Option<usize>,
    pub modulo_twins: bool,
    /// Add per-vertex distance profiles (counts at each BFS depth) to the
    /// invariants. Worth it for whole-graph searches.
    pub distance_profiles: bool,
}

struct Side {
    n: usize,
    ids: Vec<usize>,
    bits: Vec<Vec<u64>>,
}

impl Side {
    fn new(g: &Graph) -> Side {
        let n = g.len();
        let words = n.div_ceil(64);
        let mut bits = vec![vec![0u64; words]; n];
        for (i, row) in bits.iter_mut().enumerate() {
            for &w in g.neighbors_at(i) {
                let j = g.index_of(w).expect("neighbor is a vertex");
                row[j / 64] |= 1 << (j % 64);
            }
        }
        Side {
            n,
            ids: g.vertices().to_vec(),
            bits,
        }
    }

    fn adj(&self, i: usize, j: usize) -> bool {
        self.bits[i][j / 64] >> (j % 64) & 1 == 1
    }
}

fn invariants(g: &Graph, pins: &[usize], profiles: bool) -> Vec<Vec<usize>> {
    let n = g.len();
    let deg: Vec<usize> = (0..n).map(|i| g.neighbors_at(i).len()).collect();
    let mut inv: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut nd: Vec<usize> = g
                .neighbors_at(i)
                .iter()
                .map(|&w| deg[g.index_of(w).expect("vertex")])
                .collect();
            nd.sort_unstable();
            let mut key = vec![deg[i]];
            key.extend(nd);
            key
        })
        .collect();
    for &p in pins {
        let dist = g
            .bfs(g.vertices()[p], None)
            .expect("pin is a vertex");
        let mut d = vec![usize::MAX; n];
        for (v, k) in dist {
            d[g.index_of(v).expect("vertex")] = k;
        }
        for i in 0..n {
            inv[i].push(d[i]);
        }
    }
    if profiles {
        for (i, key) in inv.iter_mut().enumerate() {
            let mut counts = Vec::new();
            for (_, k) in g.bfs(g.vertices()[i], None).expect("vertex") {
                if counts.len() <= k {
                    counts.push(0);
                }
                counts[k] += 1;
            }
            key.push(usize::MAX);
            key.extend(counts);
        }
    }
    inv
}

fn twin_classes(g: &Graph) -> Vec<usize> {
    let mut by_nbhd: HashMap<&[usize], usize> = HashMap::new();
    (0..g.len())
        .map(|i| {
            let next = by_nbhd.len();
            *by_nbhd.entry(g.neighbors_at(i)).or_insert(next)
        })
        .collect()
}

struct Search<'a> {
    a: &'a Side,
    b: &'a Side,
    twins: Option<Vec<usize>>,
    limit: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn assign(
        &self,
        domains: &[Vec<u32>],
        assigned: &[usize],
        u: usize,
        t: usize,
    ) -> Option<Vec<Vec<u32>>> {
        let mut next = Vec::with_capacity(domains.len());
        for (w, dom) in domains.iter().enumerate() {
            if w == u {
                next.push(vec![t as u32]);
                continue;
            }
            if assigned[w] != usize::MAX {
                next.push(dom.clone());
                continue;
            }
            let adj_a = self.a.adj(w, u);
            let twin_order = match &self.twins {
                Some(cls) if cls[w] == cls[u] => Some(w > u),
                _ => None,
            };
            let filtered: Vec<u32> = dom
                .iter()
                .copied()
                .filter(|&c| {
                    let c = c as usize;
                    c != t
                        && self.b.adj(c, t) == adj_a
                        && match twin_order {
                            Some(true) => c > t,
                            Some(false) => c < t,
                            None => true,
                        }
                })
                .collect();
            if filtered.is_empty() {
                return None;
            }
            next.push(filtered);
        }
        Some(next)
    }

    fn run(&mut self, domains: Vec<Vec<u32>>, mut assigned: Vec<usize>, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.a.n {
            self.found.push(assigned);
            return;
        }
        // Fewest candidates first; ties go to the lowest index.
        let u = (0..self.a.n)
            .filter(|&w| assigned[w] == usize::MAX)
            .min_by_key(|&w| (domains[w].len(), w))
            .expect("an open vertex remains");
        for &t in &domains[u] {
            let t = t as usize;
            if let Some(next) = self.assign(&domains, &assigned, u, t) {
                assigned[u] = t;
                self.run(next, assigned.clone(), depth + 1);
                assigned[u] = usize::MAX;
                if self.found.len() >= self.limit {
                    return;
                }
            }
        }
    }
}

/// Isomorphisms `a -> b` extending the pinned pairs, in deterministic order.
pub fn isomorphisms(
    a: &Graph,
    b: &Graph,
    pins: &[(usize, usize)],
    options: &SearchOptions,
) -> Vec<Isomorphism> {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return Vec::new();
    }
    let mut pin_a = Vec::with_capacity(pins.len());
    let mut pin_b = Vec::with_capacity(pins.len());
    for &(x, y) in pins {
        match (a.index_of(x), b.index_of(y)) {
            (Some(i), Some(j)) => {
                pin_a.push(i);
                pin_b.push(j);
            }
            _ => return Vec::new(),
        }
    }
    let inv_a = invariants(a, &pin_a, options.distance_profiles);
    let inv_b = invariants(b, &pin_b, options.distance_profiles);
    {
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Vec::new();
        }
    }
    let mut classes: BTreeMap<&[usize], Vec<u32>> = BTreeMap::new();
    for (j, key) in inv_b.iter().enumerate() {
        classes.entry(key.as_slice()).or_default().push(j as u32);
    }
    let domains: Vec<Vec<u32>> = inv_a
        .iter()
        .map(|key| classes.get(key.as_slice()).cloned().unwrap_or_default())
        .collect();
    if domains.iter().any(Vec::is_empty) && !a.is_empty() {
        return Vec::new();
    }
    let side_a = Side::new(a);
    let side_b = Side::new(b);
    let mut search = Search {
        a: &side_a,
        b: &side_b,
        twins: options.modulo_twins.then(|| twin_classes(a)),
        limit: options.limit.unwrap_or(usize::MAX),
        found: Vec::new(),
    };
    let mut assigned = vec![usize::MAX; a.len()];
    let mut domains = domains;
    for (&i, &j) in pin_a.iter().zip(&pin_b) {
        if assigned[i] != usize::MAX {
            if assigned[i] != j {
                return Vec::new();
            }
            continue;
        }
        if !domains[i].contains(&(j as u32)) {
            return Vec::new();
        }
        match search.assign(&domains, &assigned, i, j) {
            Some(next) => {
                domains = next;
                assigned[i] = j;
            }
            None => return Vec::new(),
        }
    }
    let depth = assigned.iter().filter(|&&x| x != usize::MAX).count();
    search.run(domains, assigned, depth);
    search
        .found
        .into_iter()
        .map(|assignment| Isomorphism {
            map: assignment
                .into_iter()
                .enumerate()
                .map(|(i, j)| (side_a.ids[i], side_b.ids[j]))
                .collect(),
        })
        .collect()
}

/// Root-preserving isomorphisms between two balls, at most `limit` of them.
pub fn rooted_isomorphisms(
    a: &RootedBall,
    b: &RootedBall,
    limit: Option<usize>,
) -> Vec<Isomorphism> {
    if a.radius != b.radius && a.dist.values().max() != b.dist.values().max() {
        return Vec::new();
    }
    isomorphisms(
        &a.graph,
        &b.graph,
        &[(a.root, b.root)],
        &SearchOptions {
            limit,
            ..SearchOptions::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn cycle_automorphisms() {
        let c = cycle(6);
        let all = isomorphisms(&c, &c, &[], &SearchOptions::default());
        assert_eq!(all.len(), 12);
        assert!(all.iter().all(|i| i.is_isomorphism(&c, &c)));
        let fixed = isomorphisms(&c, &c, &[(0, 0)], &SearchOptions::default());
        assert_eq!(fixed.len(), 2);
        assert!(fixed[0].is_identity());
    }

    #[test]
    fn star_leaves_permute_freely_unless_twins_are_reduced() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let b = ball(&star, 0, 1).unwrap();
        assert_eq!(rooted_isomorphisms(&b, &b, None).len(), 24);
        let reduced = isomorphisms(
            &star,
            &star,
            &[(0, 0)],
            &SearchOptions {
                modulo_twins: true,
                ..SearchOptions::default()
            },
        );
        assert_eq!(reduced.len(), 1);
    }

    #[test]
    fn non_isomorphic_graphs() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(isomorphisms(&path, &star, &[], &SearchOptions::default()).is_empty());
        assert!(isomorphisms(&path, &cycle(4), &[], &SearchOptions::default()).is_empty());
    }

    #[test]
    fn inverse_and_composition() {
        let c = cycle(5);
        let rot = isomorphisms(&c, &c, &[(0, 1), (1, 2)], &SearchOptions::default());
        assert_eq!(rot.len(), 1);
        let r = &rot[0];
        assert!(r.then(&r.inverse()).is_identity());
        let r2 = r.then(r);
        assert_eq!(r2.apply(0), Some(2));
    }
}
