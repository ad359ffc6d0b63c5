//! Finite patches of vertex-transitive plane tessellations.

mod faces;
mod grow;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

pub use faces::{
    edge_key, is_simple_walk, trace_faces, trace_walks, FaceBoundary, Rotation, TracedFaces,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{GraphFile, PatchFile};

/// A finite window into an infinite plane tessellation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanePatch {
    pub graph: Graph,
    pub root: usize,
    pub rotation: Rotation,
    pub faces: Vec<FaceBoundary>,
    pub outer: Vec<usize>,
    /// Largest `i` such that no outer-boundary vertex lies in `B_i(v)`.
    pub complete_radius: BTreeMap<usize, usize>,
    /// `(p, q)` for generated patches, `None` for imported ones.
    pub schlafli: Option<(usize, usize)>,
    faces_by_vertex: BTreeMap<usize, Vec<usize>>,
    face_index: HashMap<FaceBoundary, usize>,
}

/// Tie-breaking rule for [`face_enumeration`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaceOrder {
    /// Ascending by (distance from root, sorted vertex tuple).
    #[default]
    Canonical,
    /// Same distance key, ties broken by descending vertex tuple.
    ReversedTies,
}

impl PlanePatch {
    fn assemble(
        graph: Graph,
        root: usize,
        rotation: Rotation,
        faces: Vec<FaceBoundary>,
        outer: Vec<usize>,
        schlafli: Option<(usize, usize)>,
    ) -> Result<PlanePatch> {
        graph.require(root)?;
        let complete_radius = complete_radii(&graph, &outer);
        let mut faces_by_vertex: BTreeMap<usize, Vec<usize>> =
            graph.vertices().iter().map(|&v| (v, Vec::new())).collect();
        let mut face_index = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for &v in f.cycle() {
                faces_by_vertex.get_mut(&v).expect("face vertex").push(i);
            }
            face_index.entry(f.clone()).or_insert(i);
        }
        Ok(PlanePatch {
            graph,
            root,
            rotation,
            faces,
            outer,
            complete_radius,
            schlafli,
            faces_by_vertex,
            face_index,
        })
    }

    pub fn complete_radius_of(&self, v: usize) -> usize {
        self.complete_radius.get(&v).copied().unwrap_or(0)
    }

    /// Indices into [`PlanePatch::faces`] of the faces containing `v`.
    pub fn face_ids_at(&self, v: usize) -> &[usize] {
        self.faces_by_vertex.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn faces_at(&self, v: usize) -> Vec<FaceBoundary> {
        self.face_ids_at(v).iter().map(|&i| self.faces[i].clone()).collect()
    }

    pub fn face_id(&self, f: &FaceBoundary) -> Option<usize> {
        self.face_index.get(f).copied()
    }

    /// Largest face length at the root, the bound used for cycle searches.
    pub fn max_codegree(&self) -> usize {
        self.face_ids_at(self.root)
            .iter()
            .map(|&i| self.faces[i].len())
            .max()
            .unwrap_or(3)
    }

    pub fn is_outer(&self, v: usize) -> bool {
        self.complete_radius_of(v) == 0 && self.outer.contains(&v)
    }

    /// Same patch, different root.
    pub fn rerooted(&self, root: usize) -> Result<PlanePatch> {
        self.graph.require(root)?;
        let mut p = self.clone();
        p.root = root;
        Ok(p)
    }

    pub fn to_file(&self) -> PatchFile {
        PatchFile {
            graph: GraphFile::from_graph(&self.graph, Some(&self.rotation)),
            root: self.root,
            faces: self.faces.iter().map(|f| f.cycle().to_vec()).collect(),
            complete_radius: self.complete_radius.clone(),
            outer: self.outer.clone(),
            schlafli: self.schlafli.map(|(p, q)| [p, q]),
        }
    }
}

fn complete_radii(g: &Graph, outer: &[usize]) -> BTreeMap<usize, usize> {
    let cap = g.len();
    let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &v in outer {
        if dist.insert(v, 0).is_none() {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for &w in g.neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    g.vertices()
        .iter()
        .map(|&v| {
            let r = match dist.get(&v) {
                Some(&d) => d.saturating_sub(1),
                None => cap,
            };
            (v, r)
        })
        .collect()
}

/// A patch of {p,q} containing the complete ball of radius `radius` around
/// its root (vertex 0).
pub fn generate(p: usize, q: usize, radius: usize) -> Result<PlanePatch> {
    if p < 3 || q < 3 {
        return Err(Error::input(format!("need p, q >= 3, got {{{p},{q}}}")));
    }
    let product = (p - 2) * (q - 2);
    if product < 4 {
        return Err(Error::NotOneEnded { p, q, product });
    }
    if radius < 1 {
        return Err(Error::input("radius must be at least 1"));
    }
    let mut growth = grow::Growth::new(p, q);
    // Completing every vertex within `radius` leaves the boundary at
    // distance > radius, so the root's complete radius reaches `radius`.
    growth.grow_around(0, radius)?;
    let n = growth.vertex_count();
    let mut edges = Vec::new();
    for (u, list) in growth.rotation.iter().enumerate() {
        edges.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
    }
    let graph = Graph::from_edges(n, &edges)?;
    let rotation = Rotation(growth.rotation.iter().cloned().enumerate().collect());
    let faces = growth
        .faces
        .iter()
        .map(|f| FaceBoundary::checked(&graph, f.clone()))
        .collect::<Result<Vec<_>>>()?;
    let outer = growth.boundary();
    let patch = PlanePatch::assemble(graph, 0, rotation, faces, outer, Some((p, q)))?;
    debug_assert!(patch.complete_radius_of(0) >= radius);
    Ok(patch)
}

/// Total order on faces by distance from the root, then vertex tuple.
pub fn face_enumeration(patch: &PlanePatch, order: FaceOrder) -> Vec<usize> {
    let dist = patch
        .graph
        .distances_from(patch.root)
        .expect("root is a vertex");
    let mut keyed: Vec<(usize, Vec<usize>, usize)> = patch
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let d = f
                .cycle()
                .iter()
                .filter_map(|v| dist.get(v))
                .min()
                .copied()
                .unwrap_or(usize::MAX);
            (d, f.sorted_vertices(), i)
        })
        .collect();
    match order {
        FaceOrder::Canonical => keyed.sort(),
        FaceOrder::ReversedTies => {
            keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)).then(a.2.cmp(&b.2)))
        }
    }
    keyed.into_iter().map(|(_, _, i)| i).collect()
}

/// Builds a patch from a graph file carrying a rotation and a root. Faces
/// are traced; transitivity of the underlying graph is not checked.
pub fn import_patch(file: &PatchFile) -> Result<PlanePatch> {
    let graph = file.graph.to_graph()?;
    let Some(rot) = &file.graph.rotation else {
        return Err(Error::input("patch file has no rotation"));
    };
    let rotation = Rotation(rot.clone());
    if !graph.is_connected() {
        return Err(Error::input("patch graph is disconnected"));
    }
    let hint = (!file.outer.is_empty()).then_some(file.outer.as_slice());
    let traced = trace_faces(&graph, &rotation, hint, true)?;
    let euler =
        graph.len() as i64 - graph.edge_count() as i64 + traced.walk_count as i64;
    if euler != 2 {
        return Err(Error::NonPlanar { euler });
    }
    // Listed faces keep their order, so face ids survive a round trip.
    let faces = if file.faces.is_empty() {
        let mut faces = traced.faces;
        faces.sort();
        faces
    } else {
        let given: Vec<FaceBoundary> = file
            .faces
            .iter()
            .map(|c| FaceBoundary::new(c.clone()))
            .collect();
        let given_set: BTreeSet<&FaceBoundary> = given.iter().collect();
        let traced_set: BTreeSet<&FaceBoundary> = traced.faces.iter().collect();
        if given_set != traced_set || given_set.len() != given.len() {
            return Err(Error::input("listed faces disagree with the rotation system"));
        }
        given
    };
    let outer = traced.outer.unwrap_or_default();
    let schlafli = file.schlafli.map(|[p, q]| (p, q));
    PlanePatch::assemble(graph, file.root, rotation, faces, outer, schlafli)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;

    #[test]
    fn rejects_spherical_parameters() {
        assert!(matches!(generate(3, 3, 2), Err(Error::NotOneEnded { .. })));
        assert!(matches!(generate(3, 5, 2), Err(Error::NotOneEnded { .. })));
        assert!(matches!(generate(4, 3, 2), Err(Error::NotOneEnded { .. })));
        assert!(generate(2, 7, 2).is_err());
    }

    #[test]
    fn hexagonal_root() {
        let patch = generate(6, 3, 1).unwrap();
        assert_eq!(patch.graph.degree(0), 3);
        let at_root = patch.faces_at(0);
        assert_eq!(at_root.len(), 3);
        assert!(at_root.iter().all(|f| f.len() == 6));
    }

    #[test]
    fn square_patch_ball_counts() {
        let patch = generate(4, 4, 2).unwrap();
        assert!(patch.complete_radius_of(0) >= 2);
        assert_eq!(ball(&patch.graph, 0, 1).unwrap().len(), 5);
        assert_eq!(ball(&patch.graph, 0, 2).unwrap().len(), 13);
        let at_root = patch.faces_at(0);
        assert_eq!(at_root.len(), 4);
        assert!(at_root.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn traced_faces_match_growth() {
        for (p, q, r) in [(4, 4, 4), (6, 3, 4), (3, 6, 3), (4, 5, 3), (3, 7, 3), (5, 4, 3)] {
            let patch = generate(p, q, r).unwrap();
            let traced = trace_faces(&patch.graph, &patch.rotation, Some(&patch.outer), true)
                .unwrap();
            let mut a = traced.faces.clone();
            a.sort();
            let mut b = patch.faces.clone();
            b.sort();
            assert_eq!(a, b, "{{{p},{q}}}");
            let v = patch.graph.len() as i64;
            let e = patch.graph.edge_count() as i64;
            assert_eq!(v - e + traced.walk_count as i64, 2, "{{{p},{q}}}");
        }
    }

    #[test]
    fn interior_vertices_are_regular() {
        for (p, q) in [(4, 4), (6, 3), (3, 6), (4, 5), (5, 4), (3, 7), (7, 3)] {
            let patch = generate(p, q, 3).unwrap();
            for &v in patch.graph.vertices() {
                if patch.complete_radius_of(v) >= 1 {
                    assert_eq!(patch.graph.degree(v), q);
                    let fs = patch.faces_at(v);
                    assert_eq!(fs.len(), q);
                    assert!(fs.iter().all(|f| f.len() == p));
                }
            }
        }
    }

    #[test]
    fn enumeration_starts_at_root() {
        let patch = generate(4, 4, 3).unwrap();
        let order = face_enumeration(&patch, FaceOrder::Canonical);
        for &i in &order[..4] {
            assert!(patch.faces[i].contains(0));
        }
        assert_eq!(order, face_enumeration(&patch, FaceOrder::Canonical));
        let rev = face_enumeration(&patch, FaceOrder::ReversedTies);
        let mut a = order.clone();
        a.sort();
        let mut b = rev.clone();
        b.sort();
        assert_eq!(a, b);
    }
}
