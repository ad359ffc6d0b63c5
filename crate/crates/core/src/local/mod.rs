//! Peripheral cycles, D-balls, face-boundaries of non-planar graphs, rooted
//! isomorphisms and r-locality.

mod cycles;
mod iso;

use std::collections::{BTreeMap, BTreeSet};

use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cycles::{
    induced_cycles_through, is_induced_cycle, is_non_separating, is_peripheral,
    peripheral_cycles_through, PeripheralCycle,
};
pub use iso::{isomorphisms, rooted_isomorphisms, Isomorphism, SearchOptions};

use crate::error::{Error, Result};
use crate::graph::{ball, Graph, RootedBall};
use crate::tessellation::{FaceBoundary, PlanePatch};

/// A graph together with a notion of "its faces" and of how far its local
/// structure can be trusted.
pub trait LocalSpace: Sync {
    fn graph(&self) -> &Graph;

    /// Cycles used to build D-ball chains through `v`.
    fn cycles_through(&self, v: usize) -> Result<Vec<FaceBoundary>>;

    /// Face-boundaries at `v`, sorted.
    fn faces_at(&self, v: usize) -> Result<Vec<FaceBoundary>>;

    /// Errors unless `B_radius(v)` is faithfully present.
    fn require_complete(&self, v: usize, radius: usize) -> Result<()>;
}

impl LocalSpace for PlanePatch {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn cycles_through(&self, v: usize) -> Result<Vec<FaceBoundary>> {
        self.faces_at_checked(v)
    }

    fn faces_at(&self, v: usize) -> Result<Vec<FaceBoundary>> {
        self.faces_at_checked(v)
    }

    fn require_complete(&self, v: usize, radius: usize) -> Result<()> {
        self.graph.require(v)?;
        let have = self.complete_radius_of(v);
        if have < radius {
            return Err(Error::PatchTooSmall {
                vertex: v,
                needed: radius,
                have,
            });
        }
        Ok(())
    }
}

impl PlanePatch {
    /// Traced faces at `v`, insisting that all of them are present.
    pub fn faces_at_checked(&self, v: usize) -> Result<Vec<FaceBoundary>> {
        self.require_complete(v, 1)?;
        let mut fs = self.faces_at(v);
        fs.sort();
        Ok(fs)
    }
}

/// A graph with no embedding: faces are inferred as peripheral cycles.
///
/// Chains use peripheral cycles of the whole graph; faces at `v` are the
/// peripheral cycles through `v` of `D_2(v)`. Results are memoized.
pub struct PeripheralSpace<'a> {
    graph: &'a Graph,
    l_max: usize,
    complete: Option<&'a BTreeMap<usize, usize>>,
    cycles: Mutex<BTreeMap<usize, Vec<FaceBoundary>>>,
    faces: Mutex<BTreeMap<usize, Vec<FaceBoundary>>>,
}

impl<'a> PeripheralSpace<'a> {
    pub fn new(graph: &'a Graph, l_max: usize) -> PeripheralSpace<'a> {
        PeripheralSpace {
            graph,
            l_max,
            complete: None,
            cycles: Mutex::new(BTreeMap::new()),
            faces: Mutex::new(BTreeMap::new()),
        }
    }

    /// Treat `graph` as a truncated window with the given completeness radii.
    pub fn truncated(
        graph: &'a Graph,
        l_max: usize,
        complete: &'a BTreeMap<usize, usize>,
    ) -> PeripheralSpace<'a> {
        PeripheralSpace {
            complete: Some(complete),
            ..PeripheralSpace::new(graph, l_max)
        }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }
}

impl LocalSpace for PeripheralSpace<'_> {
    fn graph(&self) -> &Graph {
        self.graph
    }

    fn cycles_through(&self, v: usize) -> Result<Vec<FaceBoundary>> {
        if let Some(cs) = self.cycles.lock().get(&v) {
            return Ok(cs.clone());
        }
        // A cycle of length l through v stays within distance l/2.
        self.require_complete(v, self.l_max.div_ceil(2))?;
        let cs = peripheral_cycles_through(self.graph, v, self.l_max)?;
        self.cycles.lock().insert(v, cs.clone());
        Ok(cs)
    }

    fn faces_at(&self, v: usize) -> Result<Vec<FaceBoundary>> {
        if let Some(fs) = self.faces.lock().get(&v) {
            return Ok(fs.clone());
        }
        let fs = face_boundaries_at(self, v)?;
        self.faces.lock().insert(v, fs.clone());
        Ok(fs)
    }

    fn require_complete(&self, v: usize, radius: usize) -> Result<()> {
        self.graph.require(v)?;
        if let Some(cr) = self.complete {
            let have = cr.get(&v).copied().unwrap_or(0);
            if have < radius {
                return Err(Error::PatchTooSmall {
                    vertex: v,
                    needed: radius,
                    have,
                });
            }
        }
        Ok(())
    }
}

/// Vertices reachable from `o` by a chain of at most `k` cycles, each meeting
/// the previous one.
pub fn chain_reach(space: &dyn LocalSpace, o: usize, k: usize) -> Result<BTreeSet<usize>> {
    space.graph().require(o)?;
    let mut reached = BTreeSet::from([o]);
    let mut expanded = BTreeSet::new();
    for _ in 0..k {
        let todo: Vec<usize> = reached.difference(&expanded).copied().collect();
        for x in todo {
            for c in space.cycles_through(x)? {
                reached.extend(c.cycle().iter().copied());
            }
            expanded.insert(x);
        }
    }
    Ok(reached)
}

/// `D_k(o)`: the least ball around `o` containing every vertex reachable by
/// a chain of at most `k` pairwise-meeting cycles.
pub fn dk_ball(space: &dyn LocalSpace, o: usize, k: usize) -> Result<RootedBall> {
    if k == 0 {
        return Err(Error::input("D-ball level must be at least 1"));
    }
    let reached = chain_reach(space, o, k)?;
    let dist = space.graph().bfs(o, None)?;
    let j = dist
        .iter()
        .filter(|(v, _)| reached.contains(v))
        .map(|&(_, d)| d)
        .max()
        .unwrap_or(0);
    space.require_complete(o, j)?;
    ball(space.graph(), o, j)
}

/// Peripheral cycles through `v` of its own `D_2` ball.
pub fn face_boundaries_at(space: &PeripheralSpace<'_>, v: usize) -> Result<Vec<FaceBoundary>> {
    let d2 = dk_ball(space, v, 2)?;
    peripheral_cycles_through(&d2.graph, v, space.l_max)
}

/// Which balls [`is_r_locally`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallKind {
    /// Plain radius-`r` balls.
    Metric,
    /// `D_r` balls, with faces of the target inferred as peripheral cycles.
    Facial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub ok: bool,
    pub failures: Vec<usize>,
}

/// Whether every `r`-ball of `h` is isomorphic, root to root, to the
/// `r`-ball around the patch root.
pub fn is_r_locally(
    h: &Graph,
    g: &PlanePatch,
    r: usize,
    kind: BallKind,
) -> Result<LocalityReport> {
    let reference = match kind {
        BallKind::Metric => {
            g.require_complete(g.root, r)?;
            ball(&g.graph, g.root, r)?
        }
        BallKind::Facial => dk_ball(g, g.root, r)?,
    };
    let space = PeripheralSpace::new(h, g.max_codegree());
    let outcomes: Vec<Result<bool>> = h
        .vertices()
        .par_iter()
        .map(|&v| {
            let local = match kind {
                BallKind::Metric => ball(h, v, r)?,
                BallKind::Facial => dk_ball(&space, v, r)?,
            };
            Ok(local.len() == reference.len()
                && !rooted_isomorphisms(&local, &reference, Some(1)).is_empty())
        })
        .collect();
    let mut failures = Vec::new();
    for (&v, outcome) in h.vertices().iter().zip(outcomes) {
        if !outcome? {
            failures.push(v);
        }
    }
    Ok(LocalityReport {
        ok: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tessellation::generate;

    #[test]
    fn square_d_balls() {
        let patch = generate(4, 4, 6).unwrap();
        assert_eq!(dk_ball(&patch, 0, 1).unwrap().radius, 2);
        assert_eq!(dk_ball(&patch, 0, 2).unwrap().radius, 4);
        assert!(matches!(
            dk_ball(&patch, 0, 4),
            Err(Error::PatchTooSmall { .. })
        ));
    }

    #[test]
    fn square_ball_symmetries() {
        let patch = generate(4, 4, 4).unwrap();
        let b1 = ball(&patch.graph, 0, 1).unwrap();
        assert_eq!(rooted_isomorphisms(&b1, &b1, None).len(), 24);
        let d1 = dk_ball(&patch, 0, 1).unwrap();
        assert_eq!(rooted_isomorphisms(&d1, &d1, None).len(), 8);
    }

    #[test]
    fn inferred_faces_match_traced_faces() {
        for (p, q, radius) in [(4, 4, 6), (6, 3, 8), (3, 6, 5), (4, 5, 5)] {
            let patch = generate(p, q, radius).unwrap();
            let space =
                PeripheralSpace::truncated(&patch.graph, patch.max_codegree(), &patch.complete_radius);
            let mut sample = vec![0];
            sample.extend_from_slice(patch.graph.neighbors(0));
            for v in sample {
                let traced = patch.faces_at_checked(v).unwrap();
                assert_eq!(space.faces_at(v).unwrap(), traced, "{{{p},{q}}} at {v}");
            }
        }
    }

    #[test]
    fn patch_is_locally_itself() {
        let patch = generate(4, 4, 5).unwrap();
        let inner: BTreeSet<usize> = patch
            .graph
            .vertices()
            .iter()
            .copied()
            .filter(|&v| patch.complete_radius_of(v) >= 2)
            .collect();
        let reference = ball(&patch.graph, 0, 2).unwrap();
        for &v in &inner {
            let b = ball(&patch.graph, v, 2).unwrap();
            assert!(!rooted_isomorphisms(&b, &reference, Some(1)).is_empty());
        }
    }
}
