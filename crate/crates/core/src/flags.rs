//! Flags, their orbits under the symmetries of D-balls at the root, and the
//! colourings they induce on a tessellation and on a locally similar graph.

use std::collections::BTreeMap;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::RootedBall;
use crate::io::FlagFile;
use crate::local::{dk_ball, isomorphisms, Isomorphism, LocalSpace, SearchOptions};
use crate::tessellation::{edge_key, FaceBoundary, PlanePatch};

/// An incident (vertex, edge, face) triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag {
    pub vertex: usize,
    /// Stored as `(min, max)`.
    pub edge: (usize, usize),
    pub face: FaceBoundary,
}

impl Flag {
    pub fn new(vertex: usize, other: usize, face: FaceBoundary) -> Flag {
        Flag {
            vertex,
            edge: edge_key(vertex, other),
            face,
        }
    }

    /// The endpoint of the edge that is not the flag's vertex.
    pub fn other_end(&self) -> usize {
        if self.edge.0 == self.vertex {
            self.edge.1
        } else {
            self.edge.0
        }
    }

    /// The face read from the vertex along the edge.
    pub fn oriented_face(&self) -> Vec<usize> {
        self.face
            .oriented_from(self.vertex, self.other_end())
            .expect("flag edge lies on its face")
    }

    /// Image under a vertex map; `None` if some vertex is unmapped.
    pub fn map_with(&self, f: impl Fn(usize) -> Option<usize>) -> Option<Flag> {
        Some(Flag::new(f(self.vertex)?, f(self.other_end())?, self.face.map_with(&f)?))
    }

    pub fn is_incident(&self, other: &Flag) -> bool {
        self.vertex == other.vertex && (self.edge == other.edge || self.face == other.face)
    }

    pub fn to_file(&self) -> FlagFile {
        FlagFile {
            v: self.vertex,
            e: [self.edge.0, self.edge.1],
            face: self.face.cycle().to_vec(),
        }
    }

    /// Parses a flag and checks it against the faces of `space` at its vertex.
    pub fn from_file(space: &dyn LocalSpace, file: &FlagFile) -> Result<Flag> {
        let [a, b] = file.e;
        if a != file.v && b != file.v {
            return Err(Error::input(format!("flag edge {a}-{b} misses vertex {}", file.v)));
        }
        let other = if a == file.v { b } else { a };
        let face = FaceBoundary::new(file.face.clone());
        if !face.contains_edge(file.v, other) {
            return Err(Error::input("flag edge does not lie on its face"));
        }
        if !space.faces_at(file.v)?.contains(&face) {
            return Err(Error::input(format!(
                "{:?} is not a face-boundary at {}",
                face.cycle(),
                file.v
            )));
        }
        Ok(Flag::new(file.v, other, face))
    }
}

/// All flags at `v`, sorted.
pub fn flags_at(space: &dyn LocalSpace, v: usize) -> Result<Vec<Flag>> {
    let mut out = Vec::new();
    for face in space.faces_at(v)? {
        let (a, b) = face
            .neighbors_of(v)
            .ok_or_else(|| Error::Defect(format!("face at {v} does not contain it")))?;
        out.push(Flag::new(v, a, face.clone()));
        out.push(Flag::new(v, b, face));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Pins that force `flag_a` onto `flag_b`: the vertex and the whole face,
/// in the orientation given by the edge.
fn flag_pins(flag_a: &Flag, flag_b: &Flag) -> Option<Vec<(usize, usize)>> {
    let fa = flag_a.oriented_face();
    let fb = flag_b.oriented_face();
    (fa.len() == fb.len()).then(|| fa.into_iter().zip(fb).collect())
}

/// Isomorphisms `a -> b` carrying `flag_a` to `flag_b`, one per coset of
/// the twin swaps of `a`, at most `limit` of them.
pub fn flag_isomorphisms(
    a: &RootedBall,
    b: &RootedBall,
    flag_a: &Flag,
    flag_b: &Flag,
    limit: Option<usize>,
) -> Vec<Isomorphism> {
    let Some(pins) = flag_pins(flag_a, flag_b) else {
        return Vec::new();
    };
    isomorphisms(
        &a.graph,
        &b.graph,
        &pins,
        &SearchOptions {
            limit,
            modulo_twins: true,
            ..SearchOptions::default()
        },
    )
}

/// Orbit labels of the flags at the root under `Aut(D_i(o))`, labelled by
/// first occurrence in `flags` order.
pub fn orbit_partition(d: &RootedBall, flags: &[Flag]) -> Vec<usize> {
    let m = flags.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if !flag_isomorphisms(d, d, &flags[i], &flags[j], Some(1)).is_empty() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[rj.max(ri)] = ri.min(rj);
            }
        }
    }
    let mut labels = BTreeMap::new();
    (0..m)
        .map(|i| {
            let r = find(&mut parent, i);
            let next = labels.len();
            *labels.entry(r).or_insert(next)
        })
        .collect()
}

/// Connected flag sequence at the root with one flag per orbit. Position in
/// `flags` is the colour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub flags: Vec<Flag>,
    pub level: usize,
    pub root: usize,
    /// Every flag at the root, sorted.
    pub root_flags: Vec<Flag>,
    /// Colour of each root flag, parallel to `root_flags`.
    pub color_of_root_flag: Vec<usize>,
}

impl FundamentalDomain {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn color_of_root(&self, f: &Flag) -> Option<usize> {
        let i = self.root_flags.binary_search(f).ok()?;
        Some(self.color_of_root_flag[i])
    }
}

/// The flags at a plane vertex form one cycle under incidence, alternating
/// "same face" and "same edge" steps. Returns the two walks around it from
/// `start`.
fn incidence_walks(flags: &[Flag], start: usize) -> [Vec<usize>; 2] {
    let step = |i: usize, same_face: bool| -> Option<usize> {
        (0..flags.len()).find(|&j| {
            j != i
                && if same_face {
                    flags[j].face == flags[i].face
                } else {
                    flags[j].edge == flags[i].edge
                }
        })
    };
    let walk = |face_first: bool| {
        let mut order = vec![start];
        let mut same_face = face_first;
        while order.len() < flags.len() {
            match step(*order.last().expect("non-empty"), same_face) {
                Some(j) if !order.contains(&j) => order.push(j),
                _ => break,
            }
            same_face = !same_face;
        }
        order
    };
    [walk(true), walk(false)]
}

/// `i`-fundamental domain of the patch at its root.
pub fn i_fundamental_domain(patch: &PlanePatch, i: usize) -> Result<FundamentalDomain> {
    let d = dk_ball(patch, patch.root, i)?;
    let root_flags = flags_at(patch, patch.root)?;
    let orbits = orbit_partition(&d, &root_flags);
    fundamental_domain_from(patch.root, i, root_flags, &orbits)
}

fn fundamental_domain_from(
    root: usize,
    level: usize,
    root_flags: Vec<Flag>,
    orbits: &[usize],
) -> Result<FundamentalDomain> {
    let count = orbits.iter().max().map_or(0, |m| m + 1);
    for start in 0..root_flags.len() {
        for walk in incidence_walks(&root_flags, start) {
            if walk.len() != root_flags.len() {
                return Err(Error::Defect(format!(
                    "flags at {root} do not form a single incidence cycle"
                )));
            }
            let arc = &walk[..count];
            let mut seen = vec![false; count];
            if arc.iter().all(|&j| !std::mem::replace(&mut seen[orbits[j]], true)) {
                let flags: Vec<Flag> = arc.iter().map(|&j| root_flags[j].clone()).collect();
                let mut colour_of_orbit = vec![0; count];
                for (c, &j) in arc.iter().enumerate() {
                    colour_of_orbit[orbits[j]] = c;
                }
                let color_of_root_flag = orbits.iter().map(|&o| colour_of_orbit[o]).collect();
                return Ok(FundamentalDomain {
                    flags,
                    level,
                    root,
                    root_flags,
                    color_of_root_flag,
                });
            }
        }
    }
    Err(Error::Defect(format!(
        "no connected flag arc at {root} meets every orbit once"
    )))
}

/// Least `n <= i_max` whose orbit partition stays the same for the next
/// `guard` levels.
pub fn stabilize_n(patch: &PlanePatch, i_max: usize, guard: usize) -> Result<usize> {
    if guard == 0 {
        return Err(Error::input("stabilization guard must be at least 1"));
    }
    let root_flags = flags_at(patch, patch.root)?;
    let mut partitions: Vec<Vec<usize>> = Vec::new();
    for i in 1..=i_max {
        let d = match dk_ball(patch, patch.root, i) {
            Ok(d) => d,
            Err(e) if e.is_patch_limit() => break,
            Err(e) => return Err(e),
        };
        partitions.push(orbit_partition(&d, &root_flags));
        let k = partitions.len();
        if k > guard && partitions[k - 1 - guard..].windows(2).all(|w| w[0] == w[1]) {
            return Ok(k - guard);
        }
    }
    Err(Error::IncreaseRadius { i_max })
}

/// Colours flags of one space by charting D-balls onto the root's D-ball of
/// the tessellation. Charts are computed once per vertex.
pub struct Colorer<'a> {
    domain: &'a FundamentalDomain,
    space: &'a dyn LocalSpace,
    reference: RootedBall,
    is_tessellation: bool,
    charts: Mutex<BTreeMap<usize, Isomorphism>>,
}

impl<'a> Colorer<'a> {
    /// Colours flags of the tessellation itself.
    pub fn on_patch(patch: &'a PlanePatch, domain: &'a FundamentalDomain) -> Result<Colorer<'a>> {
        Colorer::new(patch, domain, patch, true)
    }

    /// Colours flags of a graph that is locally like the tessellation.
    pub fn on_target(
        patch: &PlanePatch,
        domain: &'a FundamentalDomain,
        target: &'a dyn LocalSpace,
    ) -> Result<Colorer<'a>> {
        Colorer::new(patch, domain, target, false)
    }

    fn new(
        patch: &PlanePatch,
        domain: &'a FundamentalDomain,
        space: &'a dyn LocalSpace,
        is_tessellation: bool,
    ) -> Result<Colorer<'a>> {
        Ok(Colorer {
            domain,
            space,
            reference: dk_ball(patch, domain.root, domain.level)?,
            is_tessellation,
            charts: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn domain(&self) -> &FundamentalDomain {
        self.domain
    }

    pub fn space(&self) -> &dyn LocalSpace {
        self.space
    }

    pub fn reference(&self) -> &RootedBall {
        &self.reference
    }

    fn not_local(&self, v: usize) -> Error {
        if self.is_tessellation {
            Error::NotTransitive { vertex: v }
        } else {
            Error::NotLocallyG {
                graph: "H",
                vertex: v,
                radius: self.domain.level,
            }
        }
    }

    /// Some isomorphism `D_n(v) -> D_n(o)`.
    pub fn chart(&self, v: usize) -> Result<Isomorphism> {
        if let Some(c) = self.charts.lock().get(&v) {
            return Ok(c.clone());
        }
        let local = dk_ball(self.space, v, self.domain.level)?;
        let found = isomorphisms(
            &local.graph,
            &self.reference.graph,
            &[(v, self.domain.root)],
            &SearchOptions {
                limit: Some(1),
                ..SearchOptions::default()
            },
        );
        let chart = found.into_iter().next().ok_or_else(|| self.not_local(v))?;
        self.charts.lock().entry(v).or_insert_with(|| chart.clone());
        Ok(chart)
    }

    /// Every isomorphism `D_n(v) -> D_n(o)`.
    pub fn all_charts(&self, v: usize) -> Result<Vec<Isomorphism>> {
        let local = dk_ball(self.space, v, self.domain.level)?;
        Ok(isomorphisms(
            &local.graph,
            &self.reference.graph,
            &[(v, self.domain.root)],
            &SearchOptions::default(),
        ))
    }

    /// Colour of `f` as seen through a given chart.
    pub fn color_via(&self, chart: &Isomorphism, f: &Flag) -> Result<usize> {
        let image = f
            .map_with(|x| chart.apply(x))
            .ok_or_else(|| Error::Defect(format!("chart at {} misses part of {f:?}", f.vertex)))?;
        self.domain.color_of_root(&image).ok_or_else(|| {
            Error::Defect(format!(
                "image of a face at {} is not a face at the root",
                f.vertex
            ))
        })
    }

    /// With a single colour no chart is needed, only a genuine flag.
    pub fn color(&self, f: &Flag) -> Result<usize> {
        if self.domain.len() == 1 {
            let faces = self.space.faces_at(f.vertex)?;
            let on_edge = f.vertex == f.edge.0 || f.vertex == f.edge.1;
            let genuine = on_edge && f.face.contains_edge(f.edge.0, f.edge.1);
            return match genuine && faces.contains(&f.face) {
                true => Ok(0),
                false => Err(Error::input(format!("{f:?} is not a flag"))),
            };
        }
        let chart = self.chart(f.vertex)?;
        self.color_via(&chart, f)
    }
}

/// Colour of a flag of the tessellation.
pub fn color(patch: &PlanePatch, domain: &FundamentalDomain, f: &Flag) -> Result<usize> {
    Colorer::on_patch(patch, domain)?.color(f)
}

/// Colour of a flag of a target graph.
pub fn color_in_h(
    h: &dyn LocalSpace,
    patch: &PlanePatch,
    domain: &FundamentalDomain,
    flag_h: &Flag,
) -> Result<usize> {
    Colorer::on_target(patch, domain, h)?.color(flag_h)
}

/// The isomorphism `D_r(v) -> D_r(x)` carrying `f` to `flag_h`, which must
/// exist and be unique up to swapping twin vertices.
pub fn extend_iso(
    g: &dyn LocalSpace,
    h: &dyn LocalSpace,
    f: &Flag,
    flag_h: &Flag,
    r: usize,
) -> Result<Isomorphism> {
    let a = dk_ball(g, f.vertex, r)?;
    let b = dk_ball(h, flag_h.vertex, r)?;
    let found = flag_isomorphisms(&a, &b, f, flag_h, Some(2));
    match found.len() {
        1 => Ok(found.into_iter().next().expect("one")),
        k => Err(Error::HypothesisViolation {
            step: 0,
            vertex: flag_h.vertex,
            detail: format!(
                "{k} isomorphisms of D_{r} balls carry the flag at {} to the flag at {}",
                f.vertex, flag_h.vertex
            ),
        }),
    }
}

/// [`extend_iso`] after checking that the two flags have the same colour.
pub fn extend_iso_checked(
    g: &Colorer<'_>,
    h: &Colorer<'_>,
    f: &Flag,
    flag_h: &Flag,
    r: usize,
) -> Result<Isomorphism> {
    let (cf, ch) = (g.color(f)?, h.color(flag_h)?);
    if cf != ch {
        return Err(Error::Precondition(format!(
            "flag colours differ: {cf} at {} vs {ch} at {}",
            f.vertex, flag_h.vertex
        )));
    }
    extend_iso(g.space(), h.space(), f, flag_h, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tessellation::generate;

    #[test]
    fn flag_counts() {
        let sq = generate(4, 4, 3).unwrap();
        assert_eq!(flags_at(&sq, 0).unwrap().len(), 8);
        let hex = generate(6, 3, 3).unwrap();
        assert_eq!(flags_at(&hex, 0).unwrap().len(), 6);
    }

    #[test]
    fn regular_tilings_have_one_colour() {
        for (p, q, r) in [(4, 4, 6), (6, 3, 8)] {
            let patch = generate(p, q, r).unwrap();
            let d = i_fundamental_domain(&patch, 1).unwrap();
            assert_eq!(d.len(), 1, "{{{p},{q}}}");
            assert_eq!(d.flags[0], flags_at(&patch, 0).unwrap()[0]);
        }
    }

    #[test]
    fn square_stabilizes_at_one() {
        let patch = generate(4, 4, 10).unwrap();
        assert_eq!(stabilize_n(&patch, 4, 2).unwrap(), 1);
        let small = generate(4, 4, 3).unwrap();
        assert!(matches!(
            stabilize_n(&small, 4, 2),
            Err(Error::IncreaseRadius { .. })
        ));
    }

    #[test]
    fn colour_of_domain_flag_and_identity_extension() {
        let patch = generate(4, 4, 8).unwrap();
        let d = i_fundamental_domain(&patch, 1).unwrap();
        let colorer = Colorer::on_patch(&patch, &d).unwrap();
        assert_eq!(colorer.color(&d.flags[0]).unwrap(), 0);
        let v = patch.graph.neighbors(0)[0];
        for f in flags_at(&patch, v).unwrap() {
            assert_eq!(colorer.color(&f).unwrap(), 0);
        }
        let f = &d.flags[0];
        let id = extend_iso(&patch, &patch, f, f, 2).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn incidence_is_a_single_cycle() {
        let patch = generate(4, 5, 3).unwrap();
        let flags = flags_at(&patch, 0).unwrap();
        for walk in incidence_walks(&flags, 0) {
            assert_eq!(walk.len(), 10);
            for w in walk.windows(2) {
                assert!(flags[w[0]].is_incident(&flags[w[1]]));
            }
        }
    }
}
