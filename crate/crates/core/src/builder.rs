//! Face-by-face construction of a cover from a tessellation patch onto a
//! locally similar graph.
//!
//! The mapped region is always a disk bounded by the frontier cycle. Each
//! step picks the earliest face (in a fixed enumeration) that shares a path
//! of edges with the frontier, finds the unique face of the target that must
//! receive it, maps the new vertices around that face, and replaces the
//! shared path of the frontier by the rest of the face.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flags::{flags_at, Colorer, Flag, FundamentalDomain};
use crate::io::{CoverFile, SeedFile};
use crate::local::LocalSpace;
use crate::tessellation::{edge_key, face_enumeration, FaceBoundary, FaceOrder, PlanePatch};

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub order: FaceOrder,
    /// Re-verify colours, local injectivity and face witnesses every step.
    pub checks: bool,
    pub max_steps: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            order: FaceOrder::Canonical,
            checks: true,
            max_steps: None,
        }
    }
}

/// The in-progress map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCover {
    pub vertex_map: BTreeMap<usize, usize>,
    /// Cyclic vertex order of the boundary of the mapped disk.
    pub frontier: Vec<usize>,
    /// Patch face ids mapped so far, with their images.
    pub face_images: BTreeMap<usize, FaceBoundary>,
    /// Each checked flag with its image and shared colour.
    pub flag_colors: BTreeMap<Flag, (Flag, usize)>,
    pub step: usize,
}

impl PartialCover {
    pub fn processed(&self, face: usize) -> bool {
        self.face_images.contains_key(&face)
    }

    fn image(&self, v: usize) -> Result<usize> {
        self.vertex_map
            .get(&v)
            .copied()
            .ok_or_else(|| Error::Defect(format!("vertex {v} is not mapped yet")))
    }
}

/// A face chosen to be attached, with where it meets the frontier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub face: usize,
    /// `frontier[start..=start + shared]` (cyclically) is the common path.
    pub start: usize,
    pub shared: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub face: Vec<usize>,
    pub image: Vec<usize>,
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverMap {
    pub vertex_map: BTreeMap<usize, usize>,
    pub seed: (Flag, Flag),
    pub steps: usize,
    pub log: Vec<StepRecord>,
    pub surjective: bool,
    pub image: BTreeSet<usize>,
    /// Image of every mapped patch face, by face id.
    pub face_images: BTreeMap<usize, FaceBoundary>,
    /// Faces skipped because the patch or target ran out of room.
    pub blocked: BTreeSet<usize>,
}

impl CoverMap {
    pub fn to_file(&self) -> CoverFile {
        CoverFile {
            map: self.vertex_map.iter().map(|(&v, &w)| [v, w]).collect(),
            seed: SeedFile {
                f: self.seed.0.to_file(),
                h: self.seed.1.to_file(),
            },
            steps: self.steps,
            surjective: self.surjective,
            faces: self
                .face_images
                .iter()
                .map(|(&id, b)| (id, b.cycle().to_vec()))
                .collect(),
            blocked: self.blocked.iter().copied().collect(),
        }
    }

    /// Reads a cover back, checking it against the patch and target.
    pub fn from_file(g: &PlanePatch, h: &dyn LocalSpace, file: &CoverFile) -> Result<CoverMap> {
        let mut vertex_map = BTreeMap::new();
        for &[v, w] in &file.map {
            g.graph.require(v)?;
            h.graph().require(w)?;
            if vertex_map.insert(v, w).is_some() {
                return Err(Error::input(format!("vertex {v} is mapped twice")));
            }
        }
        let mut face_images = BTreeMap::new();
        for (id, cycle) in &file.faces {
            if *id >= g.faces.len() {
                return Err(Error::input(format!("unknown face id {id}")));
            }
            face_images.insert(*id, FaceBoundary::checked(h.graph(), cycle.clone())?);
        }
        let seed = (
            Flag::from_file(g, &file.seed.f)?,
            Flag::from_file(h, &file.seed.h)?,
        );
        let image: BTreeSet<usize> = vertex_map.values().copied().collect();
        Ok(CoverMap {
            surjective: image.len() == h.graph().len(),
            image,
            seed,
            steps: file.steps,
            log: Vec::new(),
            vertex_map,
            face_images,
            blocked: file.blocked.iter().copied().collect(),
        })
    }
}

pub struct Builder<'a> {
    g: &'a PlanePatch,
    h: &'a dyn LocalSpace,
    gcol: Colorer<'a>,
    hcol: Colorer<'a>,
    rank: Vec<usize>,
    options: BuildOptions,
}

fn violation(step: usize, vertex: usize, detail: impl Into<String>) -> Error {
    Error::HypothesisViolation {
        step,
        vertex,
        detail: detail.into(),
    }
}

impl<'a> Builder<'a> {
    pub fn new(
        g: &'a PlanePatch,
        h: &'a dyn LocalSpace,
        domain: &'a FundamentalDomain,
        options: BuildOptions,
    ) -> Result<Builder<'a>> {
        let order = face_enumeration(g, options.order);
        let mut rank = vec![0; order.len()];
        for (r, &face) in order.iter().enumerate() {
            rank[face] = r;
        }
        Ok(Builder {
            g,
            h,
            gcol: Colorer::on_patch(g, domain)?,
            hcol: Colorer::on_target(g, domain, h)?,
            rank,
            options,
        })
    }

    pub fn source_colorer(&self) -> &Colorer<'a> {
        &self.gcol
    }

    pub fn target_colorer(&self) -> &Colorer<'a> {
        &self.hcol
    }

    fn color_h(&self, step: usize, f: &Flag) -> Result<usize> {
        self.hcol.color(f).map_err(|e| match e {
            Error::Defect(d) => violation(step, f.vertex, d),
            other => other,
        })
    }

    /// Maps the seed face onto the target face so that `f` goes to `flag_h`.
    pub fn init_cover(&self, f: &Flag, flag_h: &Flag) -> Result<PartialCover> {
        let face = self
            .g
            .face_id(&f.face)
            .ok_or_else(|| Error::Precondition("seed face is not a face of the patch".into()))?;
        if f.face.len() != flag_h.face.len() {
            return Err(Error::Precondition(format!(
                "seed faces have lengths {} and {}",
                f.face.len(),
                flag_h.face.len()
            )));
        }
        let (cf, ch) = (self.gcol.color(f)?, self.color_h(0, flag_h)?);
        if cf != ch {
            return Err(Error::Precondition(format!(
                "seed flags have colours {cf} and {ch}"
            )));
        }
        let src = f.oriented_face();
        let dst = flag_h.oriented_face();
        let mut state = PartialCover {
            vertex_map: src.iter().copied().zip(dst.iter().copied()).collect(),
            frontier: src.clone(),
            face_images: BTreeMap::from([(face, flag_h.face.clone())]),
            flag_colors: BTreeMap::new(),
            step: 0,
        };
        self.check_face_colors(&mut state, face)?;
        if self.options.checks {
            self.check_local(&state, &src)?;
        }
        Ok(state)
    }

    /// Where `face` meets the frontier, if that is a non-trivial path of
    /// shared edges and nothing else.
    fn meeting(&self, state: &PartialCover, face: usize) -> Option<Candidate> {
        let fb = &self.g.faces[face];
        let c = &state.frontier;
        let k = c.len();
        let shared: Vec<bool> = (0..k).map(|i| fb.contains_edge(c[i], c[(i + 1) % k])).collect();
        let count = shared.iter().filter(|&&s| s).count();
        if count == 0 || count >= fb.len() || count == k {
            return None;
        }
        // The shared edges must form one run; find where it starts.
        let start = (0..k).find(|&i| shared[i] && !shared[(i + k - 1) % k])?;
        if (0..count).any(|j| !shared[(start + j) % k]) {
            return None;
        }
        let on_path: BTreeSet<usize> = (0..=count).map(|j| c[(start + j) % k]).collect();
        let touching = fb.cycle().iter().filter(|v| c.contains(v)).count();
        if touching != on_path.len() {
            return None;
        }
        Some(Candidate {
            face,
            start,
            shared: count,
        })
    }

    /// The earliest unprocessed, unblocked face meeting the frontier in a path.
    pub fn select_next_face(
        &self,
        state: &PartialCover,
        blocked: &BTreeSet<usize>,
    ) -> Option<Candidate> {
        let c = &state.frontier;
        let k = c.len();
        let mut seen = BTreeSet::new();
        for i in 0..k {
            let (a, b) = (c[i], c[(i + 1) % k]);
            for &face in self.g.face_ids_at(a) {
                if self.g.faces[face].contains_edge(a, b)
                    && !state.processed(face)
                    && !blocked.contains(&face)
                {
                    seen.insert((self.rank[face], face));
                }
            }
        }
        seen.into_iter()
            .find_map(|(_, face)| self.meeting(state, face))
    }

    fn path_of(&self, state: &PartialCover, cand: &Candidate) -> Vec<usize> {
        let k = state.frontier.len();
        (0..=cand.shared)
            .map(|j| state.frontier[(cand.start + j) % k])
            .collect()
    }

    /// The unique target face that can receive `cand`.
    pub fn match_face(&self, state: &PartialCover, cand: &Candidate) -> Result<FaceBoundary> {
        let step = state.step + 1;
        let path = self.path_of(state, cand);
        let w = path[0];
        let images: Vec<usize> = path
            .iter()
            .map(|&v| state.image(v))
            .collect::<Result<_>>()?;
        let cw = images[0];
        // Images of edges at w already in the domain.
        let mapped_at_w: BTreeSet<(usize, usize)> = self
            .mapped_neighbors(state, w)
            .into_iter()
            .map(|u| edge_key(cw, state.vertex_map[&u]))
            .collect();
        let want = self.g.faces[cand.face].len();
        let mut found = Vec::new();
        for b in self.h.faces_at(cw)? {
            // (I) the image path lies along b, in order.
            let Some(oriented) = b.oriented_from(images[0], images[1]) else {
                continue;
            };
            if oriented.len() <= cand.shared || oriented[..=cand.shared] != images[..] {
                continue;
            }
            // (II) b has an edge at c(w) that is not yet an image.
            let (x, y) = b.neighbors_of(cw).expect("face contains c(w)");
            if mapped_at_w.contains(&edge_key(cw, x)) && mapped_at_w.contains(&edge_key(cw, y)) {
                continue;
            }
            // (III) same length.
            if b.len() != want {
                continue;
            }
            found.push(b);
        }
        match found.len() {
            1 => Ok(found.pop().expect("one")),
            n => Err(violation(
                step,
                cw,
                format!(
                    "{n} target faces at {cw} can receive the face {:?}; not locally like the tessellation here",
                    self.g.faces[cand.face].cycle()
                ),
            )),
        }
    }

    /// Neighbors `u` of `v` with the edge `vu` inside the mapped disk.
    fn mapped_neighbors(&self, state: &PartialCover, v: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &face in self.g.face_ids_at(v) {
            if state.processed(face) {
                let (a, b) = self.g.faces[face].neighbors_of(v).expect("face at v");
                out.insert(a);
                out.insert(b);
            }
        }
        out.into_iter().collect()
    }

    /// Maps the rest of `cand` around `target` and moves the frontier.
    pub fn extend_cover(
        &self,
        state: &PartialCover,
        cand: &Candidate,
        target: &FaceBoundary,
    ) -> Result<PartialCover> {
        let step = state.step + 1;
        let face = &self.g.faces[cand.face];
        let path = self.path_of(state, cand);
        let s = cand.shared;
        let src = face
            .oriented_from(path[0], path[1])
            .ok_or_else(|| Error::Defect("shared path is not along the face".into()))?;
        let dst = target
            .oriented_from(state.image(path[0])?, state.image(path[1])?)
            .ok_or_else(|| Error::Defect("image path is not along the target face".into()))?;
        let fresh = &src[s + 1..];
        let mut next = state.clone();
        next.step = step;
        for (k, &u) in fresh.iter().enumerate() {
            if next.vertex_map.insert(u, dst[s + 1 + k]).is_some() {
                return Err(Error::Defect(format!(
                    "vertex {u} outside the frontier was already mapped"
                )));
            }
        }
        next.face_images.insert(cand.face, target.clone());

        let k = state.frontier.len();
        let rotated: Vec<usize> = (0..k).map(|j| state.frontier[(cand.start + j) % k]).collect();
        let mut frontier = vec![path[0]];
        frontier.extend(fresh.iter().rev());
        frontier.extend_from_slice(&rotated[s..]);
        next.frontier = frontier;

        for &w in &path[1..s] {
            if let Some(&open) = self
                .g
                .face_ids_at(w)
                .iter()
                .find(|&&f| !next.processed(f))
            {
                return Err(Error::Defect(format!(
                    "vertex {w} left the frontier with face {:?} unmapped",
                    self.g.faces[open].cycle()
                )));
            }
        }
        self.check_face_colors(&mut next, cand.face)?;
        if self.options.checks {
            self.check_local(&next, face.cycle())?;
            let distinct: BTreeSet<_> = next.frontier.iter().collect();
            if distinct.len() != next.frontier.len() {
                return Err(Error::Defect(format!("frontier is not a simple cycle at step {step}")));
            }
        }
        Ok(next)
    }

    /// Invariant (1) for the flags of one newly mapped face.
    fn check_face_colors(&self, state: &mut PartialCover, face: usize) -> Result<()> {
        let fb = self.g.faces[face].clone();
        let image = state.face_images[&face].clone();
        for &v in fb.cycle() {
            let (a, b) = fb.neighbors_of(v).expect("vertex of face");
            for u in [a, b] {
                let f = Flag::new(v, u, fb.clone());
                let fh = Flag::new(state.image(v)?, state.image(u)?, image.clone());
                let cf = self.gcol.color(&f)?;
                let ch = self.color_h(state.step, &fh)?;
                if cf != ch {
                    return Err(violation(
                        state.step,
                        fh.vertex,
                        format!("flag at {v} has colour {cf} but its image has colour {ch}"),
                    ));
                }
                state.flag_colors.insert(f, (fh, cf));
            }
        }
        Ok(())
    }

    /// Invariants (2) and (3) at the given vertices.
    fn check_local(&self, state: &PartialCover, vertices: &[usize]) -> Result<()> {
        let step = state.step;
        let hg = self.h.graph();
        for &v in vertices {
            let cv = state.image(v)?;
            let nbrs = self.mapped_neighbors(state, v);
            let mut images = BTreeSet::new();
            for &u in &nbrs {
                let cu = state.image(u)?;
                if !hg.has_edge(cv, cu) {
                    return Err(violation(step, cv, format!("edge {v}-{u} maps to a non-edge")));
                }
                if !images.insert(cu) {
                    return Err(violation(
                        step,
                        cv,
                        format!("two edges at {v} map to the same edge at {cv}"),
                    ));
                }
            }
            let h_faces = self.h.faces_at(cv)?;
            for &face in self.g.face_ids_at(v) {
                let Some(image) = state.face_images.get(&face) else {
                    continue;
                };
                let witness = self.g.faces[face]
                    .map_with(|x| state.vertex_map.get(&x).copied())
                    .ok_or_else(|| Error::Defect("processed face has unmapped vertex".into()))?;
                if &witness != image || image.sorted_vertices().windows(2).any(|w| w[0] == w[1])
                {
                    return Err(violation(step, cv, "a mapped face is not carried onto its image"));
                }
                if !h_faces.contains(image) {
                    return Err(violation(
                        step,
                        cv,
                        format!("image {:?} is not a face-boundary at {cv}", image.cycle()),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Runs until no face can be attached.
    pub fn build(&self, f: &Flag, flag_h: &Flag) -> Result<CoverMap> {
        let mut state = self.init_cover(f, flag_h)?;
        let mut log = vec![StepRecord {
            step: 0,
            face: f.face.cycle().to_vec(),
            image: flag_h.face.cycle().to_vec(),
        }];
        let mut blocked = BTreeSet::new();
        while self.options.max_steps.is_none_or(|m| state.step < m) {
            let Some(cand) = self.select_next_face(&state, &blocked) else {
                break;
            };
            let attempt = self
                .match_face(&state, &cand)
                .and_then(|b| self.extend_cover(&state, &cand, &b));
            match attempt {
                Ok(next) => {
                    log.push(StepRecord {
                        step: next.step,
                        face: self.g.faces[cand.face].cycle().to_vec(),
                        image: next.face_images[&cand.face].cycle().to_vec(),
                    });
                    state = next;
                }
                Err(e) if e.is_patch_limit() => {
                    blocked.insert(cand.face);
                }
                Err(e) => return Err(e),
            }
        }
        self.check_interior(&state)?;
        let image: BTreeSet<usize> = state.vertex_map.values().copied().collect();
        Ok(CoverMap {
            surjective: image.len() == self.h.graph().len(),
            image,
            seed: (f.clone(), flag_h.clone()),
            steps: state.step,
            log,
            vertex_map: state.vertex_map,
            face_images: state.face_images,
            blocked,
        })
    }

    /// Mapped vertices off the frontier have every face mapped.
    fn check_interior(&self, state: &PartialCover) -> Result<()> {
        let on_frontier: BTreeSet<usize> = state.frontier.iter().copied().collect();
        for &v in state.vertex_map.keys() {
            if on_frontier.contains(&v) {
                continue;
            }
            if self.g.face_ids_at(v).iter().any(|&f| !state.processed(f)) {
                return Err(Error::Defect(format!(
                    "vertex {v} is inside the frontier but has an unmapped face"
                )));
            }
        }
        Ok(())
    }
}

/// Default seed: the least flag at the patch root, and the least flag of
/// the least target vertex with the same colour.
pub fn default_seed(builder: &Builder<'_>, g: &PlanePatch, h: &dyn LocalSpace) -> Result<(Flag, Flag)> {
    let f = flags_at(g, g.root)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Defect("root has no flags".into()))?;
    let want = builder.source_colorer().color(&f)?;
    let x = *h
        .graph()
        .vertices()
        .iter()
        .find(|&&x| h.faces_at(x).is_ok_and(|fs| !fs.is_empty()))
        .ok_or_else(|| Error::input("target has no face-boundaries"))?;
    for flag_h in flags_at(h, x)? {
        if builder.target_colorer().color(&flag_h)? == want {
            return Ok((f, flag_h));
        }
    }
    Err(Error::NotLocallyG {
        graph: "H",
        vertex: x,
        radius: builder.source_colorer().domain().level,
    })
}

/// Builds the cover determined by the seed flags.
pub fn build_cover(
    g: &PlanePatch,
    h: &dyn LocalSpace,
    domain: &FundamentalDomain,
    seed: Option<(Flag, Flag)>,
    options: BuildOptions,
) -> Result<CoverMap> {
    let builder = Builder::new(g, h, domain, options)?;
    let (f, flag_h) = match seed {
        Some(s) => s,
        None => default_seed(&builder, g, h)?,
    };
    builder.build(&f, &flag_h)
}
