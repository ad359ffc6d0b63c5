//! Face-closing growth of a disk-shaped patch of the regular tessellation {p,q}.
//!
//! The patch is always a topological disk whose boundary is a simple cycle,
//! listed counter-clockwise with the interior on the left. At a boundary
//! vertex the rotation is kept as the linear list `[next, .., prev]`; the gap
//! between `prev` and `next` is where new faces go. A face attached along a
//! boundary edge absorbs every neighboring boundary vertex that is missing
//! exactly one face, so vertices are closed up as soon as they are saturated.

use std::collections::VecDeque;

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;
const VERTEX_LIMIT: usize = 2_000_000;

pub(crate) struct Growth {
    p: usize,
    q: usize,
    pub rotation: Vec<Vec<usize>>,
    faces_at: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    boundary_len: usize,
}

impl Growth {
    /// A single p-gon on vertices `0..p`.
    pub fn new(p: usize, q: usize) -> Growth {
        let rotation = (0..p).map(|i| vec![(i + 1) % p, (i + p - 1) % p]).collect();
        Growth {
            p,
            q,
            rotation,
            faces_at: vec![1; p],
            next: (0..p).map(|i| (i + 1) % p).collect(),
            prev: (0..p).map(|i| (i + p - 1) % p).collect(),
            faces: vec![(0..p).collect()],
            boundary_len: p,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn on_boundary(&self, v: usize) -> bool {
        self.next[v] != NONE
    }

    fn missing(&self, v: usize) -> usize {
        self.q - self.faces_at[v]
    }

    /// Boundary walk starting at vertex 0's nearest boundary vertex.
    pub fn boundary(&self) -> Vec<usize> {
        let Some(start) = (0..self.vertex_count()).find(|&v| self.on_boundary(v)) else {
            return Vec::new();
        };
        let mut walk = vec![start];
        let mut v = self.next[start];
        while v != start {
            walk.push(v);
            v = self.next[v];
        }
        walk
    }

    fn add_vertex(&mut self) -> Result<usize> {
        let id = self.rotation.len();
        if id >= VERTEX_LIMIT {
            return Err(Error::TooLarge(format!(
                "tessellation patch exceeds {VERTEX_LIMIT} vertices"
            )));
        }
        self.rotation.push(Vec::new());
        self.faces_at.push(1);
        self.next.push(NONE);
        self.prev.push(NONE);
        Ok(id)
    }

    /// Attach one face outside the boundary edge `v -> next(v)`.
    fn attach_face(&mut self, v: usize) -> Result<()> {
        let b = self.next[v];
        let mut path = VecDeque::from([v, b]);
        let mut cur = v;
        while self.missing(cur) == 1 {
            cur = self.prev[cur];
            path.push_front(cur);
            if path.len() > self.boundary_len {
                return Err(Error::Defect("face would close the whole boundary".into()));
            }
        }
        let mut cur = b;
        while self.missing(cur) == 1 {
            cur = self.next[cur];
            path.push_back(cur);
            if path.len() > self.boundary_len {
                return Err(Error::Defect("face would close the whole boundary".into()));
            }
        }
        let path: Vec<usize> = path.into();
        let s = path.len() - 1;
        if s + 1 > self.p {
            return Err(Error::Defect(format!(
                "boundary run of {} vertices exceeds face length {}",
                s + 1,
                self.p
            )));
        }
        let new_count = self.p - (s + 1);
        let first = path[0];
        let last = path[s];
        if first == last {
            return Err(Error::Defect("face path wraps around the boundary".into()));
        }
        let mut fresh = Vec::with_capacity(new_count);
        for _ in 0..new_count {
            fresh.push(self.add_vertex()?);
        }
        if new_count == 0 && self.rotation[first].contains(&last) {
            return Err(Error::Defect(format!(
                "closing edge {first}-{last} already exists"
            )));
        }
        // Outer path of the new face from `first` to `last`.
        let mut outer = Vec::with_capacity(new_count + 2);
        outer.push(first);
        outer.extend_from_slice(&fresh);
        outer.push(last);

        self.rotation[first].insert(0, outer[1]);
        self.rotation[last].push(outer[outer.len() - 2]);
        for j in 1..outer.len() - 1 {
            let w = outer[j];
            self.rotation[w] = vec![outer[j + 1], outer[j - 1]];
        }
        for &u in &path[1..s] {
            self.faces_at[u] += 1;
            if self.faces_at[u] != self.q || self.rotation[u].len() != self.q {
                return Err(Error::Defect(format!(
                    "interior vertex {u} closed with degree {} and {} faces",
                    self.rotation[u].len(),
                    self.faces_at[u]
                )));
            }
            self.next[u] = NONE;
            self.prev[u] = NONE;
        }
        self.faces_at[first] += 1;
        self.faces_at[last] += 1;
        for j in 0..outer.len() - 1 {
            self.next[outer[j]] = outer[j + 1];
            self.prev[outer[j + 1]] = outer[j];
        }
        self.boundary_len = self.boundary_len + new_count + 1 - s;

        let mut face = path.clone();
        face.extend(fresh.iter().rev());
        self.faces.push(face);
        Ok(())
    }

    /// Attach faces at `v` until it has all `q` of them.
    pub fn complete(&mut self, v: usize) -> Result<()> {
        while self.on_boundary(v) {
            self.attach_face(v)?;
        }
        Ok(())
    }

    pub fn distances_from(&self, o: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::from([o]);
        dist[o] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &self.rotation[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Grow until every vertex within distance `radius` of `o` is complete.
    pub fn grow_around(&mut self, o: usize, radius: usize) -> Result<()> {
        loop {
            let dist = self.distances_from(o);
            let mut targets: Vec<usize> = (0..self.vertex_count())
                .filter(|&v| self.on_boundary(v) && dist[v] <= radius)
                .collect();
            if targets.is_empty() {
                return Ok(());
            }
            targets.sort_by_key(|&v| (dist[v], v));
            for v in targets {
                self.complete(v)?;
            }
        }
    }
}
