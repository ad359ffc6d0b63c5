//! Finite quotients of the square and hexagonal lattices.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::GraphFile;
use crate::tessellation::Rotation;

use super::lattice::{Affine, Development, Lattice, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientKind {
    /// `Z² / <(m,0), (0,n)>`
    Torus,
    /// `Z² / <(m,0), (s,n)>`
    TwistedTorus,
    /// `Z²` modulo the glide `(x,y) ↦ (x+m, -y)` and `(x,y) ↦ (x, y+n)`.
    Klein,
    /// Honeycomb modulo the translations `m(1,1)` and `n(2,-1)`.
    HexTorus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientSpec {
    pub kind: QuotientKind,
    pub m: i64,
    pub n: i64,
    pub s: i64,
}

impl QuotientSpec {
    pub fn torus(m: i64, n: i64) -> QuotientSpec {
        QuotientSpec {
            kind: QuotientKind::Torus,
            m,
            n,
            s: 0,
        }
    }

    pub fn twisted_torus(m: i64, n: i64, s: i64) -> QuotientSpec {
        QuotientSpec {
            kind: QuotientKind::TwistedTorus,
            m,
            n,
            s,
        }
    }

    pub fn klein(m: i64, n: i64) -> QuotientSpec {
        QuotientSpec {
            kind: QuotientKind::Klein,
            m,
            n,
            s: 0,
        }
    }

    pub fn hex_torus(m: i64, n: i64) -> QuotientSpec {
        QuotientSpec {
            kind: QuotientKind::HexTorus,
            m,
            n,
            s: 0,
        }
    }

    pub fn lattice(&self) -> Lattice {
        match self.kind {
            QuotientKind::HexTorus => Lattice::Honeycomb,
            _ => Lattice::Square,
        }
    }

    pub fn vertex_count(&self) -> usize {
        let mn = (self.m * self.n) as usize;
        match self.kind {
            QuotientKind::HexTorus => 2 * mn,
            _ => mn,
        }
    }

    /// Closed-form projection of a lattice point to its quotient vertex.
    pub fn project(&self, p: Point) -> Option<usize> {
        let (m, n) = (self.m, self.n);
        let (x, y) = p;
        let id = |i: i64, j: i64| (i * n + j) as usize;
        match self.kind {
            QuotientKind::Torus => Some(id(x.rem_euclid(m), y.rem_euclid(n))),
            QuotientKind::TwistedTorus => {
                let k = y.div_euclid(n);
                Some(id((x - k * self.s).rem_euclid(m), y - k * n))
            }
            QuotientKind::Klein => {
                let k = x.div_euclid(m);
                let y = if k % 2 == 0 { y } else { -y };
                Some(id(x - k * m, y.rem_euclid(n)))
            }
            QuotientKind::HexTorus => {
                if !Lattice::Honeycomb.contains(p) {
                    return None;
                }
                let big_x = (x + 2 * y).rem_euclid(3 * m);
                let big_y = (x - y).rem_euclid(3 * n);
                Some(hex_index(n, big_x, big_y))
            }
        }
    }

    /// A lattice point projecting to vertex `v`.
    pub fn representative(&self, v: usize) -> Point {
        let v = v as i64;
        match self.kind {
            QuotientKind::HexTorus => {
                let (big_x, big_y) = hex_coords(self.n, v);
                let b = (big_x - big_y) / 3;
                (big_y + b, b)
            }
            _ => (v / self.n, v % self.n),
        }
    }

    /// Generators of the covering transformations, as lattice isometries.
    pub fn deck_generators(&self) -> Vec<Affine> {
        let (m, n) = (self.m, self.n);
        match self.kind {
            QuotientKind::Torus => vec![Affine::translation((m, 0)), Affine::translation((0, n))],
            QuotientKind::TwistedTorus => {
                vec![Affine::translation((m, 0)), Affine::translation((self.s, n))]
            }
            QuotientKind::Klein => vec![
                Affine {
                    lin: [[1, 0], [0, -1]],
                    t: (m, 0),
                },
                Affine::translation((0, n)),
            ],
            QuotientKind::HexTorus => {
                vec![Affine::translation((m, m)), Affine::translation((2 * n, -n))]
            }
        }
    }

    /// Whether `a` commutes with the projection, checked on a window that
    /// covers several periods in every direction.
    pub fn is_deck(&self, a: &Affine) -> bool {
        let w = 3 * (self.m.abs() + self.n.abs() + self.s.abs()) + 3;
        let lattice = self.lattice();
        for x in -w..=w {
            for y in -w..=w {
                let p = (x, y);
                if !lattice.contains(p) {
                    continue;
                }
                let q = a.apply(p);
                if !lattice.contains(q) || self.project(q) != self.project(p) {
                    return false;
                }
            }
        }
        true
    }

    /// The projection restricted to a developed patch.
    pub fn closed_form_cover(&self, dev: &Development) -> BTreeMap<usize, usize> {
        dev.coords
            .iter()
            .filter_map(|(&v, &p)| self.project(p).map(|h| (v, h)))
            .collect()
    }

    /// A lattice isometry `σ` with `map(v) = project(σ(v))` on the whole map.
    pub fn alignment(&self, dev: &Development, map: &BTreeMap<usize, usize>) -> Option<Affine> {
        let (&v0, &h0) = map.iter().next()?;
        let p0 = dev.coord(v0)?;
        let w = 3 * (self.m + self.n + self.s.abs());
        let lattice = self.lattice();
        for lin in lattice.point_group() {
            for x in -w..=w {
                for y in -w..=w {
                    let target = (x, y);
                    if !lattice.contains(target) || self.project(target) != Some(h0) {
                        continue;
                    }
                    let lp = Affine { lin, t: (0, 0) }.apply(p0);
                    let a = Affine {
                        lin,
                        t: (target.0 - lp.0, target.1 - lp.1),
                    };
                    let fits = map.iter().all(|(&v, &h)| {
                        dev.coord(v)
                            .is_some_and(|p| self.project(a.apply(p)) == Some(h))
                    });
                    if fits {
                        return Some(a);
                    }
                }
            }
        }
        None
    }
}

// Vertices are pairs (X, Y) with X in [0, 3m), Y in [0, 3n), X ≡ Y (mod 3)
// and Y ≢ 0 (mod 3); X picks a column, Y / 3 the position in it.
fn hex_index(n: i64, big_x: i64, big_y: i64) -> usize {
    let col = (big_x / 3) * 2 + (big_x % 3 - 1);
    (col * n + big_y / 3) as usize
}

fn hex_coords(n: i64, v: i64) -> (i64, i64) {
    let (col, pos) = (v / n, v % n);
    let big_x = 3 * (col / 2) + col % 2 + 1;
    (big_x, big_x % 3 + 3 * pos)
}

/// A quotient graph, with its rotation when the quotient is orientable.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub spec: QuotientSpec,
    pub graph: Graph,
    pub rotation: Option<Rotation>,
}

impl Quotient {
    pub fn to_file(&self) -> GraphFile {
        GraphFile::from_graph(&self.graph, self.rotation.as_ref())
    }
}

/// Builds the quotient graph and checks that the projection is a simple,
/// locally bijective graph map.
pub fn make_quotient(spec: QuotientSpec) -> Result<Quotient> {
    if spec.m < 3 || spec.n < 3 {
        return Err(Error::input(format!(
            "quotient dimensions must be at least 3, got {}x{}",
            spec.m, spec.n
        )));
    }
    let lattice = spec.lattice();
    let count = spec.vertex_count();
    let mut adjacency = BTreeMap::new();
    let mut rotation = BTreeMap::new();
    for v in 0..count {
        let p = spec.representative(v);
        if spec.project(p) != Some(v) {
            return Err(Error::Defect(format!("representative of {v} projects elsewhere")));
        }
        let around: Vec<usize> = lattice
            .neighbors(p)
            .into_iter()
            .map(|q| spec.project(q).expect("lattice point"))
            .collect();
        let distinct: BTreeSet<usize> = around.iter().copied().collect();
        if distinct.len() != around.len() || distinct.contains(&v) {
            return Err(Error::input(format!(
                "{}x{} quotient is not a simple graph",
                spec.m, spec.n
            )));
        }
        adjacency.insert(v, distinct.into_iter().collect::<Vec<_>>());
        rotation.insert(v, around);
    }
    let graph = Graph::from_adjacency(adjacency)?;
    let orientable = spec.kind != QuotientKind::Klein;
    Ok(Quotient {
        spec,
        graph,
        rotation: orientable.then_some(Rotation(rotation)),
    })
}
