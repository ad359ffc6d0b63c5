//! Integer coordinates for Euclidean patches and lattice isometries.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::local::Isomorphism;
use crate::tessellation::PlanePatch;

pub type Point = (i64, i64);

/// Which lattice a Euclidean tessellation lives on. Triangular and
/// honeycomb points use the basis `(1,0)`, `(0,1)` at 60 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    Square,
    Triangular,
    Honeycomb,
}

const SQUARE_DIRS: [Point; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
const TRI_DIRS: [Point; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

impl Lattice {
    pub fn for_schlafli(p: usize, q: usize) -> Option<Lattice> {
        match (p, q) {
            (4, 4) => Some(Lattice::Square),
            (3, 6) => Some(Lattice::Triangular),
            (6, 3) => Some(Lattice::Honeycomb),
            _ => None,
        }
    }

    pub fn directions(self) -> &'static [Point] {
        match self {
            Lattice::Square => &SQUARE_DIRS,
            Lattice::Triangular | Lattice::Honeycomb => &TRI_DIRS,
        }
    }

    /// Direction steps between consecutive edges at a vertex.
    fn step(self) -> usize {
        match self {
            Lattice::Honeycomb => 2,
            _ => 1,
        }
    }

    pub fn contains(self, p: Point) -> bool {
        match self {
            Lattice::Honeycomb => (p.0 - p.1).rem_euclid(3) != 0,
            _ => true,
        }
    }

    /// Neighbors of a lattice point in counter-clockwise order.
    pub fn neighbors(self, p: Point) -> Vec<Point> {
        self.directions()
            .iter()
            .map(|d| (p.0 + d.0, p.1 + d.1))
            .filter(|&x| self.contains(x))
            .collect()
    }

    fn origin(self) -> Point {
        match self {
            Lattice::Honeycomb => (1, 0),
            _ => (0, 0),
        }
    }

    /// Linear parts of the lattice's point symmetries.
    pub fn point_group(self) -> Vec<Linear> {
        let (rot, refl) = match self {
            Lattice::Square => ([[0, -1], [1, 0]], [[1, 0], [0, -1]]),
            _ => ([[0, -1], [1, 1]], [[0, 1], [1, 0]]),
        };
        let order = if self == Lattice::Square { 4 } else { 6 };
        let mut out = Vec::new();
        let mut r = IDENTITY;
        for _ in 0..order {
            out.push(r);
            out.push(mul(&r, &refl));
            r = mul(&rot, &r);
        }
        out
    }
}

pub type Linear = [[i64; 2]; 2];
const IDENTITY: Linear = [[1, 0], [0, 1]];

fn mul(a: &Linear, b: &Linear) -> Linear {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn apply_linear(a: &Linear, p: Point) -> Point {
    (a[0][0] * p.0 + a[0][1] * p.1, a[1][0] * p.0 + a[1][1] * p.1)
}

/// `p ↦ lin·p + t` with an integer, unimodular linear part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Affine {
    pub lin: Linear,
    pub t: Point,
}

impl Affine {
    pub fn translation(t: Point) -> Affine {
        Affine { lin: IDENTITY, t }
    }

    pub fn apply(&self, p: Point) -> Point {
        let q = apply_linear(&self.lin, p);
        (q.0 + self.t.0, q.1 + self.t.1)
    }

    pub fn det(&self) -> i64 {
        self.lin[0][0] * self.lin[1][1] - self.lin[0][1] * self.lin[1][0]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Affine) -> Affine {
        Affine {
            lin: mul(&self.lin, &other.lin),
            t: self.apply(other.t),
        }
    }

    pub fn inverse(&self) -> Affine {
        let d = self.det();
        assert!(d == 1 || d == -1, "not unimodular");
        let [[a, b], [c, e]] = self.lin;
        let lin = [[e * d, -b * d], [-c * d, a * d]];
        let t = apply_linear(&lin, self.t);
        Affine {
            lin,
            t: (-t.0, -t.1),
        }
    }

    pub fn is_translation(&self) -> bool {
        self.lin == IDENTITY
    }
}

/// Lattice coordinates of every vertex of a Euclidean patch.
#[derive(Debug, Clone)]
pub struct Development {
    pub lattice: Lattice,
    pub coords: BTreeMap<usize, Point>,
    index: HashMap<Point, usize>,
}

impl Development {
    pub fn vertex_at(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    pub fn coord(&self, v: usize) -> Option<Point> {
        self.coords.get(&v).copied()
    }

    /// A lattice isometry as a partial vertex map of the patch.
    pub fn permutation(&self, a: &Affine) -> BTreeMap<usize, usize> {
        self.coords
            .iter()
            .filter_map(|(&v, &p)| self.vertex_at(a.apply(p)).map(|w| (v, w)))
            .collect()
    }

    /// The lattice isometry agreeing with `iso` on its whole domain, if any.
    pub fn as_affine(&self, iso: &Isomorphism) -> Option<Affine> {
        // Anchor at a vertex whose lattice neighbours all lie in the domain.
        let (pv, pw, units) = iso.map.iter().find_map(|(&v, &w)| {
            let pv = self.coord(v)?;
            let units = self.lattice.neighbors(pv);
            let inside = units
                .iter()
                .all(|&q| self.vertex_at(q).is_some_and(|u| iso.map.contains_key(&u)));
            inside.then_some((pv, self.coord(w)?, units))
        })?;
        // Two neighbor steps spanning the lattice with determinant ±1.
        let step = |q: Point| (q.0 - pv.0, q.1 - pv.1);
        let (e, f) = units
            .iter()
            .flat_map(|&a| units.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (step(a), step(b)))
            .find(|(e, f)| (e.0 * f.1 - e.1 * f.0).abs() == 1)?;
        let image = |d: Point| -> Option<Point> {
            let u = self.vertex_at((pv.0 + d.0, pv.1 + d.1))?;
            let q = self.coord(iso.apply(u)?)?;
            Some((q.0 - pw.0, q.1 - pw.1))
        };
        let (e2, f2) = (image(e)?, image(f)?);
        // lin·[e f] = [e2 f2]
        let basis: Linear = [[e.0, f.0], [e.1, f.1]];
        let inv = Affine { lin: basis, t: (0, 0) }.inverse().lin;
        let lin = mul(&[[e2.0, f2.0], [e2.1, f2.1]], &inv);
        let lp = apply_linear(&lin, pv);
        let a = Affine {
            lin,
            t: (pw.0 - lp.0, pw.1 - lp.1),
        };
        iso.map
            .iter()
            .all(|(&x, &y)| match (self.coord(x), self.coord(y)) {
                (Some(px), Some(py)) => a.apply(px) == py,
                _ => false,
            })
            .then_some(a)
    }
}

/// Reads lattice coordinates off the rotation system of a generated
/// Euclidean patch.
pub fn develop_euclidean(patch: &PlanePatch) -> Result<Development> {
    let Some((p, q)) = patch.schlafli else {
        return Err(Error::input("only generated patches can be developed"));
    };
    let lattice = Lattice::for_schlafli(p, q)
        .ok_or_else(|| Error::input(format!("{{{p},{q}}} is not Euclidean")))?;
    let dirs = lattice.directions();
    let nd = dirs.len();
    let step = lattice.step();
    let mut coords = BTreeMap::new();
    // Direction of each known dart (v, u), as an index into `dirs`.
    let mut dart_dir: HashMap<(usize, usize), usize> = HashMap::new();
    let root = patch.root;
    coords.insert(root, lattice.origin());
    for (k, &u) in patch.rotation.at(root).iter().enumerate() {
        dart_dir.insert((root, u), (k * step) % nd);
    }
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let list = patch.rotation.at(v);
        // Anchor on any neighbor whose direction is known.
        let Some((i, d)) = list
            .iter()
            .enumerate()
            .find_map(|(i, &u)| dart_dir.get(&(v, u)).map(|&d| (i, d)))
        else {
            return Err(Error::Defect(format!("no anchored edge at {v}")));
        };
        let pv = coords[&v];
        for (j, &u) in list.iter().enumerate() {
            let dj = (d as i64 + (j as i64 - i as i64) * step as i64).rem_euclid(nd as i64) as usize;
            if let Some(&old) = dart_dir.get(&(v, u)) {
                if old != dj {
                    return Err(Error::Defect(format!("inconsistent directions at {v}")));
                }
            }
            dart_dir.insert((v, u), dj);
            dart_dir.insert((u, v), (dj + nd / 2) % nd);
            let pu = (pv.0 + dirs[dj].0, pv.1 + dirs[dj].1);
            match coords.get(&u) {
                Some(&old) if old != pu => {
                    return Err(Error::Defect(format!("vertex {u} developed twice")));
                }
                Some(_) => {}
                None => {
                    coords.insert(u, pu);
                    queue.push_back(u);
                }
            }
        }
    }
    let mut index = HashMap::new();
    for (&v, &pt) in &coords {
        if !lattice.contains(pt) || index.insert(pt, v).is_some() {
            return Err(Error::Defect(format!("vertex {v} lands on a bad lattice point")));
        }
    }
    for (u, v) in patch.graph.edges() {
        let (a, b) = (coords[&u], coords[&v]);
        if !dirs.contains(&(b.0 - a.0, b.1 - a.1)) {
            return Err(Error::Defect(format!("edge {u}-{v} is not a lattice step")));
        }
    }
    Ok(Development {
        lattice,
        coords,
        index,
    })
}
