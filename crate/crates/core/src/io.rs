//! JSON interchange formats. Keys are emitted in a fixed order so that files
//! are byte-stable across runs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tessellation::Rotation;

/// `{"n", "edges", "rotation"?, "labels"?}` with 0-based vertices and `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<usize, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<usize, String>>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph, rotation: Option<&Rotation>) -> GraphFile {
        GraphFile {
            n: g.len(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            rotation: rotation.map(|r| r.0.clone()),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> GraphFile {
        self.labels = Some(labels);
        self
    }

    pub fn to_graph(&self) -> Result<Graph> {
        if let Some(&[u, v]) = self.edges.iter().find(|[u, v]| u >= v) {
            return Err(Error::input(format!("edge [{u},{v}] must be listed with u < v")));
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::from_edges(self.n, &edges)
    }

    pub fn rotation(&self) -> Option<Rotation> {
        self.rotation.clone().map(Rotation)
    }
}

/// Graph file plus root, traced faces, completeness radii and outer walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "PatchWire", into = "PatchWire")]
pub struct PatchFile {
    pub graph: GraphFile,
    pub root: usize,
    pub faces: Vec<Vec<usize>>,
    pub complete_radius: BTreeMap<usize, usize>,
    pub outer: Vec<usize>,
    pub schlafli: Option<[usize; 2]>,
}

// serde's `flatten` cannot deserialize integer map keys, so the flat wire
// layout is spelled out here.
#[derive(Serialize, Deserialize)]
struct PatchWire {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<BTreeMap<usize, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<usize, String>>,
    root: usize,
    #[serde(default)]
    faces: Vec<Vec<usize>>,
    #[serde(default)]
    complete_radius: BTreeMap<usize, usize>,
    #[serde(default)]
    outer: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schlafli: Option<[usize; 2]>,
}

impl From<PatchWire> for PatchFile {
    fn from(w: PatchWire) -> Self {
        PatchFile {
            graph: GraphFile {
                n: w.n,
                edges: w.edges,
                rotation: w.rotation,
                labels: w.labels,
            },
            root: w.root,
            faces: w.faces,
            complete_radius: w.complete_radius,
            outer: w.outer,
            schlafli: w.schlafli,
        }
    }
}

impl From<PatchFile> for PatchWire {
    fn from(p: PatchFile) -> Self {
        PatchWire {
            n: p.graph.n,
            edges: p.graph.edges,
            rotation: p.graph.rotation,
            labels: p.graph.labels,
            root: p.root,
            faces: p.faces,
            complete_radius: p.complete_radius,
            outer: p.outer,
            schlafli: p.schlafli,
        }
    }
}

/// `{"v": u, "e": [u, w], "face": [cycle..]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagFile {
    pub v: usize,
    pub e: [usize; 2],
    pub face: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedFile {
    pub f: FlagFile,
    pub h: FlagFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFile {
    pub map: Vec<[usize; 2]>,
    pub seed: SeedFile,
    pub steps: usize,
    pub surjective: bool,
    /// `[face id, image cycle]` for every mapped patch face.
    #[serde(default)]
    pub faces: Vec<(usize, Vec<usize>)>,
    #[serde(default)]
    pub blocked: Vec<usize>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("bad JSON: {e}")))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value))
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}
