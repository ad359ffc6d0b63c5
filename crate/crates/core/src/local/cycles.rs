//! Induced, non-separating cycles through a vertex.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{is_connected_excluding, Graph};
use crate::tessellation::FaceBoundary;

/// A cycle that is induced and non-separating in the graph it was found in.
/// The cycle is stored in the same canonical rotation as face-boundaries.
pub type PeripheralCycle = FaceBoundary;

/// No chords: the only edges among the cycle's vertices are its own.
pub fn is_induced_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    for i in 0..k {
        for j in i + 1..k {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if g.has_edge(cycle[i], cycle[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

/// Removing the cycle's vertices leaves at most one component.
pub fn is_non_separating(g: &Graph, cycle: &[usize]) -> Result<bool> {
    let removed: BTreeSet<usize> = cycle.iter().copied().collect();
    is_connected_excluding(g, &removed)
}

pub fn is_peripheral(g: &Graph, cycle: &[usize]) -> Result<bool> {
    Ok(cycle.len() >= 3 && is_induced_cycle(g, cycle) && is_non_separating(g, cycle)?)
}

/// Induced cycles through `v` of length at most `l_max`, in canonical form.
pub fn induced_cycles_through(g: &Graph, v: usize, l_max: usize) -> Result<Vec<FaceBoundary>> {
    g.require(v)?;
    let mut found = BTreeSet::new();
    let mut path = vec![v];
    let mut on_path = BTreeSet::from([v]);
    extend_path(g, l_max, &mut path, &mut on_path, &mut found);
    Ok(found.into_iter().collect())
}

// Grows a chordless path from `path[0]`. A vertex adjacent to the start
// closes the cycle; continuing past it would leave a chord.
fn extend_path(
    g: &Graph,
    l_max: usize,
    path: &mut Vec<usize>,
    on_path: &mut BTreeSet<usize>,
    found: &mut BTreeSet<FaceBoundary>,
) {
    let start = path[0];
    let last = *path.last().expect("non-empty path");
    let k = path.len();
    for &x in g.neighbors(last) {
        if on_path.contains(&x) {
            continue;
        }
        if k > 2 && path[1..k - 1].iter().any(|&p| g.has_edge(p, x)) {
            continue;
        }
        if k >= 2 && g.has_edge(start, x) {
            let mut cycle = path.clone();
            cycle.push(x);
            found.insert(FaceBoundary::new(cycle));
            continue;
        }
        if k + 1 < l_max {
            path.push(x);
            on_path.insert(x);
            extend_path(g, l_max, path, on_path, found);
            on_path.remove(&x);
            path.pop();
        }
    }
}

/// Peripheral cycles of `g` through `v` of length at most `l_max`, each once
/// in canonical rotation, sorted.
pub fn peripheral_cycles_through(
    g: &Graph,
    v: usize,
    l_max: usize,
) -> Result<Vec<PeripheralCycle>> {
    let mut out = Vec::new();
    for c in induced_cycles_through(g, v, l_max)? {
        if is_non_separating(g, c.cycle())? {
            out.push(c);
        }
    }
    Ok(out)
}
