//! Independent checks on built covers: local bijectivity, normality through
//! reconstructed covering transformations, and independence of the face
//! enumeration.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builder::{build_cover, BuildOptions, CoverMap};
use crate::error::{Error, Result};
use crate::flags::{extend_iso, Colorer, Flag, FundamentalDomain};
use crate::graph::Graph;
use crate::local::{dk_ball, Isomorphism, LocalSpace};
use crate::tessellation::{FaceOrder, PlanePatch, Rotation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass: true,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass: false,
            witnesses: vec![witness.into()],
        }
    }

    fn from_witnesses(name: impl Into<String>, witnesses: Vec<String>) -> Check {
        Check {
            name: name.into(),
            pass: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// A covering transformation reconstructed for one fiber pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeckWitness {
    pub v: usize,
    pub w: usize,
    pub orientation_reversing: Option<bool>,
    /// Vertices where both `u` and its image are mapped by the cover.
    pub overlap: usize,
    #[serde(skip)]
    pub alpha: Isomorphism,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Preimage counts per target vertex over the checked region.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub fibers: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deck: Vec<DeckWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_isomorphic_radius: Option<usize>,
}

impl VerificationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.ok = self.checks.iter().all(|c| c.pass);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Vertices of `region` where `map` is not a bijection from the neighbors
/// onto the neighbors of the image.
pub fn local_bijection_failures(
    g: &Graph,
    h: &Graph,
    map: &BTreeMap<usize, usize>,
    region: &[usize],
) -> Vec<usize> {
    region
        .iter()
        .copied()
        .filter(|&v| {
            let Some(&cv) = map.get(&v) else {
                return true;
            };
            let images: Option<Vec<usize>> =
                g.neighbors(v).iter().map(|u| map.get(u).copied()).collect();
            let Some(mut images) = images else {
                return true;
            };
            images.sort_unstable();
            !h.contains(cv) || images.as_slice() != h.neighbors(cv)
        })
        .collect()
}

/// Local bijectivity of a vertex map on an explicit region.
pub fn check_map_cover(
    g: &Graph,
    h: &Graph,
    map: &BTreeMap<usize, usize>,
    region: &[usize],
) -> VerificationReport {
    let mut report = VerificationReport::default();
    if region.is_empty() {
        report.push(Check::fail("local bijection", "empty region"));
        return report;
    }
    let failures = local_bijection_failures(g, h, map, region);
    report.push(Check::from_witnesses(
        "local bijection",
        failures.iter().map(|v| format!("vertex {v}")).collect(),
    ));
    for v in region {
        if let Some(&cv) = map.get(v) {
            *report.fibers.entry(cv).or_default() += 1;
        }
    }
    report.note(format!("{} vertices checked", region.len()));
    report
}

/// Vertices with complete radius at least `margin` whose neighbors are all
/// mapped.
pub fn inner_region(g: &PlanePatch, map: &BTreeMap<usize, usize>, margin: usize) -> Vec<usize> {
    g.graph
        .vertices()
        .iter()
        .copied()
        .filter(|&v| {
            g.complete_radius_of(v) >= margin
                && map.contains_key(&v)
                && g.graph.neighbors(v).iter().all(|u| map.contains_key(u))
        })
        .collect()
}

pub fn check_cover(g: &PlanePatch, h: &Graph, c: &CoverMap, margin: usize) -> VerificationReport {
    let region = inner_region(g, &c.vertex_map, margin.max(1));
    let mut report = check_map_cover(&g.graph, h, &c.vertex_map, &region);
    report.note(format!(
        "image covers {} of {} target vertices",
        c.image.len(),
        h.len()
    ));
    report
}

/// Whether an isomorphism keeps (`Some(false)`) or reverses (`Some(true)`)
/// the rotation at `v`, or `None` if that cannot be read off.
pub fn reverses_orientation(rotation: &Rotation, alpha: &Isomorphism, v: usize) -> Option<bool> {
    let w = alpha.apply(v)?;
    let around_v: Option<Vec<usize>> = rotation.at(v).iter().map(|&u| alpha.apply(u)).collect();
    let around_v = around_v?;
    let around_w = rotation.at(w);
    let q = around_w.len();
    if q < 3 || around_v.len() != q {
        return None;
    }
    let start = around_w.iter().position(|&x| x == around_v[0])?;
    let forward = (0..q).all(|i| around_w[(start + i) % q] == around_v[i]);
    let backward = (0..q).all(|i| around_w[(start + q - i) % q] == around_v[i]);
    match (forward, backward) {
        (true, false) => Some(false),
        (false, true) => Some(true),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NormalityOptions {
    pub samples: usize,
    pub rng_seed: u64,
    pub exhaustive: bool,
}

impl Default for NormalityOptions {
    fn default() -> Self {
        NormalityOptions {
            samples: 20,
            rng_seed: 0,
            exhaustive: false,
        }
    }
}

/// Mapped flags at `v`: every processed face at `v` with each of its two
/// edges there, paired with their images.
fn mapped_flags(g: &PlanePatch, c: &CoverMap, v: usize) -> Vec<(Flag, Flag)> {
    let mut out = Vec::new();
    for &face in g.face_ids_at(v) {
        let Some(image) = c.face_images.get(&face) else {
            continue;
        };
        let fb = &g.faces[face];
        let (a, b) = fb.neighbors_of(v).expect("face at v");
        for u in [a, b] {
            let f = Flag::new(v, u, fb.clone());
            let h = Flag::new(c.vertex_map[&v], c.vertex_map[&u], image.clone());
            out.push((f, h));
        }
    }
    out
}

/// For pairs `v`, `w` in one fiber: flags over a common target flag share a
/// colour, and the covering transformation reconstructed from them commutes
/// with the cover.
pub fn check_normality(
    g: &PlanePatch,
    h: Option<&dyn LocalSpace>,
    c: &CoverMap,
    domain: &FundamentalDomain,
    options: NormalityOptions,
) -> Result<VerificationReport> {
    let gcol = Colorer::on_patch(g, domain)?;
    let hcol = match h {
        Some(space) => Some(Colorer::on_target(g, domain, space)?),
        None => None,
    };
    let r = domain.level + 1;
    let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&v, &cv) in &c.vertex_map {
        let all_faces = g.face_ids_at(v).iter().all(|f| c.face_images.contains_key(f));
        let deep = match dk_ball(g, v, r) {
            Ok(_) => true,
            Err(e) if e.is_patch_limit() => false,
            Err(e) => return Err(e),
        };
        if all_faces && deep && g.complete_radius_of(v) >= 1 {
            fibers.entry(cv).or_default().push(v);
        }
    }
    let mut pairs = Vec::new();
    for members in fibers.values() {
        for (i, &v) in members.iter().enumerate() {
            for &w in &members[i + 1..] {
                pairs.push((v, w));
            }
        }
    }
    let mut report = VerificationReport::default();
    report.note(format!("{} fiber pairs available", pairs.len()));
    if pairs.is_empty() {
        report.push(Check::pass("flag colours agree across fibers"));
        report.push(Check::pass("covering transformations commute with the cover"));
        report.note("every checked fiber is a single vertex");
        return Ok(report);
    }
    let chosen: Vec<(usize, usize)> = if options.exhaustive || options.samples >= pairs.len() {
        pairs
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(options.rng_seed);
        let mut picked: Vec<(usize, usize)> =
            pairs.choose_multiple(&mut rng, options.samples).copied().collect();
        picked.sort_unstable();
        picked
    };
    let mut colour_failures = Vec::new();
    let mut deck_failures = Vec::new();
    for &(v, w) in &chosen {
        let at_w = mapped_flags(g, c, w);
        let mut seed_pair = None;
        for (fv, image) in mapped_flags(g, c, v) {
            let Some((fw, _)) = at_w.iter().find(|(_, hw)| *hw == image) else {
                colour_failures.push(format!("({v},{w}): no flag at {w} over {image:?}"));
                continue;
            };
            let (cv, cw) = (gcol.color(&fv)?, gcol.color(fw)?);
            if cv != cw {
                colour_failures.push(format!("({v},{w}): colours {cv} and {cw}"));
            }
            if let Some(hc) = &hcol {
                let ch = hc.color(&image)?;
                if ch != cv {
                    colour_failures.push(format!("({v},{w}): target colour {ch} vs {cv}"));
                }
            }
            if seed_pair.is_none() {
                seed_pair = Some((fv, fw.clone()));
            }
        }
        let Some((fv, fw)) = seed_pair else {
            deck_failures.push(format!("({v},{w}): no mapped flags"));
            continue;
        };
        let alpha = match extend_iso(g, g, &fv, &fw, r) {
            Ok(a) => a,
            Err(Error::HypothesisViolation { detail, .. }) => {
                deck_failures.push(format!("({v},{w}): {detail}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut overlap = 0;
        for (&u, &au) in &alpha.map {
            if let (Some(cu), Some(cau)) = (c.vertex_map.get(&u), c.vertex_map.get(&au)) {
                overlap += 1;
                if cu != cau {
                    deck_failures.push(format!("({v},{w}): c(alpha({u})) != c({u})"));
                    break;
                }
            }
        }
        report.deck.push(DeckWitness {
            v,
            w,
            orientation_reversing: reverses_orientation(&g.rotation, &alpha, v),
            overlap,
            alpha,
        });
    }
    report.push(Check::from_witnesses(
        "flag colours agree across fibers",
        colour_failures,
    ));
    report.push(Check::from_witnesses(
        "covering transformations commute with the cover",
        deck_failures,
    ));
    let reversing = report
        .deck
        .iter()
        .filter(|d| d.orientation_reversing == Some(true))
        .count();
    report.note(format!(
        "{} pairs checked, {reversing} orientation-reversing",
        chosen.len()
    ));
    Ok(report)
}

/// Rebuilds the cover under alternating face enumerations and compares the
/// vertex maps.
pub fn check_uniqueness(
    g: &PlanePatch,
    h: &dyn LocalSpace,
    domain: &FundamentalDomain,
    seed: &(Flag, Flag),
    options: BuildOptions,
    trials: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let orders = [FaceOrder::Canonical, FaceOrder::ReversedTies];
    let mut first: Option<CoverMap> = None;
    let mut witnesses = Vec::new();
    for t in 0..trials.max(1) {
        let opts = BuildOptions {
            order: orders[t % 2],
            ..options
        };
        let c = build_cover(g, h, domain, Some(seed.clone()), opts)?;
        match &first {
            None => first = Some(c),
            Some(base) => {
                if let Some(v) = first_difference(&base.vertex_map, &c.vertex_map) {
                    witnesses.push(format!("trial {t} differs at vertex {v}"));
                }
            }
        }
    }
    report.push(Check::from_witnesses("identical vertex maps", witnesses));
    Ok(report)
}

fn first_difference(a: &BTreeMap<usize, usize>, b: &BTreeMap<usize, usize>) -> Option<usize> {
    let keys: BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter().find(|k| a.get(k) != b.get(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::i_fundamental_domain;
    use crate::tessellation::generate;

    #[test]
    fn identity_cover_passes_and_perturbation_fails() {
        let g = generate(4, 4, 6).unwrap();
        let d = i_fundamental_domain(&g, 1).unwrap();
        let f = d.flags[0].clone();
        let mut c = build_cover(&g, &g, &d, Some((f.clone(), f)), BuildOptions::default()).unwrap();
        let report = check_cover(&g, &g.graph, &c, 1);
        assert!(report.ok, "{report:?}");
        assert!(report.fibers.values().all(|&n| n == 1));
        let normal = check_normality(&g, None, &c, &d, NormalityOptions::default()).unwrap();
        assert!(normal.ok);

        let v = inner_region(&g, &c.vertex_map, 1)[0];
        let other = *c.vertex_map.values().find(|&&x| x != c.vertex_map[&v]).unwrap();
        c.vertex_map.insert(v, other);
        let broken = check_cover(&g, &g.graph, &c, 1);
        assert!(!broken.ok);
        assert!(broken.checks[0].witnesses.contains(&format!("vertex {v}")));
    }

    #[test]
    fn rotation_reversal_is_detected() {
        let g = generate(4, 4, 3).unwrap();
        let rot = &g.rotation;
        let id = Isomorphism::identity(g.graph.vertices());
        assert_eq!(reverses_orientation(rot, &id, 0), Some(false));
        let nb = rot.at(0).to_vec();
        let mut flip = id.clone();
        flip.map.insert(nb[1], nb[3]);
        flip.map.insert(nb[3], nb[1]);
        assert_eq!(reverses_orientation(rot, &flip, 0), Some(true));
    }
}
