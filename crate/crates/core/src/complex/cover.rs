use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{compose, inverse, Pairing, Triangulation};
use crate::error::ComplexError;

/// Sheet permutations per pairing, as one-line permutations of `1..=degree`.
/// Pairings are identified by their index in the triangulation's pairing
/// list; omitted pairings carry the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub degree: usize,
    pub perms: BTreeMap<usize, Vec<usize>>,
}

impl CoverSpec {
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            perms: BTreeMap::new(),
        }
    }

    /// From zero-based sheet permutations.
    pub fn from_zero_based(degree: usize, perms: BTreeMap<usize, Vec<usize>>) -> Self {
        Self {
            degree,
            perms: perms
                .into_iter()
                .map(|(k, p)| (k, p.into_iter().map(|x| x + 1).collect()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        serde_json::from_str(text).map_err(|e| ComplexError::BadCoverSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover spec serializes")
    }

    /// Zero-based sheet permutation of every pairing of `t`.
    fn sheet_perms(&self, t: &Triangulation) -> Result<Vec<Vec<usize>>, ComplexError> {
        let d = self.degree;
        if d == 0 {
            return Err(ComplexError::BadCoverSpec("degree must be at least 1".into()));
        }
        let mut out = vec![(0..d).collect::<Vec<_>>(); t.pairings().len()];
        for (&id, p) in &self.perms {
            if id >= out.len() {
                return Err(ComplexError::BadCoverSpec(format!(
                    "pairing id {id} out of range (triangulation has {} pairings)",
                    out.len()
                )));
            }
            let mut seen = vec![false; d];
            let zero: Vec<usize> = p.iter().map(|&x| x.wrapping_sub(1)).collect();
            if p.len() != d || zero.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
                return Err(ComplexError::BadCoverSpec(format!(
                    "pairing {id}: {p:?} is not a permutation of 1..={d}"
                )));
            }
            out[id] = zero;
        }
        Ok(out)
    }
}

/// A closed walk around a codimension-2 face: the slots crossed and the
/// resulting sheet permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RidgeCycle {
    pub simplex: usize,
    /// Vertices of the codimension-2 face in `simplex`.
    pub face: Vec<usize>,
    pub crossings: Vec<(usize, usize)>,
    /// False when the walk ends on boundary slots.
    pub closed: bool,
}

/// All codimension-2 face cycles of `t`, each listed once.
pub fn ridge_cycles(t: &Triangulation) -> Vec<RidgeCycle> {
    ridge_walks(t, None).into_iter().map(|(c, _)| c).collect()
}

fn ridge_walks(t: &Triangulation, sheets: Option<&[Vec<usize>]>) -> Vec<(RidgeCycle, Vec<usize>)> {
    let m = t.dim() + 1;
    let d = sheets.map_or(1, |s| s.first().map_or(1, Vec::len));
    let mut visited: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    for s in 0..t.simplex_count() {
        for x in 0..m {
            for y in 0..m {
                if x == y || visited.contains(&(s, x, y)) {
                    continue;
                }
                // walk forward exiting through facet x, keeping y; then backward if it hits the boundary
                let mut hol: Vec<usize> = (0..d).collect();
                let mut crossings = Vec::new();
                let mut state = (s, x, y);
                let mut closed = true;
                loop {
                    visited.insert(state);
                    visited.insert((state.0, state.2, state.1));
                    let (cs, cx, cy) = state;
                    let Some(g) = t.gluing(cs, cx) else {
                        closed = false;
                        break;
                    };
                    crossings.push((cs, cx));
                    if let Some(sh) = sheets {
                        let p = &sh[g.pairing];
                        let step = if g.forward { p.clone() } else { inverse(p) };
                        hol = compose(&step, &hol);
                    }
                    state = (g.simplex, g.perm[cy], g.perm[cx]);
                    if state == (s, x, y) {
                        break;
                    }
                }
                if !closed {
                    // also cover the other direction of an open walk
                    let mut state = (s, y, x);
                    while let Some(g) = t.gluing(state.0, state.1) {
                        state = (g.simplex, g.perm[state.2], g.perm[state.1]);
                        visited.insert(state);
                        visited.insert((state.0, state.2, state.1));
                    }
                }
                let face = (0..m).filter(|&v| v != x && v != y).collect();
                out.push((
                    RidgeCycle {
                        simplex: s,
                        face,
                        crossings,
                        closed,
                    },
                    hol,
                ));
            }
        }
    }
    out
}

/// Check that the holonomy of `spec` around every closed codimension-2 cycle is trivial.
pub fn check_holonomy(t: &Triangulation, spec: &CoverSpec) -> Result<(), ComplexError> {
    let sheets = spec.sheet_perms(t)?;
    let id: Vec<usize> = (0..spec.degree).collect();
    for (cycle, hol) in ridge_walks(t, Some(&sheets)) {
        if cycle.closed && hol != id {
            return Err(ComplexError::BranchedCover {
                simplex: cycle.simplex,
                face: cycle.face,
                cycle: cycle.crossings,
            });
        }
    }
    Ok(())
}

/// The degree-`d` cover described by `spec`. Simplex `a` on sheet `k` becomes
/// simplex `k t + a`, labelled `"a.k"`.
pub fn build_cover(t: &Triangulation, spec: &CoverSpec) -> Result<Triangulation, ComplexError> {
    check_holonomy(t, spec)?;
    let sheets = spec.sheet_perms(t)?;
    let ts = t.simplex_count();
    let mut pairings = Vec::with_capacity(t.pairings().len() * spec.degree);
    for (id, p) in t.pairings().iter().enumerate() {
        for k in 0..spec.degree {
            pairings.push(Pairing {
                a: [k * ts + p.a[0], p.a[1]],
                b: [sheets[id][k] * ts + p.b[0], p.b[1]],
                map: p.map.clone(),
            });
        }
    }
    let labels = (0..spec.degree)
        .flat_map(|k| (0..ts).map(move |a| format!("{a}.{k}")))
        .collect();
    Triangulation::with_labels(t.dim(), ts * spec.degree, pairings, Some(labels))
}

/// Degree of `projection` as a simplicial covering map `cover -> base`, if it is one.
pub fn covering_degree(cover: &Triangulation, base: &Triangulation, projection: &[usize]) -> Option<usize> {
    if cover.dim() != base.dim() || projection.len() != cover.simplex_count() || base.simplex_count() == 0 {
        return None;
    }
    let mut counts = vec![0usize; base.simplex_count()];
    for &p in projection {
        *counts.get_mut(p)? += 1;
    }
    let d = counts[0];
    if d == 0 || counts.iter().any(|&c| c != d) {
        return None;
    }
    for s in 0..cover.simplex_count() {
        for f in 0..=cover.dim() {
            match (cover.gluing(s, f), base.gluing(projection[s], f)) {
                (None, None) => {}
                (Some(g), Some(h)) if projection[g.simplex] == h.simplex && g.facet == h.facet && g.perm == h.perm => {}
                _ => return None,
            }
        }
    }
    Some(d)
}

/// Random admissible spec: translations of `Z/m1 × Z/m2` on the pairings,
/// kept if the holonomy is trivial, then conjugated by a random relabelling
/// of the sheets over every simplex.
pub fn random_admissible_spec<R: Rng>(
    t: &Triangulation,
    m1: usize,
    m2: usize,
    rng: &mut R,
    max_tries: usize,
) -> Result<CoverSpec, ComplexError> {
    if m1 == 0 || m2 == 0 {
        return Err(ComplexError::InvalidArgument("group orders must be positive".into()));
    }
    let d = m1 * m2;
    for _ in 0..max_tries {
        let mut perms = BTreeMap::new();
        for id in 0..t.pairings().len() {
            let (u, v) = (rng.random_range(0..m1), rng.random_range(0..m2));
            let p: Vec<usize> = (0..d)
                .map(|k| ((k / m2 + u) % m1) * m2 + (k % m2 + v) % m2)
                .collect();
            perms.insert(id, p);
        }
        let spec = CoverSpec::from_zero_based(d, perms.clone());
        if check_holonomy(t, &spec).is_err() {
            continue;
        }
        let gauge: Vec<Vec<usize>> = (0..t.simplex_count())
            .map(|_| {
                let mut g: Vec<usize> = (0..d).collect();
                g.shuffle(rng);
                g
            })
            .collect();
        let conj = perms
            .into_iter()
            .map(|(id, p)| {
                let pr = &t.pairings()[id];
                let (ga, gb) = (&gauge[pr.a[0]], &gauge[pr.b[0]]);
                (id, compose(gb, &compose(&p, &inverse(ga))))
            })
            .collect();
        return Ok(CoverSpec::from_zero_based(d, conj));
    }
    Err(ComplexError::BadCoverSpec(format!(
        "no admissible Z/{m1} x Z/{m2} assignment found in {max_tries} tries"
    )))
}
