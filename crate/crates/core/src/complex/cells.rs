use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{perm_sign, Triangulation};
use crate::error::ComplexError;

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn map_mask(mask: usize, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .filter(|(v, _)| mask >> v & 1 == 1)
        .fold(0, |acc, (_, &w)| acc | 1 << w)
}

/// Union-find over `(simplex, vertex subset)` with all facet identifications applied.
pub(crate) fn face_classes(t: &Triangulation) -> (UnionFind, usize) {
    let m = t.dim() + 1;
    let width = 1usize << m;
    let mut uf = UnionFind::new(t.simplex_count() * width);
    for s in 0..t.simplex_count() {
        for f in 0..m {
            let Some(g) = t.gluing(s, f) else { continue };
            let facet_mask = (width - 1) & !(1 << f);
            // every nonempty subset of the facet
            let mut sub = facet_mask;
            while sub != 0 {
                uf.union(s * width + sub, g.simplex * width + map_mask(sub, &g.perm));
                sub = (sub - 1) & facet_mask;
            }
        }
    }
    (uf, width)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    /// `f[i]` is the number of `i`-cells.
    pub f: Vec<u64>,
    pub euler_characteristic: i64,
}

pub fn cell_counts(t: &Triangulation) -> CellCounts {
    let (mut uf, width) = face_classes(t);
    let mut f = vec![0u64; t.dim() + 1];
    for s in 0..t.simplex_count() {
        for mask in 1..width {
            let id = s * width + mask;
            if uf.find(id) == id {
                f[mask.count_ones() as usize - 1] += 1;
            }
        }
    }
    let euler_characteristic = f
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    CellCounts { f, euler_characteristic }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientability {
    pub orientable: bool,
    /// `±1` per simplex making every gluing orientation-reversing.
    pub orientation: Option<Vec<i8>>,
    /// Simplices along a closed path whose gluings force a contradiction.
    pub violating_cycle: Option<Vec<usize>>,
    /// The gluing `(simplex, facet)` where the contradiction was found.
    pub violating_slot: Option<(usize, usize)>,
}

/// Two-colour the simplices so that every gluing reverses orientation.
pub fn orientability(t: &Triangulation) -> Orientability {
    let m = t.dim() + 1;
    let n = t.simplex_count();
    let mut o = vec![0i8; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if o[root] != 0 {
            continue;
        }
        o[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for f in 0..m {
                let Some(g) = t.gluing(a, f) else { continue };
                let want = -o[a] * perm_sign(&g.perm);
                let b = g.simplex;
                if o[b] == 0 {
                    o[b] = want;
                    parent[b] = a;
                    queue.push_back(b);
                } else if o[b] != want {
                    let path = |mut x: usize| {
                        let mut p = vec![x];
                        while parent[x] != usize::MAX {
                            x = parent[x];
                            p.push(x);
                        }
                        p
                    };
                    let (pa, pb) = (path(a), path(b));
                    let common = pa.iter().find(|x| pb.contains(x)).copied().unwrap_or(root);
                    let mut cycle: Vec<usize> = pa.iter().take_while(|&&x| x != common).copied().collect();
                    cycle.push(common);
                    let back: Vec<usize> = pb.iter().take_while(|&&x| x != common).copied().collect();
                    cycle.extend(back.into_iter().rev());
                    return Orientability {
                        orientable: false,
                        orientation: None,
                        violating_cycle: Some(cycle),
                        violating_slot: Some((a, f)),
                    };
                }
            }
        }
    }
    Orientability {
        orientable: true,
        orientation: Some(o),
        violating_cycle: None,
        violating_slot: None,
    }
}

/// Orientation assignment, or the first violating gluing.
pub fn orient(t: &Triangulation) -> Result<Vec<i8>, ComplexError> {
    let r = orientability(t);
    match (r.orientation, r.violating_slot) {
        (Some(o), _) => Ok(o),
        (None, Some((simplex, facet))) => Err(ComplexError::NotOrientable { simplex, facet }),
        (None, None) => unreachable!("non-orientable result always names a slot"),
    }
}

/// Connected components as lists of simplices.
pub fn components(t: &Triangulation) -> Vec<Vec<usize>> {
    let m = t.dim() + 1;
    let mut uf = UnionFind::new(t.simplex_count());
    for s in 0..t.simplex_count() {
        for f in 0..m {
            if let Some(g) = t.gluing(s, f) {
                uf.union(s, g.simplex);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in 0..t.simplex_count() {
        let r = uf.find(s);
        groups.entry(r).or_default().push(s);
    }
    groups.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLink {
    pub vertex: usize,
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_characteristic: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeValence {
    pub edge: usize,
    /// `(simplex, local edge)` incidences, counted with multiplicity.
    pub valence: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub vertex_links: Vec<VertexLink>,
    pub edge_valences: Vec<EdgeValence>,
}

/// Vertex links (as triangulated surfaces) and edge valences of a closed 3-dimensional triangulation.
pub fn links(t: &Triangulation) -> Result<LinkReport, ComplexError> {
    if t.dim() != 3 {
        return Err(ComplexError::WrongDimension { expected: 3, got: t.dim() });
    }
    if let Some(&(s, f)) = t.boundary_slots().first() {
        return Err(ComplexError::NonManifoldLink(format!(
            "unpaired facet {f} of simplex {s}: vertex links have boundary"
        )));
    }
    let ts = t.simplex_count();
    let (mut faces, width) = face_classes(t);

    // directed edges (s, v, x): the end of edge vx at v, a vertex of the link of v
    let de = |s: usize, v: usize, x: usize| (s * 4 + v) * 4 + x;
    let mut ends = UnionFind::new(ts * 16);
    for s in 0..ts {
        for w in 0..4 {
            let g = t.gluing(s, w).expect("closed");
            for v in (0..4).filter(|&v| v != w) {
                for x in (0..4).filter(|&x| x != w && x != v) {
                    ends.union(de(s, v, x), de(g.simplex, g.perm[v], g.perm[x]));
                }
            }
        }
    }
    for s in 0..ts {
        for v in 0..4 {
            for x in (v + 1)..4 {
                if ends.find(de(s, v, x)) == ends.find(de(s, x, v)) {
                    return Err(ComplexError::NonManifoldLink(format!(
                        "edge ({v},{x}) of simplex {s} is identified with itself reversed"
                    )));
                }
            }
        }
    }

    let mut triangles: BTreeMap<usize, usize> = BTreeMap::new();
    let mut link_edges: BTreeMap<usize, usize> = BTreeMap::new();
    let mut link_vertices: BTreeMap<usize, std::collections::BTreeSet<usize>> = BTreeMap::new();
    for s in 0..ts {
        for v in 0..4 {
            let vc = faces.find(s * width + (1 << v));
            *triangles.entry(vc).or_default() += 1;
            // each link edge (corner v, facet w) appears on two corners
            *link_edges.entry(vc).or_default() += 3;
            for x in (0..4).filter(|&x| x != v) {
                let r = ends.find(de(s, v, x));
                link_vertices.entry(vc).or_default().insert(r);
            }
        }
    }
    let mut vertex_links = Vec::new();
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (&vc, &tri) in &triangles {
        let e = link_edges[&vc] / 2;
        let vtx = link_vertices[&vc].len();
        index.insert(vc, index.len());
        vertex_links.push(VertexLink {
            vertex: index[&vc],
            triangles: tri,
            edges: e,
            vertices: vtx,
            euler_characteristic: vtx as i64 - e as i64 + tri as i64,
        });
    }

    let mut valence: BTreeMap<usize, usize> = BTreeMap::new();
    for s in 0..ts {
        for v in 0..4 {
            for x in (v + 1)..4 {
                *valence.entry(faces.find(s * width + (1 << v | 1 << x))).or_default() += 1;
            }
        }
    }
    let edge_valences = valence
        .values()
        .enumerate()
        .map(|(edge, &valence)| EdgeValence { edge, valence })
        .collect();
    Ok(LinkReport {
        vertex_links,
        edge_valences,
    })
}
