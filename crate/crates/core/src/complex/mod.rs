//! Triangulations by facet pairings, their cell structure, fundamental
//! cycles and finite covers.

mod bounds;
mod cells;
mod chain;
mod cover;
mod dashboard;
mod fixtures;
mod lattice;
mod triangulation;

pub use bounds::{
    filling_bound, is_monotone_decreasing, jsj_cover_bound, seifert_bound, FillingBound, JsjBound, SeifertTerm,
    FIGURE_EIGHT_FILLING,
};
pub use cells::{
    cell_counts, components, links, orient, orientability, CellCounts, EdgeValence, LinkReport, Orientability,
    VertexLink,
};
pub use chain::{boundary, fundamental_cycle, verify_cycle, Chain, SimplexKey};
pub use cover::{
    build_cover, check_holonomy, covering_degree, random_admissible_spec, ridge_cycles, CoverSpec, RidgeCycle,
};
pub use dashboard::{inequality_dashboard, Annotation, CoverNormalization, Dashboard};
pub use fixtures::Fixture;
pub use lattice::{
    contains, index, is_characteristic, sigma1, subgroups_of_index, torus_cover_spec, x_characteristic,
    LatticeSubgroup, TORUS_GENERATORS,
};
pub use triangulation::{validate, validate_json, Gluing, Pairing, Triangulation, ValidationReport};

/// `+1` for even permutations, `-1` for odd.
pub fn perm_sign(p: &[usize]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1i8;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}
