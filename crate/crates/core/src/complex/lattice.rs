use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CoverSpec;
use crate::error::ComplexError;

/// Finite-index subgroup of `Z×Z` with Hermite basis rows `(a, b), (0, c)`,
/// `a, c > 0`, `0 ≤ b < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeSubgroup {
    pub basis: [[i64; 2]; 2],
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl LatticeSubgroup {
    /// Subgroup generated by two vectors, brought to Hermite form.
    pub fn new(u: [i64; 2], v: [i64; 2]) -> Result<Self, ComplexError> {
        let det = u[0] * v[1] - u[1] * v[0];
        if det == 0 {
            return Err(ComplexError::ZeroDeterminant);
        }
        // unimodular row operations clearing the first column
        let (g, x, y) = ext_gcd(u[0], v[0]);
        let (a, b) = if g == 0 {
            unreachable!("nonzero determinant implies a nonzero first column")
        } else {
            (g, x * u[1] + y * v[1])
        };
        let c = (det / g).abs();
        Ok(Self {
            basis: [[a, b.rem_euclid(c)], [0, c]],
        })
    }

    pub fn from_hermite(a: i64, b: i64, c: i64) -> Result<Self, ComplexError> {
        if a <= 0 || c <= 0 || !(0..c).contains(&b) {
            return Err(ComplexError::InvalidArgument(format!("({a},{b}),(0,{c}) is not a Hermite basis")));
        }
        Ok(Self { basis: [[a, b], [0, c]] })
    }

    pub fn index(&self) -> u64 {
        (self.basis[0][0] * self.basis[1][1]).unsigned_abs()
    }

    pub fn contains_vector(&self, w: [i64; 2]) -> bool {
        let [[a, b], [_, c]] = self.basis;
        w[0] % a == 0 && (w[1] - (w[0] / a) * b) % c == 0
    }

    /// Canonical coset representative `(x, y)` with `0 ≤ x < a`, `0 ≤ y < c`.
    pub fn reduce(&self, w: [i64; 2]) -> [i64; 2] {
        let [[a, b], [_, c]] = self.basis;
        let i = w[0].div_euclid(a);
        [w[0] - i * a, (w[1] - i * b).rem_euclid(c)]
    }
}

/// `x(Z×Z)`, generated by `(x, 0)` and `(0, x)`.
pub fn x_characteristic(x: i64) -> Result<LatticeSubgroup, ComplexError> {
    if x < 1 {
        return Err(ComplexError::InvalidArgument(format!("x must be at least 1, got {x}")));
    }
    LatticeSubgroup::from_hermite(x, 0, x)
}

pub fn index(s: &LatticeSubgroup) -> u64 {
    s.index()
}

/// True iff `inner ⊆ outer`.
pub fn contains(outer: &LatticeSubgroup, inner: &LatticeSubgroup) -> bool {
    inner.basis.iter().all(|&r| outer.contains_vector(r))
}

pub fn is_characteristic(s: &LatticeSubgroup) -> bool {
    let [[a, b], [_, c]] = s.basis;
    b == 0 && a == c
}

/// Every subgroup of index `m`, in Hermite form.
pub fn subgroups_of_index(m: u64) -> Vec<LatticeSubgroup> {
    let m = m as i64;
    let mut out = Vec::new();
    for a in (1..=m).filter(|a| m % a == 0) {
        let c = m / a;
        for b in 0..c {
            out.push(LatticeSubgroup { basis: [[a, b], [0, c]] });
        }
    }
    out
}

pub fn sigma1(m: u64) -> u64 {
    (1..=m).filter(|&d| m.is_multiple_of(d)).sum()
}

/// Images of the torus fixture's pairings in `Z×Z`: the diagonal pairing is
/// trivial, bottom/top is `(1,0)` and right/left is `(0,1)`.
pub const TORUS_GENERATORS: [[i64; 2]; 3] = [[1, 0], [0, 1], [0, 0]];

/// Cover of the torus fixture given by the coset action of `Z×Z` on `Z×Z / s`.
pub fn torus_cover_spec(s: &LatticeSubgroup) -> CoverSpec {
    let [[a, _], [_, c]] = s.basis;
    let cosets: Vec<[i64; 2]> = (0..a).flat_map(|x| (0..c).map(move |y| [x, y])).collect();
    let id: BTreeMap<[i64; 2], usize> = cosets.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let perms = TORUS_GENERATORS
        .iter()
        .enumerate()
        .map(|(pid, g)| {
            let p = cosets
                .iter()
                .map(|w| id[&s.reduce([w[0] + g[0], w[1] + g[1]])])
                .collect();
            (pid, p)
        })
        .collect();
    CoverSpec::from_zero_based(cosets.len(), perms)
}
