use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::{orient, perm_sign, permutations, Triangulation};
use crate::error::ComplexError;

/// A labelled affine simplex: a simplex of the triangulation with an ordering of its vertices.
pub type SimplexKey = (usize, Vec<usize>);

/// Formal rational combination of labelled simplices; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    terms: BTreeMap<SimplexKey, BigRational>,
}

impl Chain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, key: SimplexKey, coefficient: BigRational) {
        let entry = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<SimplexKey, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c.abs())
    }
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for ((simplex, order), c) in &self.terms {
            seq.serialize_element(&(simplex, order, c.to_string()))?;
        }
        seq.end()
    }
}

/// `z = Σ_s o_s · alt(s)` with `alt(s) = 1/(n+1)! Σ_τ sgn(τ) s∘τ`.
pub fn fundamental_cycle(t: &Triangulation) -> Result<Chain, ComplexError> {
    let o = orient(t)?;
    let m = t.dim() + 1;
    let perms = permutations(m);
    let denom = BigInt::from(perms.len());
    let mut z = Chain::new();
    for (s, &os) in o.iter().enumerate() {
        for tau in &perms {
            let c = BigRational::new(BigInt::from(os * perm_sign(tau)), denom.clone());
            z.add_term((s, tau.clone()), c);
        }
    }
    Ok(z)
}

/// Boundary of `z` with faces identified through the gluings. Each face is
/// written in the coordinates of the smaller of its two slots.
pub fn boundary(t: &Triangulation, z: &Chain) -> Chain {
    let mut out = Chain::new();
    for ((s, order), c) in z.terms() {
        for i in 0..order.len() {
            let dropped = order[i];
            let mut face: Vec<usize> = order.iter().copied().filter(|&v| v != dropped).collect();
            let mut key_simplex = *s;
            if let Some(g) = t.gluing(*s, dropped) {
                if (g.simplex, g.facet) < (*s, dropped) {
                    key_simplex = g.simplex;
                    face = face.iter().map(|&v| g.perm[v]).collect();
                }
            }
            let sign = if i % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_term((key_simplex, face), sign);
        }
    }
    out
}

/// True iff `∂z = 0` exactly.
pub fn verify_cycle(t: &Triangulation, z: &Chain) -> bool {
    boundary(t, z).is_zero()
}
