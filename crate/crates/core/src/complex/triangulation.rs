use serde::{Deserialize, Serialize};

use crate::error::ComplexError;

/// One face pairing as it appears in the wire format. `map` lists the images
/// in simplex `b` of the vertices of facet `a`, in increasing vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub map: Vec<usize>,
}

/// A slot seen from one side of its pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gluing {
    pub simplex: usize,
    pub facet: usize,
    /// Full vertex permutation from this simplex to `simplex`; sends the
    /// glued facet's opposite vertex to `facet`.
    pub perm: Vec<usize>,
    pub pairing: usize,
    /// True when this slot is the pairing's `a` side.
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Wire {
    dim: usize,
    simplices: usize,
    pairings: Vec<Pairing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// A loose triangulation: `t` abstract `n`-simplices with facet pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    dim: usize,
    simplex_count: usize,
    pairings: Vec<Pairing>,
    labels: Option<Vec<String>>,
    slots: Vec<Option<Gluing>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub simplices: usize,
    pub pairings: usize,
    pub closed: bool,
    /// Unpaired `(simplex, facet)` slots.
    pub boundary: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn new(dim: usize, simplex_count: usize, pairings: Vec<Pairing>) -> Result<Self, ComplexError> {
        Self::with_labels(dim, simplex_count, pairings, None)
    }

    pub fn with_labels(
        dim: usize,
        simplex_count: usize,
        pairings: Vec<Pairing>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, ComplexError> {
        if dim < 1 {
            return Err(ComplexError::Malformed("dimension must be at least 1".into()));
        }
        if dim > 8 {
            return Err(ComplexError::Malformed(format!("dimension {dim} exceeds the supported maximum 8")));
        }
        if let Some(l) = &labels {
            if l.len() != simplex_count {
                return Err(ComplexError::Malformed(format!(
                    "{} labels for {simplex_count} simplices",
                    l.len()
                )));
            }
        }
        let m = dim + 1;
        let mut slots: Vec<Option<Gluing>> = vec![None; simplex_count * m];
        for (id, p) in pairings.iter().enumerate() {
            let [sa, fa] = p.a;
            let [sb, fb] = p.b;
            for &(s, f) in &[(sa, fa), (sb, fb)] {
                if s >= simplex_count || f > dim {
                    return Err(ComplexError::SlotOutOfRange { simplex: s, facet: f });
                }
            }
            if (sa, fa) == (sb, fb) {
                return Err(ComplexError::SelfPairedSlot { simplex: sa, facet: fa });
            }
            let bad = || ComplexError::BadVertexMap {
                pairing: id,
                simplex: sb,
                facet: fb,
            };
            if p.map.len() != dim {
                return Err(bad());
            }
            let mut perm = vec![usize::MAX; m];
            perm[fa] = fb;
            for (v, &img) in (0..m).filter(|&v| v != fa).zip(&p.map) {
                perm[v] = img;
            }
            let mut seen = vec![false; m];
            for &x in &perm {
                if x >= m || seen[x] {
                    return Err(bad());
                }
                seen[x] = true;
            }
            let inv = super::inverse(&perm);
            for (s, f, g) in [
                (sa, fa, Gluing { simplex: sb, facet: fb, perm, pairing: id, forward: true }),
                (sb, fb, Gluing { simplex: sa, facet: fa, perm: inv, pairing: id, forward: false }),
            ] {
                let slot = &mut slots[s * m + f];
                if slot.is_some() {
                    return Err(ComplexError::SlotReused { simplex: s, facet: f });
                }
                *slot = Some(g);
            }
        }
        Ok(Self {
            dim,
            simplex_count,
            pairings,
            labels,
            slots,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let w: Wire = serde_json::from_str(text).map_err(|e| ComplexError::Malformed(e.to_string()))?;
        Self::with_labels(w.dim, w.simplices, w.pairings, w.labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Wire {
            dim: self.dim,
            simplices: self.simplex_count,
            pairings: self.pairings.clone(),
            labels: self.labels.clone(),
        })
        .expect("triangulation serializes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplex_count(&self) -> usize {
        self.simplex_count
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The gluing at `(simplex, facet)`, or `None` for a boundary slot.
    pub fn gluing(&self, simplex: usize, facet: usize) -> Option<&Gluing> {
        self.slots[simplex * (self.dim + 1) + facet].as_ref()
    }

    pub fn is_closed(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    pub fn boundary_slots(&self) -> Vec<(usize, usize)> {
        let m = self.dim + 1;
        (0..self.slots.len())
            .filter(|&i| self.slots[i].is_none())
            .map(|i| (i / m, i % m))
            .collect()
    }

    /// Base simplex of each simplex when this triangulation was built as a cover.
    pub fn cover_projection(&self) -> Option<Vec<usize>> {
        self.labels
            .as_ref()?
            .iter()
            .map(|l| l.split_once('.').and_then(|(base, _)| base.parse().ok()))
            .collect()
    }
}

/// Check the pairing invariants and classify closed versus bounded.
pub fn validate(t: &Triangulation) -> ValidationReport {
    let boundary = t.boundary_slots();
    ValidationReport {
        dim: t.dim,
        simplices: t.simplex_count,
        pairings: t.pairings.len(),
        closed: boundary.is_empty(),
        boundary,
    }
}

/// Parse and validate in one step.
pub fn validate_json(text: &str) -> Result<ValidationReport, ComplexError> {
    Ok(validate(&Triangulation::from_json(text)?))
}
