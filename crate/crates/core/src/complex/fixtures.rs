use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::Triangulation;
use crate::error::ComplexError;

/// Triangulations shipped with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    /// Two triangles glued along their boundaries.
    Sphere,
    /// Two triangles, one vertex.
    Torus,
    KleinBottle,
    /// Boundary of the 4-simplex: five tetrahedra.
    Boundary4Simplex,
    /// Two ideal tetrahedra of the figure-eight knot complement.
    FigureEight,
}

impl Fixture {
    pub const ALL: [Fixture; 5] = [
        Fixture::Sphere,
        Fixture::Torus,
        Fixture::KleinBottle,
        Fixture::Boundary4Simplex,
        Fixture::FigureEight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Sphere => "sphere",
            Fixture::Torus => "torus",
            Fixture::KleinBottle => "klein-bottle",
            Fixture::Boundary4Simplex => "boundary-4-simplex",
            Fixture::FigureEight => "figure-eight",
        }
    }

    pub fn json(self) -> &'static str {
        match self {
            Fixture::Sphere => include_str!("../../fixtures/sphere.json"),
            Fixture::Torus => include_str!("../../fixtures/torus.json"),
            Fixture::KleinBottle => include_str!("../../fixtures/klein-bottle.json"),
            Fixture::Boundary4Simplex => include_str!("../../fixtures/boundary-4-simplex.json"),
            Fixture::FigureEight => include_str!("../../fixtures/figure-eight.json"),
        }
    }

    pub fn triangulation(self) -> Triangulation {
        Triangulation::from_json(self.json()).expect("built-in fixture is valid")
    }

    /// The fixture whose gluing data equals `t`'s, if any.
    pub fn identify(t: &Triangulation) -> Option<Fixture> {
        Self::ALL.into_iter().find(|f| {
            let base = f.triangulation();
            base.dim() == t.dim() && base.simplex_count() == t.simplex_count() && base.pairings() == t.pairings()
        })
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ComplexError::InvalidArgument(format!("unknown fixture {s:?}")))
    }
}
