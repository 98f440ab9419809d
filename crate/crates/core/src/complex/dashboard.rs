use num_traits::ToPrimitive;
use serde::Serialize;

use super::{cell_counts, components, fundamental_cycle, verify_cycle, Fixture, Triangulation};
use crate::constants::Certification;
use crate::error::ComplexError;
use crate::volume::ideal_regular_volume;

/// A known value attached to a built-in triangulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Annotation {
    pub quantity: String,
    pub value: f64,
    pub flag: Certification,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverNormalization {
    pub degree: usize,
    pub base_simplices: usize,
    /// `t̃ / d`, equal to the base simplex count for a genuine cover.
    pub normalized_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dashboard {
    pub dim: usize,
    pub fixture: Option<Fixture>,
    /// Simplex count: an upper bound for the Δ-complexity.
    pub simplices: usize,
    pub components: usize,
    pub f_vector: Vec<u64>,
    pub euler_characteristic: i64,
    /// `2^{n+1} t`.
    pub chi_bound: u64,
    pub chi_bound_holds: bool,
    pub cycle_verified: bool,
    /// L¹-size of the fundamental cycle, exact.
    pub cycle_l1: String,
    pub cycle_l1_value: f64,
    pub l1_bound_holds: bool,
    pub annotations: Vec<Annotation>,
    pub cover: Option<CoverNormalization>,
}

impl Dashboard {
    pub fn all_hold(&self) -> bool {
        self.chi_bound_holds && self.cycle_verified && self.l1_bound_holds
    }
}

fn known_values(fixture: Fixture, t: usize) -> Vec<Annotation> {
    let v3 = ideal_regular_volume(3, 0, 0).expect("series value").value;
    match fixture {
        Fixture::Sphere => vec![Annotation {
            quantity: "sigma(S^2)".into(),
            value: 2.0,
            flag: Certification::Exact,
            note: format!("t = {t} meets the minimal simplex count"),
        }],
        Fixture::FigureEight => vec![
            Annotation {
                quantity: "c(N)".into(),
                value: 2.0,
                flag: Certification::Exact,
                note: "spine complexity of the complement".into(),
            },
            Annotation {
                quantity: "vol(N)".into(),
                value: 2.0 * v3,
                flag: Certification::Series,
                note: "two regular ideal tetrahedra, 2 v_3".into(),
            },
            Annotation {
                quantity: "||N||".into(),
                value: 2.0,
                flag: Certification::Exact,
                note: "vol(N) / v_3".into(),
            },
            Annotation {
                quantity: "chi(cusped)".into(),
                value: 0.0,
                flag: Certification::Exact,
                note: "raw pseudo-complex chi counts the cone point once".into(),
            },
        ],
        _ => Vec::new(),
    }
}

/// Instance-level checks for a closed oriented triangulation.
pub fn inequality_dashboard(t: &Triangulation) -> Result<Dashboard, ComplexError> {
    if !t.is_closed() {
        return Err(ComplexError::NotClosed);
    }
    let z = fundamental_cycle(t)?;
    let cells = cell_counts(t);
    let simplices = t.simplex_count();
    let chi_bound = (1u64 << (t.dim() + 1)) * simplices as u64;
    let l1 = z.l1_norm();
    let l1_value = l1.to_f64().unwrap_or(f64::NAN);
    let fixture = Fixture::identify(t);
    let cover = t.cover_projection().and_then(|p| {
        let base = p.iter().max()? + 1;
        simplices.is_multiple_of(base).then(|| {
            let degree = simplices / base;
            CoverNormalization {
                degree,
                base_simplices: base,
                normalized_count: simplices as f64 / degree as f64,
            }
        })
    });
    Ok(Dashboard {
        dim: t.dim(),
        fixture,
        simplices,
        components: components(t).len(),
        chi_bound_holds: cells.euler_characteristic.unsigned_abs() <= chi_bound,
        f_vector: cells.f,
        euler_characteristic: cells.euler_characteristic,
        chi_bound,
        cycle_verified: verify_cycle(t, &z),
        l1_bound_holds: l1 <= num_rational::BigRational::from_integer(simplices.into()),
        cycle_l1: l1.to_string(),
        cycle_l1_value: l1_value,
        annotations: fixture.map(|f| known_values(f, simplices)).unwrap_or_default(),
        cover,
    })
}
