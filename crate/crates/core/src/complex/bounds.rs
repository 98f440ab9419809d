//! Vertex-count bounds for spines of covers.

use serde::Serialize;

use crate::error::ComplexError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsjBound {
    pub degree: u64,
    /// `d v_A + 2hn (v_B + v_D) + h v_C`.
    pub bound: u64,
    /// `bound / d = v_A + 2 (v_B + v_D)/n + v_C/n²`.
    pub normalized: f64,
    /// Limit of `normalized` as `n → ∞`.
    pub limit: f64,
}

/// Complexity bound for the degree `d = h n²` cover built from JSJ pieces.
pub fn jsj_cover_bound(v_a: u64, v_b: u64, v_c: u64, v_d: u64, h: u64, n: u64) -> Result<JsjBound, ComplexError> {
    if h == 0 || n == 0 {
        return Err(ComplexError::InvalidArgument("h and n must be positive".into()));
    }
    let degree = h * n * n;
    let bound = degree * v_a + 2 * h * n * (v_b + v_d) + h * v_c;
    Ok(JsjBound {
        degree,
        bound,
        normalized: bound as f64 / degree as f64,
        limit: v_a as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FillingBound {
    pub n: u64,
    /// `v_A + (v_B + v_D)/n`.
    pub normalized: f64,
    /// `v_A`, bounding `c_∞` of the filled manifold by `c(N)` when `v_A = c(N)`.
    pub limit: f64,
}

pub fn filling_bound(v_a: u64, v_b: u64, v_d: u64, n: u64) -> Result<FillingBound, ComplexError> {
    if n == 0 {
        return Err(ComplexError::InvalidArgument("n must be positive".into()));
    }
    Ok(FillingBound {
        n,
        normalized: v_a as f64 + (v_b + v_d) as f64 / n as f64,
        limit: v_a as f64,
    })
}

/// Figure-eight knot complement: a minimal spine has `c(N) = 2` vertices, all of type A.
pub const FIGURE_EIGHT_FILLING: (u64, u64, u64) = (2, 0, 0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeifertTerm {
    pub d: u64,
    pub value: f64,
}

/// `(e + 6 d χ_-(Σ) + 6) / d²` for each degree, with `χ_- = max(-χ, 0)`.
pub fn seifert_bound(e: u64, chi: i64, degrees: &[u64]) -> Result<Vec<SeifertTerm>, ComplexError> {
    let chi_minus = (-chi).max(0) as u64;
    degrees
        .iter()
        .map(|&d| {
            if d == 0 {
                return Err(ComplexError::InvalidArgument("degrees must be at least 1".into()));
            }
            let num = e + 6 * d * chi_minus + 6;
            Ok(SeifertTerm {
                d,
                value: num as f64 / (d * d) as f64,
            })
        })
        .collect()
}

/// True when the sequence is non-increasing in `d`.
pub fn is_monotone_decreasing(terms: &[SeifertTerm]) -> bool {
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|t| t.d);
    sorted.windows(2).all(|w| w[1].value <= w[0].value)
}
