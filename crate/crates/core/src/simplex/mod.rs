//! Geodesic simplices with possibly ideal vertices.
//!
//! Everything is computed from the Minkowski Gram matrix `G_ij = <v_i, v_j>` of
//! the vertex representatives. The dual vector of facet `i` is the
//! combination `q_i = -sum_j (G^-1)_{ji} v_j / sqrt((G^-1)_{ii})`, which lies
//! in the span of the simplex, is unit spacelike, vanishes on the facet and
//! is negative on the opposite vertex.

mod clearance;

pub use clearance::{
    distance_point_to_simplex, distance_point_to_simplex_descent, face_clearances, face_incenter,
    min_face_clearance, FaceClearance,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::minkowski::{form, Isometry, MinkowskiVector, ProjectivePoint};

/// Relative singular-value threshold below which a Gram matrix is treated as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A geodesic `k`-simplex of `H^n ∪ ∂H^n`, given by its ordered vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSimplex {
    vertices: Vec<ProjectivePoint>,
    ambient_dim: usize,
}

impl GeodesicSimplex {
    pub fn new(vertices: Vec<ProjectivePoint>) -> Result<Self, GeomError> {
        let first = vertices
            .first()
            .ok_or_else(|| GeomError::InvalidSimplex("no vertices".into()))?;
        let n = first.dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != n) {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                got: bad.dim(),
            });
        }
        let k = vertices.len() - 1;
        if k < 1 || k > n {
            return Err(GeomError::InvalidSimplex(format!(
                "a {k}-simplex does not fit in H^{n}"
            )));
        }
        Ok(Self {
            vertices,
            ambient_dim: n,
        })
    }

    pub fn vertices(&self) -> &[ProjectivePoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ProjectivePoint {
        &self.vertices[i]
    }

    /// Simplex dimension `k`.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn is_ideal(&self) -> bool {
        self.vertices.iter().all(ProjectivePoint::is_ideal)
    }

    /// The face spanned by the listed vertex indices (in the given order).
    pub fn face(&self, indices: &[usize]) -> Result<GeodesicSimplex, GeomError> {
        let mut verts = Vec::with_capacity(indices.len());
        for &i in indices {
            let v = self.vertices.get(i).ok_or(GeomError::IndexOutOfRange {
                index: i,
                len: self.vertices.len(),
            })?;
            verts.push(v.clone());
        }
        GeodesicSimplex::new(verts)
    }

    /// The facet opposite vertex `i`.
    pub fn facet(&self, i: usize) -> Result<GeodesicSimplex, GeomError> {
        let idx: Vec<usize> = (0..self.vertices.len()).filter(|&j| j != i).collect();
        if i >= self.vertices.len() {
            return Err(GeomError::IndexOutOfRange {
                index: i,
                len: self.vertices.len(),
            });
        }
        self.face(&idx)
    }

    pub fn transform(&self, g: &Isometry) -> GeodesicSimplex {
        GeodesicSimplex {
            vertices: self.vertices.iter().map(|v| g.apply(v)).collect(),
            ambient_dim: self.ambient_dim,
        }
    }

    pub fn permuted(&self, order: &[usize]) -> Result<GeodesicSimplex, GeomError> {
        if order.len() != self.vertices.len() {
            return Err(GeomError::InvalidSimplex("permutation has the wrong length".into()));
        }
        self.face(order)
    }

    /// Minkowski Gram matrix of the vertex representatives.
    pub fn gram(&self) -> DMatrix<f64> {
        let m = self.vertices.len();
        DMatrix::from_fn(m, m, |i, j| {
            form(self.vertices[i].rep().coords(), self.vertices[j].rep().coords())
        })
    }

    pub(crate) fn rep_matrix(&self) -> DMatrix<f64> {
        let m = self.vertices.len();
        let d = self.ambient_dim + 1;
        DMatrix::from_fn(m, d, |i, j| self.vertices[i].rep().coords()[j])
    }

    fn combination(&self, coeffs: &[f64]) -> MinkowskiVector {
        let d = self.ambient_dim + 1;
        let mut out = vec![0.0; d];
        for (c, v) in coeffs.iter().zip(&self.vertices) {
            for (o, x) in out.iter_mut().zip(v.rep().coords()) {
                *o += c * x;
            }
        }
        MinkowskiVector::from_vec_unchecked(out)
    }

    /// Coefficients `c` with `w = sum c_i v_i` for `w` in the span of the vertices
    /// (least squares in the ambient space; exact when `w` lies in the span).
    pub fn span_coefficients(&self, w: &MinkowskiVector) -> Result<Vec<f64>, GeomError> {
        let g = self.gram();
        let b = DVector::from_iterator(
            self.vertices.len(),
            self.vertices.iter().map(|v| form(v.rep().coords(), w.coords())),
        );
        let lu = g.lu();
        let c = lu.solve(&b).ok_or(GeomError::Degenerate)?;
        Ok(c.iter().copied().collect())
    }
}

/// Unit spacelike vector dual to a facet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetDual {
    pub q: MinkowskiVector,
    pub facet_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncenterResult {
    pub incenter: ProjectivePoint,
    pub inradius: f64,
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// True iff the vertex representatives span less than a `(k+1)`-dimensional subspace.
pub fn is_degenerate(k: &GeodesicSimplex) -> bool {
    // Scale each representative to unit Euclidean length so that finite
    // vertices far from the origin do not dominate the spectrum.
    let reps = k.rep_matrix();
    let normalized = DMatrix::from_fn(reps.nrows(), reps.ncols(), |i, j| {
        let len = reps.row(i).norm();
        reps[(i, j)] / len
    });
    let sv = singular_values(&normalized);
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    sv.len() < k.vertices().len() || min <= RANK_TOLERANCE * max
}

/// Inverse Gram matrix, refusing numerically singular systems.
fn inverse_gram(k: &GeodesicSimplex) -> Result<DMatrix<f64>, GeomError> {
    if is_degenerate(k) {
        return Err(GeomError::Degenerate);
    }
    let g = k.gram();
    let scale = g.amax().max(1.0);
    let inv = g.clone().try_inverse().ok_or(GeomError::NumericallySingular(0.0))?;
    let check = (&g * &inv - DMatrix::identity(g.nrows(), g.nrows())).amax();
    if !check.is_finite() || check > 1e-6 {
        return Err(GeomError::NumericallySingular(check / scale));
    }
    Ok(inv)
}

fn duals_from_inverse(k: &GeodesicSimplex, inv: &DMatrix<f64>) -> Result<Vec<FacetDual>, GeomError> {
    let m = k.vertices().len();
    (0..m)
        .map(|i| {
            let d = inv[(i, i)];
            if !(d > 0.0) {
                return Err(GeomError::NumericallySingular(d));
            }
            let s = -1.0 / d.sqrt();
            let coeffs: Vec<f64> = (0..m).map(|j| s * inv[(j, i)]).collect();
            Ok(FacetDual {
                q: k.combination(&coeffs),
                facet_index: i,
            })
        })
        .collect()
}

/// Dual vector of the facet opposite vertex `i`.
pub fn facet_dual(k: &GeodesicSimplex, i: usize) -> Result<FacetDual, GeomError> {
    if i >= k.vertices().len() {
        return Err(GeomError::IndexOutOfRange {
            index: i,
            len: k.vertices().len(),
        });
    }
    let inv = inverse_gram(k)?;
    Ok(duals_from_inverse(k, &inv)?.swap_remove(i))
}

/// All facet duals, indexed by the opposite vertex.
pub fn facet_duals(k: &GeodesicSimplex) -> Result<Vec<FacetDual>, GeomError> {
    let inv = inverse_gram(k)?;
    duals_from_inverse(k, &inv)
}

/// Dihedral angle at the codimension-2 face `F_i ∩ F_j`: `arccos(-<q_i, q_j>)`.
pub fn dihedral_angle(k: &GeodesicSimplex, i: usize, j: usize) -> Result<f64, GeomError> {
    if i == j {
        return Err(GeomError::Precondition("dihedral angle needs two distinct facets".into()));
    }
    let m = k.vertices().len();
    if i >= m || j >= m {
        return Err(GeomError::IndexOutOfRange {
            index: i.max(j),
            len: m,
        });
    }
    let duals = facet_duals(k)?;
    Ok(angle_between(&duals[i].q, &duals[j].q))
}

pub(crate) fn angle_between(qi: &MinkowskiVector, qj: &MinkowskiVector) -> f64 {
    (-form(qi.coords(), qj.coords())).clamp(-1.0, 1.0).acos()
}

/// All dihedral angles `(i, j, angle)` with `i < j`.
pub fn dihedral_angles(k: &GeodesicSimplex) -> Result<Vec<(usize, usize, f64)>, GeomError> {
    let duals = facet_duals(k)?;
    let m = duals.len();
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j, angle_between(&duals[i].q, &duals[j].q)));
        }
    }
    Ok(out)
}

/// Incenter and inradius: the point `c` of the span with `<c, q_i> = -1` for
/// every facet, normalized to the hyperboloid. In terms of the Gram inverse,
/// `c = sum_i sqrt((G^-1)_ii) v_i`.
pub fn incenter_inradius(k: &GeodesicSimplex) -> Result<IncenterResult, GeomError> {
    let inv = inverse_gram(k)?;
    let m = k.vertices().len();
    let mut coeffs = Vec::with_capacity(m);
    for i in 0..m {
        let d = inv[(i, i)];
        if !(d > 0.0) {
            return Err(GeomError::NumericallySingular(d));
        }
        coeffs.push(d.sqrt());
    }
    let c = k.combination(&coeffs);
    let cc = c.norm_sq();
    if !(cc < 0.0) {
        return Err(GeomError::NumericallySingular(cc));
    }
    let len = (-cc).sqrt();
    let incenter = ProjectivePoint::from_vector(c.scale(1.0 / len), 1e-6)?;
    Ok(IncenterResult {
        incenter,
        inradius: (1.0 / len).asinh(),
    })
}

/// Sign of `det` of the matrix whose rows are the vertex representatives;
/// zero exactly on degenerate inputs.
pub fn orientation_sign(k: &GeodesicSimplex) -> Result<i8, GeomError> {
    if !k.is_full_dimensional() {
        return Err(GeomError::Precondition(format!(
            "orientation needs a full-dimensional simplex, got a {}-simplex in H^{}",
            k.dim(),
            k.ambient_dim()
        )));
    }
    if is_degenerate(k) {
        return Ok(0);
    }
    let det = k.rep_matrix().determinant();
    Ok(if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    })
}

/// The geodesic simplex spanned by the images of the standard simplex's vertices.
pub fn straighten(vertex_images: &[ProjectivePoint]) -> Result<GeodesicSimplex, GeomError> {
    GeodesicSimplex::new(vertex_images.to_vec())
}

/// Barycentric-style coefficients of a point of the span: `w = sum c_i v_i`
/// rescaled to sum to one. All strictly positive iff `w` lies in the open simplex.
pub fn barycentric(k: &GeodesicSimplex, w: &ProjectivePoint) -> Result<Vec<f64>, GeomError> {
    let c = k.span_coefficients(w.rep())?;
    let s: f64 = c.iter().sum();
    Ok(c.into_iter().map(|x| x / s).collect())
}

/// Regular ideal `k`-simplex in `H^n`: vertices `(1, u_i)` with unit `u_i` in the
/// first `k` spatial coordinates and `u_i · u_j = -1/k`.
pub fn regular_ideal_simplex(n: usize, k: usize) -> Result<GeodesicSimplex, GeomError> {
    if k < 2 || k > n {
        return Err(GeomError::Precondition(format!(
            "regular ideal simplex needs 2 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    // Helmert basis of the sum-zero hyperplane of R^{k+1}.
    let m = k + 1;
    let basis: Vec<Vec<f64>> = (1..m)
        .map(|j| {
            let norm = ((j * (j + 1)) as f64).sqrt();
            (0..m)
                .map(|i| {
                    if i < j {
                        1.0 / norm
                    } else if i == j {
                        -(j as f64) / norm
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let centroid = 1.0 / m as f64;
    let radius = (1.0 - centroid).sqrt();
    let vertices = (0..m)
        .map(|i| {
            let mut coords = vec![0.0; n + 1];
            coords[0] = 1.0;
            for (a, b) in basis.iter().enumerate() {
                // component of (e_i - centroid) along b, scaled to unit length
                coords[a + 1] = b[i] / radius;
            }
            let len = coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            for c in coords[1..].iter_mut() {
                *c /= len;
            }
            ProjectivePoint::ideal(MinkowskiVector::from_vec_unchecked(coords))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GeodesicSimplex::new(vertices)
}
