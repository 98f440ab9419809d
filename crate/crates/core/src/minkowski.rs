//! Hyperboloid model of hyperbolic space.
//!
//! Vectors live in Minkowski space `R^{n+1}` with the form
//! `<u,v> = -u_0 v_0 + u_1 v_1 + ... + u_n v_n`. Finite points of `H^n` are
//! future vectors with `<w,w> = -1`; ideal points are future light-like rays,
//! stored with the canonical representative `w_0 = 1`.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::rng;

/// Absolute tolerance used to validate hyperboloid / light-cone constraints.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[inline]
pub(crate) fn form(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let space: f64 = u[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum();
    space - u[0] * v[0]
}

/// A vector of Minkowski space `R^{n+1}`; coordinate 0 is timelike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiVector {
    coords: Vec<f64>,
}

impl MinkowskiVector {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeomError> {
        if coords.len() < 3 {
            return Err(GeomError::DimensionTooSmall(coords.len().saturating_sub(1)));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite(i));
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    /// Ambient hyperbolic dimension `n` (the vector has `n + 1` coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn time(&self) -> f64 {
        self.coords[0]
    }

    pub fn space(&self) -> &[f64] {
        &self.coords[1..]
    }

    /// `<self, self>`.
    pub fn norm_sq(&self) -> f64 {
        form(&self.coords, &self.coords)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_vec_unchecked(self.coords.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_vec_unchecked(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_vec_unchecked(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut coords = vec![0.0; n + 1];
        coords[i] = 1.0;
        Self::from_vec_unchecked(coords)
    }
}

/// The Minkowski product `-u_0 v_0 + sum_{i>=1} u_i v_i`.
pub fn mink(u: &MinkowskiVector, v: &MinkowskiVector) -> Result<f64, GeomError> {
    if u.coords.len() != v.coords.len() {
        return Err(GeomError::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(form(&u.coords, &v.coords))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Finite,
    Ideal,
}

/// A point of the compactified hyperbolic space `H^n ∪ ∂H^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    rep: MinkowskiVector,
    kind: PointKind,
}

impl ProjectivePoint {
    pub fn finite(rep: MinkowskiVector) -> Result<Self, GeomError> {
        Self::finite_with_tolerance(rep, DEFAULT_TOLERANCE)
    }

    /// Validates `<w,w> = -1` (relative to `w_0^2`) and `w_0 > 0`, then
    /// renormalizes exactly onto the hyperboloid.
    pub fn finite_with_tolerance(rep: MinkowskiVector, tol: f64) -> Result<Self, GeomError> {
        let norm = rep.norm_sq();
        let time = rep.time();
        if time <= 0.0 || (norm + 1.0).abs() > tol * time * time.max(1.0) {
            return Err(GeomError::NotOnHyperboloid { norm, time });
        }
        let rep = rep.scale(1.0 / (-norm).sqrt());
        Ok(Self {
            rep,
            kind: PointKind::Finite,
        })
    }

    pub fn ideal(rep: MinkowskiVector) -> Result<Self, GeomError> {
        Self::ideal_with_tolerance(rep, DEFAULT_TOLERANCE)
    }

    /// Validates that `rep` is future light-like and rescales it to `rep_0 = 1`
    /// with a spatial part of unit Euclidean length.
    pub fn ideal_with_tolerance(rep: MinkowskiVector, tol: f64) -> Result<Self, GeomError> {
        let time = rep.time();
        if time <= 0.0 {
            return Err(GeomError::NotOnLightCone {
                norm: rep.norm_sq(),
                time,
            });
        }
        let scaled = rep.scale(1.0 / time);
        let norm = scaled.norm_sq();
        if norm.abs() > tol {
            return Err(GeomError::NotOnLightCone { norm, time });
        }
        let len = scaled.space().iter().map(|c| c * c).sum::<f64>().sqrt();
        let mut coords = vec![1.0];
        coords.extend(scaled.space().iter().map(|c| c / len));
        Ok(Self {
            rep: MinkowskiVector::from_vec_unchecked(coords),
            kind: PointKind::Ideal,
        })
    }

    /// Classify a future non-spacelike vector as a finite or ideal point.
    pub fn from_vector(v: MinkowskiVector, tol: f64) -> Result<Self, GeomError> {
        let time = v.time();
        let norm = v.norm_sq();
        if time <= 0.0 {
            return Err(GeomError::NotOnHyperboloid { norm, time });
        }
        let rel = norm / (time * time);
        if rel.abs() <= tol {
            Self::ideal_with_tolerance(v, tol)
        } else if rel < 0.0 {
            let rep = v.scale(1.0 / (-norm).sqrt());
            Ok(Self {
                rep,
                kind: PointKind::Finite,
            })
        } else {
            Err(GeomError::NotOnHyperboloid { norm, time })
        }
    }

    /// The base point `(1, 0, ..., 0)`.
    pub fn origin(n: usize) -> Self {
        Self {
            rep: MinkowskiVector::basis(n, 0),
            kind: PointKind::Finite,
        }
    }

    pub fn rep(&self) -> &MinkowskiVector {
        &self.rep
    }

    pub fn kind(&self) -> PointKind {
        self.kind
    }

    pub fn is_ideal(&self) -> bool {
        self.kind == PointKind::Ideal
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Representative scaled to `rep_0 = 1` (the Klein lift).
    pub(crate) fn klein_rep(&self) -> Vec<f64> {
        let t = self.rep.time();
        self.rep.coords().iter().map(|c| c / t).collect()
    }

    /// `1 - |x|^2` for the Klein coordinates `x`, computed without cancellation.
    pub(crate) fn klein_defect(&self) -> f64 {
        match self.kind {
            PointKind::Ideal => 0.0,
            PointKind::Finite => {
                let t = self.rep.time();
                1.0 / (t * t)
            }
        }
    }
}

/// Hyperbolic distance; infinite as soon as one endpoint is ideal and the points differ.
pub fn distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    match (p.kind, q.kind) {
        (PointKind::Finite, PointKind::Finite) => {
            // cosh d = 1 + <p-q,p-q>/2, so sinh(d/2) = sqrt(<p-q,p-q>)/2
            let diff = p.rep.sub(&q.rep);
            let chord = diff.norm_sq().max(0.0).sqrt();
            2.0 * (chord / 2.0).asinh()
        }
        (PointKind::Ideal, PointKind::Ideal) => {
            let same = p
                .rep
                .coords()
                .iter()
                .zip(q.rep.coords())
                .all(|(a, b)| (a - b).abs() <= DEFAULT_TOLERANCE);
            if same {
                0.0
            } else {
                f64::INFINITY
            }
        }
        _ => f64::INFINITY,
    }
}

/// Distance from a finite point to the hyperplane dual to the unit spacelike vector `q`,
/// for `w` on the nonpositive side (`sinh d = -<w,q>`).
pub fn dist_to_hyperplane(w: &ProjectivePoint, q: &MinkowskiVector) -> Result<f64, GeomError> {
    if w.is_ideal() {
        return Err(GeomError::Precondition("dist_to_hyperplane needs a finite point".into()));
    }
    let qq = mink(q, q)?;
    if (qq - 1.0).abs() > DEFAULT_TOLERANCE.max(1e-9 * qq.abs()) {
        return Err(GeomError::NotUnitSpacelike(qq));
    }
    let wq = mink(w.rep(), q)?;
    let scale = w.rep().time().max(1.0) * DEFAULT_TOLERANCE;
    if wq > scale {
        return Err(GeomError::WrongSide(wq));
    }
    Ok((-wq).max(0.0).asinh())
}

/// Central projection to the Klein model: `(w_1, ..., w_n) / w_0`.
pub fn to_klein(p: &ProjectivePoint) -> Vec<f64> {
    let t = p.rep.time();
    p.rep.space().iter().map(|c| c / t).collect()
}

/// Inverse of [`to_klein`].
pub fn lift_klein(x: &[f64], ideal: bool) -> Result<ProjectivePoint, GeomError> {
    lift_klein_with_tolerance(x, ideal, DEFAULT_TOLERANCE)
}

pub fn lift_klein_with_tolerance(x: &[f64], ideal: bool, tol: f64) -> Result<ProjectivePoint, GeomError> {
    if x.len() < 2 {
        return Err(GeomError::DimensionTooSmall(x.len()));
    }
    if let Some(i) = x.iter().position(|c| !c.is_finite()) {
        return Err(GeomError::NonFinite(i));
    }
    let r2: f64 = x.iter().map(|c| c * c).sum();
    if ideal {
        if (r2.sqrt() - 1.0).abs() > tol {
            return Err(GeomError::OutsideBall { norm: r2.sqrt() });
        }
        let len = r2.sqrt();
        let mut coords = vec![1.0];
        coords.extend(x.iter().map(|c| c / len));
        Ok(ProjectivePoint {
            rep: MinkowskiVector::from_vec_unchecked(coords),
            kind: PointKind::Ideal,
        })
    } else {
        if r2 >= 1.0 {
            return Err(GeomError::OutsideBall { norm: r2.sqrt() });
        }
        let s = 1.0 / (1.0 - r2).sqrt();
        let mut coords = vec![s];
        coords.extend(x.iter().map(|c| c * s));
        Ok(ProjectivePoint {
            rep: MinkowskiVector::from_vec_unchecked(coords),
            kind: PointKind::Finite,
        })
    }
}

/// A linear map of `R^{n+1}` preserving the Minkowski form and the upper sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: DMatrix<f64>,
}

fn signature(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n + 1, n + 1);
    j[(0, 0)] = -1.0;
    j
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n + 1, n + 1),
        }
    }

    pub fn new(matrix: DMatrix<f64>) -> Result<Self, GeomError> {
        let m = Self { matrix };
        let residual = m.form_residual();
        if !m.matrix.is_square() || m.matrix.nrows() < 3 {
            return Err(GeomError::NotAnIsometry(f64::INFINITY));
        }
        let scale = m.matrix.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
        if residual > 1e-9 * scale * scale || m.matrix[(0, 0)] <= 0.0 {
            return Err(GeomError::NotAnIsometry(residual));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Max-abs entry of `MᵀJM - J`.
    pub fn form_residual(&self) -> f64 {
        let n = self.matrix.nrows() - 1;
        let j = signature(n);
        let r = self.matrix.transpose() * &j * &self.matrix - j;
        r.iter().fold(0.0_f64, |a, b| a.max(b.abs()))
    }

    pub fn apply_vector(&self, v: &MinkowskiVector) -> MinkowskiVector {
        let n = self.matrix.nrows();
        let coords = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * v.coords[j]).sum())
            .collect();
        MinkowskiVector::from_vec_unchecked(coords)
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let image = self.apply_vector(&p.rep);
        match p.kind {
            PointKind::Finite => {
                let norm = image.norm_sq();
                ProjectivePoint {
                    rep: image.scale(1.0 / (-norm).sqrt()),
                    kind: PointKind::Finite,
                }
            }
            PointKind::Ideal => {
                let t = image.time();
                let scaled = image.scale(1.0 / t);
                let len = scaled.space().iter().map(|c| c * c).sum::<f64>().sqrt();
                let mut coords = vec![1.0];
                coords.extend(scaled.space().iter().map(|c| c / len));
                ProjectivePoint {
                    rep: MinkowskiVector::from_vec_unchecked(coords),
                    kind: PointKind::Ideal,
                }
            }
        }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `J Mᵀ J`.
    pub fn inverse(&self) -> Isometry {
        let j = signature(self.dim());
        Isometry {
            matrix: &j * self.matrix.transpose() * &j,
        }
    }
}

/// Seeded pseudo-random isometry: the image of the base point is a random
/// hyperboloid point, the remaining columns come from Minkowski Gram–Schmidt
/// on Gaussian vectors.
pub fn random_isometry(n: usize, seed: u64) -> Isometry {
    let mut rng = rng::stream(seed, &[0x1507]);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let spatial: Vec<f64> = (0..n).map(|_| 0.7 * gauss()).collect();
    let mut p = vec![(1.0 + spatial.iter().map(|c| c * c).sum::<f64>()).sqrt()];
    p.extend(spatial);
    columns.push(p);
    while columns.len() < n + 1 {
        let mut g: Vec<f64> = (0..=n).map(|_| gauss()).collect();
        for c in &columns {
            let cc = form(c, c);
            let coef = form(&g, c) / cc;
            for (gi, ci) in g.iter_mut().zip(c) {
                *gi -= coef * ci;
            }
        }
        let gg = form(&g, &g);
        if gg <= 1e-8 {
            continue;
        }
        let s = 1.0 / gg.sqrt();
        columns.push(g.into_iter().map(|x| x * s).collect());
    }
    let matrix = DMatrix::from_fn(n + 1, n + 1, |i, j| columns[j][i]);
    Isometry { matrix }
}
