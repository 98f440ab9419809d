//! Point-to-simplex distances and incenter clearances between faces.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{incenter_inradius, is_degenerate, GeodesicSimplex};
use crate::error::GeomError;
use crate::minkowski::{distance, form, MinkowskiVector, ProjectivePoint};
use crate::rng;

/// Distance from a finite point to a geodesic simplex.
///
/// The distance to a point is convex along geodesics, so the nearest point of
/// `E` lies in the relative interior of exactly one face. For every face we
/// project `p` Minkowski-orthogonally onto the linear span of its vertex
/// representatives; projections with all-positive coefficients are points of
/// `E`, and the smallest of their distances is the answer.
pub fn distance_point_to_simplex(p: &ProjectivePoint, e: &GeodesicSimplex) -> Result<f64, GeomError> {
    if p.is_ideal() {
        return Err(GeomError::Precondition("distance from an ideal point".into()));
    }
    if p.dim() != e.ambient_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: e.ambient_dim(),
            got: p.dim(),
        });
    }
    if is_degenerate(e) {
        return Err(GeomError::Degenerate);
    }
    let m = e.vertices().len();
    let reps: Vec<&[f64]> = e.vertices().iter().map(|v| v.rep().coords()).collect();
    let pc = p.rep().coords();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << m) {
        let idx: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        if idx.len() == 1 {
            best = best.min(distance(p, e.vertex(idx[0])));
            continue;
        }
        let s = idx.len();
        let g = DMatrix::from_fn(s, s, |a, b| form(reps[idx[a]], reps[idx[b]]));
        let rhs = DVector::from_iterator(s, idx.iter().map(|&i| form(reps[i], pc)));
        let Some(c) = g.lu().solve(&rhs) else { continue };
        let cmax = c.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        if c.iter().any(|&x| !x.is_finite() || x < -1e-12 * cmax) {
            continue;
        }
        let mut proj = vec![0.0; pc.len()];
        for (a, &i) in idx.iter().enumerate() {
            for (o, x) in proj.iter_mut().zip(reps[i]) {
                *o += c[a] * x;
            }
        }
        let pp = form(&proj, &proj);
        if !(pp < 0.0) {
            continue;
        }
        let y = MinkowskiVector::from_vec_unchecked(proj.iter().map(|x| x / (-pp).sqrt()).collect());
        let yp = ProjectivePoint::from_vector(y, 1e-6)?;
        best = best.min(distance(p, &yp));
    }
    Ok(best)
}

fn project_to_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

/// Second, independent route to [`distance_point_to_simplex`]: minimizes
/// `λ ↦ -<p, x>/sqrt(-<x,x>)` with `x = sum λ_i v_i` over the barycentric
/// simplex by projected gradient descent from 8 seeded starts.
pub fn distance_point_to_simplex_descent(
    p: &ProjectivePoint,
    e: &GeodesicSimplex,
    seed: u64,
) -> Result<f64, GeomError> {
    if p.is_ideal() {
        return Err(GeomError::Precondition("distance from an ideal point".into()));
    }
    if is_degenerate(e) {
        return Err(GeomError::Degenerate);
    }
    let m = e.vertices().len();
    let g = e.gram();
    let alpha: Vec<f64> = e
        .vertices()
        .iter()
        .map(|v| -form(p.rep().coords(), v.rep().coords()))
        .collect();
    let objective = |l: &[f64]| -> f64 {
        let a: f64 = alpha.iter().zip(l).map(|(x, y)| x * y).sum();
        let mut b = 0.0;
        for i in 0..m {
            for j in 0..m {
                b -= l[i] * g[(i, j)] * l[j];
            }
        }
        if b <= 0.0 {
            f64::INFINITY
        } else {
            a / b.sqrt()
        }
    };
    let gradient = |l: &[f64]| -> Vec<f64> {
        let a: f64 = alpha.iter().zip(l).map(|(x, y)| x * y).sum();
        let gl: Vec<f64> = (0..m).map(|i| (0..m).map(|j| g[(i, j)] * l[j]).sum()).collect();
        let b: f64 = -l.iter().zip(&gl).map(|(x, y)| x * y).sum::<f64>();
        let sb = b.sqrt();
        (0..m).map(|i| alpha[i] / sb + a * gl[i] / (b * sb)).collect()
    };
    let mut rng = rng::stream(seed, &[0xd157]);
    let mut best = f64::INFINITY;
    for start in 0..8 {
        let mut l: Vec<f64> = if start == 0 {
            vec![1.0 / m as f64; m]
        } else {
            let w: Vec<f64> = (0..m).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        };
        let mut f = objective(&l);
        let mut step = 0.1;
        for _ in 0..4000 {
            let gr = gradient(&l);
            let mut improved = false;
            while step > 1e-16 {
                let mut cand: Vec<f64> = l.iter().zip(&gr).map(|(x, d)| x - step * d).collect();
                project_to_simplex(&mut cand);
                let fc = objective(&cand);
                if fc < f {
                    let delta = f - fc;
                    l = cand;
                    f = fc;
                    step *= 1.5;
                    improved = delta > 1e-15 * f;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
        best = best.min(f);
    }
    Ok(best.max(1.0).acosh())
}

/// Point used as the center of a face in clearance computations: the true
/// incenter for faces of dimension >= 2; for a 1-face the midpoint of a finite
/// edge, otherwise the foot of the perpendicular from `parent_center`.
pub fn face_incenter(face: &GeodesicSimplex, parent_center: &ProjectivePoint) -> Result<ProjectivePoint, GeomError> {
    if face.dim() >= 2 {
        return Ok(incenter_inradius(face)?.incenter);
    }
    let (a, b) = (face.vertex(0), face.vertex(1));
    let rep = if !a.is_ideal() && !b.is_ideal() {
        a.rep().add(b.rep())
    } else {
        // projection of the parent center onto span(a, b)
        let coeffs = face.span_coefficients(parent_center.rep())?;
        if coeffs.iter().any(|&c| c <= 0.0) {
            return Err(GeomError::Precondition(
                "perpendicular foot falls outside the edge".into(),
            ));
        }
        a.rep().scale(coeffs[0]).add(&b.rep().scale(coeffs[1]))
    };
    let nn = rep.norm_sq();
    ProjectivePoint::from_vector(rep.scale(1.0 / (-nn).sqrt()), 1e-6)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceClearance {
    /// Vertex indices of the codimension-2 face `E`.
    pub face: Vec<usize>,
    /// Vertex indices of the face `E'` (codimension 1 or 2), not containing `E`.
    pub other: Vec<usize>,
    pub distance: f64,
}

fn subsets_of_size(m: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << m))
        .filter(|mask| mask.count_ones() as usize == size)
        .map(|mask| (0..m).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Distances `d(inc(E), E')` for every codimension-2 face `E` and every face `E'`
/// of dimension `n-2` or `n-1` with `E ⊄ E'`.
pub fn face_clearances(k: &GeodesicSimplex) -> Result<Vec<FaceClearance>, GeomError> {
    let n = k.dim();
    if n < 3 || !k.is_full_dimensional() {
        return Err(GeomError::Precondition(format!(
            "face clearances need a full-dimensional simplex with n >= 3 (got k = {n}, n = {})",
            k.ambient_dim()
        )));
    }
    if is_degenerate(k) {
        return Err(GeomError::Degenerate);
    }
    let m = n + 1;
    let parent = incenter_inradius(k)?.incenter;
    let codim2 = subsets_of_size(m, n - 1);
    let mut others = subsets_of_size(m, n - 1);
    others.extend(subsets_of_size(m, n));
    let mut out = Vec::new();
    for e in &codim2 {
        let face = k.face(e)?;
        if is_degenerate(&face) {
            return Err(GeomError::Degenerate);
        }
        let center = face_incenter(&face, &parent)?;
        for f in &others {
            if e.iter().all(|v| f.contains(v)) {
                continue;
            }
            let target = k.face(f)?;
            out.push(FaceClearance {
                face: e.clone(),
                other: f.clone(),
                distance: distance_point_to_simplex(&center, &target)?,
            });
        }
    }
    Ok(out)
}

/// Minimum of [`face_clearances`].
pub fn min_face_clearance(k: &GeodesicSimplex) -> Result<f64, GeomError> {
    Ok(face_clearances(k)?
        .iter()
        .map(|c| c.distance)
        .fold(f64::INFINITY, f64::min))
}
