//! Volumes of geodesic simplices and hyperbolic balls.
//!
//! A geodesic simplex is a Euclidean simplex in the Klein model, where the
//! hyperbolic volume density is `(1 - |x|^2)^{-(n+1)/2}`. Writing
//! `x = sum λ_j X_j` in barycentric coordinates, `1 - |x|^2 = λᵀ Q λ` with
//! `Q_jk = 1 - X_j·X_k`, which stays accurate next to ideal vertices
//! (`Q_jj = 0`). The barycentric simplex is split into a core and dyadic
//! shells `λ_i ∈ [1 - 2^-l, 1 - 2^-(l+1))` around every ideal or near-ideal
//! vertex; the density is bounded on every stratum. Samples are allocated by
//! a Neyman rule from a pilot run, shells use antithetic radial pairs, and the
//! part of an ideal corner beyond the last shell is extrapolated from the
//! geometric decay `2^{-l(n-1)/2}` of the shell contributions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::minkowski::{form, lift_klein, to_klein, ProjectivePoint};
use crate::rng;
use crate::simplex::{is_degenerate, regular_ideal_simplex, GeodesicSimplex};

pub const DEFAULT_BUDGET: u64 = 2_000_000;
pub const DEFAULT_LEVELS: usize = 40;

/// Finite vertices with `1 - |X|^2` below this get shells as well.
const NEAR_IDEAL_DEFECT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    MonteCarlo,
    ClosedForm,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub method: VolumeMethod,
}

impl VolumeEstimate {
    pub fn exact(value: f64, method: VolumeMethod) -> Self {
        Self {
            value,
            std_error: 0.0,
            samples: 0,
            method,
        }
    }
}

/// Difference `vol(K) - vol(R)` estimated on common sample points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeDifference {
    pub difference: f64,
    pub std_error: f64,
    pub samples: u64,
}

// ---------------------------------------------------------------------------
// Lobachevsky function

fn zeta_even_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Euler–Maclaurin with cut-off J
        let j = 100.0_f64;
        (1..=40)
            .map(|k| {
                let s = 2.0 * k as f64;
                let head: f64 = (1..100).map(|i| (i as f64).powf(-s)).sum();
                head + j.powf(1.0 - s) / (s - 1.0) + 0.5 * j.powf(-s) + s * j.powf(-s - 1.0) / 12.0
                    - s * (s + 1.0) * (s + 2.0) * j.powf(-s - 3.0) / 720.0
            })
            .collect()
    })
}

/// Lobachevsky function `Λ(θ) = -∫_0^θ log|2 sin t| dt = ½ Σ sin(2kθ)/k²`.
///
/// Evaluated on `(-π/2, π/2]` (it is odd and π-periodic) via
/// `Λ(θ) = θ - θ log(2θ) + Σ_k ζ(2k) θ^{2k+1} / (k (2k+1) π^{2k})`.
pub fn lobachevsky(theta: f64) -> f64 {
    let mut t = theta - PI * (theta / PI).round();
    if t == 0.0 || !t.is_finite() {
        return 0.0;
    }
    let sign = t.signum();
    t = t.abs();
    if (t - PI / 2.0).abs() < 1e-15 {
        return 0.0;
    }
    let zeta = zeta_even_table();
    let x2 = (t / PI) * (t / PI);
    let mut pow = 1.0;
    let mut series = 0.0;
    for (k, z) in zeta.iter().enumerate() {
        let k = (k + 1) as f64;
        pow *= x2;
        let term = z * pow / (k * (2.0 * k + 1.0));
        series += term;
        if term < 1e-18 * series {
            break;
        }
    }
    sign * (t - t * (2.0 * t).ln() + t * series)
}

// ---------------------------------------------------------------------------
// Balls

fn sphere_area(dim: usize) -> f64 {
    // area of the unit sphere S^dim
    match dim {
        0 => 2.0,
        1 => 2.0 * PI,
        d => 2.0 * PI / (d as f64 - 1.0) * sphere_area(d - 2),
    }
}

fn simpson_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature to the given absolute tolerance.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_adaptive(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Volume of a hyperbolic `n`-ball of radius `r`: `Vol(S^{n-1}) ∫_0^r sinh^{n-1} t dt`.
pub fn ball_volume(n: usize, r: f64) -> Result<f64, GeomError> {
    if n < 1 {
        return Err(GeomError::Precondition("ball dimension must be positive".into()));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(GeomError::Precondition(format!("radius must be finite and nonnegative, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let p = (n - 1) as i32;
    let f = |t: f64| t.sinh().powi(p);
    // crude magnitude estimate for a relative tolerance
    let scale = integrate(f, 0.0, r, f64::MAX.sqrt()).abs().max(f64::MIN_POSITIVE);
    let integral = integrate(f, 0.0, r, 1e-14 * scale);
    Ok(sphere_area(n - 1) * integral)
}

// ---------------------------------------------------------------------------
// Simplex volumes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Stratum {
    Core,
    Shell { vertex: usize, level: usize },
}

/// Stratification and sample allocation, reusable across simplices of the same
/// dimension so that volume differences can be taken on common samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    n: usize,
    levels: usize,
    shelled: Vec<bool>,
    strata: Vec<Stratum>,
    probs: Vec<f64>,
    /// Observations per stratum (antithetic pairs count once).
    alloc: Vec<usize>,
    pilot_samples: u64,
}

impl SamplingPlan {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn strata_count(&self) -> usize {
        self.strata.len()
    }

    /// Integrand evaluations of a run with this plan.
    pub fn samples(&self) -> u64 {
        self.strata
            .iter()
            .zip(&self.alloc)
            .map(|(s, &a)| match s {
                Stratum::Core => a as u64,
                Stratum::Shell { .. } => 2 * a as u64,
            })
            .sum()
    }
}

struct Integrand {
    n: usize,
    q: Vec<f64>,
    euclid_volume: f64,
    ideal: Vec<bool>,
}

impl Integrand {
    fn new(k: &GeodesicSimplex) -> Result<Self, GeomError> {
        if !k.is_full_dimensional() {
            return Err(GeomError::Precondition(format!(
                "volume needs a full-dimensional simplex, got a {}-simplex in H^{}",
                k.dim(),
                k.ambient_dim()
            )));
        }
        if is_degenerate(k) {
            return Err(GeomError::Degenerate);
        }
        let n = k.dim();
        let m = n + 1;
        let reps: Vec<Vec<f64>> = k.vertices().iter().map(|v| v.klein_rep()).collect();
        let mut q = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                q[i * m + j] = if i == j {
                    k.vertex(i).klein_defect()
                } else {
                    -form(&reps[i], &reps[j])
                };
            }
        }
        let mat = nalgebra::DMatrix::from_fn(m, m, |i, j| reps[i][j]);
        let factorial: f64 = (1..=n).map(|x| x as f64).product();
        Ok(Self {
            n,
            q,
            euclid_volume: mat.determinant().abs() / factorial,
            ideal: k.vertices().iter().map(ProjectivePoint::is_ideal).collect(),
        })
    }

    #[inline]
    fn density(&self, l: &[f64]) -> f64 {
        let m = self.n + 1;
        let mut quad = 0.0;
        for i in 0..m {
            let row = &self.q[i * m..(i + 1) * m];
            let mut acc = 0.0;
            for j in 0..m {
                acc += row[j] * l[j];
            }
            quad += l[i] * acc;
        }
        self.euclid_volume * quad.powf(-0.5 * (self.n as f64 + 1.0))
    }

    fn near_ideal(&self, i: usize) -> bool {
        let m = self.n + 1;
        self.ideal[i] || self.q[i * m + i] < NEAR_IDEAL_DEFECT
    }

    /// Multiplier on the last shell that adds the extrapolated corner tail.
    fn tail_multiplier(&self, vertex: usize) -> f64 {
        if self.ideal[vertex] {
            let r = 2f64.powf(-0.5 * (self.n as f64 - 1.0));
            1.0 / (1.0 - r)
        } else {
            1.0
        }
    }

    /// Deterministic tail beyond the last shell of a finite vertex.
    fn finite_tail(&self, vertex: usize, levels: usize) -> f64 {
        if self.ideal[vertex] {
            return 0.0;
        }
        let m = self.n + 1;
        let d = self.q[vertex * m + vertex];
        let p_tail = 2f64.powf(-((levels + 1) as f64) * self.n as f64);
        self.euclid_volume * d.powf(-0.5 * (self.n as f64 + 1.0)) * p_tail
    }
}

fn dirichlet_into(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let mut s = 0.0;
    for x in out.iter_mut() {
        let e: f64 = Exp1.sample(rng);
        *x = e;
        s += e;
    }
    for x in out.iter_mut() {
        *x /= s;
    }
}

impl SamplingPlan {
    fn layout(n: usize, shelled: Vec<bool>, levels: usize) -> (Vec<Stratum>, Vec<f64>) {
        let nf = n as f64;
        let m_shelled = shelled.iter().filter(|&&s| s).count() as f64;
        let mut strata = vec![Stratum::Core];
        let mut probs = vec![1.0 - m_shelled * 2f64.powf(-nf)];
        for (vertex, _) in shelled.iter().enumerate().filter(|(_, &s)| s) {
            for level in 1..=levels {
                strata.push(Stratum::Shell { vertex, level });
                let l = level as f64;
                probs.push(2f64.powf(-l * nf) - 2f64.powf(-(l + 1.0) * nf));
            }
        }
        (strata, probs)
    }

    /// Draw one observation of stratum `s`, calling `f` on each barycentric point.
    fn observe<F: Fn(&[f64]) -> f64>(&self, s: usize, rng: &mut ChaCha8Rng, buf: &mut [f64], f: &F) -> f64 {
        let n = self.n;
        match self.strata[s] {
            Stratum::Core => loop {
                dirichlet_into(rng, buf);
                if buf
                    .iter()
                    .zip(&self.shelled)
                    .all(|(&l, &sh)| !sh || l <= 0.5)
                {
                    return f(buf);
                }
            },
            Stratum::Shell { vertex, level } => {
                let lo = 2f64.powi(-(n as i32));
                let w: f64 = lo + (1.0 - lo) * rng.random::<f64>();
                let w_anti = lo + 1.0 - w;
                let base = 2f64.powi(-(level as i32));
                let mut others = vec![0.0; n];
                dirichlet_into(rng, &mut others);
                let mut eval = |w: f64| {
                    let h = base * w.powf(1.0 / n as f64);
                    let mut it = others.iter();
                    for (j, slot) in buf.iter_mut().enumerate() {
                        *slot = if j == vertex { 1.0 - h } else { h * it.next().unwrap() };
                    }
                    f(buf)
                };
                0.5 * (eval(w) + eval(w_anti))
            }
        }
    }

    /// Per-stratum (mean, variance of the mean) of weighted observations.
    fn run<F>(&self, seed: u64, tag: u64, counts: &[usize], f: F) -> Vec<(f64, f64)>
    where
        F: Fn(usize, &[f64]) -> f64 + Sync,
    {
        (0..self.strata.len())
            .into_par_iter()
            .map(|s| {
                let count = counts[s].max(2);
                let mut rng = rng::stream(seed, &[tag, s as u64]);
                let mut buf = vec![0.0; self.n + 1];
                let g = |l: &[f64]| f(s, l);
                let (mut mean, mut m2) = (0.0, 0.0);
                for i in 0..count {
                    let x = self.observe(s, &mut rng, &mut buf, &g);
                    let d = x - mean;
                    mean += d / (i + 1) as f64;
                    m2 += d * (x - mean);
                }
                let var = m2 / (count - 1) as f64;
                (mean, var / count as f64)
            })
            .collect()
    }

    fn shell_weight(&self, s: usize, integrand: &Integrand) -> f64 {
        match self.strata[s] {
            Stratum::Core => self.probs[s],
            Stratum::Shell { vertex, level } => {
                if level == self.levels {
                    self.probs[s] * integrand.tail_multiplier(vertex)
                } else {
                    self.probs[s]
                }
            }
        }
    }

    /// Pilot run on `k` followed by Neyman allocation of the remaining budget.
    pub fn for_simplex(k: &GeodesicSimplex, budget: u64, seed: u64) -> Result<Self, GeomError> {
        Self::for_simplex_with(k, &[], budget, seed, DEFAULT_LEVELS)
    }

    /// As [`SamplingPlan::for_simplex`], shelling also every vertex that is
    /// (near-)ideal in one of `companions`.
    pub fn for_simplex_with(
        k: &GeodesicSimplex,
        companions: &[&GeodesicSimplex],
        budget: u64,
        seed: u64,
        levels: usize,
    ) -> Result<Self, GeomError> {
        let integrand = Integrand::new(k)?;
        let n = integrand.n;
        let mut shelled: Vec<bool> = (0..=n).map(|i| integrand.near_ideal(i)).collect();
        for c in companions {
            let ci = Integrand::new(c)?;
            if ci.n != n {
                return Err(GeomError::DimensionMismatch { expected: n, got: ci.n });
            }
            for (i, s) in shelled.iter_mut().enumerate() {
                *s |= ci.near_ideal(i);
            }
        }
        let levels = levels.max(1);
        let (strata, probs) = Self::layout(n, shelled.clone(), levels);
        let count = strata.len() as u64;
        let pilot = (budget / (4 * count)).clamp(4, 64) as usize;
        let floor = (budget / (16 * count)).clamp(2, 16) as usize;
        let mut plan = SamplingPlan {
            n,
            levels,
            shelled,
            strata,
            probs,
            alloc: Vec::new(),
            pilot_samples: 0,
        };
        let pilot_counts = vec![pilot; plan.strata.len()];
        let weights: Vec<f64> = (0..plan.strata.len()).map(|s| plan.shell_weight(s, &integrand)).collect();
        let pilot_stats = plan.run(seed, 0x9170, &pilot_counts, |s, l| weights[s] * integrand.density(l));
        plan.pilot_samples = plan
            .strata
            .iter()
            .map(|s| match s {
                Stratum::Core => pilot as u64,
                Stratum::Shell { .. } => 2 * pilot as u64,
            })
            .sum();
        let sds: Vec<f64> = pilot_stats
            .iter()
            .map(|&(_, var_mean)| (var_mean * pilot as f64).sqrt())
            .collect();
        let total_sd: f64 = sds.iter().sum();
        let remaining = budget.saturating_sub(plan.pilot_samples).max(count * floor as u64) as f64;
        plan.alloc = plan
            .strata
            .iter()
            .zip(&sds)
            .map(|(s, &sd)| {
                let share = if total_sd > 0.0 {
                    sd / total_sd
                } else {
                    1.0 / count as f64
                };
                let per_obs = match s {
                    Stratum::Core => 1.0,
                    Stratum::Shell { .. } => 2.0,
                };
                ((remaining * share / per_obs) as usize).max(floor)
            })
            .collect();
        Ok(plan)
    }

    fn check(&self, integrand: &Integrand) -> Result<(), GeomError> {
        if integrand.n != self.n {
            return Err(GeomError::DimensionMismatch {
                expected: self.n,
                got: integrand.n,
            });
        }
        if let Some(i) = (0..=self.n).find(|&i| integrand.ideal[i] && !self.shelled[i]) {
            return Err(GeomError::Precondition(format!(
                "sampling plan has no shells around ideal vertex {i}"
            )));
        }
        Ok(())
    }

    fn tails(&self, integrand: &Integrand) -> f64 {
        (0..=self.n)
            .filter(|&i| self.shelled[i])
            .map(|i| integrand.finite_tail(i, self.levels))
            .sum()
    }

    /// Volume of `k` with this plan.
    pub fn estimate(&self, k: &GeodesicSimplex, seed: u64) -> Result<VolumeEstimate, GeomError> {
        let integrand = Integrand::new(k)?;
        self.check(&integrand)?;
        let weights: Vec<f64> = (0..self.strata.len()).map(|s| self.shell_weight(s, &integrand)).collect();
        let stats = self.run(seed, 0x3a1e, &self.alloc, |s, l| weights[s] * integrand.density(l));
        let value = stats.iter().map(|s| s.0).sum::<f64>() + self.tails(&integrand);
        let var: f64 = stats.iter().map(|s| s.1).sum();
        Ok(VolumeEstimate {
            value,
            std_error: var.sqrt(),
            samples: self.samples() + self.pilot_samples,
            method: VolumeMethod::MonteCarlo,
        })
    }

    /// `vol(k) - vol(reference)` on common sample points.
    pub fn estimate_difference(
        &self,
        k: &GeodesicSimplex,
        reference: &GeodesicSimplex,
        seed: u64,
    ) -> Result<VolumeDifference, GeomError> {
        let a = Integrand::new(k)?;
        let b = Integrand::new(reference)?;
        self.check(&a)?;
        self.check(&b)?;
        let wa: Vec<f64> = (0..self.strata.len()).map(|s| self.shell_weight(s, &a)).collect();
        let wb: Vec<f64> = (0..self.strata.len()).map(|s| self.shell_weight(s, &b)).collect();
        let stats = self.run(seed, 0x3a1e, &self.alloc, |s, l| wa[s] * a.density(l) - wb[s] * b.density(l));
        let difference = stats.iter().map(|s| s.0).sum::<f64>() + self.tails(&a) - self.tails(&b);
        let var: f64 = stats.iter().map(|s| s.1).sum();
        Ok(VolumeDifference {
            difference,
            std_error: var.sqrt(),
            samples: self.samples(),
        })
    }
}

/// Volume of a full-dimensional geodesic simplex by stratified Monte Carlo.
pub fn simplex_volume(k: &GeodesicSimplex, budget: u64, seed: u64) -> Result<VolumeEstimate, GeomError> {
    let plan = SamplingPlan::for_simplex(k, budget, seed)?;
    plan.estimate(k, seed)
}

/// `v_n`, the volume of the regular ideal `n`-simplex.
pub fn ideal_regular_volume(n: usize, budget: u64, seed: u64) -> Result<VolumeEstimate, GeomError> {
    match n {
        2 => Ok(VolumeEstimate::exact(PI, VolumeMethod::ClosedForm)),
        3 => Ok(VolumeEstimate::exact(3.0 * lobachevsky(PI / 3.0), VolumeMethod::Series)),
        4..=8 => simplex_volume(&regular_ideal_simplex(n, n)?, budget, seed),
        _ => Err(GeomError::Precondition(format!("v_n is available for 2 <= n <= 8, got {n}"))),
    }
}

// ---------------------------------------------------------------------------
// Maximality

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub n: usize,
    pub v_n: VolumeEstimate,
    pub trials: usize,
    pub rejected_degenerate: usize,
    pub max_volume: VolumeEstimate,
    /// Gram matrix of the vertex representatives of the largest sample.
    pub max_gram: Vec<Vec<f64>>,
    /// Samples whose estimate exceeds `v_n`.
    pub exceeding: usize,
    /// Samples exceeding `v_n` by more than three combined standard errors.
    pub significant_exceeding: usize,
}

fn random_vertex(n: usize, rng: &mut ChaCha8Rng) -> ProjectivePoint {
    use rand_distr::StandardNormal;
    let dir: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let unit: Vec<f64> = dir.iter().map(|x| x / len).collect();
    if rng.random::<bool>() {
        lift_klein(&unit, true).expect("unit vector")
    } else {
        let radius = rng.random::<f64>().powf(1.0 / n as f64) * 0.999_999;
        let x: Vec<f64> = unit.iter().map(|u| u * radius).collect();
        lift_klein(&x, false).expect("inside the ball")
    }
}

/// Random simplex with each vertex ideal or finite (uniform in the Klein ball) with probability ½.
pub fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> GeodesicSimplex {
    GeodesicSimplex::new((0..=n).map(|_| random_vertex(n, rng)).collect()).expect("n + 1 vertices in H^n")
}

/// Sample random nondegenerate simplices and compare their volumes with `v_n`.
pub fn maximality_probe(
    n: usize,
    trials: usize,
    budget_per_trial: u64,
    seed: u64,
) -> Result<MaximalityReport, GeomError> {
    if !(2..=5).contains(&n) {
        return Err(GeomError::Precondition(format!("maximality probe supports 2 <= n <= 5, got {n}")));
    }
    let v_n = ideal_regular_volume(n, DEFAULT_BUDGET, rng::derive_seed(seed, &[0x7e6])) ?;
    let mut rng = rng::stream(seed, &[0x9b0e]);
    let mut samples = Vec::with_capacity(trials);
    let mut rejected = 0;
    while samples.len() < trials {
        let k = random_simplex(n, &mut rng);
        if is_degenerate(&k) {
            rejected += 1;
            continue;
        }
        samples.push(k);
    }
    let estimates: Vec<VolumeEstimate> = samples
        .par_iter()
        .enumerate()
        .map(|(i, k)| simplex_volume(k, budget_per_trial, rng::derive_seed(seed, &[0x51, i as u64])))
        .collect::<Result<_, _>>()?;
    let (imax, max_volume) = estimates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .map(|(i, e)| (i, *e))
        .ok_or_else(|| GeomError::Precondition("no trials".into()))?;
    let gram = samples[imax].gram();
    let exceeding = estimates.iter().filter(|e| e.value > v_n.value).count();
    let significant_exceeding = estimates
        .iter()
        .filter(|e| e.value - v_n.value > 3.0 * (e.std_error.powi(2) + v_n.std_error.powi(2)).sqrt())
        .count();
    Ok(MaximalityReport {
        n,
        v_n,
        trials,
        rejected_degenerate: rejected,
        max_volume,
        max_gram: (0..gram.nrows()).map(|i| gram.row(i).iter().copied().collect()).collect(),
        exceeding,
        significant_exceeding,
    })
}

/// Move each ideal vertex of `k` along the sphere (in Klein coordinates) by
/// `scale * directions[i]`, reprojecting onto the sphere. Finite vertices move
/// inside the ball.
pub fn perturb_ideal_simplex(
    k: &GeodesicSimplex,
    directions: &[Vec<f64>],
    scale: f64,
) -> Result<GeodesicSimplex, GeomError> {
    let verts = k
        .vertices()
        .iter()
        .zip(directions)
        .map(|(v, d)| {
            let x = to_klein(v);
            let moved: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + scale * b).collect();
            if v.is_ideal() {
                let len = moved.iter().map(|c| c * c).sum::<f64>().sqrt();
                let unit: Vec<f64> = moved.iter().map(|c| c / len).collect();
                lift_klein(&unit, true)
            } else {
                lift_klein(&moved, false)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    GeodesicSimplex::new(verts)
}

/// Volume deficits `v_n - vol(K_s)` along a fixed random perturbation of the
/// regular ideal simplex, on common samples.
pub fn perturbation_deficits(
    n: usize,
    scales: &[f64],
    budget: u64,
    seed: u64,
) -> Result<Vec<(f64, VolumeDifference)>, GeomError> {
    let reg = regular_ideal_simplex(n, n)?;
    let mut rng = rng::stream(seed, &[0xde7]);
    let dirs: Vec<Vec<f64>> = (0..=n)
        .map(|_| {
            use rand_distr::StandardNormal;
            (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
        })
        .collect();
    let plan = SamplingPlan::for_simplex(&reg, budget, seed)?;
    scales
        .iter()
        .map(|&s| {
            let k = perturb_ideal_simplex(&reg, &dirs, s)?;
            let d = plan.estimate_difference(&reg, &k, seed)?;
            Ok((s, d))
        })
        .collect()
}
