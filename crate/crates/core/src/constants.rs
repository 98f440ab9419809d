//! Dimension constants: dihedral angles `α_n`, `k_n`, the clearance radius
//! `δ_n`, `η_n`, the empirical pair `(a_n, ε_n)` and the final constant `C_n`,
//! plus exact evaluation of the volume-budget inequalities.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::GeomError;
use crate::minkowski::to_klein;
use crate::rng;
use crate::simplex::{dihedral_angles, is_degenerate, min_face_clearance, regular_ideal_simplex, GeodesicSimplex};
use crate::volume::{
    ball_volume, ideal_regular_volume, perturb_ideal_simplex, SamplingPlan, VolumeEstimate, VolumeMethod,
    DEFAULT_BUDGET, DEFAULT_LEVELS,
};

/// How a reported number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Exact,
    Series,
    Formula,
    MonteCarlo,
    EmpiricalSearch,
}

impl Certification {
    pub fn as_str(self) -> &'static str {
        match self {
            Certification::Exact => "exact",
            Certification::Series => "series",
            Certification::Formula => "formula",
            Certification::MonteCarlo => "monte-carlo",
            Certification::EmpiricalSearch => "empirical-search",
        }
    }

    pub fn of_volume(method: VolumeMethod) -> Self {
        match method {
            VolumeMethod::ClosedForm => Certification::Exact,
            VolumeMethod::Series => Certification::Series,
            VolumeMethod::MonteCarlo => Certification::MonteCarlo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certified<T> {
    pub value: T,
    pub flag: Certification,
}

impl<T> Certified<T> {
    pub fn new(value: T, flag: Certification) -> Self {
        Self { value, flag }
    }
}

// ---------------------------------------------------------------------------
// Dihedral angles of the regular ideal simplex

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRow {
    pub n: usize,
    pub alpha: f64,
    pub k: u32,
    /// `2π/α_n`.
    pub ratio: f64,
    /// True only when `2π/α_n` is an integer (n = 3).
    pub integer_ratio: bool,
}

/// `α_n = arccos(1/(n-1))`; for n = 3 this is exactly π/3.
pub fn alpha_n(n: usize) -> f64 {
    if n == 3 {
        PI / 3.0
    } else {
        (1.0 / (n as f64 - 1.0)).acos()
    }
}

/// Margin for the strict bracketing `k α < 2π < (k+1) α`.
const BRACKET_MARGIN: f64 = 1e-14;

pub fn alpha_k(n: usize) -> Result<AlphaRow, GeomError> {
    if n < 3 {
        return Err(GeomError::Precondition(format!("alpha_n needs n >= 3, got {n}")));
    }
    let alpha = alpha_n(n);
    let ratio = 2.0 * PI / alpha;
    if n == 3 {
        return Ok(AlphaRow {
            n,
            alpha,
            k: 6,
            ratio: 6.0,
            integer_ratio: true,
        });
    }
    let k = ratio.floor() as u32;
    let kf = k as f64;
    if !(kf * alpha < 2.0 * PI - BRACKET_MARGIN && (kf + 1.0) * alpha > 2.0 * PI + BRACKET_MARGIN) {
        return Err(GeomError::Precondition(format!("bracketing k_n alpha_n < 2pi < (k_n+1) alpha_n fails at n = {n}")));
    }
    Ok(AlphaRow {
        n,
        alpha,
        k,
        ratio,
        integer_ratio: false,
    })
}

pub fn alpha_k_table(n_min: usize, n_max: usize) -> Result<Vec<AlphaRow>, GeomError> {
    if n_min < 3 || n_max < n_min {
        return Err(GeomError::Precondition(format!("need 3 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    (n_min..=n_max).map(alpha_k).collect()
}

/// `a_n`: half the relative margin of `α_n` inside `(2π/(k_n+1), 2π/k_n)`.
pub fn a_n(n: usize) -> Result<f64, GeomError> {
    if n < 4 {
        return Err(GeomError::Precondition(format!("a_n needs n >= 4, got {n}")));
    }
    let row = alpha_k(n)?;
    let k = row.k as f64;
    let low = row.alpha / (2.0 * PI / (k + 1.0)) - 1.0;
    let high = 1.0 - row.alpha / (2.0 * PI / k);
    Ok(0.5 * low.min(high))
}

/// A third of the minimal face clearance of the regular ideal `n`-simplex.
pub fn delta_n(n: usize) -> Result<f64, GeomError> {
    if n < 3 {
        return Err(GeomError::Precondition(format!("delta_n needs n >= 3, got {n}")));
    }
    Ok(min_face_clearance(&regular_ideal_simplex(n, n)?)? / 3.0)
}

// ---------------------------------------------------------------------------
// Angle and clearance brackets

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub min_angle: f64,
    pub max_angle: f64,
    pub clearance: f64,
    pub angle_low: bool,
    pub angle_high: bool,
    pub clearance_violated: bool,
}

impl BracketReport {
    pub fn violated(&self) -> bool {
        self.angle_low || self.angle_high || self.clearance_violated
    }
}

/// Check `K` against the angle bracket `2π/(k+1)(1+a) < α < 2π/k (1-a)` and
/// the clearance bound `d(inc E, E') > 2δ`.
pub fn lemma_brackets(k: &GeodesicSimplex, a: f64, delta: f64) -> Result<BracketReport, GeomError> {
    let n = k.dim();
    let row = alpha_k(n)?;
    let kf = row.k as f64;
    let lo = 2.0 * PI / (kf + 1.0) * (1.0 + a);
    let hi = 2.0 * PI / kf * (1.0 - a);
    let angles = dihedral_angles(k)?;
    let min_angle = angles.iter().map(|x| x.2).fold(f64::INFINITY, f64::min);
    let max_angle = angles.iter().map(|x| x.2).fold(f64::NEG_INFINITY, f64::max);
    let clearance = min_face_clearance(k)?;
    Ok(BracketReport {
        min_angle,
        max_angle,
        clearance,
        angle_low: min_angle <= lo,
        angle_high: max_angle >= hi,
        clearance_violated: clearance <= 2.0 * delta,
    })
}

// ---------------------------------------------------------------------------
// Empirical (a_n, ε_n)

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub bisection_depth: usize,
    pub refine_candidates: usize,
    pub refine_steps: usize,
    /// Restarts of the monotonicity re-run.
    pub audit_restarts: usize,
    /// Samples per volume-difference evaluation.
    pub volume_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            bisection_depth: 20,
            refine_candidates: 8,
            refine_steps: 6,
            audit_restarts: 16,
            volume_budget: 200_000,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(volume_budget: u64) -> Self {
        Self {
            volume_budget,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPhase {
    Search,
    Refine,
    Audit,
}

/// A perturbed regular simplex violating one of the brackets, with its
/// volume deficit `v_n - vol(K)` on common samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub phase: SearchPhase,
    pub restart: usize,
    pub step: usize,
    pub scale: f64,
    pub brackets: BracketReport,
    pub deficit: f64,
    pub std_error: f64,
}

impl Counterexample {
    /// Refutes `ε` if `vol + 3σ ≥ (1-ε) v_n`.
    pub fn refutes(&self, eps: f64, v_n: f64) -> bool {
        self.deficit - 3.0 * self.std_error <= eps * v_n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub eps: f64,
    /// Index into the trail's records of the first refuting counterexample.
    pub refuted_by: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityAudit {
    pub eps_half: f64,
    pub searches: usize,
    pub counterexamples: usize,
    pub refuting: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditTrail {
    pub n: usize,
    pub seed: u64,
    pub a_n: f64,
    pub delta_n: f64,
    pub v_n: f64,
    pub config: SearchConfig,
    pub regular: BracketReport,
    pub records: Vec<Counterexample>,
    pub bisection: Vec<BisectionStep>,
    pub monotonicity: MonotonicityAudit,
}

fn bisect(records: &[Counterexample], v_n: f64, depth: usize) -> (f64, Vec<BisectionStep>) {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut steps = Vec::with_capacity(depth);
    for _ in 0..depth {
        let eps = 0.5 * (lo + hi);
        let refuted_by = records.iter().position(|r| r.refutes(eps, v_n));
        if refuted_by.is_some() {
            hi = eps;
        } else {
            lo = eps;
        }
        steps.push(BisectionStep { eps, refuted_by });
    }
    (lo, steps)
}

impl AuditTrail {
    /// Recompute the bisection from the stored counterexamples.
    pub fn replay(&self) -> (f64, Vec<BisectionStep>) {
        let search: Vec<Counterexample> = self
            .records
            .iter()
            .filter(|r| r.phase != SearchPhase::Audit)
            .cloned()
            .collect();
        bisect(&search, self.v_n, self.config.bisection_depth)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AEpsEstimate {
    pub a_n: f64,
    pub eps_n: f64,
    pub trail: AuditTrail,
}

struct SearchContext<'a> {
    reg: &'a GeodesicSimplex,
    unit: Vec<Vec<f64>>,
    motions: Vec<Vec<f64>>,
    plan: SamplingPlan,
    a: f64,
    delta: f64,
    seed: u64,
}

fn random_directions(n: usize, seed: u64, path: &[u64]) -> Vec<Vec<f64>> {
    let mut g = rng::stream(seed, path);
    (0..=n)
        .map(|_| (0..n).map(|_| StandardNormal.sample(&mut g)).collect())
        .collect()
}

/// Orthonormal basis of the vertex motions induced by infinitesimal isometries
/// (rotations and boosts) of an ideal simplex with unit vertices `u`.
fn isometry_motions(u: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = u[0].len();
    let mut fields = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            fields.push(
                u.iter()
                    .flat_map(|x| (0..n).map(move |c| if c == p { x[q] } else if c == q { -x[p] } else { 0.0 }))
                    .collect::<Vec<f64>>(),
            );
        }
        fields.push(
            u.iter()
                .flat_map(|x| (0..n).map(move |c| f64::from(c == p) - x[p] * x[c]))
                .collect(),
        );
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut f in fields {
        for b in &basis {
            let d: f64 = f.iter().zip(b).map(|(x, y)| x * y).sum();
            f.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let len = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-9 {
            basis.push(f.into_iter().map(|x| x / len).collect());
        }
    }
    basis
}

/// Tangential part of `dirs` with the isometry motions removed, unit norm.
fn shape_directions(u: &[Vec<f64>], motions: &[Vec<f64>], dirs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = u[0].len();
    let mut flat: Vec<f64> = dirs
        .iter()
        .zip(u)
        .flat_map(|(d, x)| {
            let r: f64 = d.iter().zip(x).map(|(a, b)| a * b).sum();
            d.iter().zip(x).map(move |(a, b)| a - r * b).collect::<Vec<_>>()
        })
        .collect();
    for b in motions {
        let d: f64 = flat.iter().zip(b).map(|(x, y)| x * y).sum();
        flat.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
    }
    normalize_dirs(flat.chunks(n).map(<[f64]>::to_vec).collect())
}

fn normalize_dirs(dirs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let norm = dirs.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    dirs.into_iter()
        .map(|d| d.into_iter().map(|x| x / norm).collect())
        .collect()
}

impl SearchContext<'_> {
    fn probe(&self, dirs: &[Vec<f64>], s: f64) -> Option<(GeodesicSimplex, BracketReport)> {
        let k = perturb_ideal_simplex(self.reg, dirs, s).ok()?;
        if is_degenerate(&k) {
            return None;
        }
        let b = lemma_brackets(&k, self.a, self.delta).ok()?;
        Some((k, b))
    }

    /// First scale along the ray where a bracket fails.
    fn ray(&self, dirs: &[Vec<f64>]) -> Option<(f64, GeodesicSimplex, BracketReport)> {
        let mut ok = 0.0;
        let mut s = 1e-3;
        while s <= 2.0 {
            let (k, b) = self.probe(dirs, s)?;
            if b.violated() {
                let (mut lo, mut hi, mut best) = (ok, s, (k, b));
                for _ in 0..40 {
                    let mid = 0.5 * (lo + hi);
                    match self.probe(dirs, mid) {
                        Some((k, b)) if b.violated() => {
                            hi = mid;
                            best = (k, b);
                        }
                        Some(_) => lo = mid,
                        None => break,
                    }
                }
                return Some((hi, best.0, best.1));
            }
            ok = s;
            s *= 1.2;
        }
        None
    }

    fn evaluate(&self, dirs: &[Vec<f64>], phase: SearchPhase, restart: usize, step: usize) -> Option<Counterexample> {
        let (scale, k, brackets) = self.ray(dirs)?;
        let eval_seed = rng::derive_seed(self.seed, &[0xe7a1, phase as u64, restart as u64, step as u64]);
        let d = self.plan.estimate_difference(self.reg, &k, eval_seed).ok()?;
        Some(Counterexample {
            phase,
            restart,
            step,
            scale,
            brackets,
            deficit: d.difference,
            std_error: d.std_error,
        })
    }

    fn search(&self, phase: SearchPhase, restarts: usize) -> Vec<(Vec<Vec<f64>>, Counterexample)> {
        let n = self.reg.dim();
        (0..restarts)
            .into_par_iter()
            .filter_map(|r| {
                let raw = random_directions(n, self.seed, &[0xd1, phase as u64, r as u64]);
                let dirs = shape_directions(&self.unit, &self.motions, raw);
                let c = self.evaluate(&dirs, phase, r, 0)?;
                Some((dirs, c))
            })
            .collect()
    }

    /// Greedy descent on the estimated deficit over ray directions.
    fn refine(&self, start: &(Vec<Vec<f64>>, Counterexample), steps: usize) -> Vec<Counterexample> {
        let n = self.reg.dim();
        let (mut dirs, mut best) = start.clone();
        let mut out = Vec::new();
        for step in 1..=steps {
            let size = 0.5 * 0.7f64.powi(step as i32 - 1);
            let noise = random_directions(n, self.seed, &[0xd2, best.restart as u64, step as u64]);
            let trial: Vec<Vec<f64>> = dirs
                .iter()
                .zip(&noise)
                .map(|(d, e)| d.iter().zip(e).map(|(x, y)| x + size * y).collect())
                .collect();
            let trial = shape_directions(&self.unit, &self.motions, trial);
            if let Some(c) = self.evaluate(&trial, SearchPhase::Refine, best.restart, step) {
                if c.deficit < best.deficit {
                    dirs = trial;
                    best = c.clone();
                }
                out.push(c);
            }
        }
        out
    }
}

/// `a_n` from the angle margin and `ε_n` by bisection over counterexamples
/// found by a seeded multi-start search around the regular ideal simplex.
pub fn estimate_a_eps(n: usize, search_budget: u64, seed: u64) -> Result<AEpsEstimate, GeomError> {
    let v_n = ideal_regular_volume(n, DEFAULT_BUDGET, seed)?;
    estimate_a_eps_with(n, &SearchConfig::with_budget(search_budget), seed, v_n.value, delta_n(n)?)
}

pub fn estimate_a_eps_with(
    n: usize,
    config: &SearchConfig,
    seed: u64,
    v_n: f64,
    delta: f64,
) -> Result<AEpsEstimate, GeomError> {
    let a = a_n(n)?;
    let reg = regular_ideal_simplex(n, n)?;
    let regular = lemma_brackets(&reg, a, delta)?;
    if regular.violated() {
        return Err(GeomError::Precondition(format!("regular ideal simplex violates the brackets at n = {n}")));
    }
    let plan = SamplingPlan::for_simplex_with(&reg, &[], config.volume_budget, rng::derive_seed(seed, &[0x91a]), DEFAULT_LEVELS)?;
    let unit: Vec<Vec<f64>> = reg.vertices().iter().map(to_klein).collect();
    let motions = isometry_motions(&unit);
    let ctx = SearchContext {
        reg: &reg,
        unit,
        motions,
        plan,
        a,
        delta,
        seed,
    };

    let found = ctx.search(SearchPhase::Search, config.restarts);
    let mut ranked: Vec<&(Vec<Vec<f64>>, Counterexample)> = found.iter().collect();
    ranked.sort_by(|x, y| x.1.deficit.total_cmp(&y.1.deficit).then(x.1.restart.cmp(&y.1.restart)));
    let refined: Vec<Counterexample> = ranked
        .iter()
        .take(config.refine_candidates)
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|start| ctx.refine(start, config.refine_steps))
        .collect();
    let mut records: Vec<Counterexample> = found.into_iter().map(|(_, c)| c).collect();
    records.extend(refined);

    let (eps, bisection) = bisect(&records, v_n, config.bisection_depth);
    if eps <= 0.0 {
        return Err(GeomError::SearchExhausted(format!(
            "no admissible eps_n at n = {n}: every bisection candidate was refuted"
        )));
    }

    let audit: Vec<Counterexample> = ctx
        .search(SearchPhase::Audit, config.audit_restarts)
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    let eps_half = 0.5 * eps;
    let refuting: Vec<usize> = audit
        .iter()
        .enumerate()
        .filter(|(_, c)| c.refutes(eps_half, v_n))
        .map(|(i, _)| records.len() + i)
        .collect();
    let monotonicity = MonotonicityAudit {
        eps_half,
        searches: config.audit_restarts,
        counterexamples: audit.len(),
        passed: refuting.is_empty(),
        refuting,
    };
    records.extend(audit);

    Ok(AEpsEstimate {
        a_n: a,
        eps_n: eps,
        trail: AuditTrail {
            n,
            seed,
            a_n: a,
            delta_n: delta,
            v_n,
            config: *config,
            regular,
            records,
            bisection,
            monotonicity,
        },
    })
}

// ---------------------------------------------------------------------------
// C_n

/// `C_n = max{1 - ε/12, 1 - η/(3v), 1 - aη/(2v)}`.
pub fn compute_cn(eps: f64, eta: f64, a: f64, v_n: f64) -> Result<f64, GeomError> {
    for (name, x) in [("eps", eps), ("eta", eta), ("a", a), ("v_n", v_n)] {
        if !(x > 0.0) || !x.is_finite() {
            return Err(GeomError::Precondition(format!("{name} must be positive and finite, got {x}")));
        }
    }
    if eta >= 3.0 * v_n {
        return Err(GeomError::Precondition(format!("eta = {eta} must be below 3 v_n = {}", 3.0 * v_n)));
    }
    Ok((1.0 - eps / 12.0)
        .max(1.0 - eta / (3.0 * v_n))
        .max(1.0 - a * eta / (2.0 * v_n)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub n: usize,
    pub v_n: Certified<VolumeEstimate>,
    pub alpha_n: Certified<f64>,
    pub k_n: Certified<u32>,
    pub delta_n: Certified<f64>,
    pub eta_n: Certified<f64>,
    pub a_n: Certified<f64>,
    pub eps_n: Certified<f64>,
    pub c_n: Certified<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub row: ConstantsRow,
    pub trail: AuditTrail,
}

/// The full pipeline for one dimension `n ≥ 4`.
pub fn constants_row(n: usize, volume_budget: u64, config: &SearchConfig, seed: u64) -> Result<ConstantsReport, GeomError> {
    if n < 4 {
        return Err(GeomError::Precondition(format!("constants row needs n >= 4, got {n}")));
    }
    let ak = alpha_k(n)?;
    let delta = delta_n(n)?;
    let eta = ball_volume(n, delta)?;
    let v = ideal_regular_volume(n, volume_budget, rng::derive_seed(seed, &[0x70])) ?;
    let est = estimate_a_eps_with(n, config, seed, v.value, delta)?;
    let c = compute_cn(est.eps_n, eta, est.a_n, v.value)?;
    Ok(ConstantsReport {
        row: ConstantsRow {
            n,
            v_n: Certified::new(v, Certification::of_volume(v.method)),
            alpha_n: Certified::new(ak.alpha, Certification::Exact),
            k_n: Certified::new(ak.k, Certification::Exact),
            delta_n: Certified::new(delta, Certification::Formula),
            eta_n: Certified::new(eta, Certification::Formula),
            a_n: Certified::new(est.a_n, Certification::Formula),
            eps_n: Certified::new(est.eps_n, Certification::EmpiricalSearch),
            c_n: Certified::new(c, Certification::EmpiricalSearch),
        },
        trail: est.trail,
    })
}

pub const CSV_HEADER: [&str; 18] = [
    "n", "v_n", "v_n_std_error", "v_n_flag", "alpha_n", "alpha_n_flag", "k_n", "k_n_flag", "delta_n", "delta_n_flag",
    "eta_n", "eta_n_flag", "a_n", "a_n_flag", "eps_n", "eps_n_flag", "c_n", "c_n_flag",
];

pub fn rows_to_csv(rows: &[ConstantsRow]) -> Result<String, GeomError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| GeomError::Precondition(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let f = |c: &Certified<f64>| [c.value.to_string(), c.flag.as_str().to_string()];
        let mut rec = vec![
            r.n.to_string(),
            r.v_n.value.value.to_string(),
            r.v_n.value.std_error.to_string(),
            r.v_n.flag.as_str().to_string(),
        ];
        rec.extend(f(&r.alpha_n));
        rec.extend([r.k_n.value.to_string(), r.k_n.flag.as_str().to_string()]);
        for c in [&r.delta_n, &r.eta_n, &r.a_n, &r.eps_n, &r.c_n] {
            rec.extend(f(c));
        }
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| GeomError::Precondition(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_to_json(rows: &[ConstantsRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

// ---------------------------------------------------------------------------
// Budget inequalities

/// Counts of a triangulation of a closed hyperbolic manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub t: u64,
    pub t_b: u64,
    pub t_s: u64,
    pub e_f: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaVerdict {
    pub name: &'static str,
    pub hypothesis: bool,
    /// Left-hand side produced by the lemma's argument.
    #[serde(serialize_with = "ser_rational")]
    pub chain: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
    /// `chain <= bound` (for `N >= 5t`: `N >= 5t`).
    pub holds: bool,
    /// `chain == bound` exactly.
    pub tight: bool,
}

impl LemmaVerdict {
    pub fn chain_f64(&self) -> f64 {
        self.chain.to_f64().unwrap_or(f64::NAN)
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetVerdicts {
    #[serde(serialize_with = "ser_rational")]
    pub m1: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub m2: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub m3: BigRational,
    /// `t v + η (e_f - (1+a) N/(k+1))`, equal to `m1 + m2 + m3`.
    #[serde(serialize_with = "ser_rational")]
    pub total_bound: BigRational,
    pub lemmas: Vec<LemmaVerdict>,
    /// `t v_n C_n`.
    #[serde(serialize_with = "ser_rational")]
    pub volume_bound: BigRational,
    /// Some applicable lemma bound is at most `t v_n C_n`.
    pub within_cn: bool,
}

impl BudgetVerdicts {
    pub fn lemma(&self, name: &str) -> Option<&LemmaVerdict> {
        self.lemmas.iter().find(|l| l.name == name)
    }
}

fn rat(x: f64) -> Result<BigRational, GeomError> {
    BigRational::from_float(x).ok_or_else(|| GeomError::Precondition(format!("non-finite constant {x}")))
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Evaluate the budget lemmas on `report` with the constants of `row`, in exact arithmetic.
pub fn budget_check(report: &BudgetReport, row: &ConstantsRow) -> Result<BudgetVerdicts, GeomError> {
    let BudgetReport { t, t_b, t_s, e_f, big_n } = *report;
    if t != t_b + t_s {
        return Err(GeomError::Precondition(format!("inconsistent counts: t = {t} but t_b + t_s = {}", t_b + t_s)));
    }
    let k1 = row.k_n.value as u64 + 1;
    if big_n < k1 * e_f {
        return Err(GeomError::Precondition(format!(
            "inconsistent counts: every full face has at least k_n + 1 = {k1} big simplices, so N >= {} but N = {big_n}",
            k1 * e_f
        )));
    }
    let v = rat(row.v_n.value.value)?;
    let eps = rat(row.eps_n.value)?;
    let eta = rat(row.eta_n.value)?;
    let a = rat(row.a_n.value)?;
    let c = rat(row.c_n.value)?;
    let one = BigRational::one();
    let (tq, tbq, tsq, efq, nq, k1q) = (int(t), int(t_b), int(t_s), int(e_f), int(big_n), int(k1));

    let m1 = &efq * &eta;
    let m2 = &tbq * &v - &eta * (&one + &a) * &nq / &k1q;
    let m3 = &tsq * &v;
    let total_bound = &tq * &v + &eta * (&efq - (&one + &a) * &nq / &k1q);
    debug_assert_eq!(&m1 + &m2 + &m3, total_bound);

    let mut lemmas = Vec::new();
    let small_many = 12 * t_s >= t;
    let small_few = 12 * t_s <= t;

    let chain = &v * (&tbq + (&one - &eps) * &tsq);
    let bound = (&one - &eps / int(12)) * &tq * &v;
    lemmas.push(LemmaVerdict {
        name: "many-small",
        hypothesis: small_many,
        holds: chain <= bound,
        tight: chain == bound,
        chain,
        bound,
    });

    let n = row.n as u64;
    let bound = int(5 * t);
    lemmas.push(LemmaVerdict {
        name: "big-count",
        hypothesis: small_few && n >= 4,
        holds: nq >= bound,
        tight: nq == bound,
        chain: nq.clone(),
        bound,
    });

    // uses (1+a)/(k+1) >= 1/6, valid for k_n <= 5
    let chain = &tq * &v + &eta * (&efq - &nq / int(6));
    let bound = &tq * &v * (&one - &eta / (int(3) * &v));
    lemmas.push(LemmaVerdict {
        name: "few-full-faces",
        hypothesis: small_few && 2 * e_f <= t && k1 <= 6,
        holds: total_bound <= chain && chain <= bound,
        tight: chain == bound,
        chain,
        bound,
    });

    let chain = total_bound.clone();
    let bound = &tq * &v * (&one - &a * &eta / (int(2) * &v));
    lemmas.push(LemmaVerdict {
        name: "many-full-faces",
        hypothesis: small_few && 2 * e_f >= t,
        holds: chain <= bound,
        tight: chain == bound,
        chain,
        bound,
    });

    let volume_bound = &tq * &v * &c;
    let within_cn = lemmas
        .iter()
        .filter(|l| l.hypothesis && l.name != "big-count")
        .any(|l| l.bound <= volume_bound);
    Ok(BudgetVerdicts {
        m1,
        m2,
        m3,
        total_bound,
        lemmas,
        volume_bound,
        within_cn,
    })
}

/// A row with exactly representable values, for exercising the budget arithmetic.
pub fn synthetic_row(n: usize, eps: f64, eta: f64, a: f64, v_n: f64) -> Result<ConstantsRow, GeomError> {
    let ak = alpha_k(n)?;
    let c = compute_cn(eps, eta, a, v_n)?;
    let mc = VolumeEstimate::exact(v_n, VolumeMethod::ClosedForm);
    Ok(ConstantsRow {
        n,
        v_n: Certified::new(mc, Certification::Exact),
        alpha_n: Certified::new(ak.alpha, Certification::Exact),
        k_n: Certified::new(ak.k, Certification::Exact),
        delta_n: Certified::new(f64::NAN, Certification::Formula),
        eta_n: Certified::new(eta, Certification::Formula),
        a_n: Certified::new(a, Certification::Formula),
        eps_n: Certified::new(eps, Certification::EmpiricalSearch),
        c_n: Certified::new(c, Certification::Formula),
    })
}
