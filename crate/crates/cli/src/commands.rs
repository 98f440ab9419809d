use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Subcommand};
use hypstab_core::complex::{
    build_cover, cell_counts, components, covering_degree, filling_bound, fundamental_cycle, inequality_dashboard,
    is_monotone_decreasing, jsj_cover_bound, links, orientability, random_admissible_spec, seifert_bound,
    torus_cover_spec, validate, verify_cycle, x_characteristic, FIGURE_EIGHT_FILLING,
};
use hypstab_core::constants::{alpha_k, constants_row, lemma_brackets, ConstantsReport, SearchConfig};
use hypstab_core::minkowski::lift_klein_with_tolerance;
use hypstab_core::simplex::{is_degenerate, regular_ideal_simplex};
use hypstab_core::volume::{ideal_regular_volume, lobachevsky, simplex_volume, VolumeEstimate};
use hypstab_core::{rng, Certification, CoverSpec, Fixture, GeodesicSimplex, Triangulation};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Deserialize;

use crate::report::{Cell, Report, Table};
use crate::RunConfig;

use Certification::{Exact, Formula};

fn flagged(v: f64, f: Certification) -> Cell {
    Cell::num(v, f)
}

fn volume_cells(e: &VolumeEstimate) -> (Cell, Cell) {
    let f = Certification::of_volume(e.method);
    (flagged(e.value, f), flagged(e.std_error, f))
}

// ---------------------------------------------------------------------------
// constants

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    /// Samples per volume difference in the ε search; independent of --samples.
    #[arg(long)]
    pub search_samples: Option<u64>,
    /// Write the audit trails as JSON to this file.
    #[arg(long)]
    pub trail: Option<PathBuf>,
}

pub fn constants(cfg: &RunConfig, a: &ConstantsArgs) -> Result<Report> {
    ensure!(
        4 <= a.n_min && a.n_min <= a.n_max && a.n_max <= 8,
        "need 4 <= n-min <= n-max <= 8, got {}..{}",
        a.n_min,
        a.n_max
    );
    let search = match a.search_samples {
        Some(b) => SearchConfig::with_budget(b),
        None => SearchConfig::default(),
    };
    let results: Vec<(usize, Result<ConstantsReport, String>)> = (a.n_min..=a.n_max)
        .into_par_iter()
        .map(|n| (n, constants_row(n, cfg.samples, &search, cfg.seed).map_err(|e| e.to_string())))
        .collect();

    let mut report = Report::new("constants");
    let mut alpha = Table::new("dihedral angles", &["n", "alpha_n", "k_n", "2pi/alpha_n"]);
    for n in a.n_min..=a.n_max {
        let r = alpha_k(n)?;
        alpha.push(vec![Cell::exact(n), flagged(r.alpha, Exact), Cell::exact(r.k), flagged(r.ratio, Exact)]);
    }
    report.tables.push(alpha);

    let mut table = Table::new(
        "constants",
        &["n", "v_n", "v_n_std_error", "delta_n", "eta_n", "a_n", "eps_n", "C_n"],
    );
    let mut trails = Vec::new();
    for (n, r) in results {
        let rep = match r {
            Ok(rep) => rep,
            Err(e) => {
                report.errors.push(format!("n={n}: {e}"));
                continue;
            }
        };
        let row = &rep.row;
        let (v, ve) = volume_cells(&row.v_n.value);
        table.push(vec![
            Cell::exact(n),
            v,
            ve,
            flagged(row.delta_n.value, row.delta_n.flag),
            flagged(row.eta_n.value, row.eta_n.flag),
            flagged(row.a_n.value, row.a_n.flag),
            flagged(row.eps_n.value, row.eps_n.flag),
            flagged(row.c_n.value, row.c_n.flag),
        ]);
        report.check(format!("C_{n} < 1"), row.c_n.value < 1.0);
        report.check(format!("eps_{n} > 0"), row.eps_n.value > 0.0);
        let reg = regular_ideal_simplex(n, n)?;
        let br = lemma_brackets(&reg, row.a_n.value, row.delta_n.value)?;
        report.check(format!("regular ideal {n}-simplex satisfies both brackets"), !br.violated());
        report.check(
            format!("audit trail n={n} replays"),
            rep.trail.replay() == (row.eps_n.value, rep.trail.bisection.clone()),
        );
        report.check(format!("monotonicity audit n={n}"), rep.trail.monotonicity.passed);
        trails.push(rep.trail);
    }
    report.tables.push(table);
    report.notes.push(format!(
        "eps search: {} restarts, {} samples per volume difference, seed {}",
        search.restarts, search.volume_budget, cfg.seed
    ));
    if let Some(p) = &a.trail {
        std::fs::write(p, serde_json::to_string_pretty(&trails)?).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// volume

#[derive(Debug, Args)]
pub struct VolumeArgs {
    /// Simplex file: {"dim": n, "vertices": [{"x": [...], "ideal": bool}, ...]}.
    #[arg(required_unless_present = "regular_ideal", conflicts_with = "regular_ideal")]
    pub file: Option<PathBuf>,
    /// Regular ideal n-simplex, 2 <= n <= 8.
    #[arg(long)]
    pub regular_ideal: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KleinVertex {
    x: Vec<f64>,
    #[serde(default)]
    ideal: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexFile {
    dim: usize,
    vertices: Vec<KleinVertex>,
}

pub fn parse_simplex(text: &str, tol: f64) -> Result<GeodesicSimplex> {
    let f: SimplexFile = serde_json::from_str(text)
        .map_err(|e| anyhow::anyhow!("parse error at line {}, column {}: {e}", e.line(), e.column()))?;
    ensure!(f.dim >= 2, "dim must be at least 2, got {}", f.dim);
    ensure!(
        f.vertices.len() == f.dim + 1,
        "a {}-simplex needs {} vertices, got {}",
        f.dim,
        f.dim + 1,
        f.vertices.len()
    );
    let verts = f
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            ensure!(v.x.len() == f.dim, "vertex {i}: expected {} coordinates, got {}", f.dim, v.x.len());
            lift_klein_with_tolerance(&v.x, v.ideal, tol).with_context(|| format!("vertex {i}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let k = GeodesicSimplex::new(verts)?;
    if is_degenerate(&k) {
        bail!("degenerate simplex");
    }
    Ok(k)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn volume(cfg: &RunConfig, a: &VolumeArgs) -> Result<Report> {
    let mut report = Report::new("volume");
    let mut t = Table::pairs("volume");
    match (a.regular_ideal, &a.file) {
        (Some(n), _) => {
            ensure!((2..=8).contains(&n), "regular ideal simplex supported for 2 <= n <= 8, got {n}");
            t.pair("n", Cell::exact(n));
            if n == 3 {
                let k = regular_ideal_simplex(3, 3)?;
                let mc = simplex_volume(&k, cfg.samples, cfg.seed)?;
                let series = 3.0 * lobachevsky(std::f64::consts::PI / 3.0);
                let (v, e) = volume_cells(&mc);
                t.pair("volume", v).pair("std_error", e);
                t.pair("samples", Cell::num(mc.samples, Certification::MonteCarlo));
                t.pair("series value 3 L(pi/3)", flagged(series, Certification::Series));
                report.check("Monte Carlo within 3 sigma of the series value", (mc.value - series).abs() <= 3.0 * mc.std_error);
            } else {
                let e = ideal_regular_volume(n, cfg.samples, cfg.seed)?;
                let (v, s) = volume_cells(&e);
                t.pair("volume", v).pair("std_error", s);
                t.pair("samples", Cell::num(e.samples, Certification::of_volume(e.method)));
            }
        }
        (None, Some(path)) => {
            let k = parse_simplex(&read(path)?, cfg.tolerance).with_context(|| format!("{}", path.display()))?;
            let e = simplex_volume(&k, cfg.samples, cfg.seed)?;
            let (v, s) = volume_cells(&e);
            t.pair("n", Cell::exact(k.dim()));
            t.pair("volume", v).pair("std_error", s);
            t.pair("samples", Cell::num(e.samples, Certification::of_volume(e.method)));
        }
        (None, None) => bail!("give a simplex file or --regular-ideal n"),
    }
    report.tables.push(t);
    Ok(report)
}

// ---------------------------------------------------------------------------
// triangulation

#[derive(Debug, Args)]
pub struct Input {
    /// Triangulation in the JSON wire format.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    pub file: Option<PathBuf>,
    /// Built-in: sphere, torus, klein-bottle, boundary-4-simplex, figure-eight.
    #[arg(long)]
    pub fixture: Option<String>,
}

impl Input {
    fn load(&self) -> Result<Triangulation> {
        match (&self.fixture, &self.file) {
            (Some(name), _) => Ok(name.parse::<Fixture>()?.triangulation()),
            (None, Some(path)) => Triangulation::from_json(&read(path)?).with_context(|| format!("{}", path.display())),
            (None, None) => bail!("give a triangulation file or --fixture"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum TriangulationCommand {
    /// Validation, cell counts, orientability, links.
    Info(Input),
    /// Fundamental cycle and its boundary.
    Cycle {
        #[command(flatten)]
        input: Input,
        /// List every term of the cycle.
        #[arg(long)]
        terms: bool,
    },
    /// Build a finite cover.
    Cover {
        #[command(flatten)]
        input: Input,
        /// Cover specification: {"degree": d, "perms": {"pairing-id": [one-line permutation of 1..d]}}.
        #[arg(long, group = "source")]
        spec: Option<PathBuf>,
        /// Random admissible cover from translations of Z/m1 x Z/m2, written M1xM2.
        #[arg(long, group = "source")]
        random: Option<String>,
        /// Cover of the torus fixture for the subgroup x(Z x Z).
        #[arg(long, group = "source")]
        characteristic: Option<i64>,
        #[arg(long, default_value_t = 1000)]
        max_tries: usize,
        /// Write the cover triangulation to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Instance-level inequality checks.
    Dashboard(Input),
}

fn f_vector_table(title: &str, f: &[u64]) -> Table {
    let mut t = Table::new(title, &["i", "f_i"]);
    for (i, &c) in f.iter().enumerate() {
        t.push(vec![Cell::exact(i), Cell::exact(c)]);
    }
    t
}

pub fn triangulation(cfg: &RunConfig, c: &TriangulationCommand) -> Result<Report> {
    match c {
        TriangulationCommand::Info(input) => info(&input.load()?),
        TriangulationCommand::Cycle { input, terms } => cycle(&input.load()?, *terms),
        TriangulationCommand::Cover {
            input,
            spec,
            random,
            characteristic,
            max_tries,
            emit,
        } => {
            let base = input.load()?;
            let spec = if let Some(p) = spec {
                CoverSpec::from_json(&read(p)?)?
            } else if let Some(r) = random {
                let (m1, m2) = r
                    .split_once('x')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .with_context(|| format!("--random expects M1xM2, got {r:?}"))?;
                let mut g = rng::stream(cfg.seed, &[0xc0e5]);
                random_admissible_spec(&base, m1, m2, &mut g, *max_tries)?
            } else if let Some(x) = characteristic {
                ensure!(
                    Fixture::identify(&base) == Some(Fixture::Torus),
                    "--characteristic applies to the torus fixture only"
                );
                torus_cover_spec(&x_characteristic(*x)?)
            } else {
                bail!("give one of --spec, --random, --characteristic");
            };
            cover(&base, &spec, emit.as_deref())
        }
        TriangulationCommand::Dashboard(input) => dashboard(&input.load()?),
    }
}

fn info(t: &Triangulation) -> Result<Report> {
    let mut report = Report::new("triangulation info");
    let v = validate(t);
    let cells = cell_counts(t);
    let o = orientability(t);
    let mut s = Table::pairs("summary");
    s.pair("dim", Cell::exact(v.dim))
        .pair("simplices", Cell::exact(v.simplices))
        .pair("pairings", Cell::exact(v.pairings))
        .pair("closed", Cell::text(v.closed.to_string()))
        .pair("boundary facets", Cell::exact(v.boundary.len()))
        .pair("euler characteristic", Cell::exact(cells.euler_characteristic))
        .pair("orientable", Cell::text(o.orientable.to_string()))
        .pair("components", Cell::exact(components(t).len()));
    if let Some(f) = Fixture::identify(t) {
        s.pair("fixture", Cell::text(f.name()));
    }
    report.tables.push(s);
    report.tables.push(f_vector_table("f-vector", &cells.f));
    if let Some(cycle) = o.violating_cycle {
        report.notes.push(format!(
            "orientation fails along simplices {cycle:?} at gluing {:?}",
            o.violating_slot.unwrap_or_default()
        ));
    }
    if t.dim() == 3 {
        match links(t) {
            Ok(l) => {
                let mut vt = Table::new("vertex links", &["vertex", "triangles", "edges", "vertices", "chi"]);
                for x in &l.vertex_links {
                    vt.push(vec![
                        Cell::exact(x.vertex),
                        Cell::exact(x.triangles),
                        Cell::exact(x.edges),
                        Cell::exact(x.vertices),
                        Cell::exact(x.euler_characteristic),
                    ]);
                }
                let mut et = Table::new("edge valences", &["edge", "valence"]);
                for e in &l.edge_valences {
                    et.push(vec![Cell::exact(e.edge), Cell::exact(e.valence)]);
                }
                report.tables.push(vt);
                report.tables.push(et);
            }
            Err(e) => report.notes.push(format!("links unavailable: {e}")),
        }
    }
    if Fixture::identify(t) == Some(Fixture::FigureEight) {
        report.notes.push("raw pseudo-complex chi counts the cusp cone point; the complement has chi 0".into());
    }
    Ok(report)
}

fn cycle(t: &Triangulation, list_terms: bool) -> Result<Report> {
    let mut report = Report::new("triangulation cycle");
    let z = fundamental_cycle(t)?;
    let ok = verify_cycle(t, &z);
    let l1 = z.l1_norm();
    let simplices = t.simplex_count();
    let mut s = Table::pairs("fundamental cycle");
    s.pair("simplices", Cell::exact(simplices))
        .pair("terms", Cell::exact(z.terms().len()))
        .pair("L1 norm", Cell::exact(l1.to_string()))
        .pair("L1 norm (decimal)", Cell::exact(l1.to_f64().unwrap_or(f64::NAN)));
    report.tables.push(s);
    if list_terms {
        let mut tt = Table::new("terms", &["simplex", "vertex order", "coefficient"]);
        for ((simplex, order), c) in z.terms() {
            let order = order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            tt.push(vec![Cell::exact(*simplex), Cell::text(order), Cell::exact(c.to_string())]);
        }
        report.tables.push(tt);
    }
    report.check("boundary of z is exactly zero", ok);
    let bound_ok = l1 <= num_rational::BigRational::from_integer((simplices as i64).into());
    report.check("L1 norm at most the simplex count", bound_ok);
    if ok {
        report.notes.push(format!("cycle verified, L1 = {l1}"));
    }
    Ok(report)
}

fn cover(base: &Triangulation, spec: &CoverSpec, emit: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("triangulation cover");
    let c = build_cover(base, spec)?;
    let d = spec.degree;
    let (bc, cc) = (cell_counts(base), cell_counts(&c));
    let mut s = Table::pairs("cover");
    s.pair("degree", Cell::exact(d))
        .pair("base simplices", Cell::exact(base.simplex_count()))
        .pair("cover simplices", Cell::exact(c.simplex_count()))
        .pair("base chi", Cell::exact(bc.euler_characteristic))
        .pair("cover chi", Cell::exact(cc.euler_characteristic))
        .pair("components", Cell::exact(components(&c).len()));
    report.tables.push(s);
    let mut f = Table::new("f-vectors", &["i", "base", "cover", "d * base"]);
    for i in 0..bc.f.len() {
        f.push(vec![
            Cell::exact(i),
            Cell::exact(bc.f[i]),
            Cell::exact(cc.f[i]),
            Cell::exact(bc.f[i] * d as u64),
        ]);
    }
    report.tables.push(f);
    let projection = c.cover_projection().context("cover lost its projection labels")?;
    report.check("projection is a covering map of the stated degree", covering_degree(&c, base, &projection) == Some(d));
    report.check("simplex count multiplies by d", c.simplex_count() == d * base.simplex_count());
    if cc.f[0] != bc.f[0] * d as u64 {
        report
            .notes
            .push("vertex count does not scale: some vertex link is not a sphere (cusp or cone point)".into());
    }
    if let Some(p) = emit {
        std::fs::write(p, c.to_json()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(report)
}

fn dashboard(t: &Triangulation) -> Result<Report> {
    let mut report = Report::new("triangulation dashboard");
    let d = inequality_dashboard(t)?;
    let mut s = Table::pairs("inequalities");
    s.pair("dim", Cell::exact(d.dim))
        .pair("simplex count t (upper bound for sigma)", Cell::exact(d.simplices))
        .pair("chi", Cell::exact(d.euler_characteristic))
        .pair("2^(n+1) t", Cell::exact(d.chi_bound))
        .pair("cycle L1 norm", Cell::exact(d.cycle_l1.clone()))
        .pair("components", Cell::exact(d.components));
    if let Some(c) = &d.cover {
        s.pair("cover degree", Cell::exact(c.degree))
            .pair("normalized count t/d", Cell::exact(c.normalized_count));
    }
    report.tables.push(s);
    if !d.annotations.is_empty() {
        let mut a = Table::new("known values", &["quantity", "value", "note"]);
        for x in &d.annotations {
            a.push(vec![Cell::text(&x.quantity), Cell::num(x.value, x.flag), Cell::text(&x.note)]);
        }
        report.tables.push(a);
    }
    report.check("|chi| <= 2^(n+1) t", d.chi_bound_holds);
    report.check("fundamental cycle has zero boundary", d.cycle_verified);
    report.check("L1 norm of the cycle <= t", d.l1_bound_holds);
    Ok(report)
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// (e + 6 d chi_- + 6) / d^2 over a list of degrees.
    Seifert {
        #[arg(long, default_value_t = 0)]
        e: u64,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
        d: Vec<u64>,
    },
    /// d v_A + 2hn (v_B + v_D) + h v_C with d = h n^2.
    Jsj {
        #[arg(long)]
        va: u64,
        #[arg(long)]
        vb: u64,
        #[arg(long)]
        vc: u64,
        #[arg(long)]
        vd: u64,
        #[arg(long, default_value_t = 1)]
        h: u64,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
        n: Vec<u64>,
    },
    /// v_A + (v_B + v_D)/n.
    Filling {
        #[arg(long, required_unless_present = "preset")]
        va: Option<u64>,
        #[arg(long, default_value_t = 0)]
        vb: u64,
        #[arg(long, default_value_t = 0)]
        vd: u64,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
        n: Vec<u64>,
        /// Built-in counts; only figure-eight is available.
        #[arg(long, conflicts_with = "va")]
        preset: Option<String>,
    },
}

pub fn bounds(c: &BoundsCommand) -> Result<Report> {
    match c {
        BoundsCommand::Seifert { e, chi, d } => {
            let mut report = Report::new("bounds seifert");
            let terms = seifert_bound(*e, *chi, d)?;
            let mut t = Table::new("seifert bound", &["d", "bound"]);
            for s in &terms {
                t.push(vec![Cell::exact(s.d), flagged(s.value, Formula)]);
            }
            report.tables.push(t);
            report.notes.push("limit as d -> infinity: 0".into());
            report.check("sequence is non-increasing in d", is_monotone_decreasing(&terms));
            Ok(report)
        }
        BoundsCommand::Jsj { va, vb, vc, vd, h, n } => {
            let mut report = Report::new("bounds jsj");
            let mut t = Table::new("jsj cover bound", &["n", "d", "bound", "bound/d"]);
            let mut limit = *va as f64;
            for &n in n {
                let b = jsj_cover_bound(*va, *vb, *vc, *vd, *h, n)?;
                t.push(vec![Cell::exact(n), Cell::exact(b.degree), Cell::num(b.bound, Formula), flagged(b.normalized, Formula)]);
                limit = b.limit;
            }
            report.tables.push(t);
            let mut l = Table::pairs("limit");
            l.pair("n -> infinity", flagged(limit, Formula));
            report.tables.push(l);
            Ok(report)
        }
        BoundsCommand::Filling { va, vb, vd, n, preset } => {
            let mut report = Report::new("bounds filling");
            let (va, vb, vd) = match preset.as_deref() {
                Some("figure-eight") => FIGURE_EIGHT_FILLING,
                Some(p) => bail!("unknown preset {p:?}; available: figure-eight"),
                None => (va.expect("required by clap"), *vb, *vd),
            };
            let mut t = Table::new("filling bound", &["n", "bound/d"]);
            let mut limit = va as f64;
            for &n in n {
                let b = filling_bound(va, vb, vd, n)?;
                t.push(vec![Cell::exact(n), flagged(b.normalized, Formula)]);
                limit = b.limit;
            }
            report.tables.push(t);
            let mut l = Table::pairs("limit");
            l.pair("n -> infinity", flagged(limit, Formula));
            report.tables.push(l);
            if preset.is_some() {
                report.notes.push("c(N) = 2 for the figure-eight knot complement N".into());
            }
            Ok(report)
        }
    }
}
