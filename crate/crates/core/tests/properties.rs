use approx::assert_relative_eq;
use hypstab_core::complex::*;
use hypstab_core::constants::{alpha_k, compute_cn, estimate_a_eps_with, SearchConfig};
use hypstab_core::simplex::{
    barycentric, dihedral_angle, dihedral_angles, facet_duals, incenter_inradius, is_degenerate, orientation_sign,
    regular_ideal_simplex,
};
use hypstab_core::volume::{ball_volume, ideal_regular_volume, random_simplex, simplex_volume};
use hypstab_core::{distance, lift_klein, mink, random_isometry, rng, to_klein, GeodesicSimplex, MinkowskiVector};
use proptest::prelude::*;

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n + 1)
}

fn klein_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n).prop_filter_map("inside the ball", |x| {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        (r < 0.95).then_some(x)
    })
}

/// Random simplex with every dihedral angle at least 0.02 away from 0 and π.
/// Flatter samples have Gram inverses too ill-conditioned for 1e-8 comparisons.
fn nondegenerate(n: usize, seed: u64) -> GeodesicSimplex {
    let mut r = rng::stream(seed, &[n as u64]);
    loop {
        let k = random_simplex(n, &mut r);
        if is_degenerate(&k) || incenter_inradius(&k).is_err() {
            continue;
        }
        let shaped = dihedral_angles(&k)
            .map(|a| a.iter().all(|&(_, _, t)| t.min(std::f64::consts::PI - t) >= 0.02))
            .unwrap_or(false);
        if shaped {
            return k;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mink_symmetric_bilinear(u in vector(3), v in vector(3), w in vector(3), a in -3.0f64..3.0) {
        let (u, v, w) = (
            MinkowskiVector::new(u).unwrap(),
            MinkowskiVector::new(v).unwrap(),
            MinkowskiVector::new(w).unwrap(),
        );
        let uv = mink(&u, &v).unwrap();
        prop_assert!((uv - mink(&v, &u).unwrap()).abs() <= 1e-12 * uv.abs().max(1.0));
        let lhs = mink(&u.scale(a).add(&w), &v).unwrap();
        let rhs = a * uv + mink(&w, &v).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs()).max(1.0) * 10.0);
    }

    #[test]
    fn distance_is_a_symmetric_invariant(x in klein_point(3), y in klein_point(3), seed in any::<u64>()) {
        let p = lift_klein(&x, false).unwrap();
        let q = lift_klein(&y, false).unwrap();
        let d = distance(&p, &q);
        prop_assert!(d >= 0.0);
        prop_assert!((d - distance(&q, &p)).abs() < 1e-12);
        prop_assert!(distance(&p, &p) < 1e-7);
        let g = random_isometry(3, seed);
        prop_assert!((distance(&g.apply(&p), &g.apply(&q)) - d).abs() < 1e-9);
    }

    #[test]
    fn klein_round_trip(x in klein_point(4), ideal in any::<bool>()) {
        let x = if ideal {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            prop_assume!(r > 1e-3);
            x.iter().map(|c| c / r).collect()
        } else {
            x
        };
        let back = to_klein(&lift_klein(&x, ideal).unwrap());
        for (a, b) in x.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn facet_duals_and_incenter(n in 3usize..=5, seed in any::<u64>()) {
        let k = nondegenerate(n, seed);
        let duals = facet_duals(&k).unwrap();
        for (i, d) in duals.iter().enumerate() {
            prop_assert!((d.q.norm_sq() - 1.0).abs() < 1e-9);
            for (j, v) in k.vertices().iter().enumerate() {
                let p = mink(v.rep(), &d.q).unwrap();
                if i == j {
                    prop_assert!(p < 0.0);
                } else {
                    prop_assert!(p.abs() < 1e-9 * v.rep().time().max(1.0));
                }
            }
        }
        let inc = incenter_inradius(&k).unwrap();
        prop_assert!(barycentric(&k, &inc.incenter).unwrap().iter().all(|&c| c > 0.0));
    }

    #[test]
    fn incenter_and_angles_are_invariant(n in 3usize..=5, seed in any::<u64>(), gseed in any::<u64>()) {
        let k = nondegenerate(n, seed);
        let g = random_isometry(n, gseed);
        let gk = k.transform(&g);
        let (a, b) = (incenter_inradius(&k).unwrap(), incenter_inradius(&gk).unwrap());
        prop_assert!((a.inradius - b.inradius).abs() < 1e-8);
        prop_assert!(distance(&g.apply(&a.incenter), &b.incenter) < 1e-8);
        let angles = dihedral_angles(&k).unwrap();
        for (i, j, t) in angles {
            prop_assert!((dihedral_angle(&gk, i, j).unwrap() - t).abs() < 1e-8);
        }
    }

    #[test]
    fn orientation_alternates(n in 2usize..=5, seed in any::<u64>(), i in 0usize..6, j in 0usize..6) {
        let (i, j) = (i % (n + 1), j % (n + 1));
        prop_assume!(i != j);
        let k = nondegenerate(n, seed);
        let mut order: Vec<usize> = (0..=n).collect();
        order.swap(i, j);
        let s = orientation_sign(&k).unwrap();
        prop_assert!(s != 0);
        prop_assert_eq!(orientation_sign(&k.permuted(&order).unwrap()).unwrap(), -s);
        let mut verts = k.vertices().to_vec();
        verts[j] = verts[i].clone();
        prop_assert_eq!(orientation_sign(&GeodesicSimplex::new(verts).unwrap()).unwrap(), 0);
    }

    #[test]
    fn ball_volume_increasing(n in 2usize..=8, r in 0.01f64..3.0, dr in 0.01f64..1.0) {
        prop_assert!(ball_volume(n, r + dr).unwrap() > ball_volume(n, r).unwrap());
    }

    #[test]
    fn cn_formula_fidelity(eps in 1e-6f64..0.5, eta in 1e-6f64..0.5, a in 1e-6f64..0.5, v in 0.05f64..2.0) {
        prop_assume!(eta < v);
        let c = compute_cn(eps, eta, a, v).unwrap();
        prop_assert!(c < 1.0);
        prop_assert!(c >= 1.0 - eps / 12.0 - 1e-15);
        prop_assert!(c >= 1.0 - eta / (3.0 * v) - 1e-15);
        prop_assert!(c >= 1.0 - a * eta / (2.0 * v) - 1e-15);
    }

    #[test]
    fn covers_multiply_counts(m1 in 1usize..4, m2 in 1usize..3, seed in any::<u64>(), which in 0usize..3) {
        let base = [Fixture::Torus, Fixture::Sphere, Fixture::Boundary4Simplex][which].triangulation();
        let mut r = rng::stream(seed, &[]);
        let spec = random_admissible_spec(&base, m1, m2, &mut r, 500);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let cover = build_cover(&base, &spec).unwrap();
        let d = spec.degree as u64;
        let (bc, cc) = (cell_counts(&base), cell_counts(&cover));
        prop_assert_eq!(cover.simplex_count() as u64, d * base.simplex_count() as u64);
        prop_assert_eq!(cc.f, bc.f.iter().map(|x| x * d).collect::<Vec<_>>());
        prop_assert_eq!(cc.euler_characteristic, bc.euler_characteristic * d as i64);
        prop_assert!(verify_cycle(&cover, &fundamental_cycle(&cover).unwrap()));
        prop_assert_eq!(covering_degree(&cover, &base, &cover.cover_projection().unwrap()), Some(spec.degree));
    }

    #[test]
    fn hermite_form_is_canonical(u0 in -6i64..6, u1 in -6i64..6, v0 in -6i64..6, v1 in -6i64..6) {
        prop_assume!(u0 * v1 - u1 * v0 != 0);
        let s = LatticeSubgroup::new([u0, u1], [v0, v1]).unwrap();
        prop_assert_eq!(s.index(), (u0 * v1 - u1 * v0).unsigned_abs());
        prop_assert!(s.contains_vector([u0, u1]) && s.contains_vector([v0, v1]));
        let t = LatticeSubgroup::new([u0 + v0, u1 + v1], [v0, v1]).unwrap();
        prop_assert_eq!(s, t);
        prop_assert!(contains(&s, &x_characteristic(s.index() as i64).unwrap()));
    }
}

#[test]
fn regular_dihedral_angles() {
    for n in 3..=8 {
        let k = regular_ideal_simplex(n, n).unwrap();
        let want = (1.0 / (n as f64 - 1.0)).acos();
        for (_, _, a) in dihedral_angles(&k).unwrap() {
            assert_relative_eq!(a, want, epsilon = 1e-10);
        }
    }
}

#[test]
fn strict_bracketing() {
    use std::f64::consts::TAU;
    for n in 4..=8 {
        let r = alpha_k(n).unwrap();
        let k = r.k as f64;
        assert!(k * r.alpha < TAU - 1e-14 && TAU + 1e-14 < (k + 1.0) * r.alpha);
    }
}

#[test]
fn search_is_deterministic_and_replays() {
    let cfg = SearchConfig { restarts: 6, audit_restarts: 3, refine_candidates: 2, refine_steps: 2, ..SearchConfig::with_budget(20_000) };
    let v = ideal_regular_volume(4, 200_000, 1).unwrap().value;
    let delta = hypstab_core::constants::delta_n(4).unwrap();
    let a = estimate_a_eps_with(4, &cfg, 42, v, delta);
    let b = estimate_a_eps_with(4, &cfg, 42, v, delta);
    assert_eq!(a, b);
    if let Ok(est) = a {
        assert_eq!(est.trail.replay(), (est.eps_n, est.trail.bisection.clone()));
    }
}

fn within(a: (f64, f64), b: (f64, f64), sigmas: f64) -> bool {
    (a.0 - b.0).abs() <= sigmas * (a.1 * a.1 + b.1 * b.1).sqrt()
}

#[test]
fn volume_isometry_invariance() {
    for seed in 0..4u64 {
        let k = nondegenerate(3, seed);
        let gk = k.transform(&random_isometry(3, seed + 100));
        let a = simplex_volume(&k, 200_000, 1).unwrap();
        let b = simplex_volume(&gk, 200_000, 2).unwrap();
        assert!(within((a.value, a.std_error), (b.value, b.std_error), 3.0), "{a:?} {b:?}");
    }
}

#[test]
fn volume_subdivision_additivity() {
    for (n, seed) in [(3usize, 1u64), (3, 2), (4, 3)] {
        let k = nondegenerate(n, seed);
        let c = incenter_inradius(&k).unwrap().incenter;
        let whole = simplex_volume(&k, 400_000, 7).unwrap();
        let (mut sum, mut var) = (0.0, 0.0);
        for i in 0..=n {
            let mut verts = k.vertices().to_vec();
            verts[i] = c.clone();
            let part = simplex_volume(&GeodesicSimplex::new(verts).unwrap(), 400_000, 8 + i as u64).unwrap();
            sum += part.value;
            var += part.std_error * part.std_error;
        }
        assert!(within((whole.value, whole.std_error), (sum, var.sqrt()), 3.0), "n={n}: {} vs {sum}", whole.value);
    }
}

#[test]
fn regular_volumes_decrease() {
    // observed behaviour of v_n, not a theorem we rely on
    let v: Vec<_> = (3..=6).map(|n| ideal_regular_volume(n, 400_000, 3).unwrap()).collect();
    for w in v.windows(2) {
        assert!(w[1].value + 3.0 * w[1].std_error < w[0].value - 3.0 * w[0].std_error);
    }
}

#[test]
fn ball_volume_closed_forms() {
    use std::f64::consts::PI;
    for r in [0.1f64, 0.5, 1.0, 2.5] {
        let area = 2.0 * PI * (r.cosh() - 1.0);
        let vol = PI * ((2.0 * r).sinh() - 2.0 * r);
        assert_relative_eq!(ball_volume(2, r).unwrap(), area, max_relative = 1e-10);
        assert_relative_eq!(ball_volume(3, r).unwrap(), vol, max_relative = 1e-10);
    }
}
