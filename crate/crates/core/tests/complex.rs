use hypstab_core::complex::*;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn torus() -> Triangulation {
    Fixture::Torus.triangulation()
}

#[test]
fn fixture_cell_counts() {
    let cases = [
        (Fixture::Sphere, vec![3, 3, 2], 2),
        (Fixture::Torus, vec![1, 3, 2], 0),
        (Fixture::KleinBottle, vec![1, 3, 2], 0),
        (Fixture::Boundary4Simplex, vec![5, 10, 10, 5], 0),
        (Fixture::FigureEight, vec![1, 2, 4, 2], 1),
    ];
    for (f, fv, chi) in cases {
        let c = cell_counts(&f.triangulation());
        assert_eq!(c.f, fv, "{f}");
        assert_eq!(c.euler_characteristic, chi, "{f}");
    }
}

#[test]
fn orientability_of_fixtures() {
    for f in Fixture::ALL {
        let r = orientability(&f.triangulation());
        assert_eq!(r.orientable, f != Fixture::KleinBottle, "{f}");
    }
    let r = orientability(&Fixture::KleinBottle.triangulation());
    assert!(r.violating_cycle.is_some() && r.violating_slot.is_some());
    assert!(matches!(
        orient(&Fixture::KleinBottle.triangulation()),
        Err(hypstab_core::ComplexError::NotOrientable { .. })
    ));
}

#[test]
fn figure_eight_links() {
    let r = links(&Fixture::FigureEight.triangulation()).unwrap();
    assert_eq!(r.vertex_links.len(), 1);
    assert_eq!(r.vertex_links[0].euler_characteristic, 0);
    let v: Vec<usize> = r.edge_valences.iter().map(|e| e.valence).collect();
    assert_eq!(v, vec![6, 6]);
}

#[test]
fn sphere_boundary_links() {
    let r = links(&Fixture::Boundary4Simplex.triangulation()).unwrap();
    assert_eq!(r.vertex_links.len(), 5);
    assert!(r.vertex_links.iter().all(|l| l.euler_characteristic == 2));
    assert!(r.edge_valences.iter().all(|e| e.valence == 3));
}

#[test]
fn links_reject_bad_input() {
    assert!(links(&torus()).is_err());
    let open = Triangulation::new(3, 1, vec![]).unwrap();
    assert!(links(&open).is_err());
    // a tetrahedron folded onto itself reversing an edge
    let fold = Triangulation::new(
        3,
        1,
        vec![
            Pairing { a: [0, 0], b: [0, 1], map: [0, 2, 3].to_vec() },
            Pairing { a: [0, 2], b: [0, 3], map: [1, 0, 2].to_vec() },
        ],
    );
    if let Ok(t) = fold {
        assert!(links(&t).is_err());
    }
}

#[test]
fn validation_errors() {
    let reused = Triangulation::new(
        2,
        2,
        vec![
            Pairing { a: [0, 0], b: [1, 0], map: vec![1, 2] },
            Pairing { a: [0, 0], b: [1, 1], map: vec![0, 2] },
        ],
    );
    assert!(matches!(reused, Err(hypstab_core::ComplexError::SlotReused { .. })));
    let r = validate(&torus());
    assert!(r.closed && r.boundary.is_empty());
    let r = validate_json(Fixture::FigureEight.json()).unwrap();
    assert!(r.closed);
    assert_eq!(r.simplices, 2);
    assert!(Triangulation::from_json("{\"dim\": 2}").is_err());
}

#[test]
fn cycles_of_fixtures() {
    for f in Fixture::ALL.into_iter().filter(|&f| f != Fixture::KleinBottle) {
        let t = f.triangulation();
        let z = fundamental_cycle(&t).unwrap();
        assert!(verify_cycle(&t, &z), "{f}");
        assert!(z.l1_norm() <= BigRational::from_integer((t.simplex_count() as i64).into()));
    }
    assert!(fundamental_cycle(&Fixture::KleinBottle.triangulation()).is_err());
}

#[test]
fn open_complex_has_boundary() {
    let t = Triangulation::new(2, 1, vec![]).unwrap();
    let z = fundamental_cycle(&t).unwrap();
    assert!(!verify_cycle(&t, &z));
}

#[test]
fn torus_cycle_norm_is_two() {
    let z = fundamental_cycle(&torus()).unwrap();
    assert_eq!(z.l1_norm(), BigRational::from_integer(2.into()));
}

#[test]
fn trivial_cover_is_a_copy() {
    let t = Fixture::FigureEight.triangulation();
    let c = build_cover(&t, &CoverSpec::trivial(1)).unwrap();
    assert_eq!(c.pairings(), t.pairings());
    assert_eq!(c.simplex_count(), t.simplex_count());
}

#[test]
fn characteristic_torus_covers() {
    for x in [2i64, 3] {
        let s = x_characteristic(x).unwrap();
        let spec = torus_cover_spec(&s);
        assert_eq!(spec.degree as i64, x * x);
        let c = build_cover(&torus(), &spec).unwrap();
        assert_eq!(c.simplex_count() as i64, 2 * x * x);
        assert_eq!(cell_counts(&c).euler_characteristic, 0);
        let p = c.cover_projection().unwrap();
        assert_eq!(covering_degree(&c, &torus(), &p), Some((x * x) as usize));
        assert_eq!(components(&c).len(), 1);
    }
}

#[test]
fn branched_spec_rejected() {
    // non-commuting sheet swaps: the commutator around the vertex is nontrivial
    let mut spec = CoverSpec::trivial(3);
    spec.perms.insert(0, vec![2, 1, 3]);
    spec.perms.insert(1, vec![1, 3, 2]);
    match build_cover(&torus(), &spec) {
        Err(hypstab_core::ComplexError::BranchedCover { cycle, .. }) => assert!(!cycle.is_empty()),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn bad_spec_rejected() {
    let mut spec = CoverSpec::trivial(2);
    spec.perms.insert(0, vec![1, 1]);
    assert!(build_cover(&torus(), &spec).is_err());
    spec.perms.clear();
    spec.perms.insert(9, vec![1, 2]);
    assert!(build_cover(&torus(), &spec).is_err());
    assert!(CoverSpec::from_json("{\"degree\": 2, \"perms\": {\"0\": [2, 1]}}").is_ok());
}

#[test]
fn random_covers_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base = torus();
    let bc = cell_counts(&base);
    for i in 0..20 {
        let (m1, m2) = (1 + i % 3, 1 + i % 2);
        let spec = random_admissible_spec(&base, m1, m2, &mut rng, 100).unwrap();
        let c = build_cover(&base, &spec).unwrap();
        let d = spec.degree as u64;
        let cc = cell_counts(&c);
        assert_eq!(cc.f, bc.f.iter().map(|x| x * d).collect::<Vec<_>>());
        assert_eq!(cc.euler_characteristic, bc.euler_characteristic * d as i64);
        assert!(verify_cycle(&c, &fundamental_cycle(&c).unwrap()));
    }
}

#[test]
fn figure_eight_cover_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = Fixture::FigureEight.triangulation();
    let spec = random_admissible_spec(&base, 2, 1, &mut rng, 200).unwrap();
    let c = build_cover(&base, &spec).unwrap();
    assert!(verify_cycle(&c, &fundamental_cycle(&c).unwrap()));
    let f = cell_counts(&c).f;
    assert_eq!(f[1..], [4, 8, 4]);
    // the cusp vertex may lift to fewer than d vertices: its link is a torus, not a sphere
    assert!(f[0] <= 2);
    assert_eq!(validate(&c).closed, true);
}

#[test]
fn cover_of_cover() {
    let base = torus();
    let c1 = build_cover(&base, &torus_cover_spec(&x_characteristic(2).unwrap())).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = random_admissible_spec(&c1, 3, 1, &mut rng, 200).unwrap();
    let c2 = build_cover(&c1, &spec).unwrap();
    let p1 = c1.cover_projection().unwrap();
    let p2 = c2.cover_projection().unwrap();
    let composed: Vec<usize> = p2.iter().map(|&s| p1[s]).collect();
    assert_eq!(covering_degree(&c2, &base, &composed), Some(12));
}

#[test]
fn lattice_examples() {
    assert_eq!(index(&x_characteristic(3).unwrap()), 9);
    let s = LatticeSubgroup::new([2, 0], [1, 1]).unwrap();
    assert_eq!(s.index(), 2);
    assert!(contains(&s, &x_characteristic(2).unwrap()));
    assert!(LatticeSubgroup::new([1, 2], [2, 4]).is_err());
    assert!(x_characteristic(0).is_err());
    assert!(is_characteristic(&x_characteristic(4).unwrap()));
    assert!(!is_characteristic(&s));
}

#[test]
fn lattice_enumeration() {
    for m in 1..=12u64 {
        let subs = subgroups_of_index(m);
        assert_eq!(subs.len() as u64, sigma1(m));
        let xc = x_characteristic(m as i64).unwrap();
        assert!(subs.iter().all(|s| s.index() == m && contains(s, &xc)));
    }
}

#[test]
fn dashboard_sphere_and_figure_eight() {
    let d = inequality_dashboard(&Fixture::Sphere.triangulation()).unwrap();
    assert_eq!(d.simplices, 2);
    assert!(d.all_hold());
    assert_eq!(d.annotations[0].value, 2.0);
    let d = inequality_dashboard(&Fixture::FigureEight.triangulation()).unwrap();
    let vol = d.annotations.iter().find(|a| a.quantity == "vol(N)").unwrap();
    assert!((vol.value - 2.029883212819307).abs() < 1e-12);
    assert!(d.all_hold());
    let d = inequality_dashboard(&torus()).unwrap();
    assert_eq!(d.euler_characteristic, 0);
    assert_eq!(d.chi_bound, 16);
}

#[test]
fn dashboard_cover_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = random_admissible_spec(&torus(), 3, 2, &mut rng, 100).unwrap();
    let c = build_cover(&torus(), &spec).unwrap();
    let d = inequality_dashboard(&c).unwrap();
    let n = d.cover.unwrap();
    assert_eq!(n.degree, 6);
    assert_eq!(n.normalized_count, 2.0);
}

#[test]
fn wire_round_trip() {
    for f in Fixture::ALL {
        let t = f.triangulation();
        assert_eq!(Triangulation::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
    }
}
