mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{field, poly, qc, TOWER_Q2};
use qctower::field::numtheory::FactorBudget;
use qctower::pgl2::{apply_pgl2, enumerate_invariants, find_c};
use qctower::qc::{is_qc_periodic, iteration_bound};
use qctower::{
    build_graph, build_tower, enumerate_irreducibles, random_construct, recursive_construct, transform_probability,
    Method, Role,
};

#[test]
fn recursive_termination_over_small_seeds() {
    let budget = FactorBudget::default();
    let f5 = field(5);
    let c5 = find_c(&f5, 3).unwrap();
    let cases = [(2u64, 1i64, vec![3usize, 4, 5]), (5, 4, vec![3])];
    assert_eq!(c5, f5.from_int(4));
    for (q, c, degrees) in cases {
        let ctx = field(q);
        let qc = qc(q, c);
        for n in degrees {
            let bound = iteration_bound(n, &qc).unwrap();
            for f in enumerate_irreducibles(&ctx, n).unwrap() {
                let r = recursive_construct(&f, &qc, &budget).unwrap();
                assert_eq!(r.method, Method::Recursive);
                assert!(r.iterations_used <= bound as u64, "{f}");
                assert_eq!(r.result().degree(), Some(3 * n));
                assert!(r.result().is_irreducible().unwrap());
                // A bound-length run only happens from a periodic seed.
                if r.splits > 1 && r.iterations_used == bound as u64 && bound > 0 {
                    assert!(is_qc_periodic(&f, &qc, &budget).unwrap(), "{f}");
                }
            }
        }
    }
}

#[test]
fn recursive_from_periodic_quartic_goes_through_its_neighbour() {
    let f2 = field(2);
    let qc = qc(2, 1);
    let r = recursive_construct(&poly(&f2, "x^4 + x + 1"), &qc, &FactorBudget::default()).unwrap();
    assert_eq!(r.bound, Some(0));
    assert_eq!(r.iterations_used, 0);
    assert_eq!(r.polys(Role::Branch)[0].to_string(), "x^4 + x^3 + 1");
    assert_eq!(r.result().to_string(), TOWER_Q2[1]);
}

#[test]
fn recursive_rejects_composite_order_and_bad_seeds() {
    let f5 = field(5);
    let budget = FactorBudget::default();
    let err = recursive_construct(&poly(&f5, "x^3 + 4x + 3"), &qc(5, 3), &budget).unwrap_err();
    assert_eq!(err.category(), "invalid-input");
    let f2 = field(2);
    let err = recursive_construct(&poly(&f2, "x^4 + 1"), &qc(2, 1), &budget).unwrap_err();
    assert_eq!(err.category(), "invalid-input");
}

#[test]
fn tower_levels_are_invariant() {
    let f2 = field(2);
    let qc = qc(2, 1);
    let r = build_tower(&poly(&f2, TOWER_Q2[0]), &qc, 3, true).unwrap();
    for (i, s) in r.steps.iter().enumerate().skip(1) {
        assert_eq!(s.degree, 4 * 3usize.pow(i as u32));
        assert_eq!(apply_pgl2(&qc.a_c(), &s.poly).unwrap(), s.poly);
    }
    let unverified = build_tower(&poly(&f2, TOWER_Q2[0]), &qc, 3, false).unwrap();
    assert_eq!(unverified.result(), r.result());
    assert_eq!(unverified.steps[2].irreducible, None);
}

#[test]
fn tower_refuses_when_first_transform_splits() {
    let f2 = field(2);
    let err = build_tower(&poly(&f2, "x^4 + x + 1"), &qc(2, 1), 2, true).unwrap_err();
    assert_eq!(err.category(), "invalid-input");
}

#[test]
fn random_quartics_over_f2() {
    let f2 = field(2);
    let qc = qc(2, 1);
    for seed in 0..20 {
        let r = random_construct(&f2, 4, &qc, &mut ChaCha8Rng::seed_from_u64(seed), 50).unwrap();
        assert_eq!(r.result().degree(), Some(12));
        // Only x^4 + x + 1 fails.
        assert_ne!(r.polys(Role::Seed)[0].to_string(), "x^4 + x + 1");
    }
}

#[test]
fn probability_matches_brute_force() {
    for (q, c, n) in [(2u64, 1i64, 3usize), (2, 1, 4), (2, 1, 5), (5, 3, 2), (5, 4, 3)] {
        let ctx = field(q);
        let qc = qc(q, c);
        let seeds = enumerate_irreducibles(&ctx, n).unwrap();
        let hits = seeds
            .iter()
            .filter(|f| qc.transform_monic(f).unwrap().is_irreducible().unwrap())
            .count();
        let r = transform_probability(n, &qc).unwrap();
        let brute = BigRational::new(BigInt::from(hits), BigInt::from(seeds.len()));
        assert_eq!(r.p, brute, "q={q} c={c} n={n}");
        let invariants = enumerate_invariants(&ctx, &qc.a_c(), qc.order() as usize * n, 1 << 24).unwrap();
        assert_eq!(r.invariants, invariants.len().to_string());
    }
}

#[test]
fn graph_on_cubics_matches_divisibility() {
    let f2 = field(2);
    let qc = qc(2, 1);
    let g = build_graph(&f2, 3, &qc, 1 << 20, &FactorBudget::default()).unwrap();
    assert_eq!(g.nodes.len(), 2);
    for (i, f) in g.nodes.iter().enumerate() {
        for (j, h) in g.nodes.iter().enumerate() {
            let divides = f.divides(&qc.transform(h).unwrap()).unwrap();
            assert_eq!(g.edges.contains(&(i, j)), divides, "{f} -> {h}");
        }
    }
}

#[test]
fn graph_children_of_non_periodic_nodes_are_non_periodic() {
    let budget = FactorBudget::default();
    for (q, c, n) in [(2u64, 1i64, 4usize), (2, 1, 5), (2, 1, 6), (5, 4, 3), (5, 3, 3)] {
        let g = build_graph(&field(q), n, &qc(q, c), 1 << 20, &budget).unwrap();
        for &(a, b) in &g.edges {
            // a divides b's transform, so a is a child of b.
            if g.periodic[a] {
                assert!(g.periodic[b], "q={q} n={n}");
            }
            if !g.periodic[b] {
                assert!(!g.periodic[a]);
            }
        }
        for i in 0..g.nodes.len() {
            assert!(g.edges.iter().filter(|e| e.0 == i).count() <= 1);
            if let Some(p) = g.periodic_by_order[i] {
                assert_eq!(p, g.periodic[i]);
            }
        }
    }
}
