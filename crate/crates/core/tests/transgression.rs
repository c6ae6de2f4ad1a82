mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::{random_cover, random_map, sphere, strip, two_simplices};
use deligne::cochain::{random_cochain, random_cocycle, DeligneCochain};
use deligne::complex::{ManifoldRequest, SimplicialComplex};
use deligne::cover::CoveredComplex;
use deligne::holonomy::local_action;
use deligne::scalar::{Exact, Scalar};
use deligne::transgression::{
    interior_perturbation, mod_two_pi_gap, restrict, transgress_p3_triple, transition_boundary, transition_general,
    transition_p2_boundary, TransgressionError,
};
use proptest::prelude::*;

fn zero_mod_2pi(x: &Exact) -> bool {
    mod_two_pi_gap(x, &Exact::zero()).is_zero()
}

/// On a path, the action of `D(b)` is `b(end) − b(start)` at the chosen
/// charts.
#[test]
fn path_action_of_a_coboundary_is_an_endpoint_difference() {
    let tops: Vec<Vec<usize>> = (0..4).map(|i| vec![i, i + 1]).collect();
    let k = SimplicialComplex::build(&tops, ManifoldRequest::WithBoundary).unwrap();
    let base = random_cover(k, 3, 17);
    let b = random_cochain::<Exact>(base.clone(), 0, 5);
    let c = DeligneCochain::coboundary_of(&b);
    for seed in 0..20 {
        let rho = random_map(&base, seed);
        let at = |label: usize| {
            let v = base.complex().find(&[label]).unwrap();
            b.get(0, v.index, &[rho.get(v)])
        };
        let oracle = at(4) - at(0);
        assert_eq!(local_action(&c, &rho).unwrap().raw, oracle);
    }
}

#[test]
fn equal_maps_give_zero() {
    for p in 1..=3 {
        let base = random_cover(two_simplices(p), 3, p as u64);
        let c = random_cocycle::<Exact>(base.clone(), p, 1);
        let rho = random_map(&base, 4);
        assert!(transition_general(&c, &rho, &rho).unwrap().raw.is_zero());
        assert!(transition_boundary(&c, &rho, &rho).unwrap().raw.is_zero());
    }
    let base = random_cover(two_simplices(3), 3, 2);
    let c = random_cocycle::<Exact>(base.clone(), 3, 2);
    let rho = random_map(&base, 1);
    let t = transgress_p3_triple(&c, &rho, &rho, &rho, None).unwrap();
    assert!(t.composition.is_zero());
    assert!(t.surface_value.is_zero());
    assert!(t.edge_formula.is_zero());
}

#[test]
fn closed_complexes_have_no_transition() {
    for n in 1..=3 {
        let base = random_cover(sphere(n), 3, 40 + n as u64);
        let c = random_cocycle::<Exact>(base.clone(), n, 3);
        let g = transition_general(&c, &random_map(&base, 1), &random_map(&base, 2)).unwrap();
        assert!(zero_mod_2pi(&g.raw));
        assert_eq!(g.census.boundary_flags, 0);
    }
}

#[test]
fn maps_agreeing_on_the_boundary_give_zero() {
    let base = random_cover(strip(5), 3, 8);
    let c = random_cocycle::<Exact>(base.clone(), 2, 8);
    let rho = random_map(&base, 0);
    for seed in 1..10 {
        let other = interior_perturbation(&base, &rho, seed).unwrap();
        let r = transition_p2_boundary(&c, &rho, &other).unwrap();
        assert!(r.value.raw.is_zero());
        assert!(zero_mod_2pi(&r.general.raw));
    }
}

#[test]
fn degree_is_checked() {
    let base = random_cover(two_simplices(2), 2, 0);
    let c = random_cocycle::<f64>(base.clone(), 2, 0);
    let rho = base.default_index_map();
    assert_eq!(
        transgress_p3_triple(&c, &rho, &rho, &rho, None).err(),
        Some(TransgressionError::Degree { expected: 3, found: 2 })
    );
    let base = random_cover(two_simplices(1), 2, 0);
    let c = random_cocycle::<f64>(base.clone(), 1, 0);
    let rho = base.default_index_map();
    assert_eq!(transition_p2_boundary(&c, &rho, &rho).err(), Some(TransgressionError::Degree { expected: 2, found: 1 }));
}

/// Two strips side by side: the transition of the union is the sum of the
/// transitions of the pieces.
#[test]
fn transition_is_additive_over_components() {
    let a = random_cocycle::<Exact>(random_cover(strip(4), 3, 1), 2, 1);
    let b = random_cocycle::<Exact>(random_cover(strip(3), 3, 2), 2, 2);
    let (u, relabel) = a.glue(&b, &BTreeMap::new(), 0.0).unwrap();
    let base = u.base().clone();
    let (r0, r1) = (random_map(&base, 10), random_map(&base, 11));
    let whole = transition_p2_boundary(&u, &r0, &r1).unwrap();

    let first = restrict(&u, a.base().complex().clone(), &[&r0, &r1]).unwrap();
    let second_complex = b.base().complex().relabel(&relabel).unwrap();
    let second = restrict(&u, second_complex, &[&r0, &r1]).unwrap();
    let mut sum = Exact::zero();
    for part in [first, second] {
        sum = sum + transition_p2_boundary(&part.cochain, &part.maps[0], &part.maps[1]).unwrap().value.raw;
    }
    assert_eq!(whole.value.raw, sum);
    assert!(whole.agreement == 0.0);
}

fn ball(p: usize) -> SimplicialComplex {
    if p == 2 {
        strip(4)
    } else {
        two_simplices(p)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn boundary_formula_matches_the_definition(p in 1usize..=3, sets in 1usize..=4, cs in 0u64..1000, seed in any::<u64>()) {
        let base = random_cover(ball(p), sets, cs);
        let c = random_cocycle::<Exact>(base.clone(), p, seed);
        let (r0, r1) = (random_map(&base, seed), random_map(&base, seed ^ 1));
        let g = transition_general(&c, &r0, &r1).unwrap().raw;
        let b = transition_boundary(&c, &r0, &r1).unwrap().raw;
        prop_assert!(zero_mod_2pi(&(g - b)));
    }

    #[test]
    fn transitions_telescope(p in 1usize..=3, cs in 0u64..1000, seed in any::<u64>()) {
        let base = random_cover(ball(p), 3, cs);
        let c = random_cocycle::<Exact>(base.clone(), p, seed);
        let r: Vec<_> = (0..3).map(|i| random_map(&base, seed.wrapping_add(i))).collect();
        let t = |i: usize, j: usize| transition_boundary(&c, &r[i], &r[j]).unwrap().raw;
        prop_assert!(zero_mod_2pi(&(t(0, 1) + t(1, 2) - t(0, 2))));
        prop_assert!(zero_mod_2pi(&(t(0, 1) + t(1, 0))));
    }

    #[test]
    fn p2_edge_formula_matches(cs in 0u64..1000, seed in any::<u64>(), n in 2usize..6) {
        let base = random_cover(strip(n), 3, cs);
        let c = random_cocycle::<Exact>(base.clone(), 2, seed);
        let r = transition_p2_boundary(&c, &random_map(&base, seed), &random_map(&base, seed ^ 5)).unwrap();
        prop_assert_eq!(r.agreement, 0.0);
    }

    #[test]
    fn p3_triple_edge_formula_matches(cs in 0u64..1000, seed in any::<u64>()) {
        let base = random_cover(two_simplices(3), 3, cs);
        let c = random_cocycle::<Exact>(base.clone(), 3, seed);
        let r: Vec<_> = (0..3).map(|i| random_map(&base, seed.wrapping_add(i))).collect();
        let t = transgress_p3_triple(&c, &r[0], &r[1], &r[2], None).unwrap();
        prop_assert!(t.composition.is_zero());
        // the boundary of a 3-ball is a closed surface: no edges, value ≡ 0
        prop_assert!(zero_mod_2pi(&t.surface_value));
        // one open disc in that surface
        let bd = base.complex().boundary_restrict();
        let tops: Vec<Vec<usize>> = bd.oriented_tops().into_iter().take(3).map(|(v, _)| v).collect();
        let open = SimplicialComplex::build(&tops, ManifoldRequest::WithBoundary).unwrap();
        let t = transgress_p3_triple(&c, &r[0], &r[1], &r[2], Some(open)).unwrap();
        prop_assert_eq!(t.agreement, 0.0);
    }
}

#[test]
fn float_and_exact_agree() {
    let k = two_simplices(2);
    let eb = random_cover(k.clone(), 3, 3);
    let fb = Arc::new(CoveredComplex::clone(&eb));
    let e = random_cocycle::<Exact>(eb.clone(), 2, 9);
    let f = random_cocycle::<f64>(fb, 2, 9);
    let (r0, r1) = (random_map(&eb, 1), random_map(&eb, 2));
    let ge = transition_general(&e, &r0, &r1).unwrap().raw.to_f64();
    let gf = transition_general(&f, &r0, &r1).unwrap().raw;
    assert!((ge - gf).abs() < 1e-12, "{ge} vs {gf}");
}
