#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use deligne::analytic::{discretize, generate_fixture, DiscretizeOptions, Geometry, Presentation};
use deligne::cochain::DeligneCochain;
use deligne::complex::{ManifoldRequest, SimplicialComplex};
use deligne::cover::{CoveredComplex, IndexMap};
use deligne::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn params(kv: &[(&str, &str)]) -> BTreeMap<String, String> {
    kv.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

pub fn fixture(name: &str, kv: &[(&str, &str)]) -> Presentation {
    generate_fixture(name, &params(kv)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// `e^{i(coeffs·x + offset)}` as a degree-0 presentation.
pub fn lin(geometry: &str, coeffs: &str, offset: &str) -> Presentation {
    fixture("linear_function", &[("coeffs", coeffs), ("offset", offset), ("geometry", geometry)])
}

pub fn on<S: Scalar>(p: &Presentation, g: &Geometry) -> DeligneCochain<S> {
    discretize::<S>(p, g, DiscretizeOptions::default()).unwrap_or_else(|e| panic!("{}: {e}", p.name))
}

pub fn geometry(name: &str) -> Geometry {
    Geometry::named(name).unwrap()
}

/// Distance between two angles on the circle.
pub fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Boundary of the standard `(n+1)`-simplex, a closed oriented `n`-sphere.
pub fn sphere(n: usize) -> SimplicialComplex {
    SimplicialComplex::build(&[(0..=n + 1).collect()], ManifoldRequest::None).unwrap().boundary_restrict()
}

/// Two `p`-simplices sharing a facet, a `p`-ball with boundary.
pub fn two_simplices(p: usize) -> SimplicialComplex {
    let a: Vec<usize> = (0..=p).collect();
    // the shared facet `1..=p` must get opposite induced orientations
    let mut b: Vec<usize> = (1..=p + 1).collect();
    if p.is_multiple_of(2) {
        b.swap(0, 1);
    }
    SimplicialComplex::build(&[a, b], ManifoldRequest::WithBoundary).unwrap()
}

/// A strip of `n` triangles: a disk with boundary.
pub fn strip(n: usize) -> SimplicialComplex {
    let tops: Vec<Vec<usize>> = (0..n).map(|i| if i % 2 == 0 { vec![i, i + 1, i + 2] } else { vec![i + 1, i, i + 2] }).collect();
    SimplicialComplex::build(&tops, ManifoldRequest::WithBoundary).unwrap()
}

/// Random admissible sets on top simplices, each keeping index 0 so that
/// the cover has a common chart.
pub fn random_cover(k: SimplicialComplex, sets: usize, seed: u64) -> Arc<CoveredComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tops: Vec<Vec<usize>> = k
        .tops()
        .map(|_| {
            let mut v: Vec<usize> = (0..sets).filter(|_| rng.gen_bool(0.6)).collect();
            if v.is_empty() {
                v.push(rng.gen_range(0..sets));
            }
            v
        })
        .collect();
    Arc::new(CoveredComplex::attach(k, sets, &tops).unwrap())
}

pub fn random_map(base: &CoveredComplex, seed: u64) -> IndexMap {
    base.random_index_map(seed, &BTreeMap::new()).unwrap()
}

/// Closed `(1-row)` loops of torus2-4chart, whose vertex `(i, j)` has label
/// `i + 4j`: a horizontal circle, a second horizontal circle, a vertical
/// circle and the diagonal.
pub fn torus_loops() -> Vec<SimplicialComplex> {
    let loops: Vec<Vec<Vec<usize>>> = vec![
        (0..4).map(|i| vec![i, (i + 1) % 4]).collect(),
        (0..4).map(|i| vec![4 + i, 4 + (i + 1) % 4]).collect(),
        (0..4).map(|j| vec![4 * j, 4 * ((j + 1) % 4)]).collect(),
        (0..4).map(|i| vec![5 * i, 5 * ((i + 1) % 4)]).collect(),
    ];
    loops.into_iter().map(|l| SimplicialComplex::build(&l, ManifoldRequest::ClosedOriented).unwrap()).collect()
}
