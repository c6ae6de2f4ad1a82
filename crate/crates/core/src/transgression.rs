//! Transition angles between local actions for two index maps.
//!
//! On a `p`-complex with boundary the local action depends on ρ. The
//! transition `G(ρ0, ρ1)` is defined as the difference of local actions and
//! also given by a formula that only sees flags through boundary facets,
//! built from mixed words
//!
//! ```text
//! (ρ0(σ^(p−1)), …, ρ0(σ^(p−r)), ρ1(σ^(p−r)), …, ρ1(σ^(p−n)))
//! ```
//!
//! Both agree mod 2π on cocycles.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cochain::{CochainError, DeligneCochain};
use crate::complex::{Flag, SimplexId, SimplicialComplex};
use crate::cover::{CoverError, CoveredComplex, IndexMap};
use crate::holonomy::{flag_term, flag_word, local_action, HolonomyError};
use crate::scalar::{reduce_angle, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum TransgressionError {
    #[error("this formula needs degree {expected}, got {found}")]
    Degree { expected: usize, found: usize },
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// How the terms of a transition split between flags through boundary
/// facets and flags through interior facets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Census {
    pub boundary_flags: usize,
    pub interior_flags: usize,
    pub boundary_part: f64,
    pub interior_part: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionValue<S> {
    pub raw: S,
    pub census: Census,
}

impl<S: Scalar> TransitionValue<S> {
    pub fn reduced(&self) -> f64 {
        reduce_angle(self.raw.angle_residual().to_f64())
    }
}

/// Distance mod 2π between two raw angles (exact zero in exact mode).
pub fn mod_two_pi_gap<S: Scalar>(a: &S, b: &S) -> S {
    (a.clone() - b.clone()).angle_residual()
}

fn through_boundary(complex: &SimplicialComplex, flag: &Flag) -> bool {
    flag.chain.len() >= 2 && complex.boundary_sign(flag.chain[1]).is_some()
}

/// `local_action(ρ1) − local_action(ρ0)`.
pub fn transition_general<S: Scalar>(
    c: &DeligneCochain<S>,
    rho0: &IndexMap,
    rho1: &IndexMap,
) -> Result<TransitionValue<S>, TransgressionError> {
    let a0 = local_action(c, rho0)?;
    let a1 = local_action(c, rho1)?;
    let raw = a1.raw - a0.raw;

    let p = c.degree();
    let complex = c.base().complex();
    let mut census = Census::default();
    for n in 0..=p {
        for flag in complex.flags(p - n).expect("level within dimension") {
            let t = flag_term(c, &flag_word(rho1, &flag), &flag) - flag_term(c, &flag_word(rho0, &flag), &flag);
            if through_boundary(complex, &flag) {
                census.boundary_flags += 1;
                census.boundary_part += t.to_f64();
            } else {
                census.interior_flags += 1;
                census.interior_part += t.to_f64();
            }
        }
    }
    Ok(TransitionValue { raw, census })
}

/// Mixed-word sum for one flag whose chain starts at `first`
/// (`first = 1` skips the top simplex, which then only contributes its sign).
fn mixed_words<S: Scalar>(
    c: &DeligneCochain<S>,
    flag: &Flag,
    first: usize,
    rho0: &IndexMap,
    rho1: &IndexMap,
) -> S {
    let ids: Vec<SimplexId> = flag.ids().skip(first).collect();
    let n = ids.len();
    let bottom = *ids.last().expect("flag below the top");
    let mut acc = S::zero();
    for r in 1..=n {
        let mut word = Vec::with_capacity(n + 1);
        word.extend(ids[..r].iter().map(|&id| rho0.get(id)));
        word.extend(ids[r - 1..].iter().map(|&id| rho1.get(id)));
        let v = c.eval(bottom.dim, bottom.index, &word);
        acc = if r % 2 == 1 { acc + v } else { acc - v };
    }
    if flag.sign < 0 {
        -acc
    } else {
        acc
    }
}

/// The boundary-supported formula; ρ(σ^p) never enters.
pub fn transition_boundary<S: Scalar>(
    c: &DeligneCochain<S>,
    rho0: &IndexMap,
    rho1: &IndexMap,
) -> Result<TransitionValue<S>, TransgressionError> {
    // same preconditions as the defining difference
    local_action(c, rho0)?;
    local_action(c, rho1)?;
    let p = c.degree();
    let complex = c.base().complex();
    let mut raw = S::zero();
    let mut census = Census::default();
    for n in 1..=p {
        for flag in complex.flags(p - n).expect("level within dimension") {
            let t = mixed_words(c, &flag, 1, rho0, rho1);
            if through_boundary(complex, &flag) {
                census.boundary_flags += 1;
                census.boundary_part += t.to_f64();
            } else {
                census.interior_flags += 1;
                census.interior_part += t.to_f64();
            }
            raw = raw + t;
        }
    }
    Ok(TransitionValue { raw, census })
}

/// Cochain and index maps carried to a subcomplex.
pub struct Restricted<S: Scalar> {
    pub cochain: DeligneCochain<S>,
    pub maps: Vec<IndexMap>,
}

/// Pulls `c` and the given index maps back to `sub`, whose simplices must
/// all occur in `c`'s complex.
pub fn restrict<S: Scalar>(
    c: &DeligneCochain<S>,
    sub: SimplicialComplex,
    maps: &[&IndexMap],
) -> Result<Restricted<S>, TransgressionError> {
    let (covered, parent) = c.base().restrict_to(sub)?;
    let covered = Arc::new(covered);
    let cochain = c.pullback(covered, &BTreeMap::new())?;
    Ok(Restricted { cochain, maps: maps.iter().map(|m| m.pull(&parent)).collect() })
}

/// Transition functional on a complex of dimension `p − 1`: the mixed-word
/// sum over flags starting at its top simplices.
pub fn surface_transition<S: Scalar>(c: &DeligneCochain<S>, rho_i: &IndexMap, rho_j: &IndexMap) -> S {
    let p = c.degree();
    let complex = c.base().complex();
    assert_eq!(complex.dim() + 1, p, "surface transition lives one dimension below the degree");
    let mut raw = S::zero();
    for n in 1..=p {
        for flag in complex.flags(p - n).expect("level within dimension") {
            raw = raw + mixed_words(c, &flag, 0, rho_i, rho_j);
        }
    }
    raw
}

#[derive(Clone, Debug, PartialEq)]
pub struct P2Report<S> {
    pub value: TransitionValue<S>,
    pub general: TransitionValue<S>,
    /// Distance mod 2π between the boundary-only value and the general one.
    pub agreement: f64,
    /// Sum of the general formula's interior-flag contributions, mod 2π.
    pub interior_residual: f64,
}

/// Degree-2 transition from boundary edges only:
/// `Σ_e [C^1(e; ρ0e, ρ1e) + Σ_v inc(e,v) (C^0(v; ρ0e, ρ1e, ρ1v) − C^0(v; ρ0e, ρ0v, ρ1v))]`
/// over the oriented boundary curve.
pub fn transition_p2_boundary<S: Scalar>(
    c: &DeligneCochain<S>,
    rho0: &IndexMap,
    rho1: &IndexMap,
) -> Result<P2Report<S>, TransgressionError> {
    if c.degree() != 2 {
        return Err(TransgressionError::Degree { expected: 2, found: c.degree() });
    }
    let general = transition_general(c, rho0, rho1)?;
    let boundary = c.base().complex().boundary_restrict();
    let mut raw = S::zero();
    if !boundary.is_empty() {
        let r = restrict(c, boundary, &[rho0, rho1])?;
        let (b, r0, r1) = (&r.cochain, &r.maps[0], &r.maps[1]);
        let curve = b.base().complex();
        for (e, edge) in curve.simplices(1).iter().enumerate() {
            let eid = SimplexId::new(1, e);
            let (a0, a1) = (r0.get(eid), r1.get(eid));
            raw = raw + b.eval(1, e, &[a0, a1]);
            for &(v, inc) in edge.facets() {
                let vid = SimplexId::new(0, v);
                let t = b.eval(0, v, &[a0, a1, r1.get(vid)]) - b.eval(0, v, &[a0, r0.get(vid), r1.get(vid)]);
                raw = if inc > 0 { raw + t } else { raw - t };
            }
        }
    }
    let agreement = mod_two_pi_gap(&raw, &general.raw).magnitude();
    let interior_residual = reduce_angle(general.census.interior_part).abs();
    Ok(P2Report {
        value: TransitionValue { raw, census: general.census.clone() },
        general,
        agreement,
        interior_residual,
    })
}

/// Closed formula for `T01 + T12 − T02` on a surface with boundary, summed
/// over the oriented boundary curve.
pub fn triple_edge_formula<S: Scalar>(
    curve_cochain: &DeligneCochain<S>,
    rho0: &IndexMap,
    rho1: &IndexMap,
    rho2: &IndexMap,
) -> S {
    let b = curve_cochain;
    let curve = b.base().complex();
    let mut raw = S::zero();
    for (e, edge) in curve.simplices(1).iter().enumerate() {
        let eid = SimplexId::new(1, e);
        let (a0, a1, a2) = (rho0.get(eid), rho1.get(eid), rho2.get(eid));
        raw = raw - b.eval(1, e, &[a0, a1, a2]);
        for &(v, inc) in edge.facets() {
            let vid = SimplexId::new(0, v);
            let (v0, v1, v2) = (rho0.get(vid), rho1.get(vid), rho2.get(vid));
            let t = b.eval(0, v, &[a0, a1, v1, v2]) - b.eval(0, v, &[a0, v0, v1, v2]) - b.eval(0, v, &[a0, a1, a2, v2]);
            raw = if inc > 0 { raw + t } else { raw - t };
        }
    }
    raw
}

#[derive(Clone, Debug, PartialEq)]
pub struct TripleReport<S> {
    /// `G01 + G12 − G02` from the defining differences; zero by telescoping.
    pub composition: S,
    /// `T01 + T12 − T02` on the surface.
    pub surface_value: S,
    /// The closed boundary-edge formula on the surface's boundary curve.
    pub edge_formula: S,
    /// Distance mod 2π between the two previous values.
    pub agreement: f64,
}

/// Triple combination for a degree-3 cocycle on a 3-complex with boundary.
/// `surface` defaults to the boundary of the complex; any 2-dimensional
/// subcomplex may be given instead.
pub fn transgress_p3_triple<S: Scalar>(
    c: &DeligneCochain<S>,
    rho0: &IndexMap,
    rho1: &IndexMap,
    rho2: &IndexMap,
    surface: Option<SimplicialComplex>,
) -> Result<TripleReport<S>, TransgressionError> {
    if c.degree() != 3 {
        return Err(TransgressionError::Degree { expected: 3, found: c.degree() });
    }
    let g01 = transition_general(c, rho0, rho1)?.raw;
    let g12 = transition_general(c, rho1, rho2)?.raw;
    let g02 = transition_general(c, rho0, rho2)?.raw;
    let composition = g01 + g12 - g02;

    let surface = surface.unwrap_or_else(|| c.base().complex().boundary_restrict());
    if surface.is_empty() {
        return Ok(TripleReport { composition, surface_value: S::zero(), edge_formula: S::zero(), agreement: 0.0 });
    }
    let r = restrict(c, surface.clone(), &[rho0, rho1, rho2])?;
    let (s, m) = (&r.cochain, &r.maps);
    let surface_value =
        surface_transition(s, &m[0], &m[1]) + surface_transition(s, &m[1], &m[2]) - surface_transition(s, &m[0], &m[2]);

    let curve = surface.boundary_restrict();
    let edge_formula = if curve.is_empty() {
        S::zero()
    } else {
        let rc = restrict(s, curve, &[&m[0], &m[1], &m[2]])?;
        triple_edge_formula(&rc.cochain, &rc.maps[0], &rc.maps[1], &rc.maps[2])
    };
    let agreement = mod_two_pi_gap(&surface_value, &edge_formula).magnitude();
    Ok(TripleReport { composition, surface_value, edge_formula, agreement })
}

/// Convenience: index maps agreeing with `rho` on boundary simplices and
/// random inside.
pub fn interior_perturbation(
    cover: &CoveredComplex,
    rho: &IndexMap,
    seed: u64,
) -> Result<IndexMap, CoverError> {
    cover.random_index_map(seed, &cover.boundary_frozen(rho))
}
