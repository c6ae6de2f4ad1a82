//! Holonomy of a degree-`p` cocycle over a closed oriented `p`-complex,
//! the local action on complexes with boundary, and total curvature.
//!
//! The holonomy is the flag sum
//!
//! ```text
//! Σ_{n=0..p} Σ_{flags σ^p ⊃ … ⊃ σ^(p−n)} sign · C^(p−n)(σ^(p−n); ρ(σ^p), …, ρ(σ^(p−n)))
//! ```
//!
//! with words evaluated through the alternating convention, so a repeated
//! index along the flag contributes nothing.

use thiserror::Error;

use crate::complex::{Flag, ManifoldKind, SimplexId};
use crate::cochain::DeligneCochain;
use crate::cover::{CoverError, IndexMap};
use crate::scalar::{reduce_angle, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum HolonomyError {
    #[error("cochain is not flagged as a cocycle")]
    NotCocycle,
    #[error("complex has dimension {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("complex is not closed and oriented ({0})")]
    NotClosed(&'static str),
    #[error("curvature of top simplex {simplex} depends on the cover index (spread {spread:e})")]
    IndexDependence { simplex: usize, spread: f64 },
    #[error(transparent)]
    IndexMap(#[from] CoverError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyValue<S> {
    /// Unreduced flag sum.
    pub raw: S,
    /// Sum of flag contributions at codimension `n`, `n = 0..=p`.
    pub levels: Vec<S>,
    pub flag_counts: Vec<usize>,
}

impl<S: Scalar> HolonomyValue<S> {
    /// Representative in (−π, π].
    pub fn reduced(&self) -> f64 {
        reduce_angle(self.raw.angle_residual().to_f64())
    }

    pub fn flag_count(&self) -> usize {
        self.flag_counts.iter().sum()
    }
}

/// The multi-index `(ρ(σ^top), …, ρ(σ^bottom))` along a flag.
pub fn flag_word(rho: &IndexMap, flag: &Flag) -> Vec<usize> {
    flag.ids().map(|id| rho.get(id)).collect()
}

/// Contribution of one flag: `sign · C^bottom(σ^bottom; word)`.
pub fn flag_term<S: Scalar>(c: &DeligneCochain<S>, word: &[usize], flag: &Flag) -> S {
    let bottom = flag.bottom_dim();
    let v = c.eval(bottom, flag.at_dim(bottom), word);
    if flag.sign < 0 {
        -v
    } else {
        v
    }
}

fn check_rho<S: Scalar>(c: &DeligneCochain<S>, rho: &IndexMap) -> Result<(), HolonomyError> {
    rho.validate(c.base())?;
    Ok(())
}

/// The flag sum on whatever `p`-complex carries `c`.
fn flag_sum<S: Scalar>(c: &DeligneCochain<S>, rho: &IndexMap) -> HolonomyValue<S> {
    let p = c.degree();
    let complex = c.base().complex();
    let mut levels = Vec::with_capacity(p + 1);
    let mut flag_counts = Vec::with_capacity(p + 1);
    for n in 0..=p {
        let mut acc = S::zero();
        let mut count = 0;
        for flag in complex.flags(p - n).expect("level within dimension") {
            acc = acc + flag_term(c, &flag_word(rho, &flag), &flag);
            count += 1;
        }
        levels.push(acc);
        flag_counts.push(count);
    }
    let raw = levels.iter().cloned().fold(S::zero(), |a, b| a + b);
    HolonomyValue { raw, levels, flag_counts }
}

/// Holonomy over a closed oriented complex of dimension exactly `p`.
pub fn holonomy<S: Scalar>(c: &DeligneCochain<S>, rho: &IndexMap) -> Result<HolonomyValue<S>, HolonomyError> {
    if !c.is_cocycle() {
        return Err(HolonomyError::NotCocycle);
    }
    let complex = c.base().complex();
    if complex.dim() != c.degree() {
        return Err(HolonomyError::Dimension { expected: c.degree(), found: complex.dim() });
    }
    if complex.kind() != ManifoldKind::ClosedOriented {
        return Err(HolonomyError::NotClosed(complex.kind().as_str()));
    }
    check_rho(c, rho)?;
    Ok(flag_sum(c, rho))
}

/// The same sum evaluated verbatim on a complex that may have boundary.
/// Depends on ρ near the boundary.
pub fn local_action<S: Scalar>(c: &DeligneCochain<S>, rho: &IndexMap) -> Result<HolonomyValue<S>, HolonomyError> {
    if !c.is_cocycle() {
        return Err(HolonomyError::NotCocycle);
    }
    let complex = c.base().complex();
    if complex.dim() != c.degree() {
        return Err(HolonomyError::Dimension { expected: c.degree(), found: complex.dim() });
    }
    check_rho(c, rho)?;
    Ok(flag_sum(c, rho))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureValue<S> {
    pub total: S,
    /// Largest spread of `d C^p` over admissible indices on one simplex.
    pub index_spread: f64,
    /// Nearest integer to `total / 2π` and the distance to it.
    pub turns: i64,
    pub turns_residual: f64,
}

/// `Σ_{σ^(p+1)} (d C^p)(σ; ρ(σ))` on a closed oriented `(p+1)`-complex.
pub fn curvature_total<S: Scalar>(
    c: &DeligneCochain<S>,
    rho: &IndexMap,
    tol: f64,
) -> Result<CurvatureValue<S>, HolonomyError> {
    if !c.is_cocycle() {
        return Err(HolonomyError::NotCocycle);
    }
    let p = c.degree();
    let complex = c.base().complex();
    if complex.dim() != p + 1 {
        return Err(HolonomyError::Dimension { expected: p + 1, found: complex.dim() });
    }
    if complex.kind() != ManifoldKind::ClosedOriented {
        return Err(HolonomyError::NotClosed(complex.kind().as_str()));
    }
    check_rho(c, rho)?;
    let mut total = S::zero();
    let mut index_spread: f64 = 0.0;
    for s in complex.tops() {
        let id = SimplexId::new(p + 1, s);
        let chosen = c.discrete_d(p, s, &[rho.get(id)]);
        for &alpha in c.base().admissible(id) {
            let other = c.discrete_d(p, s, &[alpha]);
            let diff = other - chosen.clone();
            index_spread = index_spread.max(diff.magnitude());
            if !diff.within(tol) {
                return Err(HolonomyError::IndexDependence { simplex: s, spread: diff.magnitude() });
            }
        }
        total = total + chosen;
    }
    let (turns, residual) = total.split_turns();
    Ok(CurvatureValue { total, index_spread, turns, turns_residual: residual.magnitude() })
}
