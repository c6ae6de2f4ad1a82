//! Closed-form fixture classes, their cup products, and quadrature-based
//! discretization onto the built-in geometries.

mod cup;
mod expr;
mod fixtures;
mod geometry;
mod quadrature;

use std::num::NonZeroUsize;

use thiserror::Error;

pub use cup::{cup_product, triple_formula, MAX_CUP_DEGREE};
pub use expr::{Bound, Coeff, Factor, Func, IndexedTerms, Monomial, Node, Presentation, Term};
pub use fixtures::{generate_fixture, FIXTURES};
pub use geometry::{canonical_name, Chart, Constraint, Geometry, GEOMETRIES};
pub use quadrature::SimplexRule;

use crate::cochain::{combinations, CochainError, CocycleReport, DeligneCochain, Entry};
use crate::complex::{ComplexError, SimplexId};
use crate::cover::CoverError;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("unknown geometry {0:?}")]
    UnknownGeometry(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("missing parameter {0:?}")]
    MissingParam(String),
    #[error("non-integral parameter: {0}")]
    NonIntegral(String),
    #[error("presentation lives on {presentation}, geometry is {geometry}")]
    GeometryMismatch { presentation: String, geometry: String },
    #[error("simplex {simplex} crosses the branch cut of chart {chart}")]
    BranchCut { simplex: SimplexId, chart: usize },
    #[error("chart {chart} declares no branch ({what})")]
    NoBranch { chart: usize, what: &'static str },
    #[error("unsupported cup product: {0}")]
    Unsupported(String),
    #[error("component {k} needs quadrature, which rational mode cannot do exactly")]
    RationalQuadrature { k: usize },
    #[error("value is not exactly representable: {0}")]
    Inexact(String),
    #[error("malformed presentation: {0}")]
    Invalid(String),
    #[error("discretization is not a cocycle (worst residual {:e})", .0.worst_residual())]
    NotCocycle(Box<CocycleReport>),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscretizeOptions {
    pub quad_order: usize,
    /// Residual allowed by the cocycle check on the result.
    pub tolerance: f64,
}

impl Default for DiscretizeOptions {
    fn default() -> Self {
        DiscretizeOptions { quad_order: 8, tolerance: 1e-9 }
    }
}

/// Symbolic part of a term at a point, and the product of its non-constant
/// factors if there are any.
fn pointwise(geometry: &Geometry, term: &Term, x: &[f64], jump_at: &[f64]) -> Result<(Coeff, Option<f64>), AnalyticError> {
    let mut coeff = term.coeff.clone();
    let mut float: Option<f64> = None;
    for f in &term.factors {
        match f {
            Bound::Jump { func, from, to } => coeff = coeff.scaled(geometry.jump(func, *from, *to, jump_at)?),
            Bound::Lift { func: Func::Const { value }, .. } | Bound::Value { func: Func::Const { value } } => {
                coeff = coeff.times(value)
            }
            Bound::Lift { func, chart } => *float.get_or_insert(1.0) *= geometry.lift(func, *chart, x)?,
            Bound::Value { func } => *float.get_or_insert(1.0) *= geometry.value(func, x),
        }
    }
    Ok((coeff, float))
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let pivot = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[pivot][c] == 0.0 {
            return 0.0;
        }
        if pivot != c {
            m.swap(pivot, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            let (upper, lower) = m.split_at_mut(r);
            for (x, &y) in lower[0][c..n].iter_mut().zip(&upper[c][c..n]) {
                *x -= f * y;
            }
        }
    }
    d
}

fn barycenter(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points.len() as f64;
    (0..points[0].len()).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect()
}

/// `∫_σ term` over the realized simplex `points` (oriented order).
fn integrate<S: Scalar>(
    geometry: &Geometry,
    term: &Term,
    points: &[Vec<f64>],
    rule: &SimplexRule,
) -> Result<S, AnalyticError> {
    let k = points.len() - 1;
    if term.dforms.len() != k {
        return Err(AnalyticError::Invalid(format!("{}-form term on a {k}-simplex", term.dforms.len())));
    }
    let center = barycenter(points);
    if k == 0 {
        let (coeff, float) = pointwise(geometry, term, &points[0], &center)?;
        return match float {
            None => S::from_coeff(coeff.real, coeff.num, coeff.den, coeff.tau_power)
                .ok_or_else(|| AnalyticError::Inexact(format!("coefficient {coeff:?}"))),
            Some(_) if S::EXACT => Err(AnalyticError::Inexact("function value at a vertex".into())),
            Some(v) => Ok(S::from_f64(coeff.value() * v)),
        };
    }
    if S::EXACT {
        return Err(AnalyticError::RationalQuadrature { k });
    }
    let edges: Vec<Vec<f64>> =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()).collect();
    let mut acc = 0.0;
    let mut x = vec![0.0; points[0].len()];
    for (t, w) in rule.points.iter().zip(&rule.weights) {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = points[0][j] + t.iter().zip(&edges).map(|(tb, e)| tb * e[j]).sum::<f64>();
        }
        let (coeff, float) = pointwise(geometry, term, &x, &center)?;
        let jac: Vec<Vec<f64>> = term
            .dforms
            .iter()
            .map(|g| {
                let grad = geometry.gradient(g, &x);
                edges.iter().map(|e| e.iter().zip(&grad).map(|(a, b)| a * b).sum()).collect()
            })
            .collect();
        acc += w * coeff.value() * float.unwrap_or(1.0) * det(jac);
    }
    Ok(S::from_f64(acc))
}

/// Evaluates every component on every admissible multi-index of every
/// simplex of `geometry` and checks the cocycle relations of the result.
pub fn discretize<S: Scalar>(
    presentation: &Presentation,
    geometry: &Geometry,
    options: DiscretizeOptions,
) -> Result<DeligneCochain<S>, AnalyticError> {
    if canonical_name(&presentation.geometry) != Some(geometry.name()) {
        return Err(AnalyticError::GeometryMismatch {
            presentation: presentation.geometry.clone(),
            geometry: geometry.name().to_string(),
        });
    }
    presentation.check_shape()?;
    for node in &presentation.components {
        for f in node.funcs() {
            f.check(geometry.periodic())?;
        }
    }
    if let Some((simplex, chart)) = geometry.find_branch_violation() {
        return Err(AnalyticError::BranchCut { simplex, chart });
    }
    let order = NonZeroUsize::new(options.quad_order)
        .ok_or_else(|| AnalyticError::Invalid("quadrature order must be at least 1".into()))?;

    let p = presentation.degree;
    let base = geometry.cover();
    let complex = base.complex();
    let mut entries = Vec::new();
    for k in 0..=p.min(complex.dim()) {
        let rule = SimplexRule::new(k, order);
        for i in 0..complex.count(k) {
            let id = SimplexId::new(k, i);
            let points = geometry.realize(id);
            for word in combinations(base.admissible(id), p - k + 1) {
                let mut value = S::zero();
                for term in presentation.components[k].eval(&word)? {
                    value = value + integrate::<S>(geometry, &term, &points, &rule)?;
                }
                if !value.is_zero() {
                    entries.push(Entry { k, indices: word, simplex: id, value });
                }
            }
        }
    }
    let cochain = DeligneCochain::from_entries(base.clone(), p, &entries)?;
    cochain.into_cocycle(options.tolerance).map_err(AnalyticError::NotCocycle)
}
