//! The closed expression family for analytic class components.
//!
//! A component is a [`Node`]: evaluated on a sorted multi-index it yields a
//! list of [`Term`]s, each a coefficient times a product of chart-bound
//! factors times a wedge of exact differentials `dg_1 ∧ … ∧ dg_k`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::AnalyticError;

/// `real · num/den · (2π)^tau_power`. Keeping the rational and 2π parts
/// symbolic lets purely combinatorial fixtures evaluate exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coeff {
    pub real: f64,
    pub num: i64,
    pub den: i64,
    pub tau_power: i32,
}

impl Coeff {
    pub fn one() -> Self {
        Coeff { real: 1.0, num: 1, den: 1, tau_power: 0 }
    }

    pub fn real(x: f64) -> Self {
        Coeff { real: x, ..Coeff::one() }
    }

    pub fn integer(n: i64) -> Self {
        Coeff { num: n, ..Coeff::one() }
    }

    /// `2π·num/den`.
    pub fn turns(num: i64, den: i64) -> Self {
        Coeff { real: 1.0, num, den, tau_power: 1 }.normalized()
    }

    /// `1/(2π)^n`.
    pub fn inverse_tau(n: i32) -> Self {
        Coeff { tau_power: -n, ..Coeff::one() }
    }

    fn normalized(self) -> Self {
        let r = Rational64::new(self.num, self.den);
        Coeff { num: *r.numer(), den: *r.denom(), ..self }
    }

    pub fn times(&self, other: &Coeff) -> Coeff {
        let r = Rational64::new(self.num, self.den) * Rational64::new(other.num, other.den);
        Coeff {
            real: self.real * other.real,
            num: *r.numer(),
            den: *r.denom(),
            tau_power: self.tau_power + other.tau_power,
        }
    }

    pub fn scaled(&self, k: i64) -> Coeff {
        self.times(&Coeff::integer(k))
    }

    pub fn is_zero(&self) -> bool {
        self.real == 0.0 || self.num == 0
    }

    pub fn value(&self) -> f64 {
        self.real * self.num as f64 / self.den as f64 * TAU.powi(self.tau_power)
    }
}

/// Scalar functions on the ambient coordinates of a geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Func {
    /// `Σ c_j x_j + offset`; coefficients on periodic axes are integers,
    /// so the function is an angle well defined up to 2π.
    Linear { coeffs: Vec<f64>, offset: f64 },
    Const { value: Coeff },
    /// `atan2(y, x)` on `(x, y, z)` coordinates.
    Azimuth,
    /// `z / |p|` on `(x, y, z)` coordinates.
    CosPolar,
}

impl Func {
    pub fn is_const(&self) -> bool {
        match self {
            Func::Const { .. } => true,
            Func::Linear { coeffs, .. } => coeffs.iter().all(|&c| c == 0.0),
            _ => false,
        }
    }

    /// Whether values are angles (defined mod 2π) rather than real numbers.
    pub fn is_angular(&self, periodic: &[bool]) -> bool {
        match self {
            Func::Linear { coeffs, .. } => coeffs.iter().zip(periodic).any(|(&c, &p)| p && c != 0.0),
            Func::Azimuth => true,
            Func::Const { .. } | Func::CosPolar => false,
        }
    }

    pub fn check(&self, periodic: &[bool]) -> Result<(), AnalyticError> {
        match self {
            Func::Linear { coeffs, offset } => {
                if coeffs.len() != periodic.len() {
                    return Err(AnalyticError::Invalid(format!(
                        "linear function has {} coefficients, geometry has {} coordinates",
                        coeffs.len(),
                        periodic.len()
                    )));
                }
                for (j, (&c, &p)) in coeffs.iter().zip(periodic).enumerate() {
                    if !c.is_finite() || (p && c.fract() != 0.0) {
                        return Err(AnalyticError::NonIntegral(format!("coefficient {c} on periodic axis {j}")));
                    }
                }
                if !offset.is_finite() {
                    return Err(AnalyticError::Invalid("non-finite offset".into()));
                }
                Ok(())
            }
            Func::Azimuth | Func::CosPolar if periodic.len() != 3 || periodic.iter().any(|&p| p) => {
                Err(AnalyticError::Invalid("spherical functions need (x, y, z) coordinates".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A factor with chart slots referring to positions in the multi-index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    /// Branch of the function chosen by the chart at `slot`.
    Lift { func: Func, slot: usize },
    /// The integer `(lift_to − lift_from) / 2π`, locally constant.
    Jump { func: Func, from: usize, to: usize },
    /// A single-valued function.
    Value { func: Func },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: Coeff,
    #[serde(default)]
    pub factors: Vec<Factor>,
    /// Functions whose differentials are wedged, in order.
    #[serde(default)]
    pub dforms: Vec<Func>,
}

impl Monomial {
    pub fn new(coeff: Coeff, factors: Vec<Factor>, dforms: Vec<Func>) -> Self {
        Monomial { coeff, factors, dforms }
    }
}

/// Factors after binding slots to concrete chart indices.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Lift { func: Func, chart: usize },
    Jump { func: Func, from: usize, to: usize },
    Value { func: Func },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Coeff,
    pub factors: Vec<Bound>,
    pub dforms: Vec<Func>,
}

impl Term {
    fn times(&self, other: &Term, coeff: &Coeff) -> Term {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let mut dforms = self.dforms.clone();
        dforms.extend(other.dforms.iter().cloned());
        Term { coeff: self.coeff.times(&other.coeff).times(coeff), factors, dforms }
    }

    /// Exterior derivative by the product rule; jumps are locally constant.
    fn d(&self) -> Vec<Term> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let func = match f {
                Bound::Lift { func, .. } | Bound::Value { func } => func,
                Bound::Jump { .. } => continue,
            };
            if func.is_const() {
                continue;
            }
            let mut factors = self.factors.clone();
            factors.remove(i);
            let mut dforms = vec![func.clone()];
            dforms.extend(self.dforms.iter().cloned());
            let t = Term { coeff: self.coeff.clone(), factors, dforms };
            if !t.is_trivially_zero() {
                out.push(t);
            }
        }
        out
    }

    fn is_trivially_zero(&self) -> bool {
        if self.coeff.is_zero() || self.dforms.iter().any(Func::is_const) {
            return true;
        }
        self.dforms.iter().enumerate().any(|(i, f)| self.dforms[..i].contains(f))
    }
}

/// Words keyed explicitly, used where a component differs between charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexedTerms {
    pub indices: Vec<usize>,
    pub terms: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Zero,
    /// `per_index` entries override `uniform` on their exact multi-index.
    Table {
        #[serde(default)]
        uniform: Vec<Monomial>,
        #[serde(default)]
        per_index: Vec<IndexedTerms>,
    },
    /// Product of `left` on `word[..=split]` and `right` on `word[split..]`.
    Cup { left: Box<Node>, right: Box<Node>, split: usize, coeff: Coeff },
    D { inner: Box<Node> },
}

impl Node {
    pub fn uniform(terms: Vec<Monomial>) -> Node {
        Node::Table { uniform: terms, per_index: Vec::new() }
    }

    pub fn indexed(entries: BTreeMap<Vec<usize>, Vec<Monomial>>) -> Node {
        Node::Table {
            uniform: Vec::new(),
            per_index: entries.into_iter().map(|(indices, terms)| IndexedTerms { indices, terms }).collect(),
        }
    }

    pub fn cup(left: Node, right: Node, split: usize, coeff: Coeff) -> Node {
        Node::Cup { left: Box::new(left), right: Box::new(right), split, coeff }
    }

    pub fn d(inner: Node) -> Node {
        Node::D { inner: Box::new(inner) }
    }

    /// Terms on a sorted multi-index.
    pub fn eval(&self, word: &[usize]) -> Result<Vec<Term>, AnalyticError> {
        match self {
            Node::Zero => Ok(Vec::new()),
            Node::Table { uniform, per_index } => {
                let terms = per_index
                    .iter()
                    .find(|e| e.indices == word)
                    .map(|e| &e.terms)
                    .unwrap_or(uniform);
                terms.iter().map(|m| bind(m, word)).filter(|t| !matches!(t, Ok(t) if t.is_trivially_zero())).collect()
            }
            Node::Cup { left, right, split, coeff } => {
                if *split >= word.len() {
                    return Err(AnalyticError::Invalid(format!(
                        "cup split {split} does not fit a word of length {}",
                        word.len()
                    )));
                }
                let l = left.eval(&word[..=*split])?;
                if l.is_empty() {
                    return Ok(l);
                }
                let r = right.eval(&word[*split..])?;
                let mut out = Vec::with_capacity(l.len() * r.len());
                for a in &l {
                    for b in &r {
                        let t = a.times(b, coeff);
                        if !t.is_trivially_zero() {
                            out.push(t);
                        }
                    }
                }
                Ok(out)
            }
            Node::D { inner } => Ok(inner.eval(word)?.iter().flat_map(Term::d).collect()),
        }
    }

    /// Every function mentioned anywhere in the tree.
    pub fn funcs(&self) -> Vec<&Func> {
        let mut out = Vec::new();
        self.collect_funcs(&mut out);
        out
    }

    fn collect_funcs<'a>(&'a self, out: &mut Vec<&'a Func>) {
        match self {
            Node::Zero => {}
            Node::Table { uniform, per_index } => {
                for m in uniform.iter().chain(per_index.iter().flat_map(|e| e.terms.iter())) {
                    for f in &m.factors {
                        match f {
                            Factor::Lift { func, .. } | Factor::Jump { func, .. } | Factor::Value { func } => out.push(func),
                        }
                    }
                    out.extend(m.dforms.iter());
                }
            }
            Node::Cup { left, right, .. } => {
                left.collect_funcs(out);
                right.collect_funcs(out);
            }
            Node::D { inner } => inner.collect_funcs(out),
        }
    }
}

fn bind(m: &Monomial, word: &[usize]) -> Result<Term, AnalyticError> {
    let slot = |s: usize| {
        word.get(s)
            .copied()
            .ok_or_else(|| AnalyticError::Invalid(format!("slot {s} outside a word of length {}", word.len())))
    };
    let factors = m
        .factors
        .iter()
        .map(|f| {
            Ok(match f {
                Factor::Lift { func, slot: s } => Bound::Lift { func: func.clone(), chart: slot(*s)? },
                Factor::Jump { func, from, to } => Bound::Jump { func: func.clone(), from: slot(*from)?, to: slot(*to)? },
                Factor::Value { func } => Bound::Value { func: func.clone() },
            })
        })
        .collect::<Result<_, AnalyticError>>()?;
    Ok(Term { coeff: m.coeff.clone(), factors, dforms: m.dforms.clone() })
}

/// Closed-form local data of a degree-`p` class on a named geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub degree: usize,
    pub geometry: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// `components[k]` evaluates on multi-indices of length `p − k + 1`.
    pub components: Vec<Node>,
    /// `δC^0 / 2π`, on multi-indices of length `p + 2`. Needed only as a
    /// left cup factor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integer_class: Option<Node>,
    /// The underlying circle-valued function of a degree-0 class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<Func>,
}

impl Presentation {
    pub fn check_shape(&self) -> Result<(), AnalyticError> {
        if self.components.len() != self.degree + 1 {
            return Err(AnalyticError::Invalid(format!(
                "degree {} presentation has {} components",
                self.degree,
                self.components.len()
            )));
        }
        Ok(())
    }
}
